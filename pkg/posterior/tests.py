import json
import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase, override_settings

from bayesfactor.compute import bcal, canonical_ratio, null_sse
from design.exceptions import CapacityError, DegenerateDataError, UsageError
from design.ingest import assemble
from design.linalg import rank_and_sse
from design.models import ModelGamma, PredictorSchema
from design.synthetic import assembly_from_arrays, obesity_like, one_factor_exact, pure_noise, two_level
from numerics.models import HyperGPrior
from posterior.enumerate import (
    baseline_sensitivity_demo, baseline_sensitivity_table, enumerate_posterior, factor_inclusion, level_inclusion,
    variable_inclusion,
)
from posterior.serializers import FORMAT, dumps_report
from posterior.tables import render_report


class NoiseDataTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.assembly = assemble(*pure_noise(n=200, k=1, size=3, seed=11))
        cls.hierarchical = enumerate_posterior(cls.assembly, 'hierarchical', top_n=2 ** 4)
        cls.constant = enumerate_posterior(cls.assembly, 'constant')

    def test_normalized(self):
        self.assertAlmostEqual(self.hierarchical.total_posterior, 1.0, delta=1e-10)
        self.assertEqual(self.hierarchical.model_count, 2 ** 4)
        self.assertEqual(len(self.hierarchical.top_models), 2 ** 4)

    def test_null_model_is_the_most_probable(self):
        for report in (self.hierarchical, self.constant):
            self.assertTrue(report.highest_probability_model().gamma.is_null)

    def test_multiplicity_correction_favours_the_null(self):
        self.assertGreater(self.hierarchical.null_record.posterior, self.constant.null_record.posterior)

    def test_factor_inclusion_below_one_half(self):
        self.assertLess(factor_inclusion(self.hierarchical, 'A'), 0.5)
        self.assertLess(variable_inclusion(self.hierarchical, 'x1'), 0.5)

    def test_complement_identity(self):
        report = self.hierarchical
        without_factor = math.fsum(record.posterior for record in report.top_models
                                   if record.gamma.active_levels()[0] == 0)
        self.assertAlmostEqual(factor_inclusion(report, 0) + without_factor, 1.0, delta=1e-12)

    def test_levels_never_exceed_their_factor(self):
        for j in range(3):
            self.assertLessEqual(level_inclusion(self.hierarchical, 'A', j), factor_inclusion(self.hierarchical, 'A'))

    def test_index_errors(self):
        with self.assertRaises(UsageError):
            factor_inclusion(self.hierarchical, 3)
        with self.assertRaises(UsageError):
            level_inclusion(self.hierarchical, 'A', 'missing')
        with self.assertRaises(UsageError):
            variable_inclusion(self.hierarchical, 'x9')


class OneFactorTests(SimpleTestCase):

    def test_factor_inclusion_is_one_minus_the_null(self):
        report = enumerate_posterior(assemble(*one_factor_exact(size=4, per_level=30, shift=0.3)))
        self.assertAlmostEqual(factor_inclusion(report, 'A'), 1.0 - report.null_record.posterior, delta=1e-12)

    def test_two_level_factor_matches_the_binary_coding(self):
        for seed in range(3):
            assembly = assemble(*two_level(n=12, shift=0.8, seed=seed))
            binary = enumerate_posterior(assembly.with_baseline('A', 0), 'hierarchical', top_n=2)
            report = enumerate_posterior(assembly, 'hierarchical')
            self.assertEqual(report.model_count, 4)
            self.assertAlmostEqual(factor_inclusion(report, 'A'), binary.record(1).posterior, delta=1e-10)

    def test_shifted_level_is_recovered(self):
        report = enumerate_posterior(assemble(*one_factor_exact(size=6, per_level=80, active_level=0, shift=2.0)))
        self.assertGreater(level_inclusion(report, 'A', '1'), 0.9)
        for label in '23456':
            self.assertLess(level_inclusion(report, 'A', label), 0.5)
        self.assertEqual(report.median_probability_model(), ('A=1',))

    def test_second_of_four_levels_is_recovered(self):
        report = enumerate_posterior(assemble(*one_factor_exact(size=4, per_level=125, active_level=1, shift=2.0)))
        inclusions = [level_inclusion(report, 'A', j) for j in range(4)]
        self.assertGreater(inclusions[1], 0.9)
        self.assertTrue(all(value < 0.5 for j, value in enumerate(inclusions) if j != 1))

    def test_relabeling_levels_permutes_level_inclusions(self):
        frame, schema = one_factor_exact(size=4, per_level=20, active_level=2, shift=0.5, seed=5)
        report = enumerate_posterior(assemble(frame, schema))
        relabeled = PredictorSchema('y', factor_columns=(('A', ('3', '1', '4', '2')),))
        other = enumerate_posterior(assemble(frame, relabeled))
        self.assertAlmostEqual(factor_inclusion(report, 'A'), factor_inclusion(other, 'A'), delta=1e-10)
        for label in '1234':
            self.assertAlmostEqual(level_inclusion(report, 'A', label), level_inclusion(other, 'A', label),
                                   delta=1e-10)

    def test_alias_groups_collect_equal_fits(self):
        report = enumerate_posterior(assemble(*one_factor_exact(size=3, per_level=10, shift=1.0)), top_n=8)
        # the full model and its three two-level submodels span the same space
        full = report.record(0b111)
        self.assertEqual(set(full.aliases), {0b011, 0b101, 0b110})
        self.assertEqual(full.alias_count, 3)
        self.assertEqual(report.record(0b100).aliases, ())

    def test_inclusions_stay_within_the_unit_interval(self):
        report = enumerate_posterior(assemble(*one_factor_exact(size=6, per_level=80, active_level=0, shift=2.0)))
        values = list(report.factor_inclusion) + [v for group in report.level_inclusion for v in group]
        self.assertLessEqual(max(values), 1.0)
        self.assertGreaterEqual(min(values), 0.0)

    def test_constant_response_is_degenerate(self):
        assembly = assembly_from_arrays(np.full(6, 3.0), factors={'A': (np.arange(6) % 2, 2)})
        with self.assertRaises(DegenerateDataError):
            enumerate_posterior(assembly)

    def test_exact_level_fit_is_degenerate(self):
        codes = np.arange(12) % 3
        assembly = assembly_from_arrays(1.0 + 2.0 * (codes == 0), factors={'A': (codes, 3)})
        with self.assertRaises(DegenerateDataError):
            enumerate_posterior(assembly)


class BaselineSensitivityTests(SimpleTestCase):

    def test_corner_coding_depends_on_the_baseline(self):
        assembly = assemble(*one_factor_exact(size=6, per_level=80, active_level=0, shift=0.47))
        shifted_baseline = baseline_sensitivity_demo(assembly, 'A', '1')
        other_baseline = baseline_sensitivity_demo(assembly, 'A', '2')
        self.assertGreater(other_baseline - shifted_baseline, 0.1)

    def test_table_lists_every_baseline(self):
        assembly = assemble(*one_factor_exact(size=3, per_level=15, shift=0.8))
        table = baseline_sensitivity_table(assembly, 'A')
        self.assertEqual([label for label, _ in table.by_baseline], ['1', '2', '3'])
        self.assertAlmostEqual(table.indicator, factor_inclusion(enumerate_posterior(assembly), 'A'), delta=1e-15)

    def test_needs_three_levels(self):
        with self.assertRaises(UsageError):
            baseline_sensitivity_demo(assemble(*two_level()), 'A', 0)


class EnumerationTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.assembly = assemble(*obesity_like(n=300, seed=2))

    def test_worker_pool_gives_identical_numbers(self):
        serial = enumerate_posterior(self.assembly, n_jobs=1)
        threaded = enumerate_posterior(self.assembly, n_jobs=4)
        self.assertEqual(dumps_report(serial), dumps_report(threaded))

    def test_summaries_have_the_design_shape(self):
        report = enumerate_posterior(self.assembly, top_n=5)
        self.assertEqual(report.model_count, 2 ** 11)
        self.assertEqual(len(report.factor_inclusion), 2)
        self.assertEqual(len(report.variable_inclusion), 2)
        self.assertEqual([len(group) for group in report.level_inclusion], [6, 3])
        self.assertEqual(len(report.top_models), 5)
        posteriors = [record.posterior for record in report.top_models]
        self.assertEqual(posteriors, sorted(posteriors, reverse=True))
        self.assertGreater(variable_inclusion(report, 'x1'), 0.9)

    def test_json_document(self):
        report = enumerate_posterior(self.assembly, 'scott-berger', top_n=3)
        document = json.loads(dumps_report(report))
        self.assertEqual(document['format'], FORMAT)
        self.assertEqual(document['prior'], 'scott_berger_flat')
        self.assertEqual(document['design']['models'], 2048)
        self.assertEqual(list(document['level_inclusion']['sleep']), ['1', '2', '3'])
        self.assertEqual([entry['position'] for entry in document['top_models']], [1, 2, 3])

    def test_text_tables_carry_the_json_numbers(self):
        report = enumerate_posterior(self.assembly, top_n=3)
        text = render_report(report)
        self.assertIn('Inclusion probabilities of levels of factors', text)
        self.assertIn(f'{report.factor_inclusion[1]:.6g}', text)

    def test_each_distinct_fit_is_scored_once(self):
        assembly = self.assembly
        sse0 = null_sse(assembly)
        keys, scored_models = set(), 0
        for index in range(1 << assembly.column_count):
            rank, sse = rank_and_sse(assembly, ModelGamma.from_index(index, assembly.k, assembly.levels))
            if rank > assembly.k0:
                scored_models += 1
                keys.add((rank, canonical_ratio(min(sse / sse0, 1.0))))
        with mock.patch('posterior.enumerate.bcal', wraps=bcal) as scored:
            report = enumerate_posterior(assembly, n_jobs=1)
        self.assertEqual(scored.call_count, len(keys))
        self.assertEqual(report.evaluations, len(keys))
        self.assertLess(len(keys), scored_models)

    @override_settings(FACTOR_SELECTION={'MAX_ENUMERATED_COLUMNS': 8})
    def test_capacity_is_checked_first(self):
        with self.assertRaises(CapacityError):
            enumerate_posterior(self.assembly)


class SmallSampleTests(SimpleTestCase):

    def test_custom_hyper_prior(self):
        rng = np.random.default_rng(8)
        codes = np.arange(24) % 3
        y = 0.7 * (codes == 1) + rng.standard_normal(24)
        assembly = assembly_from_arrays(y, variables={'x': rng.standard_normal(24)}, factors={'A': (codes, 3)})
        report = enumerate_posterior(assembly, hyper_prior=HyperGPrior.hyper_g_n())
        self.assertEqual(report.hyper_prior, 'hyper-g-n')
        self.assertAlmostEqual(report.total_posterior, 1.0, delta=1e-10)


class PermutedResponseTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        rng = np.random.default_rng(21)
        codes = np.arange(90) % 3
        cls.factors = {'A': (codes, 3), 'B': (rng.permutation(codes), 3)}
        cls.y = 1.5 * (codes == 0) + rng.standard_normal(90)
        cls.observed = cls.level_inclusions(cls.y)
        shuffler = np.random.default_rng(5)
        cls.permuted = np.array([cls.level_inclusions(shuffler.permutation(cls.y)) for _ in range(8)])

    @classmethod
    def level_inclusions(cls, y):
        report = enumerate_posterior(assembly_from_arrays(y, factors=cls.factors))
        return [[level_inclusion(report, name, j) for j in range(3)] for name in ('A', 'B')]

    def test_unrelated_factor_stays_at_its_permutation_baseline(self):
        baseline = self.permuted.mean(axis=0)
        for j in range(3):
            self.assertLess(baseline[1][j], 0.5)
            self.assertLess(abs(self.observed[1][j] - baseline[1][j]), 0.2)

    def test_permuting_the_response_removes_the_active_level(self):
        self.assertGreater(self.observed[0][0], 0.9)
        self.assertLess(self.permuted.mean(axis=0)[0][0], 0.5)
