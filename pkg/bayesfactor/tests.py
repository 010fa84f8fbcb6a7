import numpy as np
from django.test import SimpleTestCase

from bayesfactor.compute import (
    BayesFactorCache, bayes_factor, bayes_factor_from_fit, bf_invariance_report, canonical_ratio, null_sse,
)
from design.exceptions import DegenerateDataError
from design.ingest import assemble
from design.models import ModelGamma
from design.synthetic import assembly_from_arrays, one_factor_exact, pure_noise, random_factor_design, two_level
from numerics.integration import bcal_quadrature, robust_bf_closed
from numerics.models import HyperGPrior


class BayesFactorTests(SimpleTestCase):

    def setUp(self):
        self.assembly = assemble(*one_factor_exact(size=4, per_level=20, shift=0.6))

    def test_null_model(self):
        value = bayes_factor(self.assembly, self.assembly.null_model())
        self.assertEqual(value.log_bf, 0.0)
        self.assertEqual(value.kappa1, value.kappa0)

    def test_full_model_uses_the_rank(self):
        value = bayes_factor(self.assembly, self.assembly.full_model())
        self.assertEqual((value.kappa0, value.kappa1), (1, 4))
        self.assertTrue(value.rank_deficient)
        expected = robust_bf_closed(value.q, 1, 4, self.assembly.n).log_magnitude
        self.assertEqual(value.log_bf, expected)

    def test_two_level_models_share_one_bayes_factor(self):
        assembly = assemble(*two_level(n=8))
        values = [bayes_factor(assembly, ModelGamma.from_bits(bits, 0, (2,))).log_bf
                  for bits in ((0, 1), (1, 0), (1, 1))]
        self.assertAlmostEqual(values[0], values[1], delta=1e-12)
        self.assertAlmostEqual(values[0], values[2], delta=1e-12)

    def test_dropping_one_level_keeps_the_bayes_factor(self):
        full = bayes_factor(self.assembly, self.assembly.full_model())
        dropped = bayes_factor(self.assembly, ModelGamma.from_bits((1, 1, 0, 1), 0, (4,)))
        self.assertAlmostEqual(full.log_bf, dropped.log_bf, delta=1e-10)
        self.assertFalse(dropped.rank_deficient)

    def test_quadrature_family(self):
        prior = HyperGPrior.zellner_siow()
        value = bayes_factor(self.assembly, self.assembly.full_model(), prior)
        expected = bcal_quadrature(value.q, 1, 4, self.assembly.n, prior).log_magnitude
        self.assertEqual(value.log_bf, expected)

    def test_better_fit_at_equal_rank_means_larger_factor(self):
        sse0 = null_sse(self.assembly)
        better = bayes_factor_from_fit(3, 0.7 * sse0, sse0, 2, self.assembly, HyperGPrior.robust())
        worse = bayes_factor_from_fit(3, 0.8 * sse0, sse0, 2, self.assembly, HyperGPrior.robust())
        self.assertGreater(better.log_bf, worse.log_bf)

    def test_rounding_above_the_null_fit_is_clamped(self):
        sse0 = null_sse(self.assembly)
        value = bayes_factor_from_fit(2, sse0 * (1 + 1e-15), sse0, 1, self.assembly, HyperGPrior.robust())
        self.assertEqual(value.q, 1.0)

    def test_constant_response_is_degenerate(self):
        assembly = assembly_from_arrays(np.full(6, 3.0), factors={'A': (np.arange(6) % 2, 2)})
        with self.assertRaises(DegenerateDataError):
            bayes_factor(assembly, assembly.full_model())

    def test_column_in_the_sure_span_is_an_alias_of_the_null(self):
        rng = np.random.default_rng(3)
        assembly = assembly_from_arrays(rng.standard_normal(10), variables={'c': np.full(10, 2.0)})
        with self.assertLogs('bayesfactor', 'WARNING'):
            value = bayes_factor(assembly, ModelGamma.from_bits((1,), 1, ()))
        self.assertTrue(value.alias_of_null)
        self.assertEqual(value.log_bf, 0.0)

    def test_exact_model_fit_is_degenerate(self):
        codes = np.arange(12) % 3
        assembly = assembly_from_arrays(1.0 + 2.0 * (codes == 0), factors={'A': (codes, 3)})
        with self.assertRaises(DegenerateDataError):
            bayes_factor(assembly, ModelGamma.from_bits((1, 0, 0), 0, (3,)))

    def test_aliased_fits_share_one_cache_entry(self):
        cache = BayesFactorCache()
        dropped = ModelGamma.from_bits((0, 1, 1, 1), 0, (4,))
        values = [bayes_factor(self.assembly, gamma, HyperGPrior.robust(), cache)
                  for gamma in (self.assembly.full_model(), dropped)]
        self.assertEqual(len(cache), 1)
        self.assertEqual(values[0].q, values[1].q)
        self.assertEqual(values[0].log_bf, values[1].log_bf)

    def test_ratio_rounding_is_the_same_for_scalars_and_arrays(self):
        ratios = np.array([0.5, np.nextafter(0.5, 0.0), 0.123456789012345, 1.0])
        rounded = canonical_ratio(ratios)
        self.assertEqual([canonical_ratio(float(q)) for q in ratios], list(rounded))
        self.assertEqual(rounded[0], rounded[1])
        self.assertEqual(rounded[3], 1.0)


class InvarianceReportTests(SimpleTestCase):

    def test_every_coding_gives_the_same_factor(self):
        for seed in range(5):
            assembly = random_factor_design(np.random.default_rng(seed), 3, covariate=bool(seed % 2))
            rows = bf_invariance_report(assembly, 'A')
            self.assertEqual([row.parameterization for row in rows],
                             ['indicator', 'baseline A=1', 'baseline A=2', 'baseline A=3'])
            for row in rows[1:]:
                self.assertEqual(row.rank, rows[0].rank)
                self.assertAlmostEqual(row.log_bf, rows[0].log_bf, delta=1e-10)

    def test_two_levels_match_the_binary_coding(self):
        assembly = assemble(*two_level(n=10, seed=4))
        rows = bf_invariance_report(assembly, 'A')
        binary = assembly.with_baseline('A', 0)
        self.assertAlmostEqual(rows[0].log_bf, bayes_factor(binary, binary.full_model()).log_bf, delta=1e-10)

    def test_response_without_level_signal(self):
        assembly = assemble(*pure_noise(n=30, k=0, size=3, seed=2))
        expected = bcal_quadrature(1.0, 1, 3, 30, HyperGPrior.robust()).log_magnitude
        for row in bf_invariance_report(assembly, 'A'):
            self.assertAlmostEqual(row.q, 1.0, delta=1e-12)
            self.assertAlmostEqual(row.log_bf, expected, delta=1e-6)
