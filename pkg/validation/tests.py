import math

import numpy as np
from django.test import SimpleTestCase

from bayesfactor.compute import bayes_factor
from design.exceptions import ConstructionError, UsageError
from design.ingest import assemble
from design.linalg import residualize
from design.synthetic import one_factor_exact, random_factor_design, two_level
from validation.oracles import (
    T_VARIANTS, build_T, check_generalized_inverse, marginal_via_explicit_prior, residual_ranks, testability_check,
)
from validation.suites import run_validation


def full_model_V(assembly):
    return residualize(assembly.X0, assembly.Z)


class GeneralizedInverseTests(SimpleTestCase):

    def setUp(self):
        self.assembly = assemble(*one_factor_exact(size=3, per_level=4, shift=1.0))
        self.V = full_model_V(self.assembly)

    def test_one_factor_penalty_has_rank_one(self):
        T = build_T(self.V)
        self.assertEqual(np.linalg.matrix_rank(T), 1)

    def test_scaled_penalties_both_pass(self):
        for scale in (10.0, 0.1):
            construction = check_generalized_inverse(self.V, build_T(self.V, 'scaled_null_projector', scale=scale))
            self.assertTrue(construction.passed)
            self.assertEqual(construction.rank, 2)

    def test_random_penalty(self):
        construction = check_generalized_inverse(self.V, build_T(self.V, 'random_psd_in_nullspace', seed=3))
        self.assertLessEqual(construction.residual, 1e-8)
        self.assertTrue(construction.positive_definite)

    def test_zero_penalty_is_singular(self):
        with self.assertRaises(ConstructionError):
            check_generalized_inverse(self.V, np.zeros((3, 3)))

    def test_full_rank_V(self):
        V = np.random.default_rng(0).standard_normal((8, 3))
        with self.assertRaises(ConstructionError):
            build_T(V)
        construction = check_generalized_inverse(V, np.zeros((3, 3)))
        self.assertLess(construction.residual, 1e-12)

    def test_unknown_variant(self):
        with self.assertRaises(UsageError):
            build_T(self.V, 'identity')


class ExplicitPriorTests(SimpleTestCase):

    def assertRelativelyClose(self, log_a, log_b, tolerance):
        self.assertLessEqual(abs(math.expm1(log_a - log_b)), tolerance)

    def test_every_penalty_gives_the_closed_form(self):
        assembly = random_factor_design(np.random.default_rng(12), 3, per_level_range=(4, 4))
        self.assertEqual(assembly.n, 12)
        gamma = assembly.full_model()
        closed = bayes_factor(assembly, gamma).log_bf
        V = full_model_V(assembly)
        values = [marginal_via_explicit_prior(assembly, gamma, build_T(V, variant, seed=1)) for variant in T_VARIANTS]
        for value in values:
            self.assertRelativelyClose(value, closed, 1e-4)
        self.assertRelativelyClose(values[0], values[2], 1e-6)

    def test_two_level_factor_matches_the_binary_coding(self):
        assembly = assemble(*two_level(n=8, seed=1))
        binary = assembly.with_baseline('A', 0)
        V = full_model_V(assembly)
        value = marginal_via_explicit_prior(assembly, assembly.full_model(), build_T(V))
        self.assertRelativelyClose(value, bayes_factor(binary, binary.full_model()).log_bf, 1e-4)

    def test_size_limit(self):
        assembly = assemble(*one_factor_exact(size=3, per_level=20))
        with self.assertRaises(UsageError):
            marginal_via_explicit_prior(assembly, assembly.full_model(), build_T(full_model_V(assembly)))


class RankAndTestabilityTests(SimpleTestCase):

    def setUp(self):
        self.Z = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [1.0, 0.0, 1.0], [1.0, 0.0, 1.0]])

    def test_level_effects_are_not_testable(self):
        self.assertFalse(testability_check(self.Z, [[0, 1, 0], [0, 0, 1]]))

    def test_level_contrast_is_testable(self):
        self.assertTrue(testability_check(self.Z, [[0, 1, -1]]))

    def test_full_rank_design(self):
        design = np.random.default_rng(1).standard_normal((6, 3))
        self.assertTrue(testability_check(design, [[1, 2, 3], [0, 1, 0]]))

    def test_dimension_mismatch(self):
        with self.assertRaises(UsageError):
            testability_check(self.Z, [[1, 0]])

    def test_rank_identity_with_collinear_columns(self):
        rng = np.random.default_rng(4)
        X0 = np.column_stack([np.ones(10), rng.standard_normal(10)])
        X = np.column_stack([rng.standard_normal(10), X0 @ [2.0, -1.0], np.eye(2)[np.arange(10) % 2]])
        residual_rank, rank_difference = residual_ranks(X0, X)
        self.assertEqual(residual_rank, rank_difference)
        self.assertEqual(residual_rank, 2)


class SuiteTests(SimpleTestCase):

    def test_quick_suites_pass(self):
        summary = run_validation(['gi', 'rank', 'testability', 'hyp2f1'])
        self.assertTrue(summary.passed, summary.failures())
        self.assertEqual(len(summary.for_suite('rank')), 50)
        self.assertEqual(len(summary.for_suite('gi')), 20 * 4 + 1)

    def test_oracle_suites_pass(self):
        summary = run_validation(['prior', 'bcal'])
        self.assertTrue(summary.passed, summary.failures())
        self.assertEqual(len(summary.for_suite('bcal')), 200)
        names = [result.name for result in summary.for_suite('bcal')]
        self.assertIn('n=1002 k0=4 k1=12 q=0.01', names)
        self.assertIn('n=20 k0=1 k1=2 q=1', names)

    def test_seed_override(self):
        self.assertTrue(run_validation(['gi'], seed=7).passed)

    def test_unknown_suite(self):
        with self.assertRaises(UsageError):
            run_validation(['spectral'])
