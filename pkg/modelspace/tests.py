import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from hypothesis.extra.django import SimpleTestCase as HypothesisTestCase

from design.exceptions import CapacityError, UsageError
from design.models import ModelGamma
from modelspace.models import ModelPriorScheme
from modelspace.priors import (
    iter_model_bits, log_prior_bits, null_prior_table, prior_constant, prior_hierarchical, prior_mass_audit,
    prior_scott_berger_flat,
)


class NullModelPriorTests(SimpleTestCase):

    def test_constant(self):
        self.assertAlmostEqual(prior_constant(ModelGamma.null(0, (4,))), 1 / 16, delta=1e-12)
        self.assertAlmostEqual(prior_constant(ModelGamma.null(0, (6,))), 1 / 64, delta=1e-12)

    def test_scott_berger(self):
        self.assertAlmostEqual(prior_scott_berger_flat(ModelGamma.null(0, (4,))), 1 / 5, delta=1e-12)
        self.assertAlmostEqual(prior_scott_berger_flat(ModelGamma.null(0, (6,))), 1 / 7, delta=1e-12)

    def test_hierarchical_does_not_depend_on_level_count(self):
        for size in (2, 4, 6, 9):
            self.assertAlmostEqual(prior_hierarchical(ModelGamma.null(0, (size,))), 0.5, delta=1e-12)

    def test_table(self):
        table = null_prior_table(0, (6,))
        self.assertAlmostEqual(table['constant'], 1 / 64, delta=1e-12)
        self.assertAlmostEqual(table['scott_berger_flat'], 1 / 7, delta=1e-12)
        self.assertAlmostEqual(table['hierarchical'], 0.5, delta=1e-12)


class HierarchicalPriorTests(HypothesisTestCase):

    def test_conditional_level_prior(self):
        # one factor, no variables: P(M_γ) = 1/2 · [ℓ C(ℓ, k_γ)]^-1
        for bits in ((1, 0, 0, 0), (1, 1, 0, 0), (1, 1, 1, 1)):
            active = sum(bits)
            expected = 0.5 / (4 * math.comb(4, active))
            self.assertAlmostEqual(prior_hierarchical(ModelGamma.from_bits(bits, 0, (4,))), expected, delta=1e-14)

    def test_level_mass_is_smallest_at_half_the_levels(self):
        priors = [prior_hierarchical(ModelGamma.from_bits((1,) * m + (0,) * (6 - m), 0, (6,))) for m in range(1, 7)]
        self.assertEqual(int(np.argmin(priors)) + 1, 3)

    @settings(max_examples=50, deadline=None, derandomize=True)
    @given(st.integers(min_value=0, max_value=(1 << 11) - 1), st.randoms(use_true_random=False))
    def test_relabeling_levels_keeps_the_prior(self, index, random):
        gamma = ModelGamma.from_index(index, 2, (6, 3))
        first = list(gamma.level_bits[:6])
        second = list(gamma.level_bits[6:])
        random.shuffle(first)
        random.shuffle(second)
        shuffled = ModelGamma(gamma.variable_bits, first + second, (6, 3))
        self.assertAlmostEqual(prior_hierarchical(shuffled), prior_hierarchical(gamma), delta=1e-15)

    @settings(max_examples=50, deadline=None, derandomize=True)
    @given(st.integers(min_value=0, max_value=(1 << 9) - 1))
    def test_swapping_factors_of_equal_size_keeps_the_prior(self, index):
        gamma = ModelGamma.from_index(index, 1, (4, 4))
        swapped = ModelGamma(gamma.variable_bits, gamma.level_bits[4:] + gamma.level_bits[:4], (4, 4))
        self.assertAlmostEqual(prior_hierarchical(swapped), prior_hierarchical(gamma), delta=1e-15)

    def test_equal_configurations_get_equal_mass(self):
        a = ModelGamma.from_bits((1, 0) + (1, 1, 0, 0, 0, 0) + (0, 0, 1), 2, (6, 3))
        b = ModelGamma.from_bits((0, 1) + (0, 0, 0, 1, 0, 1) + (1, 0, 0), 2, (6, 3))
        self.assertAlmostEqual(prior_hierarchical(a), prior_hierarchical(b), delta=1e-15)

    def test_dimension_mismatch(self):
        with self.assertRaises(UsageError):
            ModelPriorScheme('hierarchical', 2, (6, 3)).log_prior(ModelGamma.null(1, (6, 3)))


class PriorAuditTests(SimpleTestCase):

    def test_hierarchical_on_obesity_dimensions(self):
        audit = prior_mass_audit(ModelPriorScheme('hierarchical', 2, (6, 3)))
        self.assertTrue(audit.passed)
        self.assertAlmostEqual(audit.total_mass, 1.0, delta=1e-12)
        for value in audit.variable_marginals + audit.factor_marginals:
            self.assertAlmostEqual(value, 0.5, delta=1e-12)
        self.assertAlmostEqual(audit.null_mass, 1 / 5, delta=1e-12)

    def test_every_scheme_sums_to_one(self):
        for kind in ('constant', 'scott-berger', 'hierarchical'):
            with self.subTest(kind=kind):
                audit = prior_mass_audit(ModelPriorScheme(kind, 1, (3, 2)))
                self.assertTrue(audit.passed, audit.checks)
                self.assertEqual(len(audit.size_mass), 1 + 3 + 2 + 1)

    def test_constant_marginals(self):
        audit = prior_mass_audit(ModelPriorScheme('constant', 3, (4,)))
        for value in audit.variable_marginals + tuple(v for group in audit.level_marginals for v in group):
            self.assertAlmostEqual(value, 0.5, delta=1e-12)

    def test_scott_berger_size_mass_is_uniform(self):
        audit = prior_mass_audit(ModelPriorScheme('scott-berger', 0, (6,)))
        for value in audit.size_mass:
            self.assertAlmostEqual(value, 1 / 7, delta=1e-12)

    def test_blocks_cover_the_space_in_order(self):
        starts = [start for start, _ in iter_model_bits(5, block_size=8)]
        self.assertEqual(starts, [0, 8, 16, 24])
        _, bits = next(iter_model_bits(3, block_size=8))
        self.assertEqual(bits[5].tolist(), [1, 0, 1])

    def test_capacity(self):
        with self.assertRaises(CapacityError) as caught:
            prior_mass_audit(ModelPriorScheme('constant', 20, (6,)))
        self.assertEqual(caught.exception.exit_code, 4)

    def test_vectorized_prior_matches_single_models(self):
        scheme = ModelPriorScheme('hierarchical', 1, (3, 2))
        _, bits = next(iter_model_bits(scheme.column_count))
        values = log_prior_bits(scheme, bits)
        for index in (0, 5, 17, 63):
            gamma = ModelGamma.from_index(index, 1, (3, 2))
            self.assertAlmostEqual(values[index], scheme.log_prior(gamma), delta=1e-14)

    def test_unknown_scheme(self):
        with self.assertRaises(UsageError):
            ModelPriorScheme('uniform', 1, (2,))
