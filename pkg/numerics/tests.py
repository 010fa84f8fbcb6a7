import math

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from hypothesis.extra.django import SimpleTestCase as HypothesisTestCase
from scipy.special import hyp2f1

from design.exceptions import DomainError
from numerics.hypergeometric import euler_integral, gauss_2f1, hypergeometric_series
from numerics.integration import bcal_quadrature, check_normalized, prior_mass, robust_bf_closed
from numerics.models import HyperGPrior, LogValue


class LogValueTests(SimpleTestCase):

    def test_product_and_value(self):
        value = LogValue.from_value(-2.5) * LogValue.from_value(4.0)
        self.assertEqual(value.sign, -1)
        self.assertAlmostEqual(value.value, -10.0, places=12)

    def test_zero_has_no_log(self):
        with self.assertRaises(DomainError):
            LogValue.from_value(0.0)


class HypergeometricTests(SimpleTestCase):

    def test_zero_argument(self):
        self.assertEqual(gauss_2f1(2.5, 7.0, 3.5, 0.0).value, 1.0)

    def test_logarithm_identity(self):
        self.assertAlmostEqual(gauss_2f1(1.0, 1.0, 2.0, -1.0).value, math.log(2.0), delta=1e-12)
        z = 0.4
        self.assertAlmostEqual(gauss_2f1(1.0, 1.0, 2.0, z).value, -math.log1p(-z) / z, delta=1e-12)

    def test_large_parameter_against_euler_integral(self):
        value = gauss_2f1(0.5, 499.0, 1.5, -0.3)
        oracle = euler_integral(0.5, 499.0, 1.5, -0.3)
        self.assertLessEqual(abs(math.expm1(value.log_magnitude - oracle.log_magnitude)), 1e-8)

    def test_matches_scipy_on_moderate_parameters(self):
        for a, b, c, z in ((1.5, 2.0, 3.5, -0.7), (2.0, 10.5, 4.0, -2.0), (0.5, 0.5, 1.5, 0.25)):
            self.assertAlmostEqual(gauss_2f1(a, b, c, z).value / float(hyp2f1(a, b, c, z)), 1.0, delta=1e-9)

    def test_series_and_integral_agree(self):
        series = hypergeometric_series(2.0, 3.0, 4.5, 0.45)
        integral = euler_integral(2.0, 3.0, 4.5, 0.45)
        self.assertAlmostEqual(series.value / integral.value, 1.0, delta=1e-9)

    def test_domain(self):
        with self.assertRaises(DomainError):
            gauss_2f1(1.0, 1.0, 0.0, -0.5)
        with self.assertRaises(DomainError):
            gauss_2f1(1.0, 1.0, 2.0, 1.0)


class MixingDensityTests(SimpleTestCase):

    def test_presets_are_normalized(self):
        for name in ('robust', 'zellner-siow', 'hyper-g-n'):
            with self.subTest(name=name):
                check_normalized(HyperGPrior.named(name), 100, 3)

    def test_presets_have_unit_mass_across_sizes(self):
        for name in ('robust', 'zellner-siow', 'hyper-g-n'):
            for n, kappa1 in ((20, 2), (1002, 9)):
                with self.subTest(name=name, n=n):
                    self.assertAlmostEqual(prior_mass(HyperGPrior.named(name), n, kappa1), 1.0, delta=1e-8)

    def test_heavy_tailed_custom_density_is_normalized(self):
        prior = HyperGPrior.custom(lambda g, n, kappa1: 0.5 * (1.0 + g) ** -1.5, (0.0, math.inf))
        self.assertAlmostEqual(check_normalized(prior, 100, 3), 1.0, delta=1e-8)

    def test_unnormalized_custom_density(self):
        with self.assertRaises(DomainError):
            HyperGPrior.custom(lambda g, n, kappa1: 2.0, (0.0, 1.0))

    def test_improper_custom_density(self):
        with self.assertRaises(DomainError):
            HyperGPrior.custom(lambda g, n, kappa1: 1.0, (0.0, math.inf))

    def test_robust_support_starts_above_zero(self):
        lo, hi = HyperGPrior.robust().support(100, 4)
        self.assertAlmostEqual(lo, 101 / 4 - 1)
        self.assertEqual(hi, math.inf)

    def test_unknown_family(self):
        with self.assertRaises(DomainError):
            HyperGPrior.named('beta-prime')


class BayesFactorIntegralTests(HypothesisTestCase):

    def test_closed_form_matches_quadrature(self):
        robust = HyperGPrior.robust()
        closed = robust_bf_closed(0.8, 4, 6, 100)
        numeric = bcal_quadrature(0.8, 4, 6, 100, robust)
        self.assertLessEqual(abs(math.expm1(closed.log_magnitude - numeric.log_magnitude)), 1e-6)

    def test_obesity_sized_arguments(self):
        closed = robust_bf_closed(0.93, 4, 9, 1002)
        numeric = bcal_quadrature(0.93, 4, 9, 1002, HyperGPrior.robust())
        self.assertLessEqual(abs(math.expm1(closed.log_magnitude - numeric.log_magnitude)), 1e-6)

    def test_unit_ratio_has_no_hypergeometric_factor(self):
        n, kappa0, kappa1 = 40, 2, 5
        d = kappa1 - kappa0
        expected = -0.5 * d * math.log((n + 1) / kappa1) - math.log(d + 1)
        self.assertAlmostEqual(robust_bf_closed(1.0, kappa0, kappa1, n).log_magnitude, expected, places=12)
        self.assertLess(expected, 0.0)

    def test_unit_ratio_below_one_for_any_family(self):
        for name in ('robust', 'zellner-siow', 'hyper-g-n'):
            with self.subTest(name=name):
                self.assertLess(bcal_quadrature(1.0, 1, 3, 30, HyperGPrior.named(name)).log_magnitude, 0.0)

    def test_huge_sample_does_not_overflow(self):
        value = robust_bf_closed(0.5, 1, 3, 10 ** 6)
        self.assertTrue(math.isfinite(value.log_magnitude))
        self.assertGreater(value.log_magnitude, 1e5)

    @settings(max_examples=30, deadline=None, derandomize=True)
    @given(st.floats(min_value=0.01, max_value=0.99), st.integers(min_value=1, max_value=4),
           st.integers(min_value=1, max_value=8), st.sampled_from([20, 100, 1002]))
    def test_decreasing_in_sse_ratio(self, q, kappa0, d, n):
        better = robust_bf_closed(q, kappa0, kappa0 + d, n).log_magnitude
        worse = robust_bf_closed(min(1.0, q * 1.01), kappa0, kappa0 + d, n).log_magnitude
        self.assertGreater(better, worse)

    def test_narrow_density_approaches_the_integrand(self):
        q, kappa0, kappa1, n, g_star, width = 0.7, 1, 3, 30, 5.0, 1e-4
        prior = HyperGPrior.custom(lambda g, n, kappa1: 1.0 / (2 * width), (g_star - width, g_star + width))
        value = bcal_quadrature(q, kappa0, kappa1, n, prior).log_magnitude
        expected = -0.5 * (n - kappa0) * math.log1p(q * g_star) + 0.5 * (n - kappa1) * math.log1p(g_star)
        self.assertAlmostEqual(value, expected, delta=1e-6)

    def test_domain_errors(self):
        robust = HyperGPrior.robust()
        with self.assertRaises(DomainError):
            bcal_quadrature(0.5, 3, 3, 20, robust)
        with self.assertRaises(DomainError):
            bcal_quadrature(0.5, 1, 30, 20, robust)
        with self.assertRaises(DomainError):
            robust_bf_closed(1.5, 1, 2, 20)
