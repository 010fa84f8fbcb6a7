"""The conventional-prior integral

    B(q, κ0, κ1) = ∫ (1 + q g)^(-(n-κ0)/2) (1 + g)^((n-κ1)/2) h(g) dg

by quadrature for any mixing density, and in closed form for the robust one.
"""
import logging
import math

from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from design.conf import get_setting
from design.exceptions import DomainError, NumericError
from numerics.hypergeometric import gauss_2f1
from numerics.models import LogValue

logger = logging.getLogger(__name__)

U_MAX = math.nextafter(1.0, 0.0)
TAIL_GAP = 1e-8


def _check_arguments(q, kappa0, kappa1, n):
    if not 0 < q <= 1:
        raise DomainError(f'SSE ratio q must lie in (0, 1], got {q}')
    if not kappa0 < kappa1:
        raise DomainError(f'need kappa0 < kappa1, got {kappa0} and {kappa1}')
    if kappa1 > n:
        raise DomainError(f'integrand diverges for kappa1={kappa1} > n={n}')


def _tail_exponent(log_integrand, u_lo):
    """Exponent α with the u-space integrand behaving like (1 - u)^α as u → 1, to the nearest half."""
    near = min(TAIL_GAP, 0.5 * (1.0 - u_lo))
    nearer = 1e-4 * near
    slope = (log_integrand(1.0 - nearer) - log_integrand(1.0 - near)) / (math.log(nearer) - math.log(near))
    if not math.isfinite(slope):
        return 0.0
    return round(2.0 * slope) / 2.0


def mixing_integral(log_kernel, prior, n, kappa1, rtol=None):
    """∫ exp(log_kernel(g)) h(g) dg over the prior's support, in log scale.

    The substitution u = g / (1 + g) maps the support onto a finite interval;
    the integrand is scaled by its maximum before integration. When the
    support is unbounded and the integrand is singular at u = 1, the
    singular factor (1 - u)^α is moved into an algebraic quadrature weight.
    """
    rtol = rtol or get_setting('QUADRATURE_RTOL')
    g_lo, g_hi = prior.support(n, kappa1)
    u_lo = g_lo / (1.0 + g_lo)
    u_hi = 1.0 if math.isinf(g_hi) else g_hi / (1.0 + g_hi)

    def log_integrand(u):
        u = min(u, U_MAX)
        g = u / (1.0 - u)
        return log_kernel(g) + prior.log_density(g, n, kappa1) + 2.0 * math.log1p(g)

    alpha = _tail_exponent(log_integrand, u_lo) if u_hi == 1.0 else 0.0
    if alpha <= -1.0:
        raise DomainError(f'{prior.name} mixing integrand is not integrable as g grows', n=n, kappa1=kappa1)
    alpha = min(alpha, 0.0)

    def log_weighted(u):
        return log_integrand(u) - alpha * math.log1p(-min(u, U_MAX))

    peak = minimize_scalar(lambda u: -log_weighted(u), bounds=(u_lo, u_hi), method='bounded',
                           options={'xatol': 1e-12 * max(u_hi - u_lo, 1e-300)})
    shift = -peak.fun
    if not math.isfinite(shift):
        raise NumericError('mixing integrand has no finite maximum', n=n, kappa1=kappa1, prior=prior.name)

    def integrand(u):
        return math.exp(log_integrand(u) - shift)

    def weighted(u):
        return math.exp(log_weighted(u) - shift)

    options = {'epsabs': 0.0, 'epsrel': rtol, 'limit': 500}
    if alpha == 0.0:
        points = [peak.x] if u_lo < peak.x < u_hi else None
        value, error = quad(integrand, u_lo, u_hi, points=points, **options)
    else:
        value, error = quad(weighted, u_lo, u_hi, weight='alg', wvar=(0.0, alpha), **options)
    if not value > 0 or not math.isfinite(value):
        raise NumericError('mixing quadrature failed', n=n, kappa1=kappa1, prior=prior.name,
                           value=value, error=error)
    if error > 100 * rtol * value:
        logger.warning('mixing quadrature error estimate %.3g exceeds target for %s (n=%d, kappa1=%d)',
                       error / value, prior.name, n, kappa1)
    return LogValue(shift + math.log(value), 1)


def bcal_quadrature(q, kappa0, kappa1, n, prior):
    _check_arguments(q, kappa0, kappa1, n)
    a = 0.5 * (n - kappa0)
    b = 0.5 * (n - kappa1)

    def log_kernel(g):
        return -a * math.log1p(q * g) + b * math.log1p(g)

    return mixing_integral(log_kernel, prior, n, kappa1)


def robust_bf_closed(q, kappa0, kappa1, n):
    """Closed form of the integral under the robust mixing density.

    B = ((n+1)/κ1)^(-(κ1-κ0)/2) q^(-(n-κ0)/2) / (κ1-κ0+1)
        · 2F1[(κ1-κ0+1)/2; (n-κ0)/2; (κ1-κ0+3)/2; κ1 (1 - 1/q) / (n+1)]
    """
    _check_arguments(q, kappa0, kappa1, n)
    d = kappa1 - kappa0
    z = kappa1 * (1.0 - 1.0 / q) / (n + 1)
    hyper = gauss_2f1(0.5 * (d + 1), 0.5 * (n - kappa0), 0.5 * (d + 3), z)
    log_value = (
        -0.5 * d * math.log((n + 1) / kappa1)
        - 0.5 * (n - kappa0) * math.log(q)
        - math.log(d + 1)
        + hyper.log_magnitude
    )
    return LogValue(log_value, 1)


def prior_mass(prior, n, kappa1):
    """∫ h(g) dg over the support; 1 for a proper density."""
    return mixing_integral(lambda g: 0.0, prior, n, kappa1).value


def check_normalized(prior, n, kappa1, tol=1e-8):
    mass = prior_mass(prior, n, kappa1)
    if abs(mass - 1.0) > tol:
        raise DomainError(f'{prior.name} density integrates to {mass:.12g}, not 1',
                          n=n, kappa1=kappa1)
    return mass
