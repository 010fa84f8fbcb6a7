"""Gauss hypergeometric function for real arguments z < 1, in log scale.

Negative arguments are first mapped into [0, 1) with a Pfaff
transformation. The power series is summed when the (transformed) argument
is at most 1/2; otherwise, or when the series does not settle within the
term cap, the Euler integral is evaluated by adaptive quadrature.
"""
import logging
import math

from scipy.integrate import quad
from scipy.special import gammaln

from design.conf import get_setting
from design.exceptions import DomainError, NumericError
from numerics.models import LogValue

logger = logging.getLogger(__name__)

SERIES_RADIUS = 0.5
SERIES_RTOL = 1e-16


def gauss_2f1(a, b, c, z):
    if not c > 0:
        raise DomainError(f'2F1 needs c > 0, got c={c}')
    if not z < 1:
        raise DomainError(f'2F1 is only evaluated for z < 1, got z={z}')
    if z == 0 or a == 0 or b == 0:
        return LogValue.one()
    if z > 0:
        return _series_or_integral(a, b, c, z, 0.0)
    w = z / (z - 1.0)
    # Pfaff: F(a,b;c;z) = (1-z)^-b F(c-a,b;c;w) = (1-z)^-a F(a,c-b;c;w); prefer the all-positive series.
    if c - a >= 0 and b >= 0:
        return _series_or_integral(c - a, b, c, w, -b * math.log1p(-z))
    return _series_or_integral(a, c - b, c, w, -a * math.log1p(-z))


def _series_or_integral(a, b, c, z, log_prefactor):
    if z <= SERIES_RADIUS:
        try:
            value = hypergeometric_series(a, b, c, z)
            return LogValue(log_prefactor + value.log_magnitude, value.sign)
        except NumericError:
            logger.debug('2F1 series did not settle for a=%g b=%g c=%g z=%g; using the Euler integral', a, b, c, z)
    value = euler_integral(a, b, c, z)
    return LogValue(log_prefactor + value.log_magnitude, value.sign)


def hypergeometric_series(a, b, c, z, max_terms=None):
    """Sum the power series of 2F1 with a running scale so no term overflows."""
    max_terms = max_terms or get_setting('SERIES_MAX_TERMS')
    log_term, sign = 0.0, 1
    scale, total = 0.0, 1.0
    settled = 0
    for k in range(max_terms):
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        if ratio == 0:
            break
        log_term += math.log(abs(ratio))
        sign = sign if ratio > 0 else -sign
        if log_term > scale:
            total *= math.exp(scale - log_term)
            scale = log_term
        term = sign * math.exp(log_term - scale)
        total += term
        if abs(ratio) < 1 and abs(term) <= SERIES_RTOL * abs(total):
            settled += 1
            if settled == 3:
                break
        else:
            settled = 0
    else:
        raise NumericError(f'2F1 series did not converge in {max_terms} terms', a=a, b=b, c=c, z=z)
    if total == 0:
        raise NumericError('2F1 series cancelled to zero', a=a, b=b, c=c, z=z)
    return LogValue(scale + math.log(abs(total)), 1 if total > 0 else -1)


def euler_integral(a, b, c, z):
    """F = Γ(c)/(Γ(β)Γ(c-β)) ∫ t^(β-1) (1-t)^(c-β-1) (1-zt)^(-α) dt over [0, 1], {α, β} = {a, b}, c > β > 0."""
    if c > b > 0:
        alpha, beta = a, b
    elif c > a > 0:
        alpha, beta = b, a
    else:
        raise NumericError('Euler integral needs c > a > 0 or c > b > 0', a=a, b=b, c=c, z=z)
    shift = max(0.0, -alpha * math.log1p(-z))

    def integrand(t):
        return math.exp(-alpha * math.log1p(-z * t) - shift)

    value, error = quad(integrand, 0.0, 1.0, weight='alg', wvar=(beta - 1.0, c - beta - 1.0),
                        epsabs=0.0, epsrel=get_setting('QUADRATURE_RTOL'), limit=200)
    if not value > 0 or not math.isfinite(value):
        raise NumericError('Euler integral quadrature failed', a=a, b=b, c=c, z=z, value=value, error=error)
    log_norm = gammaln(c) - gammaln(beta) - gammaln(c - beta)
    return LogValue(float(log_norm) + shift + math.log(value), 1)
