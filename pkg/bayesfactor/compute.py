import logging
import threading

import numpy as np

from design.exceptions import DegenerateDataError
from design.linalg import rank_and_sse
from bayesfactor.models import BayesFactorValue, InvarianceRow
from numerics.integration import bcal_quadrature, robust_bf_closed
from numerics.models import HyperGPrior

logger = logging.getLogger(__name__)

RATIO_BITS = 40


def canonical_ratio(q):
    """SSE ratio rounded to ``RATIO_BITS`` mantissa bits.

    Models spanning the same column space get SSEs that differ in the last
    bits; after rounding they share one value, one cache key and one alias
    group. Works elementwise on arrays; frexp and ldexp are exact, so the
    scalar and the array paths agree bit for bit.
    """
    mantissa, exponent = np.frexp(q)
    rounded = np.ldexp(np.round(np.ldexp(mantissa, RATIO_BITS)), exponent - RATIO_BITS)
    return float(rounded) if np.ndim(rounded) == 0 else rounded


class BayesFactorCache:
    """Memo of log B(q, κ0, κ1) keyed on ``(canonical q, κ0, κ1, n, prior)``; safe for concurrent use."""

    def __init__(self):
        self._values = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._values)

    def get_or_compute(self, key, compute):
        with self._lock:
            if key in self._values:
                return self._values[key]
        value = compute()
        with self._lock:
            return self._values.setdefault(key, value)


def bcal(q, kappa0, kappa1, n, prior):
    """Log of B(q, κ0, κ1): closed form for the robust family, quadrature otherwise."""
    if prior.is_robust:
        return robust_bf_closed(q, kappa0, kappa1, n).log_magnitude
    return bcal_quadrature(q, kappa0, kappa1, n, prior).log_magnitude


def null_sse(assembly):
    rank, sse = rank_and_sse(assembly, assembly.null_model())
    if sse <= assembly.exact_fit_sse:
        raise DegenerateDataError(f'the null model fits the response exactly (SSE_0 = {sse:.3g})')
    return sse


def bayes_factor_from_fit(rank, sse, sse0, width, assembly, prior, cache=None):
    """Bayes factor from a fitted model: B(SSE/SSE_0, k0, rank)."""
    k0, n = assembly.k0, assembly.n
    rank_deficient = rank < k0 + width
    if width == 0:
        return BayesFactorValue(0.0, 1.0, k0, k0)
    if rank == k0:
        logger.warning('model columns lie in the span of the sure columns; treated as an alias of the null')
        return BayesFactorValue(0.0, canonical_ratio(min(sse / sse0, 1.0)), k0, rank, rank_deficient,
                                alias_of_null=True)
    if sse <= assembly.exact_fit_sse:
        raise DegenerateDataError(f'a model with rank {rank} fits the response exactly')
    q = sse / sse0
    if q > 1.0:
        logger.debug('SSE ratio %.17g above 1 by rounding; clamped', q)
        q = 1.0
    q = canonical_ratio(q)
    prior = prior or HyperGPrior.robust()

    def compute():
        return bcal(q, k0, rank, n, prior)

    log_bf = cache.get_or_compute((q, k0, rank, n, prior), compute) if cache is not None else compute()
    return BayesFactorValue(log_bf, q, k0, rank, rank_deficient)


def bayes_factor(assembly, gamma, prior=None, cache=None, sse0=None):
    """B_γ = B(SSE_γ / SSE_0, k0, r_γ), whether or not the design of M_γ has full column rank."""
    sse0 = null_sse(assembly) if sse0 is None else sse0
    rank, sse = rank_and_sse(assembly, gamma)
    return bayes_factor_from_fit(rank, sse, sse0, gamma.size, assembly, prior, cache)


def bf_invariance_report(assembly, factor, prior=None):
    """Full-model Bayes factor under the indicator coding of ``factor`` and under each corner coding."""
    r = assembly.schema.factor_index(factor)
    name, labels = assembly.schema.factor_columns[r]
    sse0 = null_sse(assembly)
    full = assembly.full_model()
    start = assembly.k + assembly.factor_slices()[r].start
    rows = []
    codings = [('indicator', full)]
    for j, label in enumerate(labels):
        bits = list(full.bits)
        bits[start + j] = 0
        codings.append((f'baseline {name}={label}', full.from_bits(bits, full.k, full.levels)))
    for parameterization, gamma in codings:
        value = bayes_factor(assembly, gamma, prior, sse0=sse0)
        rows.append(InvarianceRow(parameterization, value.kappa1, value.q, value.log_bf))
    return tuple(rows)
