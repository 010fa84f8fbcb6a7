"""Model space priors, all computed in log scale.

* constant: 1 / 2^(k+L).
* scott_berger_flat: uniform over model sizes, then over models of a size,
  treating the k variables and the L level columns alike.
* hierarchical: uniform over how many of the k + p predictors (variables and
  factors) are active, then over which; within each active factor the same
  two steps over its levels. A factor is active when at least one of its
  levels is.
"""
import logging
import math

import numpy as np
from scipy.special import gammaln

from design.conf import get_setting
from design.exceptions import CapacityError
from modelspace.models import ModelPriorScheme, PriorAudit

logger = logging.getLogger(__name__)

AUDIT_TOLERANCE = 1e-12
BLOCK_SIZE = 1 << 16


def log_comb(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def log_prior_bits(scheme, bits):
    """Log prior of every row of a 0/1 matrix whose columns follow the model bit order."""
    bits = np.asarray(bits)
    K = scheme.column_count
    if scheme.kind == 'constant':
        return np.full(bits.shape[0], -K * math.log(2.0))
    if scheme.kind == 'scott_berger_flat':
        size = bits.sum(axis=1)
        return -math.log(K + 1) - log_comb(K, size)
    k, p = scheme.k, scheme.p
    active_variables = bits[:, :k].sum(axis=1)
    active_factors = np.zeros(bits.shape[0], dtype=int)
    log_levels = np.zeros(bits.shape[0])
    for size, columns in zip(scheme.levels, scheme.factor_slices()):
        count = bits[:, columns].sum(axis=1)
        included = count > 0
        active_factors += included
        log_levels -= np.where(included, math.log(size) + log_comb(size, count), 0.0)
    return -math.log(k + p + 1) - log_comb(k + p, active_variables + active_factors) + log_levels


def _prior(kind, gamma):
    return ModelPriorScheme(kind, gamma.k, gamma.levels).prior(gamma)


def prior_constant(gamma):
    return _prior('constant', gamma)


def prior_scott_berger_flat(gamma):
    return _prior('scott_berger_flat', gamma)


def prior_hierarchical(gamma):
    return _prior('hierarchical', gamma)


def check_capacity(column_count):
    limit = get_setting('MAX_ENUMERATED_COLUMNS')
    if column_count > limit:
        raise CapacityError(f'{column_count} candidate columns give 2^{column_count} models; exhaustive '
                            f'enumeration is limited to {limit} columns. Drop variables or merge levels.')


def model_bits(start, stop, column_count):
    """Bits of models ``start .. stop - 1`` in lexicographic order."""
    index = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(column_count - 1, -1, -1, dtype=np.int64)
    return ((index[:, None] >> shifts) & 1).astype(np.int8)


def iter_model_bits(column_count, block_size=BLOCK_SIZE):
    total = 1 << column_count
    for start in range(0, total, block_size):
        yield start, model_bits(start, min(start + block_size, total), column_count)


def prior_mass_audit(scheme):
    """Enumerate the whole space and check that the prior sums to one and has the promised marginals."""
    K = scheme.column_count
    check_capacity(K)
    size_mass = np.zeros(K + 1)
    column_mass = np.zeros(K)
    factor_mass = np.zeros(scheme.p)
    slices = scheme.factor_slices()
    null_mass = 0.0
    for start, bits in iter_model_bits(K):
        probs = np.exp(log_prior_bits(scheme, bits))
        if start == 0:
            null_mass = float(probs[0])
        size_mass += np.bincount(bits.sum(axis=1), weights=probs, minlength=K + 1)
        column_mass += probs @ bits
        for r, columns in enumerate(slices):
            factor_mass[r] += probs[bits[:, columns].any(axis=1)].sum()
    total = float(size_mass.sum())

    def near_half(values):
        return bool(np.all(np.abs(np.asarray(values) - 0.5) <= AUDIT_TOLERANCE))

    checks = {'total_mass': abs(total - 1.0) <= AUDIT_TOLERANCE}
    if scheme.kind == 'hierarchical':
        checks['variable_marginals'] = near_half(column_mass[:scheme.k])
        checks['factor_marginals'] = near_half(factor_mass)
    else:
        checks['column_marginals'] = near_half(column_mass)
    audit = PriorAudit(
        scheme=scheme,
        total_mass=total,
        null_mass=null_mass,
        size_mass=tuple(float(v) for v in size_mass),
        variable_marginals=tuple(float(v) for v in column_mass[:scheme.k]),
        factor_marginals=tuple(float(v) for v in factor_mass),
        level_marginals=tuple(tuple(float(v) for v in column_mass[columns]) for columns in slices),
        checks=checks,
    )
    log = logger.info if audit.passed else logger.warning
    log('%s prior audit over %d models: total=%.15g checks=%s', scheme.kind, 1 << K, total, checks)
    return audit


def null_prior_table(k, levels):
    """P(M_0) under each scheme for the given dimensions."""
    table = {}
    for kind in ('constant', 'scott_berger_flat', 'hierarchical'):
        scheme = ModelPriorScheme(kind, k, levels)
        table[kind] = math.exp(float(log_prior_bits(scheme, np.zeros((1, scheme.column_count), dtype=np.int8))[0]))
    return table
