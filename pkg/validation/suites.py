"""Self-contained validation suites run by ``manage.py validate``.

Every instance is generated from ``seed`` (``VALIDATION_SEED`` by default)
so a run is reproducible; a different seed only changes the instances.
"""
import itertools
import logging
import math

import numpy as np
import pandas as pd
from scipy.special import hyp2f1

from bayesfactor.compute import bayes_factor
from design.conf import get_setting
from design.exceptions import ConstructionError, UsageError
from design.ingest import assemble
from design.linalg import model_design, residualize
from design.synthetic import pure_noise, random_factor_design, two_level
from numerics.hypergeometric import euler_integral, gauss_2f1, hypergeometric_series
from numerics.integration import bcal_quadrature, robust_bf_closed
from numerics.models import HyperGPrior
from validation.models import GI_TOLERANCE, CheckResult, ValidationSummary
from validation.oracles import (
    build_T, check_generalized_inverse, marginal_via_explicit_prior, residual_ranks, testability_check,
)

logger = logging.getLogger(__name__)

GI_INSTANCES = 20
PRIOR_INSTANCES = 5
RANK_INSTANCES = 50
ORACLE_RTOL = 1e-4
PAIRWISE_RTOL = 1e-6
BCAL_RTOL = 1e-6
HYP2F1_RTOL = 1e-8

BCAL_SIZES = (20, 100, 1002)
BCAL_SURE_RANKS = (1, 4)
BCAL_RANK_GAPS = (1, 3, 8)
BCAL_RATIOS = tuple(float(q) for q in np.geomspace(0.01, 1.0, 11))
BCAL_EXTRA_POINTS = ((0.015, 4, 12, 1002), (0.995, 1, 2, 20))

HYP2F1_POINTS = (
    (0.5, 1.5, 2.5, 0.3),
    (2.0, 3.0, 4.5, 0.45),
    (1.5, 10.0, 2.5, -0.4),
    (1.0, 20.0, 3.0, -0.2),
    (3.5, 50.5, 4.5, 0.1),
    (1.0, 5.5, 3.0, -3.0),
)


def _relative(log_a, log_b):
    return abs(math.expm1(log_a - log_b))


def _full_design_V(assembly):
    gamma = assembly.full_model()
    return gamma, residualize(assembly.X0, model_design(assembly, gamma)[:, assembly.k0:])


def _variants(seed):
    return (
        ('null_projector', {}),
        ('scaled_null_projector', {'scale': 10.0 if seed % 2 else 0.1}),
        ('random_psd_in_nullspace', {'seed': seed}),
    )


def gi_suite(seed):
    results = []
    for i in range(GI_INSTANCES):
        rng = np.random.default_rng(seed + i)
        assembly = random_factor_design(rng, int(rng.integers(3, 7)), covariate=bool(i % 2))
        _, V = _full_design_V(assembly)
        for variant, options in _variants(seed + i):
            construction = check_generalized_inverse(V, build_T(V, variant, **options))
            results.append(CheckResult('gi', f'instance {i} {variant}', construction.passed,
                                       construction.residual, GI_TOLERANCE,
                                       f'l={V.shape[1]} r={construction.rank}'))
        try:
            check_generalized_inverse(V, np.zeros((V.shape[1], V.shape[1])))
        except ConstructionError:
            results.append(CheckResult('gi', f'instance {i} T=0 rejected', True))
        else:
            results.append(CheckResult('gi', f'instance {i} T=0 rejected', False,
                                       detail='singular VᵀV was accepted'))
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((10, 3))
    construction = check_generalized_inverse(V, np.zeros((3, 3)))
    results.append(CheckResult('gi', 'full rank V with T=0', construction.passed, construction.residual, GI_TOLERANCE))
    return results


def _oracle_checks(label, assembly, closed, seed, hyper_prior):
    gamma, V = _full_design_V(assembly)
    results, values = [], []
    for variant, options in _variants(seed):
        value = marginal_via_explicit_prior(assembly, gamma, build_T(V, variant, **options), hyper_prior)
        values.append(value)
        error = _relative(value, closed)
        results.append(CheckResult('prior', f'{label} {variant}', error <= ORACLE_RTOL, error, ORACLE_RTOL))
    spread = max(_relative(a, b) for a, b in itertools.combinations(values, 2))
    results.append(CheckResult('prior', f'{label} T choices agree', spread <= PAIRWISE_RTOL,
                               spread, PAIRWISE_RTOL))
    return results


def prior_suite(seed):
    """Explicit-prior Bayes factors of rank-deficient models against the closed form."""
    hyper_prior = HyperGPrior.robust()
    results = []
    for i in range(PRIOR_INSTANCES):
        rng = np.random.default_rng(seed + 100 + i)
        assembly = random_factor_design(rng, 3 + i % 2, per_level_range=(3, 4), covariate=i >= 3)
        closed = bayes_factor(assembly, assembly.full_model(), hyper_prior).log_bf
        results += _oracle_checks(f'instance {i}', assembly, closed, seed + i, hyper_prior)

    frame, schema = two_level(n=8, seed=seed)
    assembly = assemble(frame, schema)
    binary = assembly.with_baseline('A', 0)
    closed = bayes_factor(binary, binary.full_model(), hyper_prior).log_bf
    results += _oracle_checks('two-level factor', assembly, closed, seed, hyper_prior)

    frame, schema = pure_noise(n=12, k=0, size=3, seed=seed)
    assembly = assemble(frame, schema)
    closed = bcal_quadrature(1.0, assembly.k0, assembly.k0 + 2, assembly.n, hyper_prior).log_magnitude
    results += _oracle_checks('q=1 data', assembly, closed, seed, hyper_prior)
    return results


def _rank_design(rng, i):
    n = int(rng.integers(8, 21))
    k0 = 1 + int(rng.integers(0, 3))
    X0 = np.column_stack([np.ones(n), rng.standard_normal((n, k0 - 1))])
    X = rng.standard_normal((n, int(rng.integers(1, 5))))
    kind = i % 5
    if kind == 1:
        X = np.column_stack([X, X0 @ rng.integers(-3, 4, k0)])
    elif kind == 2:
        X = np.column_stack([X, X[:, 0]])
    elif kind == 3:
        X = np.column_stack([X, 2.0 * X[:, 0] - X0[:, 0]])
    elif kind == 4:
        size = int(rng.integers(2, 5))
        X = np.column_stack([X, np.eye(size)[np.arange(n) % size]])
    return X0, X


def rank_suite(seed):
    results = []
    for i in range(RANK_INSTANCES):
        rng = np.random.default_rng(seed + 200 + i)
        X0, X = _rank_design(rng, i)
        residual_rank, rank_difference = residual_ranks(X0, X)
        results.append(CheckResult('rank', f'design {i}', residual_rank == rank_difference,
                                   float(residual_rank - rank_difference), 0.0,
                                   f'rank((I-P0)X)={residual_rank} rank([X0|X])-k0={rank_difference}'))
    return results


def testability_suite(seed):
    """Intercept plus a two-level factor, two observations per level."""
    Z = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [1.0, 0.0, 1.0], [1.0, 0.0, 1.0]])
    rng = np.random.default_rng(seed)
    full_rank = rng.standard_normal((6, 3))
    cases = (
        ('a1 = a2 = 0 is not testable', Z, [[0, 1, 0], [0, 0, 1]], False),
        ('a1 - a2 = 0 is testable', Z, [[0, 1, -1]], True),
        ('full rank design, any hypothesis', full_rank, rng.standard_normal((2, 3)), True),
    )
    return [CheckResult('testability', name, testability_check(design, rows) == expected)
            for name, design, rows, expected in cases]


def bcal_suite(seed):
    """Robust closed form against quadrature of the same integral on a fixed grid."""
    prior = HyperGPrior.robust()
    results = []
    grid = [(q, kappa0, kappa0 + gap, n)
            for n, kappa0, gap, q in itertools.product(BCAL_SIZES, BCAL_SURE_RANKS, BCAL_RANK_GAPS, BCAL_RATIOS)]
    for q, kappa0, kappa1, n in grid + list(BCAL_EXTRA_POINTS):
        closed = robust_bf_closed(q, kappa0, kappa1, n).log_magnitude
        numeric = bcal_quadrature(q, kappa0, kappa1, n, prior).log_magnitude
        error = _relative(closed, numeric)
        results.append(CheckResult('bcal', f'n={n} k0={kappa0} k1={kappa1} q={q:.4g}',
                                   error <= BCAL_RTOL, error, BCAL_RTOL))
    return results


def hyp2f1_suite(seed):
    results = []
    for a, b, c, z in HYP2F1_POINTS:
        label = f'2F1({a}, {b}; {c}; {z})'
        reference = float(hyp2f1(a, b, c, z))
        value = gauss_2f1(a, b, c, z)
        error = abs(value.value / reference - 1.0)
        results.append(CheckResult('hyp2f1', label, error <= HYP2F1_RTOL, error, HYP2F1_RTOL))
        if abs(z) <= 0.5:
            series = hypergeometric_series(a, b, c, z)
            integral = euler_integral(a, b, c, z)
            error = _relative(series.log_magnitude, integral.log_magnitude)
            results.append(CheckResult('hyp2f1', label + ' series vs integral', error <= HYP2F1_RTOL,
                                       error, HYP2F1_RTOL))
    return results


SUITES = {
    'gi': gi_suite,
    'prior': prior_suite,
    'rank': rank_suite,
    'testability': testability_suite,
    'bcal': bcal_suite,
    'hyp2f1': hyp2f1_suite,
}


def run_validation(suites=None, seed=None):
    suites = tuple(suites or SUITES)
    unknown = [name for name in suites if name not in SUITES]
    if unknown:
        raise UsageError(f'unknown suite {", ".join(unknown)}; choose from {", ".join(SUITES)}')
    seed = get_setting('VALIDATION_SEED') if seed is None else int(seed)
    results = []
    for name in suites:
        suite_results = SUITES[name](seed)
        failed = sum(1 for result in suite_results if not result.passed)
        log = logger.info if not failed else logger.warning
        log('suite %s: %d checks, %d failed', name, len(suite_results), failed)
        results += suite_results
    return ValidationSummary(seed=seed, suites=suites, results=tuple(results))


def render_summary(summary):
    rows = []
    for suite in summary.suites:
        results = summary.for_suite(suite)
        rows.append({
            'suite': suite,
            'checks': len(results),
            'failed': sum(1 for result in results if not result.passed),
            'worst': max((result.value for result in results), default=0.0),
            'verdict': 'pass' if all(result.passed for result in results) else 'FAIL',
        })
    lines = [f'validation seed {summary.seed}',
             pd.DataFrame(rows).set_index('suite').to_string(float_format=lambda value: f'{value:.3g}')]
    for result in summary.failures():
        lines.append((
            f'FAILED {result.suite}: {result.name} '
            f'(value {result.value:.3g}, tolerance {result.tolerance:.3g}) {result.detail}'
        ).rstrip())
    return '\n'.join(lines) + '\n'
