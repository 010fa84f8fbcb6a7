import logging
import math

import numpy as np
from joblib import Parallel, delayed
from scipy.special import logsumexp

from bayesfactor.compute import BayesFactorCache, bcal, canonical_ratio, null_sse
from design.conf import get_setting
from design.exceptions import DegenerateDataError, NumericError, UsageError
from design.linalg import fit_least_squares
from design.models import ModelGamma
from modelspace.models import ModelPriorScheme
from modelspace.priors import check_capacity, iter_model_bits, log_prior_bits
from numerics.models import HyperGPrior
from posterior.models import BaselineSensitivity, ModelRecord, PosteriorReport

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-10
FIT_BLOCK = 512
MAX_LISTED_ALIASES = 10


def _scheme_for(prior_scheme, assembly):
    if isinstance(prior_scheme, ModelPriorScheme):
        if (prior_scheme.k, prior_scheme.levels) != (assembly.k, assembly.levels):
            raise UsageError('model prior dimensions do not match the design')
        return prior_scheme
    return ModelPriorScheme.for_assembly(prior_scheme, assembly)


def _parallel(n_jobs, tasks):
    if n_jobs == 1:
        return (task() for task in tasks)
    return Parallel(n_jobs=n_jobs, prefer='threads', return_as='generator')(delayed(task)() for task in tasks)


def _fit_block(assembly, start, bits):
    ranks = np.empty(bits.shape[0], dtype=np.int16)
    sses = np.empty(bits.shape[0])
    for i, row in enumerate(bits):
        design = np.hstack([assembly.X0, assembly.candidates[:, row.astype(bool)]])
        ranks[i], sses[i] = fit_least_squares(design, assembly.y)
    return start, ranks, sses


def fit_space(assembly, n_jobs=1):
    """Rank and SSE of every model, in enumeration order, fitted in blocks."""
    total = 1 << assembly.column_count
    ranks = np.empty(total, dtype=np.int16)
    sses = np.empty(total)
    tasks = (lambda start=start, bits=bits: _fit_block(assembly, start, bits)
             for start, bits in iter_model_bits(assembly.column_count, FIT_BLOCK))
    for start, block_ranks, block_sses in _parallel(n_jobs, tasks):
        ranks[start:start + block_ranks.size] = block_ranks
        sses[start:start + block_sses.size] = block_sses
    return ranks, sses


def log_bayes_factors(ranks, ratios, assembly, hyper_prior, cache=None, n_jobs=1):
    """log B of every model; B is evaluated once per distinct (rank, SSE ratio).

    Models of rank k0 (the null and its aliases) get log B = 0.
    """
    k0, n = assembly.k0, assembly.n
    cache = BayesFactorCache() if cache is None else cache
    log_bf = np.zeros(ranks.shape[0])
    scored = np.flatnonzero(ranks > k0)
    if not scored.size:
        return log_bf, 0
    order = scored[np.lexsort((ratios[scored], ranks[scored]))]
    new_key = np.ones(order.size, dtype=bool)
    new_key[1:] = (ranks[order[1:]] != ranks[order[:-1]]) | (ratios[order[1:]] != ratios[order[:-1]])
    representatives = order[new_key]

    def evaluate(index):
        q, rank = float(ratios[index]), int(ranks[index])
        return cache.get_or_compute((q, k0, rank, n, hyper_prior), lambda: bcal(q, k0, rank, n, hyper_prior))

    tasks = (lambda index=index: evaluate(index) for index in representatives)
    values = np.fromiter(_parallel(n_jobs, tasks), dtype=float, count=representatives.size)
    log_bf[order] = values[np.cumsum(new_key) - 1]
    logger.debug('%d distinct Bayes factors for %d scored models', representatives.size, scored.size)
    return log_bf, int(representatives.size)


def _top_indices(log_unnormalized, top_n):
    """Indices of the ``top_n`` largest values; ties go to the lower index."""
    total = log_unnormalized.shape[0]
    if top_n < total:
        threshold = np.partition(log_unnormalized, total - top_n)[total - top_n]
        candidates = np.flatnonzero(log_unnormalized >= threshold)
    else:
        candidates = np.arange(total)
    order = np.lexsort((candidates, -log_unnormalized[candidates]))
    return candidates[order[:top_n]]


def enumerate_posterior(assembly, prior_scheme='hierarchical', hyper_prior=None, top_n=None, n_jobs=None,
                        cache=None):
    """Posterior probabilities of all 2^(k+L) models and the inclusion summaries built from them.

    The space is fitted and summarized in blocks of models in lexicographic
    order of their bits. Per model only its rank, SSE ratio, log Bayes factor
    and unnormalized log posterior are kept, in flat arrays; records are built
    for the null model and the top models only. The normalizer is one
    log-sum-exp over the whole array, so identical inputs give identical
    numbers whatever the worker count.
    """
    scheme = _scheme_for(prior_scheme, assembly)
    hyper_prior = hyper_prior or HyperGPrior.robust()
    top_n = top_n or get_setting('TOP_N')
    n_jobs = n_jobs or get_setting('N_JOBS')
    K = assembly.column_count
    check_capacity(K)
    total = 1 << K
    k0 = assembly.k0
    sse0 = null_sse(assembly)
    logger.info('enumerating %d models (%s prior, %s mixing density, n_jobs=%s)',
                total, scheme.kind, hyper_prior.name, n_jobs)

    ranks, sses = fit_space(assembly, n_jobs)
    exact = np.flatnonzero((ranks > k0) & (sses <= assembly.exact_fit_sse))
    if exact.size:
        gamma = ModelGamma.from_index(int(exact[0]), assembly.k, assembly.levels)
        raise DegenerateDataError(f'model {gamma.describe(assembly.schema)} fits the response exactly')
    ratios = canonical_ratio(np.minimum(sses / sse0, 1.0))
    del sses
    aliases_of_null = int(np.count_nonzero(ranks == k0)) - 1
    if aliases_of_null:
        logger.warning('%d models add no rank beyond the sure columns; scored as aliases of the null',
                       aliases_of_null)
    log_bf, evaluations = log_bayes_factors(ranks, ratios, assembly, hyper_prior, cache, n_jobs)

    log_unnormalized = log_bf.copy()
    for start, bits in iter_model_bits(K):
        log_unnormalized[start:start + bits.shape[0]] += log_prior_bits(scheme, bits)
    log_normalizer = float(logsumexp(log_unnormalized))

    slices = scheme.factor_slices()
    mass, size_mass, column_mass, factor_mass = [], [], [], []
    for start, bits in iter_model_bits(K):
        posteriors = np.exp(log_unnormalized[start:start + bits.shape[0]] - log_normalizer)
        mass.append(posteriors.sum())
        size_mass.append((posteriors * bits.sum(axis=1)).sum())
        column_mass.append((posteriors[:, None] * bits).sum(axis=0))
        factor_mass.append([posteriors[bits[:, columns].any(axis=1)].sum() for columns in slices])
    total_posterior = math.fsum(mass)
    if abs(total_posterior - 1.0) > NORMALIZATION_TOLERANCE:
        raise NumericError(f'posterior probabilities sum to {total_posterior:.15g}')

    def included(parts):
        return min(1.0, math.fsum(parts))

    columns = [included(parts) for parts in zip(*column_mass)]
    factor_inclusion = tuple(included(parts) for parts in zip(*factor_mass))

    def record(index):
        index = int(index)
        gamma = ModelGamma.from_index(index, assembly.k, assembly.levels)
        rank, q = int(ranks[index]), float(ratios[index])
        aliases = ()
        alias_count = 0
        if rank > k0:
            members = np.flatnonzero((ranks == rank) & (ratios == q))
            members = members[members != index]
            aliases = tuple(int(member) for member in members[:MAX_LISTED_ALIASES])
            alias_count = int(members.size)
        return ModelRecord(
            gamma=gamma,
            log_prior=float(log_prior_bits(scheme, np.array([gamma.bits], dtype=np.int8))[0]),
            log_bf=float(log_bf[index]),
            rank=rank,
            q=q,
            log_posterior=float(log_unnormalized[index] - log_normalizer),
            alias_of_null=rank == k0 and index > 0,
            aliases=aliases,
            alias_count=alias_count,
        )

    report = PosteriorReport(
        schema=assembly.schema,
        prior_kind=scheme.kind,
        hyper_prior=hyper_prior.name,
        n=assembly.n,
        sse0=sse0,
        log_normalizer=log_normalizer,
        model_count=total,
        evaluations=evaluations,
        total_posterior=total_posterior,
        mean_model_size=math.fsum(size_mass),
        null_record=record(0),
        factor_inclusion=factor_inclusion,
        variable_inclusion=tuple(columns[:assembly.k]),
        level_inclusion=tuple(tuple(columns[s]) for s in slices),
        top_models=tuple(record(index) for index in _top_indices(log_unnormalized, top_n)),
    )
    logger.info('posterior of the null model %.6g; highest probability model %s (%.6g)',
                report.null_record.posterior, report.top_models[0].gamma.describe(assembly.schema),
                report.top_models[0].posterior)
    return report


def factor_inclusion(report, factor):
    """P(A_r | y): posterior mass of the models with at least one active level of the factor."""
    return report.factor_inclusion[report.schema.factor_index(factor)]


def variable_inclusion(report, variable):
    names = report.schema.variable_columns
    if isinstance(variable, str):
        if variable not in names:
            raise UsageError(f'unknown variable {variable}')
        variable = names.index(variable)
    if not 0 <= variable < len(names):
        raise UsageError(f'variable index {variable} out of range')
    return report.variable_inclusion[variable]


def level_inclusion(report, factor, level):
    """Posterior mass of the models in which a given level is active (not renormalized by the factor)."""
    r = report.schema.factor_index(factor)
    return report.level_inclusion[r][report.schema.level_index(r, level)]


def baseline_sensitivity_demo(assembly, factor, baseline_level, prior_scheme='hierarchical', hyper_prior=None,
                              n_jobs=None, cache=None):
    """P(A|y) after corner coding ``factor`` with ``baseline_level`` folded into the null."""
    r = assembly.schema.factor_index(factor)
    if assembly.levels[r] < 3:
        raise UsageError('the baseline demonstration needs a factor with at least 3 levels')
    kind = prior_scheme.kind if isinstance(prior_scheme, ModelPriorScheme) else prior_scheme
    coded = assembly.with_baseline(r, baseline_level)
    report = enumerate_posterior(coded, kind, hyper_prior, top_n=1, n_jobs=n_jobs, cache=cache)
    return report.factor_inclusion[r]


def baseline_sensitivity_table(assembly, factor, prior_scheme='hierarchical', hyper_prior=None, report=None,
                               n_jobs=None):
    """P(A|y) of ``factor`` under the indicator coding and under every corner coding."""
    r = assembly.schema.factor_index(factor)
    name, labels = assembly.schema.factor_columns[r]
    cache = BayesFactorCache()
    if report is None:
        report = enumerate_posterior(assembly, prior_scheme, hyper_prior, top_n=1, n_jobs=n_jobs, cache=cache)
    by_baseline = tuple(
        (label, baseline_sensitivity_demo(assembly, r, j, prior_scheme, hyper_prior, n_jobs=n_jobs, cache=cache))
        for j, label in enumerate(labels)
    )
    return BaselineSensitivity(factor=name, indicator=report.factor_inclusion[r], by_baseline=by_baseline)
