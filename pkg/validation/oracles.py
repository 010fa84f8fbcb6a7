"""Numerical oracles for the rank-deficient Bayes factor.

The explicit-prior oracle puts ``a ~ N(0, g σ² S)`` with ``S = (VᵀV + T)^-1``
on the coefficients of ``V = (I - P0) X_γ``, integrates the sure
coefficients and σ analytically and only ``g`` by quadrature. Whatever
admissible ``T`` is used, the result must equal the closed-form
``B(SSE_γ/SSE_0, k0, r_γ)``.
"""
import logging
import math

import numpy as np
import scipy.linalg as sl

from bayesfactor.compute import null_sse
from design.exceptions import ConstructionError, DomainError, UsageError
from design.linalg import model_design, numerical_rank, orthogonal_complement, residualize
from numerics.integration import mixing_integral
from numerics.models import HyperGPrior
from validation.models import GIConstruction

logger = logging.getLogger(__name__)

T_VARIANTS = ('null_projector', 'scaled_null_projector', 'random_psd_in_nullspace')
MAX_ORACLE_N = 50
MAX_ORACLE_COLUMNS = 4
EIGEN_FLOOR = 1e-10
RANK_RTOL = 1e-10


def _rank(matrix, scale=None):
    """Rank with singular values below RANK_RTOL times ``scale`` (default: the largest) taken as zero."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if not matrix.size:
        return 0
    singular_values = sl.svdvals(matrix, check_finite=False)
    scale = singular_values[0] if scale is None else scale
    return int(np.sum(singular_values > RANK_RTOL * scale))


def spectral_parts(V):
    """``(Q1, Q2, D)``: bases of the range and null space of ``VᵀV`` and its positive eigenvalues."""
    V = np.atleast_2d(np.asarray(V, dtype=float))
    _, s, Wt = sl.svd(V, full_matrices=True, check_finite=False)
    r = int(np.sum(s > RANK_RTOL * s[0])) if s.size and s[0] > 0 else 0
    W = Wt.T
    return W[:, :r], W[:, r:], s[:r] ** 2


def build_T(V, variant='null_projector', scale=1.0, seed=None):
    """A symmetric PSD penalty of rank ℓ - r living in the null space of ``VᵀV``."""
    _, Q2, _ = spectral_parts(V)
    if Q2.shape[1] == 0:
        raise ConstructionError('V has full column rank; there is no null space to penalize')
    if variant == 'null_projector':
        return Q2 @ Q2.T
    if variant == 'scaled_null_projector':
        if not scale > 0:
            raise DomainError(f'the projector scale must be positive, got {scale}')
        return scale * (Q2 @ Q2.T)
    if variant == 'random_psd_in_nullspace':
        rng = np.random.default_rng(seed)
        m = Q2.shape[1]
        G = rng.standard_normal((m, m))
        M = G @ G.T + m * np.eye(m)
        return Q2 @ M @ Q2.T
    raise UsageError(f'unknown T variant {variant}; choose from {", ".join(T_VARIANTS)}')


def check_generalized_inverse(V, T):
    """Residual of ``VᵀV S VᵀV = VᵀV`` for ``S = (VᵀV + T)^-1``."""
    V = np.atleast_2d(np.asarray(V, dtype=float))
    T = np.atleast_2d(np.asarray(T, dtype=float))
    A = V.T @ V
    if T.shape != A.shape:
        raise UsageError(f'T is {T.shape}, VᵀV is {A.shape}')
    penalized = A + T
    if _rank(penalized) < penalized.shape[0]:
        raise ConstructionError('VᵀV + T is singular', rank=_rank(penalized), size=penalized.shape[0])
    S = sl.inv(penalized, check_finite=False)
    S = 0.5 * (S + S.T)
    Q1, Q2, D = spectral_parts(V)
    norm = sl.norm(A)
    residual = float(sl.norm(A @ S @ A - A) / norm) if norm > 0 else float(sl.norm(A @ S @ A))
    rank_T = _rank(T) if T.any() else 0
    disjoint = rank_T == Q2.shape[1] and _rank(np.hstack([A, T])) == Q1.shape[1] + rank_T
    construction = GIConstruction(
        V=V, Q1=Q1, Q2=Q2, D=D, T=T, S=S,
        residual=residual,
        positive_definite=bool(np.all(sl.eigvalsh(S) > 0)),
        disjoint=bool(disjoint),
    )
    logger.debug('generalized inverse check: l=%d r=%d residual=%.3g', V.shape[1], construction.rank, residual)
    return construction


def marginal_via_explicit_prior(assembly, gamma, T, hyper_prior=None):
    """Log Bayes factor of ``gamma`` against the null under the explicit prior built from ``T``."""
    hyper_prior = hyper_prior or HyperGPrior.robust()
    if assembly.n > MAX_ORACLE_N or gamma.size > MAX_ORACLE_COLUMNS:
        raise UsageError(
            f'the explicit-prior oracle is limited to n <= {MAX_ORACLE_N} and {MAX_ORACLE_COLUMNS} model columns')
    if gamma.is_null:
        return 0.0
    design = model_design(assembly, gamma)
    k0, n = assembly.k0, assembly.n
    V = residualize(assembly.X0, design[:, k0:])
    S = check_generalized_inverse(V, T).S
    basis = orthogonal_complement(assembly.X0)
    V_tilde = basis.T @ V
    y_tilde = basis.T @ assembly.y
    eigenvalues, vectors = sl.eigh(V_tilde @ S @ V_tilde.T, check_finite=False)
    eigenvalues = np.where(eigenvalues > EIGEN_FLOOR * max(eigenvalues.max(), 1.0), eigenvalues, 0.0)
    weights = (vectors.T @ y_tilde) ** 2
    total = float(weights.sum())
    if not math.isclose(total, null_sse(assembly), rel_tol=1e-9):
        logger.warning('complement basis lost accuracy: %.17g vs SSE_0 %.17g', total, null_sse(assembly))
    kappa1 = numerical_rank(design)
    exponent = 0.5 * (n - k0)

    def log_kernel(g):
        determinant = float(np.sum(np.log1p(g * eigenvalues)))
        quadratic = float(np.sum(weights / (1.0 + g * eigenvalues))) / total
        return -0.5 * determinant - exponent * math.log(quadratic)

    return mixing_integral(log_kernel, hyper_prior, n, kappa1).log_magnitude


def testability_check(design, hypothesis_rows):
    """Whether ``L β = 0`` is testable in the model with design ``Z``: every row of ``L`` in the row space of ``Z``."""
    Z = np.atleast_2d(np.asarray(design, dtype=float))
    L = np.atleast_2d(np.asarray(hypothesis_rows, dtype=float))
    if L.shape[1] != Z.shape[1]:
        raise UsageError(f'hypothesis rows have {L.shape[1]} entries, the design has {Z.shape[1]} columns')
    return _rank(np.vstack([Z, L])) == _rank(Z)


def residual_ranks(X0, X):
    """``(rank((I - P0) X), rank([X0 | X]) - k0)``; the two agree for any ``X`` when ``X0`` has full rank."""
    full = np.hstack([X0, X])
    scale = float(sl.svdvals(full, check_finite=False)[0])
    return _rank(residualize(X0, X), scale), _rank(full, scale) - X0.shape[1]
