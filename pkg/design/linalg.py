import numpy as np
import scipy.linalg as sl

EPS = np.finfo(float).eps


def rank_tolerance(singular_values, shape, scale=None):
    """Singular values at or below this are zero: eps * max(shape) * sigma_max."""
    if scale is None:
        scale = singular_values[0] if singular_values.size else 0.0
    return EPS * max(shape) * scale


def numerical_rank(matrix, scale=None):
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.size == 0:
        return 0
    singular_values = sl.svd(matrix, compute_uv=False, check_finite=False)
    return int(np.sum(singular_values > rank_tolerance(singular_values, matrix.shape, scale)))


def fit_least_squares(matrix, y):
    """Rank and residual sum of squares of the least-squares fit of ``y`` on ``matrix``.

    The residual is ``y`` minus its projection on the column space, so the
    SSE does not depend on how that space is parameterized.
    """
    U, s, _ = sl.svd(matrix, full_matrices=False, check_finite=False)
    rank = int(np.sum(s > rank_tolerance(s, matrix.shape)))
    basis = U[:, :rank]
    residual = y - basis @ (basis.T @ y)
    return rank, float(residual @ residual)


def residualize(X0, X):
    """``(I - P0) X``, the part of ``X`` orthogonal to the sure columns."""
    Q0, _ = sl.qr(X0, mode='economic', check_finite=False)
    return X - Q0 @ (Q0.T @ X)


def orthogonal_complement(X0):
    """Orthonormal basis of the complement of the column space of ``X0`` (n x (n - k0))."""
    Q, _ = sl.qr(X0, mode='full', check_finite=False)
    return Q[:, numerical_rank(X0):]


def model_design(assembly, gamma):
    """``[X0 | X_γ | Z_γ]`` with columns in schema order."""
    gamma.check_dimensions(assembly.k, assembly.levels)
    selected = np.flatnonzero(gamma.bits)
    return np.hstack([assembly.X0, assembly.candidates[:, selected]])


def rank_and_sse(assembly, gamma):
    return fit_least_squares(model_design(assembly, gamma), assembly.y)
