"""Dense linear-algebra kernels shared by every other module.

Matrices are plain numpy arrays: 2-D, row-major (C order), ``float64`` for
real data and ``complex128`` for complex data.  All binary matrix files
written by this package use the same convention: raw little-endian 8-byte
IEEE floats, row-major, no header.

Everything here is a pure function of its inputs and safe to call
concurrently on distinct arguments.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

#: Default relative threshold for numerical rank decisions.
DEFAULT_RANK_TOL = 1e-10


class SingularMatrixError(np.linalg.LinAlgError):
    """An LU factorization produced an exactly zero pivot."""


def as_matrix(a, name: str = "matrix", complex_ok: bool = True) -> np.ndarray:
    """Coerce `a` to a 2-D float64/complex128 array and reject non-finite entries."""
    m = np.asarray(a)
    if np.iscomplexobj(m):
        if not complex_ok:
            raise ValueError(f"{name} must be real")
        m = m.astype(np.complex128, copy=False)
    else:
        m = m.astype(np.float64, copy=False)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def _as_square(a, name: str = "matrix") -> np.ndarray:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class SvdResult:
    """Economy-size singular value decomposition ``M = U @ diag(s) @ Vt``.

    `U` has orthonormal columns, `Vt` orthonormal rows, and `s` holds the
    singular values sorted nonincreasing.
    """

    U: np.ndarray
    s: np.ndarray
    Vt: np.ndarray


def svd(M) -> SvdResult:
    """Singular value decomposition of a real matrix.

    Raises a diagnostic ``LinAlgError`` naming the matrix dimensions if the
    underlying iteration fails to converge.
    """
    M = as_matrix(M, "M")
    try:
        U, s, Vt = np.linalg.svd(M, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"SVD did not converge for {M.shape[0]}x{M.shape[1]} matrix"
        ) from exc
    return SvdResult(U=U, s=s, Vt=Vt)


def singular_values(M) -> np.ndarray:
    """Singular values only (cheaper than :func:`svd` when vectors are unused)."""
    M = as_matrix(M, "M")
    if min(M.shape) == 0:
        return np.zeros(0)
    return np.linalg.svd(M, compute_uv=False)


def lu_factor(M) -> tuple[np.ndarray, np.ndarray]:
    """LU factorization with partial pivoting.

    Raises :class:`SingularMatrixError` on an exactly zero pivot, which
    callers use to trigger formula fallbacks.
    """
    M = _as_square(M, "M")
    if M.shape[0] == 0:
        return M.copy(), np.zeros(0, dtype=np.int32)
    with warnings.catch_warnings():
        # scipy only warns on a zero pivot; we escalate below instead.
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(M)
    if np.any(np.diagonal(lu) == 0.0):
        raise SingularMatrixError(
            f"exactly singular {M.shape[0]}x{M.shape[1]} matrix in LU factorization"
        )
    return lu, piv


def lu_solve_factored(factor: tuple[np.ndarray, np.ndarray], B) -> np.ndarray:
    """Solve ``M @ X = B`` from a factorization returned by :func:`lu_factor`."""
    lu, piv = factor
    B = as_matrix(B, "B")
    if lu.shape[0] == 0:
        return np.zeros((0, B.shape[1]), dtype=np.result_type(lu, B))
    if np.iscomplexobj(B) and not np.iscomplexobj(lu):
        # LAPACK getrs cannot mix dtypes; solve real and imaginary parts.
        return (
            sla.lu_solve((lu, piv), B.real)
            + 1j * sla.lu_solve((lu, piv), B.imag)
        )
    return sla.lu_solve((lu, piv), B)


def lu_solve(M, B) -> np.ndarray:
    """Solve ``M @ X = B`` by LU with partial pivoting.

    Raises :class:`SingularMatrixError` when a pivot is exactly zero.
    """
    M = _as_square(M, "M")
    B = as_matrix(B, "B")
    if M.shape[0] != B.shape[0]:
        raise ValueError(
            f"row mismatch: M is {M.shape[0]}x{M.shape[1]}, B has {B.shape[0]} rows"
        )
    if np.iscomplexobj(B) and not np.iscomplexobj(M):
        M = M.astype(np.complex128)
    return lu_solve_factored(lu_factor(M), B)


def norm1(M) -> float:
    """Induced matrix 1-norm (maximum absolute column sum)."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.abs(M).sum(axis=0).max())


def cond1_from_factor(factor: tuple[np.ndarray, np.ndarray], anorm: float) -> float:
    """1-norm condition estimate from an existing LU factorization.

    Uses the LAPACK ``gecon`` inverse-norm estimator, so the result is an
    estimate of ``norm1(M) * norm1(inv(M))`` obtained from triangular solves
    only (no explicit inverse).
    """
    lu, piv = factor
    if lu.shape[0] == 0:
        return 1.0
    gecon, = sla.get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0:
        raise ValueError(f"illegal argument to gecon (info={info})")
    if rcond == 0.0:
        return np.inf
    return float(1.0 / rcond)


def cond1_estimate(M) -> float:
    """Estimate the 1-norm condition number ``norm1(M) * norm1(inv(M))``.

    Returns ``inf`` when the LU factorization detects exact singularity.
    The estimate may over- or under-estimate the true condition number by a
    modest factor; it is exact for diagonal matrices.
    """
    M = _as_square(M, "M")
    anorm = norm1(M)
    if M.shape[0] == 0:
        return 1.0
    if anorm == 0.0:
        return np.inf
    try:
        factor = lu_factor(M)
    except SingularMatrixError:
        return np.inf
    return cond1_from_factor(factor, anorm)


def numerical_rank(s, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above ``rel_tol`` relative to the largest.

    `s` must be nonincreasing and nonnegative; an all-zero (or empty) input
    has rank 0.
    """
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 1:
        raise ValueError("singular values must be a 1-D sequence")
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    if s.size and (np.any(s < 0.0) or np.any(np.diff(s) > 0.0)):
        raise ValueError("singular values must be nonnegative and nonincreasing")
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def spectral_norm(M) -> float:
    """Largest singular value; the modulus of the entry for a 1-by-1 matrix."""
    M = as_matrix(M, "M")
    if min(M.shape) == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[0])
