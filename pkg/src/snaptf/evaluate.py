"""Transfer-function evaluation with condition-switched formula selection.

Two algebraically equivalent formulas compute ``H_hat(s, p)`` from a
:class:`~snaptf.loewner.ParametricRealization`:

* the *compact* formula ``C (p E - XY / s - A)^-1 B`` — a single r x r
  complex solve, cheap but numerically fragile when ``Z(s, p) =
  K(p) - XY / s`` approaches singularity;
* the *precise* formula — the expanded state-space form requiring one real
  r x r solve and one complex n x n resolvent solve, robust and used as
  fallback.

The switched evaluator estimates the 1-norm condition number of ``Z`` from
its LU factorization and uses the compact formula only while the estimate
stays below a configurable gate.  ``s = 0`` is handled separately through an
oblique-projector Schur form, since ``Z`` is undefined there.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import numkit
from .loewner import ParametricRealization
from .models import ParametricModel, true_tf
from .numkit import SingularMatrixError

FORMULA_COMPACT = "compact"
FORMULA_PRECISE = "precise"
FORMULA_SCHUR_ZERO = "schur_zero"
FORMULA_ERROR = "error"


class EvaluationError(RuntimeError):
    """Both evaluation formulas failed at one (s, p) point."""


@dataclass(frozen=True)
class EvalConfig:
    """Switching thresholds for :func:`eval_point`.

    `eps_cond` gates the compact formula on the estimated condition number
    of ``Z(s, p)``; `zero_s_tol` is the magnitude below which `s` is treated
    as zero (the default accepts only exact zero).
    """

    eps_cond: float = 1e6
    zero_s_tol: float = 0.0

    def __post_init__(self):
        if not self.eps_cond > 1.0:
            raise ValueError(f"eps_cond must exceed 1, got {self.eps_cond}")
        if self.zero_s_tol < 0.0:
            raise ValueError(f"zero_s_tol must be >= 0, got {self.zero_s_tol}")


@dataclass(frozen=True)
class EvalResult:
    """One evaluated transfer-function value with bookkeeping.

    `formula` records which path produced the value; `cond_estimate` is the
    1-norm condition estimate of ``Z(s, p)`` (NaN on the ``s = 0`` path).
    """

    value: np.ndarray
    formula: str
    cond_estimate: float


def eval_compact(
    real: ParametricRealization, s: complex, p: float, s_inverse_free: bool = False
) -> np.ndarray:
    """Compact-formula value ``C (p E - XY / s - A)^-1 B``; needs ``s != 0``.

    With `s_inverse_free` the equivalent rescaled system
    ``s C (s p E - s A - XY)^-1 B`` is solved instead, trading the division
    by `s` for a scaled pencil.
    """
    s = complex(s)
    if s == 0:
        raise ValueError("compact formula is undefined at s=0")
    B = real.B.astype(np.complex128)
    if s_inverse_free:
        Zs = (s * p) * real.E - s * real.A - real.XY
        return s * (real.C @ numkit.lu_solve(Zs, B))
    Z = real.K(p) - real.XY / s
    return real.C @ numkit.lu_solve(Z, B)


def eval_precise(real: ParametricRealization, s: complex, p: float) -> np.ndarray:
    """Expanded-form value via ``K(p)^-1 [X B]`` and the n x n resolvent solve."""
    s = complex(s)
    try:
        sol = numkit.lu_solve(real.K(p), np.hstack([real.X, real.B]))
    except SingularMatrixError as exc:
        raise SingularMatrixError(f"K(p) is singular at p={p}") from exc
    KX, KB = sol[:, : real.n], sol[:, real.n:]
    A_hat = real.Y @ KX
    B_hat = real.Y @ KB
    C_hat = real.C @ KX
    D_hat = real.C @ KB
    resolvent = s * np.eye(real.n) - A_hat
    try:
        core = numkit.lu_solve(resolvent, B_hat.astype(np.complex128))
    except SingularMatrixError as exc:
        raise SingularMatrixError(
            f"s*I - A_hat(p) is singular at s={s}, p={p}"
        ) from exc
    return C_hat @ core + D_hat


def _resolvent_factor(real: ParametricRealization, p: float):
    Kp = real.K(p)
    try:
        return Kp, numkit.lu_factor(Kp)
    except SingularMatrixError as exc:
        raise SingularMatrixError(f"K(p) is singular at p={p}") from exc


def _projector_from_factor(real, p, Kp, factor) -> np.ndarray:
    KX = numkit.lu_solve_factored(factor, real.X)
    # Y K^-1 solved through the transposed factorization.
    YKinv = numkit.lu_solve(Kp.T, real.Y.T).T
    try:
        return real.X @ numkit.lu_solve(real.Y @ KX, YKinv)
    except SingularMatrixError as exc:
        raise SingularMatrixError(
            f"Y K(p)^-1 X is singular at p={p}; no value at s=0"
        ) from exc


def oblique_projector(real: ParametricRealization, p: float) -> np.ndarray:
    """Idempotent projector ``P(p) = X (Y K(p)^-1 X)^-1 Y K(p)^-1``.

    Projects onto ``ran(X)`` along the complementary subspace induced by the
    resolvent; the building block of the ``s = 0`` evaluation path.
    """
    Kp, factor = _resolvent_factor(real, p)
    return _projector_from_factor(real, p, Kp, factor)


def eval_schur_zero(real: ParametricRealization, p: float) -> np.ndarray:
    """Value at ``s = 0``: ``C K(p)^-1 (I - P(p)) B`` with the oblique projector."""
    Kp, factor = _resolvent_factor(real, p)
    P = _projector_from_factor(real, p, Kp, factor)
    rhs = (np.eye(real.r) - P) @ real.B
    return real.C @ numkit.lu_solve_factored(factor, rhs)


def eval_point(
    real: ParametricRealization,
    s: complex,
    p: float,
    cfg: EvalConfig = EvalConfig(),
) -> EvalResult:
    """Evaluate ``H_hat(s, p)`` with condition-switched formula selection.

    ``|s| <= zero_s_tol`` takes the Schur path.  Otherwise ``Z(s, p)`` is
    formed and LU-factored once; its condition estimate selects the compact
    formula (factor reused for the solve) or the precise fallback.  A
    singular ``Z`` falls back to the precise formula as well.  If every
    applicable formula fails, :class:`EvaluationError` reports all causes.
    """
    s = complex(s)
    p = float(p)
    if abs(s) <= cfg.zero_s_tol:
        try:
            value = eval_schur_zero(real, p)
        except SingularMatrixError as exc:
            raise EvaluationError(
                f"evaluation failed at s={s}, p={p}: schur_zero path: {exc}"
            ) from exc
        return EvalResult(value=value, formula=FORMULA_SCHUR_ZERO, cond_estimate=np.nan)

    Z = real.K(p) - real.XY / s
    kappa = np.inf
    compact_failure = "Z(s,p) is exactly singular"
    factor = None
    try:
        factor = numkit.lu_factor(Z)
        kappa = numkit.cond1_from_factor(factor, numkit.norm1(Z))
    except SingularMatrixError:
        pass

    if factor is not None and kappa <= cfg.eps_cond:
        value = real.C @ numkit.lu_solve_factored(factor, real.B.astype(np.complex128))
        return EvalResult(value=value, formula=FORMULA_COMPACT, cond_estimate=kappa)
    if factor is not None:
        compact_failure = f"condition estimate {kappa:.3e} exceeds gate {cfg.eps_cond:.3e}"

    try:
        value = eval_precise(real, s, p)
    except SingularMatrixError as exc:
        raise EvaluationError(
            f"evaluation failed at s={s}, p={p}: compact: {compact_failure}; "
            f"precise: {exc}"
        ) from exc
    return EvalResult(value=value, formula=FORMULA_PRECISE, cond_estimate=kappa)


@dataclass(frozen=True)
class ErrorGrid:
    """Deviation surface ``delta(omega, p)`` between a realization and a reference.

    `delta[i, j]` is the spectral norm of ``H_hat(i omega_i, p_j) -
    H(i omega_i, p_j)``; failed cells hold NaN, carry formula flag
    ``"error"`` and record their cause in `causes` keyed by ``(i, j)``.
    """

    omegas: np.ndarray
    params: np.ndarray
    delta: np.ndarray
    formula: np.ndarray
    cond_estimate: np.ndarray
    causes: dict = field(default_factory=dict)


def error_grid(
    real: ParametricRealization,
    model: ParametricModel,
    omegas,
    params,
    cfg: EvalConfig = EvalConfig(),
    threads: int = 1,
) -> ErrorGrid:
    """Evaluate ``delta(omega, p)`` over the full (omega, p) grid.

    Cells evaluate independently (optionally on a thread pool) and failures
    never abort the remaining grid.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=np.float64))
    params = np.atleast_1d(np.asarray(params, dtype=np.float64))
    if omegas.size == 0 or params.size == 0:
        raise ValueError("omega and parameter grids must be nonempty")
    if not (np.all(np.isfinite(omegas)) and np.all(np.isfinite(params))):
        raise ValueError("grid values must be finite")

    delta = np.full((omegas.size, params.size), np.nan)
    cond = np.full((omegas.size, params.size), np.nan)
    formula = np.full((omegas.size, params.size), FORMULA_ERROR, dtype=object)
    causes: dict = {}

    def fill(i: int, j: int) -> None:
        s = 1j * omegas[i]
        p = params[j]
        try:
            res = eval_point(real, s, p, cfg)
            ref = true_tf(model, s, p)
            delta[i, j] = numkit.spectral_norm(res.value - ref)
            formula[i, j] = res.formula
            cond[i, j] = res.cond_estimate
        except Exception as exc:  # cell sentinel, grid must survive
            causes[(i, j)] = f"{type(exc).__name__}: {exc}"

    cells = [(i, j) for i in range(omegas.size) for j in range(params.size)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda ij: fill(*ij), cells))
    else:
        for i, j in cells:
            fill(i, j)

    return ErrorGrid(
        omegas=omegas,
        params=params,
        delta=delta,
        formula=formula,
        cond_estimate=cond,
        causes=causes,
    )


def write_error_grid_csv(grid: ErrorGrid, path) -> None:
    """Write the grid as CSV: ``omega,p,delta,formula,cond_estimate``.

    Rows run omega-major over the grid; floats carry 17 significant digits
    so values round-trip exactly.
    """
    with open(path, "w", encoding="utf-8") as f:
        f.write("omega,p,delta,formula,cond_estimate\n")
        for i, w in enumerate(grid.omegas):
            for j, p in enumerate(grid.params):
                f.write(
                    f"{w:.17g},{p:.17g},{grid.delta[i, j]:.17g},"
                    f"{grid.formula[i, j]},{grid.cond_estimate[i, j]:.17g}\n"
                )
