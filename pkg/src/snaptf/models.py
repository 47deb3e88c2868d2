"""Parametric LTI models with polynomial parameter dependence.

A model is described by coefficient matrices ``gamma[0] .. gamma[h]`` of the
block matrix

    G(p) = sum_k p**k * gamma[k] = [[A(p), B(p)], [C(p), D(p)]],

where ``A(p)`` is ``n x n``, ``B(p)`` is ``n x n_i``, ``C(p)`` is
``n_o x n`` and ``D(p)`` is ``n_o x n_i``.  Snapshots are evaluations of
``G`` at fixed parameter values; they are the only input the interpolation
machinery needs, so sets of snapshots can also be constructed directly from
files without known coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numkit
from .numkit import SingularMatrixError

BUILTIN_NAMES = ("toy", "toy_modified", "polynomial", "penzl")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ParametricModel:
    """Polynomial-coefficient description of a parametric state-space model.

    Parameters
    ----------
    n, n_i, n_o
        State order, input count and output count.
    gamma
        Coefficient matrices of ``G(p)``, lowest degree first, each of shape
        ``(n + n_o, n + n_i)``.
    """

    n: int
    n_i: int
    n_o: int
    gamma: tuple[np.ndarray, ...]
    name: str = ""

    def __post_init__(self):
        if min(self.n, self.n_i, self.n_o) < 0 or self.n_i == 0 or self.n_o == 0:
            raise ValueError("need n >= 0 and positive input/output counts")
        if not self.gamma:
            raise ValueError("need at least one coefficient matrix")
        shape = (self.n + self.n_o, self.n + self.n_i)
        coeffs = tuple(
            _frozen(numkit.as_matrix(g, f"gamma[{k}]", complex_ok=False))
            for k, g in enumerate(self.gamma)
        )
        for k, g in enumerate(coeffs):
            if g.shape != shape:
                raise ValueError(
                    f"gamma[{k}] has shape {g.shape}, expected {shape}"
                )
        if len(coeffs) > 1 and not np.any(coeffs[-1]):
            raise ValueError("leading coefficient matrix must not be zero")
        object.__setattr__(self, "gamma", coeffs)

    @property
    def degree(self) -> int:
        return len(self.gamma) - 1


@dataclass(frozen=True)
class Snapshot:
    """The block matrix ``G(p) = [[A, B], [C, D]]`` at one parameter value."""

    p: float
    G: np.ndarray


@dataclass(frozen=True)
class SnapshotSet:
    """An ordered collection of snapshots sharing one block structure."""

    snapshots: tuple[Snapshot, ...]
    n: int
    n_i: int
    n_o: int

    def __post_init__(self):
        snaps = tuple(
            Snapshot(p=float(s.p), G=_frozen(numkit.as_matrix(s.G, "G", complex_ok=False)))
            for s in self.snapshots
        )
        if not snaps:
            raise ValueError("snapshot set is empty")
        shape = (self.n + self.n_o, self.n + self.n_i)
        for s in snaps:
            if s.G.shape != shape:
                raise ValueError(
                    f"snapshot at p={s.p} has shape {s.G.shape}, expected {shape}"
                )
            if not np.isfinite(s.p):
                raise ValueError("parameter values must be finite")
        values = [s.p for s in snaps]
        if len(set(values)) != len(values):
            raise ValueError("parameter values must be pairwise distinct")
        object.__setattr__(self, "snapshots", snaps)

    @property
    def params(self) -> np.ndarray:
        return np.array([s.p for s in self.snapshots])

    def __len__(self) -> int:
        return len(self.snapshots)

    @classmethod
    def from_model(cls, model: ParametricModel, params) -> "SnapshotSet":
        return cls(
            snapshots=tuple(snapshot(model, p) for p in params),
            n=model.n,
            n_i=model.n_i,
            n_o=model.n_o,
        )


def _horner(model: ParametricModel, p: float) -> np.ndarray:
    G = np.array(model.gamma[-1])
    for g in model.gamma[-2::-1]:
        G *= p
        G += g
    return G


def split_blocks(G: np.ndarray, n: int):
    """Split a snapshot matrix into its (A, B, C, D) blocks at row/column `n`."""
    return G[:n, :n], G[:n, n:], G[n:, :n], G[n:, n:]


def eval_blocks(model: ParametricModel, p: float):
    """Evaluate ``(A(p), B(p), C(p), D(p))`` by Horner's scheme."""
    if not np.isfinite(p):
        raise ValueError("parameter value must be finite")
    return split_blocks(_horner(model, p), model.n)


def snapshot(model: ParametricModel, p: float) -> Snapshot:
    """Assemble the snapshot matrix ``G(p)``; round-trips with :func:`eval_blocks`."""
    if not np.isfinite(p):
        raise ValueError("parameter value must be finite")
    return Snapshot(p=float(p), G=_horner(model, p))


def true_tf(model: ParametricModel, s: complex, p: float) -> np.ndarray:
    """Reference transfer-function value ``C(p) (s I - A(p))^-1 B(p) + D(p)``.

    Raises :class:`SingularMatrixError` when `s` is an eigenvalue of ``A(p)``.
    """
    A, B, C, D = eval_blocks(model, p)
    resolvent = s * np.eye(model.n) - A
    try:
        X = numkit.lu_solve(resolvent, B.astype(np.complex128))
    except SingularMatrixError as exc:
        raise SingularMatrixError(
            f"s*I - A(p) is singular at s={s}, p={p}"
        ) from exc
    return C @ X + D.astype(np.complex128)


def _toy() -> ParametricModel:
    # A(p) = [[-2, p, 0], [-p, -1, 0], [0, 0, -1]], B = (1, 0, 1)^T, C = B^T, D = 0.
    g0 = np.array(
        [
            [-2.0, 0.0, 0.0, 1.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 1.0],
            [1.0, 0.0, 1.0, 0.0],
        ]
    )
    g1 = np.zeros((4, 4))
    g1[0, 1] = 1.0
    g1[1, 0] = -1.0
    return ParametricModel(n=3, n_i=1, n_o=1, gamma=(g0, g1), name="toy")


def _toy_modified() -> ParametricModel:
    # Same as toy but the (3,3) entry of A(p) is -p instead of -1.
    toy = _toy()
    g0 = np.array(toy.gamma[0])
    g1 = np.array(toy.gamma[1])
    g0[2, 2] = 0.0
    g1[2, 2] = -1.0
    return ParametricModel(n=3, n_i=1, n_o=1, gamma=(g0, g1), name="toy_modified")


def _polynomial() -> ParametricModel:
    # Cubic dependence:
    #   A(p) = [[0.1 p^2 - 2,  p^3 - p,        0.2 p^2],
    #           [-p^3,         p^2 - 1,        -0.5 p ],
    #           [-0.2 p^2,     -10 p^3 - 0.5p, -1     ]],
    #   B = (1, 0.5, 1)^T, C = (1, 0, 1), D = 0.
    g0 = np.zeros((4, 4))
    g0[:3, :3] = np.diag([-2.0, -1.0, -1.0])
    g0[:3, 3] = [1.0, 0.5, 1.0]
    g0[3, :3] = [1.0, 0.0, 1.0]
    g1 = np.zeros((4, 4))
    g1[0, 1] = -1.0
    g1[1, 2] = -0.5
    g1[2, 1] = -0.5
    g2 = np.zeros((4, 4))
    g2[0, 0] = 0.1
    g2[0, 2] = 0.2
    g2[1, 1] = 1.0
    g2[2, 0] = -0.2
    g3 = np.zeros((4, 4))
    g3[0, 1] = 1.0
    g3[1, 0] = -1.0
    g3[2, 1] = -10.0
    return ParametricModel(n=3, n_i=1, n_o=1, gamma=(g0, g1, g2, g3), name="polynomial")


def _penzl() -> ParametricModel:
    # Affine large-scale benchmark: A(p) = diag(A1(p), A2, A3, A4) with
    # A1(p) = [[-1, p], [-p, -1]], rotation blocks at 200 and 400, and
    # A4 = -diag(1..1000); B = C^T with six 10s followed by one thousand 1s.
    n = 1006
    A0 = np.zeros((n, n))
    A0[0, 0] = A0[1, 1] = -1.0
    A0[2:4, 2:4] = [[-1.0, 200.0], [-200.0, -1.0]]
    A0[4:6, 4:6] = [[-1.0, 400.0], [-400.0, -1.0]]
    A0[6:, 6:] = -np.diag(np.arange(1.0, 1001.0))
    b = np.concatenate([np.full(6, 10.0), np.ones(1000)])
    g0 = np.zeros((n + 1, n + 1))
    g0[:n, :n] = A0
    g0[:n, n] = b
    g0[n, :n] = b
    g1 = np.zeros((n + 1, n + 1))
    g1[0, 1] = 1.0
    g1[1, 0] = -1.0
    return ParametricModel(n=n, n_i=1, n_o=1, gamma=(g0, g1), name="penzl")


_BUILTIN_FACTORIES = {
    "toy": _toy,
    "toy_modified": _toy_modified,
    "polynomial": _polynomial,
    "penzl": _penzl,
}


def builtin(name: str) -> ParametricModel:
    """Return one of the built-in example systems by name."""
    try:
        factory = _BUILTIN_FACTORIES[name]
    except KeyError:
        raise ValueError(
            f"unknown builtin {name!r}; valid names: {', '.join(BUILTIN_NAMES)}"
        ) from None
    return factory()
