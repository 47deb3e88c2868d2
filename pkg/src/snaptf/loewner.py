"""Loewner pencil construction, truncation and realization extraction.

Given snapshots ``G(p_i)`` split into a left set ``pi_1..pi_M`` and a right
set ``phi_1..phi_N``, the Loewner matrix ``L`` and shifted Loewner matrix
``Ls`` hold the block divided differences

    L[i,j]  = (G(pi_i) - G(phi_j)) / (pi_i - phi_j),
    Ls[i,j] = (pi_i G(pi_i) - phi_j G(phi_j)) / (pi_i - phi_j),

together with the data matrices ``V`` (left snapshots stacked vertically)
and ``W`` (right snapshots stacked horizontally).  Truncating the singular
vector bases of ``[L  Ls]`` and ``[L; Ls]`` to rank ``r`` yields a compressed
parametric realization ``(E, A, B, C, X, Y)`` whose resolvent

    K(p) = p E - A = Xr^T (Ls - p L) Yr

reproduces every snapshot through
``G_hat(p) = [[Y], [C]] K(p)^-1 [X  B]``.

All pencil data is real; complex arithmetic only enters at transfer-function
evaluation time.  Assembly fills disjoint blocks, so the (i, j) loops could
be distributed across workers without synchronization.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from . import numkit
from .models import SnapshotSet
from .numkit import SingularMatrixError

#: Relative singular-value threshold capping the truncation rank.
RANK_CAP_TOL = 1e-12


class RankRegularityWarning(UserWarning):
    """The pencil rank condition required for exact interpolation failed."""


class TruncationRuleWarning(UserWarning):
    """Alternative readings of the truncation rule select a different rank."""


@dataclass(frozen=True)
class Partition:
    """Disjoint split of snapshot indices into left (pi) and right (phi) sets.

    Both lists hold ``(index, value)`` pairs, where `index` refers to the
    position of the sample inside the snapshot set the partition is used
    with.  No left value may equal a right value, otherwise the divided
    differences are undefined.
    """

    left: tuple[tuple[int, float], ...]
    right: tuple[tuple[int, float], ...]

    def __post_init__(self):
        left = tuple((int(i), float(p)) for i, p in self.left)
        right = tuple((int(j), float(p)) for j, p in self.right)
        if not left or not right:
            raise ValueError("partition needs at least one left and one right sample")
        indices = [i for i, _ in left] + [j for j, _ in right]
        if len(set(indices)) != len(indices):
            raise ValueError("partition assigns a sample index twice")
        left_vals = {p for _, p in left}
        right_vals = {p for _, p in right}
        if left_vals & right_vals:
            raise ValueError(
                f"left and right values must be disjoint, both contain "
                f"{sorted(left_vals & right_vals)}"
            )
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def left_values(self) -> np.ndarray:
        return np.array([p for _, p in self.left])

    @property
    def right_values(self) -> np.ndarray:
        return np.array([p for _, p in self.right])

    @property
    def all_values(self) -> np.ndarray:
        return np.concatenate([self.left_values, self.right_values])


def alternating_partition(params) -> Partition:
    """Partition samples by interleaving them in ascending order.

    After sorting, the 1st, 3rd, ... samples go left and the 2nd, 4th, ...
    go right, so the left set gets ``ceil(n_p / 2)`` samples.  Indices refer
    to positions in the input sequence.
    """
    values = [float(p) for p in params]
    if len(values) < 2:
        raise ValueError("need >=2 distinct parameters")
    if len(set(values)) != len(values):
        raise ValueError("duplicate parameter values in partition input")
    order = np.argsort(values, kind="stable")
    left = tuple((int(i), values[i]) for i in order[0::2])
    right = tuple((int(j), values[j]) for j in order[1::2])
    return Partition(left=left, right=right)


def partition_from_values(params, left_values, right_values) -> Partition:
    """Build the explicitly requested partition of `params`.

    Every sample must be claimed exactly once by `left_values` or
    `right_values` (matched exactly, no tolerance).
    """
    values = [float(p) for p in params]
    index_of = {p: i for i, p in enumerate(values)}
    if len(index_of) != len(values):
        raise ValueError("duplicate parameter values in partition input")

    def lookup(vals, side):
        pairs = []
        for p in vals:
            p = float(p)
            if p not in index_of:
                raise ValueError(f"{side} value {p} is not a parameter sample")
            pairs.append((index_of[p], p))
        return tuple(pairs)

    left = lookup(left_values, "left")
    right = lookup(right_values, "right")
    if len(left) + len(right) != len(values):
        claimed = {p for _, p in left} | {p for _, p in right}
        missing = sorted(set(values) - claimed)
        raise ValueError(f"partition must cover every sample; missing {missing}")
    return Partition(left=left, right=right)


@dataclass(frozen=True)
class LoewnerPencil:
    """Assembled Loewner data for one snapshot set and partition.

    `sv_row`/`X` come from the SVD of ``[L  Ls]`` (X holds its left singular
    vectors), `sv_col`/`Y` from the SVD of ``[L; Ls]`` (Y holds its right
    singular vectors as columns).
    """

    L: np.ndarray
    Ls: np.ndarray
    V: np.ndarray
    W: np.ndarray
    sv_row: np.ndarray
    sv_col: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    partition: Partition
    n: int
    n_i: int
    n_o: int
    regularity_ok: bool


def _check_partition(snapshots: SnapshotSet, partition: Partition) -> None:
    n_p = len(snapshots)
    indices = sorted(
        [i for i, _ in partition.left] + [j for j, _ in partition.right]
    )
    if indices != list(range(n_p)):
        raise ValueError(
            f"partition indices {indices} do not cover the {n_p} snapshots exactly once"
        )
    for i, p in (*partition.left, *partition.right):
        actual = snapshots.snapshots[i].p
        if actual != p:
            raise ValueError(
                f"partition value {p} does not match snapshot {i} (p={actual})"
            )


def build_pencil(
    snapshots: SnapshotSet,
    partition: Partition,
    check_regularity: bool = True,
) -> LoewnerPencil:
    """Assemble the Loewner pencil, data matrices and both truncation SVDs.

    When `check_regularity` is set, the rank condition
    ``rank(p L - Ls) == rank([L Ls]) == rank([L; Ls])`` is tested at every
    sample value and a :class:`RankRegularityWarning` is emitted on failure;
    interpolation quality is not guaranteed in that case, but construction
    proceeds.
    """
    _check_partition(snapshots, partition)
    k1 = snapshots.n + snapshots.n_o
    k2 = snapshots.n + snapshots.n_i
    M, N = len(partition.left), len(partition.right)

    left = [(p, snapshots.snapshots[i].G) for i, p in partition.left]
    right = [(p, snapshots.snapshots[j].G) for j, p in partition.right]

    L = np.empty((M * k1, N * k2))
    Ls = np.empty((M * k1, N * k2))
    for i, (pi, Gi) in enumerate(left):
        for j, (fj, Gj) in enumerate(right):
            d = pi - fj
            L[i * k1:(i + 1) * k1, j * k2:(j + 1) * k2] = (Gi - Gj) / d
            Ls[i * k1:(i + 1) * k1, j * k2:(j + 1) * k2] = (pi * Gi - fj * Gj) / d

    V = np.vstack([G for _, G in left])
    W = np.hstack([G for _, G in right])

    row = numkit.svd(np.hstack([L, Ls]))
    col = numkit.svd(np.vstack([L, Ls]))

    regularity_ok = True
    if check_regularity:
        rank_row = numkit.numerical_rank(row.s)
        rank_col = numkit.numerical_rank(col.s)
        bad = []
        for p in partition.all_values:
            rank_p = numkit.numerical_rank(numkit.singular_values(p * L - Ls))
            if not rank_p == rank_row == rank_col:
                bad.append((p, rank_p))
        if bad:
            regularity_ok = False
            detail = ", ".join(f"rank(pL - Ls)={r} at p={p}" for p, r in bad)
            warnings.warn(
                f"pencil rank condition violated (rank[L Ls]={rank_row}, "
                f"rank[L; Ls]={rank_col}, {detail}); interpolation may be inexact",
                RankRegularityWarning,
                stacklevel=2,
            )

    return LoewnerPencil(
        L=L,
        Ls=Ls,
        V=V,
        W=W,
        sv_row=row.s,
        sv_col=col.s,
        X=row.U,
        Y=col.Vt.T,
        partition=partition,
        n=snapshots.n,
        n_i=snapshots.n_i,
        n_o=snapshots.n_o,
        regularity_ok=regularity_ok,
    )


def _tail_energy_rank(s: np.ndarray, eps: float) -> int:
    energy = s.astype(np.float64) ** 2
    # Tail sums accumulated from the smallest values up; the subtraction
    # total - cumsum(energy) would cancel catastrophically near the cliff.
    rev = np.cumsum(energy[::-1])[::-1]
    total = rev[0]
    if total == 0.0:
        raise ValueError("cannot choose a truncation rank for a zero pencil")
    tail = np.sqrt(np.append(rev[1:], 0.0) / total)
    return int(np.argmax(tail <= eps)) + 1


def _literal_rank(s: np.ndarray, eps: float) -> int:
    energy = s.astype(np.float64) ** 2
    ratios = np.sqrt(np.concatenate([[0.0], np.cumsum(energy)[:-1]]) / energy.sum())
    hits = np.nonzero(eps <= ratios)[0]
    return int(hits[0]) + 1 if hits.size else len(s)


def truncation_rank(pencil: LoewnerPencil, eps: float) -> int:
    """Choose the truncation rank from the row-pencil singular values.

    The rank is the smallest ``r`` whose relative discarded energy
    ``sqrt(sum_{i>r} s_i^2 / sum_i s_i^2)`` is at most `eps`, additionally
    capped at the numerical rank (threshold ``1e-12``).  The same rule is
    evaluated on the column pencil and on the literal cumulative-energy
    reading of the tolerance; a :class:`TruncationRuleWarning` is emitted
    whenever either disagrees.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"truncation tolerance must lie in (0, 1), got {eps}")
    r_tail = _tail_energy_rank(pencil.sv_row, eps)
    r = min(r_tail, max(numkit.numerical_rank(pencil.sv_row, RANK_CAP_TOL), 1))

    r_col = min(
        _tail_energy_rank(pencil.sv_col, eps),
        max(numkit.numerical_rank(pencil.sv_col, RANK_CAP_TOL), 1),
    )
    if r_col != r:
        warnings.warn(
            f"column pencil selects r={r_col}, row pencil r={r}; using the row pencil",
            TruncationRuleWarning,
            stacklevel=2,
        )
    r_literal = _literal_rank(pencil.sv_row, eps)
    if r_literal != r:
        warnings.warn(
            f"literal cumulative-energy reading of the tolerance selects "
            f"r={r_literal}; using the tail-energy rank r={r}",
            TruncationRuleWarning,
            stacklevel=2,
        )
    return r


@dataclass(frozen=True)
class ParametricRealization:
    """Truncated realization ``(E, A, B, C, X, Y)`` of order `r`.

    ``K(p) = p E - A`` is the compressed resolvent; `X` (``r x n``) and `Y`
    (``n x r``) carry the state-coupling factors that lift parameter
    interpolation to a full transfer function; `B` and `C` are the reduced
    input and output maps.  `n`, `n_i`, `n_o` record the snapshot block
    structure.
    """

    E: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    r: int
    n: int
    n_i: int
    n_o: int

    def K(self, p: float) -> np.ndarray:
        """Resolvent matrix ``K(p) = p E - A``."""
        return p * self.E - self.A

    @cached_property
    def XY(self) -> np.ndarray:
        """Cached coupling product ``X @ Y`` (r x r)."""
        xy = self.X @ self.Y
        xy.setflags(write=False)
        return xy


def realize(pencil: LoewnerPencil, r: int) -> ParametricRealization:
    """Extract the rank-`r` realization from a pencil.

    ``E = -Xr^T L Yr`` and ``A = -Xr^T Ls Yr``; ``Xr^T V`` splits column-wise
    into ``[X  B]`` at column `n` and ``W Yr`` row-wise into ``[Y; C]`` at
    row `n`.
    """
    avail = min(pencil.X.shape[1], pencil.Y.shape[1])
    if not 1 <= r <= avail:
        raise ValueError(f"truncation rank {r} outside [1, {avail}]")
    Xr = pencil.X[:, :r]
    Yr = pencil.Y[:, :r]
    E = -Xr.T @ pencil.L @ Yr
    A = -Xr.T @ pencil.Ls @ Yr
    XrV = Xr.T @ pencil.V
    WYr = pencil.W @ Yr
    n = pencil.n
    return ParametricRealization(
        E=E,
        A=A,
        B=XrV[:, n:],
        C=WYr[n:, :],
        X=XrV[:, :n],
        Y=WYr[:n, :],
        r=r,
        n=n,
        n_i=pencil.n_i,
        n_o=pencil.n_o,
    )


def eval_G_hat(real: ParametricRealization, p: float) -> np.ndarray:
    """Evaluate the interpolated snapshot matrix ``G_hat(p)``.

    Raises :class:`SingularMatrixError` (reporting `p`) when ``K(p)`` is
    singular.
    """
    try:
        sol = numkit.lu_solve(real.K(p), np.hstack([real.X, real.B]))
    except SingularMatrixError as exc:
        raise SingularMatrixError(f"K(p) is singular at p={p}") from exc
    return np.vstack([real.Y, real.C]) @ sol


_REALIZATION_MATRICES = ("E", "A", "B", "C", "X", "Y")


def save_realization(real: ParametricRealization, directory) -> None:
    """Serialize a realization to `directory`.

    Writes ``metadata.json`` plus one raw binary file per matrix
    (little-endian float64, row-major, no header).
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = {}
    for name in _REALIZATION_MATRICES:
        mat = getattr(real, name)
        files[name] = f"{name}.bin"
        (directory / files[name]).write_bytes(
            np.ascontiguousarray(mat, dtype="<f8").tobytes()
        )
    meta = {
        "r": real.r,
        "n": real.n,
        "n_i": real.n_i,
        "n_o": real.n_o,
        "files": files,
    }
    (directory / "metadata.json").write_text(json.dumps(meta, indent=2) + "\n")


def load_realization(directory) -> ParametricRealization:
    """Load a realization previously written by :func:`save_realization`."""
    directory = Path(directory)
    meta_path = directory / "metadata.json"
    if not meta_path.is_file():
        raise FileNotFoundError(f"no realization metadata at {meta_path}")
    meta = json.loads(meta_path.read_text())
    r, n, n_i, n_o = (int(meta[k]) for k in ("r", "n", "n_i", "n_o"))
    shapes = {
        "E": (r, r),
        "A": (r, r),
        "B": (r, n_i),
        "C": (n_o, r),
        "X": (r, n),
        "Y": (n, r),
    }
    mats = {}
    for name in _REALIZATION_MATRICES:
        raw = (directory / meta["files"][name]).read_bytes()
        expected = shapes[name][0] * shapes[name][1] * 8
        if len(raw) != expected:
            raise ValueError(
                f"{name} file holds {len(raw)} bytes, expected {expected} "
                f"for shape {shapes[name]}"
            )
        mats[name] = np.frombuffer(raw, dtype="<f8").reshape(shapes[name]).copy()
    return ParametricRealization(r=r, n=n, n_i=n_i, n_o=n_o, **mats)
