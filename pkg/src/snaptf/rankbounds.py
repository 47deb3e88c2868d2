"""A-priori rank bounds for Loewner pencils of polynomial-coefficient models.

For ``G(p) = sum_k p**k gamma_k`` the pencil blocks decompose into sums of
coefficient matrices weighted by the divided differences
``(pi^k - phi^k) / (pi - phi)``.  Collecting those weights into the
sample-point matrices ``Xi_k`` yields

    rank(L)  <= sum_k rank(gamma_k) rank(Xi_k),
    rank(Ls) <= sum_k rank(gamma_k) rank(Xi_{k+1}),

and in the affine case the first bound sharpens to the equality
``rank(L) = rank(gamma_1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numkit
from .loewner import Partition, build_pencil
from .models import ParametricModel, SnapshotSet


@dataclass(frozen=True)
class RankReport:
    """Computed pencil ranks next to their a-priori bounds.

    `rank_gamma[k]` is the rank of the k-th coefficient matrix and
    `rank_xi[k]` the rank of ``Xi_k`` for ``k = 0 .. degree + 1``.  `holds`
    pairs the verdicts for the two bounds.
    """

    rank_L: int
    rank_Ls: int
    rank_gamma: tuple[int, ...]
    rank_xi: tuple[int, ...]
    bound_L: int
    bound_Ls: int
    holds: tuple[bool, bool]

    def to_json_dict(self) -> dict:
        return {
            "rank_L": self.rank_L,
            "rank_Ls": self.rank_Ls,
            "bounds": {"L": self.bound_L, "Ls": self.bound_Ls},
            "per_gamma": list(self.rank_gamma),
            "per_xi": list(self.rank_xi),
            "holds": list(self.holds),
        }


def xi_matrix(k: int, partition: Partition, block_rows: int, block_cols: int) -> np.ndarray:
    """Sample-point matrix ``Xi_k`` with constant blocks of the given shape.

    Block (i, j) is ``(pi_i^k - phi_j^k) / (pi_i - phi_j)`` times an all-one
    block, computed through the expanded sum ``sum_m pi_i^m phi_j^(k-1-m)``
    which stays stable when a left point approaches a right one.  ``Xi_0`` is
    zero and ``Xi_1`` all ones.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    pi = partition.left_values
    phi = partition.right_values
    scalar = np.zeros((pi.size, phi.size))
    for m in range(k):
        scalar += np.outer(pi**m, phi ** (k - 1 - m))
    return np.kron(scalar, np.ones((block_rows, block_cols)))


def _pencil_ranks(model: ParametricModel, partition: Partition) -> tuple[int, int]:
    # Snapshots ordered left first, right second, with indices to match.
    snaps = SnapshotSet.from_model(model, partition.all_values)
    local = Partition(
        left=tuple((i, p) for i, (_, p) in enumerate(partition.left)),
        right=tuple(
            (len(partition.left) + j, p) for j, (_, p) in enumerate(partition.right)
        ),
    )
    pencil = build_pencil(snaps, local, check_regularity=False)
    rank_L = numkit.numerical_rank(numkit.singular_values(pencil.L))
    rank_Ls = numkit.numerical_rank(numkit.singular_values(pencil.Ls))
    return rank_L, rank_Ls


def _gamma_xi_ranks(model: ParametricModel, partition: Partition):
    k1 = model.n + model.n_o
    k2 = model.n + model.n_i
    rank_gamma = tuple(
        numkit.numerical_rank(numkit.singular_values(g)) for g in model.gamma
    )
    rank_xi = tuple(
        numkit.numerical_rank(numkit.singular_values(xi_matrix(k, partition, k1, k2)))
        for k in range(model.degree + 2)
    )
    return rank_gamma, rank_xi


def affine_bounds(model: ParametricModel, partition: Partition) -> RankReport:
    """Rank report for an affine model (degree exactly 1).

    Checks the sharp equality ``rank(L) == rank(gamma_1)`` in addition to the
    bound pair; a violation indicates numerically marginal input data.
    """
    if model.degree != 1:
        raise ValueError(
            f"model has degree {model.degree}; affine bounds need degree 1 "
            "(use poly_bounds instead)"
        )
    rank_gamma, rank_xi = _gamma_xi_ranks(model, partition)
    rank_L, rank_Ls = _pencil_ranks(model, partition)
    bound_L = rank_gamma[1]
    bound_Ls = rank_gamma[0] + rank_gamma[1] * rank_xi[2]
    if rank_L != rank_gamma[1]:
        raise ArithmeticError(
            f"affine rank equality violated: rank(L)={rank_L} but "
            f"rank(gamma_1)={rank_gamma[1]}; rank thresholding is likely "
            "marginal for this data"
        )
    return RankReport(
        rank_L=rank_L,
        rank_Ls=rank_Ls,
        rank_gamma=rank_gamma,
        rank_xi=rank_xi,
        bound_L=bound_L,
        bound_Ls=bound_Ls,
        holds=(rank_L <= bound_L, rank_Ls <= bound_Ls),
    )


def poly_bounds(model: ParametricModel, partition: Partition) -> RankReport:
    """Rank report for a polynomial model of any degree."""
    rank_gamma, rank_xi = _gamma_xi_ranks(model, partition)
    rank_L, rank_Ls = _pencil_ranks(model, partition)
    bound_L = sum(rg * rx for rg, rx in zip(rank_gamma, rank_xi[:-1]))
    bound_Ls = sum(rg * rx for rg, rx in zip(rank_gamma, rank_xi[1:]))
    return RankReport(
        rank_L=rank_L,
        rank_Ls=rank_Ls,
        rank_gamma=rank_gamma,
        rank_xi=rank_xi,
        bound_L=bound_L,
        bound_Ls=bound_Ls,
        holds=(rank_L <= bound_L, rank_Ls <= bound_Ls),
    )
