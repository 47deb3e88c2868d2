"""Global parametric transfer-function realizations from state-space snapshots.

The pipeline: collect snapshot block matrices ``G(p_i) = [[A, B], [C, D]]``
of a parametric LTI system, interpolate them in the parameter with a Loewner
pencil (:mod:`snaptf.loewner`), and evaluate the resulting bivariate
transfer function ``H_hat(s, p)`` with numerically safeguarded formulas
(:mod:`snaptf.evaluate`).  :mod:`snaptf.rankbounds` verifies a-priori rank
bounds on the pencil, and :mod:`snaptf.cli` wires everything into a
command-line tool.
"""

from .evaluate import (
    ErrorGrid,
    EvalConfig,
    EvalResult,
    EvaluationError,
    error_grid,
    eval_compact,
    eval_point,
    eval_precise,
    eval_schur_zero,
    oblique_projector,
    write_error_grid_csv,
)
from .loewner import (
    LoewnerPencil,
    ParametricRealization,
    Partition,
    RankRegularityWarning,
    TruncationRuleWarning,
    alternating_partition,
    build_pencil,
    eval_G_hat,
    load_realization,
    partition_from_values,
    realize,
    save_realization,
    truncation_rank,
)
from .models import (
    BUILTIN_NAMES,
    ParametricModel,
    Snapshot,
    SnapshotSet,
    builtin,
    eval_blocks,
    snapshot,
    true_tf,
)
from .numkit import SingularMatrixError, SvdResult
from .rankbounds import RankReport, affine_bounds, poly_bounds, xi_matrix

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_NAMES",
    "ErrorGrid",
    "EvalConfig",
    "EvalResult",
    "EvaluationError",
    "LoewnerPencil",
    "ParametricModel",
    "ParametricRealization",
    "Partition",
    "RankRegularityWarning",
    "RankReport",
    "SingularMatrixError",
    "Snapshot",
    "SnapshotSet",
    "SvdResult",
    "TruncationRuleWarning",
    "affine_bounds",
    "alternating_partition",
    "build_pencil",
    "builtin",
    "error_grid",
    "eval_G_hat",
    "eval_blocks",
    "eval_compact",
    "eval_point",
    "eval_precise",
    "eval_schur_zero",
    "load_realization",
    "oblique_projector",
    "partition_from_values",
    "poly_bounds",
    "realize",
    "save_realization",
    "snapshot",
    "true_tf",
    "truncation_rank",
    "write_error_grid_csv",
    "xi_matrix",
]
