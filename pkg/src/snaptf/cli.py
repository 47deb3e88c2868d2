"""Command-line interface and file formats.

Subcommands: ``interpolate`` (snapshots -> serialized realization),
``eval`` (one transfer-function value), ``grid`` (deviation surface as CSV),
``ranks`` (rank-bound report as JSON), ``true-eval`` (reference model value)
and ``builtin-list``.

File formats owned here:

* Model manifest (JSON): ``{"n", "n_i", "n_o", "degree", "gamma": [...]}``
  where each gamma entry is ``{"file": "relative.bin"}`` (raw little-endian
  float64, row-major, no header) or ``{"csv": "..."}`` with inline
  comma-separated rows.
* Snapshot manifest (JSON): ``{"n", "n_i", "n_o", "snapshots":
  [{"p": value, "file"|"csv": ...}, ...]}`` with matrices stored the same
  way.  Snapshot sets carry no coefficient information, so they support
  interpolation but not rank bounds.

Realization directories and the error-grid CSV are documented in
:mod:`snaptf.loewner` and :mod:`snaptf.evaluate`.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import evaluate, loewner, models, rankbounds
from .evaluate import EvalConfig, EvaluationError
from .numkit import SingularMatrixError

THREADS_ENV_VAR = "SNAPTF_THREADS"


@dataclass(frozen=True)
class GridSpec:
    """One axis of an evaluation grid."""

    min: float
    max: float
    count: int
    spacing: str = "log"

    def values(self) -> np.ndarray:
        if self.count < 1:
            raise ValueError("grid needs at least one point")
        if self.spacing == "log":
            if self.min <= 0 or self.max <= 0:
                raise ValueError("log-spaced grids need positive bounds")
            return np.logspace(np.log10(self.min), np.log10(self.max), self.count)
        if self.spacing == "linear":
            return np.linspace(self.min, self.max, self.count)
        raise ValueError(f"unknown spacing {self.spacing!r}")


#: Default frequency grid: 400 log-spaced points in [1e-2, 1e4] rad/s.
DEFAULT_OMEGA_GRID = GridSpec(min=1e-2, max=1e4, count=400, spacing="log")


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration of one CLI run, recorded in manifests."""

    eps: float = 1e-7
    eps_cond: float = 1e6
    partition_mode: str = "alternating"
    omega_grid: GridSpec = DEFAULT_OMEGA_GRID
    param_grid: GridSpec | None = None
    seed: int = 0


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValueError(f"could not parse {what} {text!r} as comma-separated floats")


def _parse_range(text: str, what: str) -> tuple[float, float, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"{what} must be 'min,max,count', got {text!r}")
    return float(parts[0]), float(parts[1]), int(parts[2])


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ValueError(
            f"could not parse {text!r} as a complex number (examples: 1j, 0.5+2j, 3)"
        )


def _read_matrix(entry: dict, shape: tuple[int, int], base: Path, what: str) -> np.ndarray:
    if "file" in entry:
        raw = (base / entry["file"]).read_bytes()
        expected = shape[0] * shape[1] * 8
        if len(raw) != expected:
            raise ValueError(
                f"{what}: file {entry['file']} holds {len(raw)} bytes, "
                f"expected {expected} for shape {shape}"
            )
        return np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
    if "csv" in entry:
        rows = [
            [float(tok) for tok in line.split(",")]
            for line in entry["csv"].strip().splitlines()
        ]
        mat = np.array(rows, dtype=np.float64)
        if mat.shape != shape:
            raise ValueError(f"{what}: inline CSV has shape {mat.shape}, expected {shape}")
        return mat
    raise ValueError(f"{what}: entry needs a 'file' or 'csv' key")


def load_model_manifest(path) -> models.ParametricModel:
    """Load a polynomial-coefficient model from a JSON manifest."""
    path = Path(path)
    manifest = json.loads(path.read_text())
    if "gamma" not in manifest:
        raise ValueError(
            f"{path} is not a model manifest (no 'gamma' key); snapshot "
            "manifests cannot be used where coefficients are required"
        )
    n, n_i, n_o = (int(manifest[k]) for k in ("n", "n_i", "n_o"))
    degree = int(manifest.get("degree", len(manifest["gamma"]) - 1))
    if degree != len(manifest["gamma"]) - 1:
        raise ValueError(
            f"{path}: degree {degree} inconsistent with "
            f"{len(manifest['gamma'])} coefficient matrices"
        )
    shape = (n + n_o, n + n_i)
    gamma = tuple(
        _read_matrix(entry, shape, path.parent, f"gamma[{k}]")
        for k, entry in enumerate(manifest["gamma"])
    )
    return models.ParametricModel(n=n, n_i=n_i, n_o=n_o, gamma=gamma, name=path.stem)


def load_snapshot_manifest(path) -> models.SnapshotSet:
    """Load a raw snapshot set from a JSON manifest."""
    path = Path(path)
    manifest = json.loads(path.read_text())
    if "snapshots" not in manifest:
        raise ValueError(f"{path} is not a snapshot manifest (no 'snapshots' key)")
    n, n_i, n_o = (int(manifest[k]) for k in ("n", "n_i", "n_o"))
    shape = (n + n_o, n + n_i)
    snaps = tuple(
        models.Snapshot(
            p=float(entry["p"]),
            G=_read_matrix(entry, shape, path.parent, f"snapshot p={entry.get('p')}"),
        )
        for entry in manifest["snapshots"]
    )
    return models.SnapshotSet(snapshots=snaps, n=n, n_i=n_i, n_o=n_o)


def _load_reference_model(args) -> models.ParametricModel:
    if getattr(args, "builtin", None):
        return models.builtin(args.builtin)
    if getattr(args, "model", None):
        return load_model_manifest(args.model)
    raise ValueError("need --builtin or --model")


def _threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV_VAR)
    return max(1, int(env)) if env else 1


def _print_value(value: np.ndarray) -> None:
    for i in range(value.shape[0]):
        for j in range(value.shape[1]):
            v = value[i, j]
            print(f"H[{i},{j}] = {_fmt(v.real)} {v.imag:+.17g}j")


def cmd_builtin_list(args) -> int:
    for name in models.BUILTIN_NAMES:
        m = models.builtin(name)
        print(f"{name}  (n={m.n}, n_i={m.n_i}, n_o={m.n_o}, degree={m.degree})")
    return 0


def cmd_true_eval(args) -> int:
    model = _load_reference_model(args)
    value = models.true_tf(model, _parse_complex(args.s), args.p)
    _print_value(value)
    return 0


def _interpolation_inputs(args):
    if args.snapshots:
        if args.params or args.uniform:
            raise ValueError("--params/--uniform conflict with --snapshots "
                             "(parameter values come from the snapshot manifest)")
        snaps = load_snapshot_manifest(args.snapshots)
        return snaps, f"snapshots:{args.snapshots}"
    model = _load_reference_model(args)
    if args.uniform:
        lo, hi, count = _parse_range(args.uniform, "--uniform")
        params = list(np.linspace(lo, hi, count))
    elif args.params:
        params = _parse_floats(args.params, "--params")
    else:
        raise ValueError("need --params or --uniform to sample the model")
    if len(set(params)) < 2:
        raise ValueError("need >=2 distinct parameters")
    source = f"builtin:{args.builtin}" if args.builtin else f"model:{args.model}"
    return models.SnapshotSet.from_model(model, params), source


def _make_partition(args, params) -> loewner.Partition:
    mode = args.partition
    if mode == "alternating":
        if args.left or args.right:
            raise ValueError("--left/--right require --partition explicit")
        return loewner.alternating_partition(params)
    if not (args.left and args.right):
        raise ValueError("--partition explicit needs --left and --right")
    return loewner.partition_from_values(
        params,
        _parse_floats(args.left, "--left"),
        _parse_floats(args.right, "--right"),
    )


def cmd_interpolate(args) -> int:
    snaps, source = _interpolation_inputs(args)
    partition = _make_partition(args, snaps.params)
    if not 0.0 < args.eps < 1.0:
        raise ValueError(f"--eps must lie in (0, 1), got {args.eps}")

    captured: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pencil = loewner.build_pencil(snaps, partition)
        r = loewner.truncation_rank(pencil, args.eps)
        captured = [str(w.message) for w in caught]
    real = loewner.realize(pencil, r)

    out = Path(args.out)
    loewner.save_realization(real, out)
    config = RunConfig(eps=args.eps, partition_mode=args.partition, seed=args.seed)
    manifest = {
        "source": source,
        "params": [s.p for s in snaps.snapshots],
        "partition": {
            "left": [[i, p] for i, p in partition.left],
            "right": [[j, p] for j, p in partition.right],
        },
        "pencil_shape": list(pencil.L.shape),
        "r": r,
        "sv_row": pencil.sv_row.tolist(),
        "sv_col": pencil.sv_col.tolist(),
        "regularity_ok": pencil.regularity_ok,
        "warnings": captured,
        "config": {
            "eps": config.eps,
            "partition_mode": config.partition_mode,
            "seed": config.seed,
        },
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")

    print(
        f"pencil {pencil.L.shape[0]}x{pencil.L.shape[1]}, "
        f"truncation rank r={r}, realization written to {out}"
    )
    for message in captured:
        print(f"warning: {message}", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    real = loewner.load_realization(args.realization)
    cfg = EvalConfig(eps_cond=args.eps_cond, zero_s_tol=args.zero_s_tol)
    res = evaluate.eval_point(real, _parse_complex(args.s), args.p, cfg)
    _print_value(res.value)
    print(f"formula = {res.formula}")
    print(f"cond_estimate = {_fmt(res.cond_estimate)}")
    return 0


def cmd_grid(args) -> int:
    real = loewner.load_realization(args.realization)
    model = _load_reference_model(args)
    if args.params:
        params = np.array(_parse_floats(args.params, "--params"))
    elif args.param_range:
        lo, hi, count = _parse_range(args.param_range, "--param-range")
        params = np.linspace(lo, hi, count)
    else:
        raise ValueError("need --params or --param-range")
    lo, hi, count = _parse_range(args.omega_range, "--omega-range")
    omegas = GridSpec(min=lo, max=hi, count=count, spacing=args.omega_spacing).values()

    cfg = EvalConfig(eps_cond=args.eps_cond, zero_s_tol=args.zero_s_tol)
    grid = evaluate.error_grid(real, model, omegas, params, cfg, threads=_threads(args))
    evaluate.write_error_grid_csv(grid, args.out)

    finite = grid.delta[np.isfinite(grid.delta)]
    total = grid.delta.size
    shares = " ".join(
        f"{name} {100.0 * np.count_nonzero(grid.formula == name) / total:.1f}%"
        for name in (
            evaluate.FORMULA_COMPACT,
            evaluate.FORMULA_PRECISE,
            evaluate.FORMULA_SCHUR_ZERO,
            evaluate.FORMULA_ERROR,
        )
    )
    max_d = _fmt(float(finite.max())) if finite.size else "nan"
    med_d = _fmt(float(np.median(finite))) if finite.size else "nan"
    print(f"max delta = {max_d}, median delta = {med_d}, formulas: {shares}")
    print(f"grid ({grid.omegas.size}x{grid.params.size} cells) written to {args.out}")
    if grid.causes:
        print(f"{len(grid.causes)} cell(s) failed:", file=sys.stderr)
        for (i, j), cause in sorted(grid.causes.items()):
            print(
                f"  omega={_fmt(grid.omegas[i])} p={_fmt(grid.params[j])}: {cause}",
                file=sys.stderr,
            )
    return 0


def cmd_ranks(args) -> int:
    model = _load_reference_model(args)
    if args.left and args.right:
        left = _parse_floats(args.left, "--left")
        right = _parse_floats(args.right, "--right")
        partition = loewner.partition_from_values(left + right, left, right)
    elif args.params:
        partition = loewner.alternating_partition(_parse_floats(args.params, "--params"))
    else:
        raise ValueError("need --left/--right or --params")

    if model.degree == 1:
        report = rankbounds.affine_bounds(model, partition)
    else:
        report = rankbounds.poly_bounds(model, partition)
    text = json.dumps(report.to_json_dict(), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    if not all(report.holds):
        print("error: a rank bound is violated", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snaptf",
        description="Parametric transfer-function realizations from state-space snapshots",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_reference(p, required=True):
        group = p.add_mutually_exclusive_group(required=required)
        group.add_argument("--builtin", choices=models.BUILTIN_NAMES,
                           help="built-in example system")
        group.add_argument("--model", help="path to a model manifest (JSON)")
        return group

    p = sub.add_parser("builtin-list", help="list built-in example systems")
    p.set_defaults(func=cmd_builtin_list)

    p = sub.add_parser("true-eval", help="evaluate the reference model transfer function")
    add_reference(p)
    p.add_argument("--s", required=True, help="complex frequency, e.g. 1j or 0.5+2j")
    p.add_argument("--p", required=True, type=float, help="parameter value")
    p.set_defaults(func=cmd_true_eval)

    p = sub.add_parser("interpolate", help="build and serialize a parametric realization")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--builtin", choices=models.BUILTIN_NAMES)
    group.add_argument("--model", help="model manifest (JSON)")
    group.add_argument("--snapshots", help="snapshot manifest (JSON)")
    p.add_argument("--params", help="comma-separated parameter samples")
    p.add_argument("--uniform", help="uniform samples as 'min,max,count'")
    p.add_argument("--eps", type=float, default=1e-7, help="truncation tolerance")
    p.add_argument("--partition", choices=("alternating", "explicit"),
                   default="alternating")
    p.add_argument("--left", help="explicit left (pi) sample values")
    p.add_argument("--right", help="explicit right (phi) sample values")
    p.add_argument("--seed", type=int, default=0, help="recorded in the manifest")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("eval", help="evaluate a serialized realization at one (s, p)")
    p.add_argument("realization", help="realization directory")
    p.add_argument("--s", required=True, help="complex frequency, e.g. 1j")
    p.add_argument("--p", required=True, type=float)
    p.add_argument("--eps-cond", type=float, default=1e6,
                   help="condition-estimate gate for the compact formula")
    p.add_argument("--zero-s-tol", type=float, default=0.0,
                   help="|s| at or below this takes the s=0 path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="deviation surface against a reference model (CSV)")
    p.add_argument("realization", help="realization directory")
    add_reference(p)
    p.add_argument("--params", help="comma-separated parameter values")
    p.add_argument("--param-range", help="'min,max,count' (linear spacing)")
    p.add_argument("--omega-range", default="1e-2,1e4,400", help="'min,max,count'")
    p.add_argument("--omega-spacing", choices=("log", "linear"), default="log")
    p.add_argument("--eps-cond", type=float, default=1e6)
    p.add_argument("--zero-s-tol", type=float, default=0.0)
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default: ${THREADS_ENV_VAR} or 1)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("ranks", help="rank-bound report for a coefficient model (JSON)")
    add_reference(p)
    p.add_argument("--left", help="left (pi) sample values")
    p.add_argument("--right", help="right (phi) sample values")
    p.add_argument("--params", help="samples to split alternately instead")
    p.add_argument("--out", help="also write the report to this path")
    p.set_defaults(func=cmd_ranks)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, EvaluationError, SingularMatrixError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
