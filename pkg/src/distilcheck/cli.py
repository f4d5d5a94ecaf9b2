"""Command-line interface: construction, optimization, certification, verification.

Reports are JSON documents with a ``schema`` key; identical (command, config,
seed) reproduce byte-identical ``results`` maps at any ``--threads`` value:
BLAS threading is pinned to 1 and restart-level parallelism reduces by an
order-independent max over per-restart RNG streams.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

SCHEMA_REPORT = "distilcheck/report-v1"
_EXIT_OK = 0
_EXIT_NUMERIC = 1
_EXIT_USAGE = 2


@dataclass
class RunConfig:
    seed: int = 0
    restarts: int = 200
    threads: int = 1
    tolerances: dict = field(default_factory=dict)
    memory_cap_bytes: int = 2 * 1024 ** 3
    output_format: str = "json"

    def echo(self) -> dict:
        return {
            "seed": self.seed,
            "restarts": self.restarts,
            "threads": self.threads,
            "tolerances": self.tolerances,
            "memory_cap_bytes": self.memory_cap_bytes,
            "output_format": self.output_format,
        }


def _report(command: str, config: RunConfig, results: dict, started: float) -> dict:
    from . import __version__

    return {
        "schema": SCHEMA_REPORT,
        "command": command,
        "config": config.echo(),
        "results": results,
        "wall_clock_s": round(time.time() - started, 3),
        "version": __version__,
    }


def _emit(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distilcheck",
        description="Numerics for two-copy distillability of the boundary Werner state",
    )
    parser.add_argument("--threads", type=_positive_int, default=None,
                        help="restart-pool worker count (default: all cores; "
                             "results are identical at any count, 1 = serial)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-qn", help="construct Q_n and emit it or its spectral data")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--format", choices=["json", "npz", "spectrum"], default="spectrum")
    p.add_argument("--dense", action="store_true", help="allow the 4096^2 dense n=3 matrix")
    p.add_argument("--output", default=None)

    p = sub.add_parser("optimize", help="seesaw maximization over rank-k states")
    p.add_argument("--op", choices=["q1", "q2", "q3", "pplus", "ipplus"], default="q2")
    p.add_argument("--rank", type=_positive_int, default=2)
    p.add_argument("--restarts", type=_positive_int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", dest="output", nargs="?", default=None,
                   help="emit JSON (default), optionally to a file")

    p = sub.add_parser("classify", help="normal-projection classification of a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--output", default=None)

    p = sub.add_parser("certify", help="half-property certificates for a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--method", choices=["cdf", "rank", "normal", "all"], default="all")
    p.add_argument("--output", default=None)

    p = sub.add_parser("appendix", help="constrained eigenvalue maximum (3d-4)/d^2")
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--starts", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)

    p = sub.add_parser("bounds", help="product maxima, soft targets, final bound")
    p.add_argument("--restarts", type=_positive_int, default=400)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", choices=["json"], default="json")
    p.add_argument("--output", default=None)

    p = sub.add_parser("measures", help="twirled family: negativity grid and witness")
    p.add_argument("--scan-grid", type=_positive_int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", dest="output", nargs="?", default=None,
                   help="emit JSON (default), optionally to a file")

    p = sub.add_parser("verify", help="run the full property suite")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)

    p = sub.add_parser("report", help="aggregate JSON report across all modules")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true")
    p.add_argument("--output", default=None)

    return parser


# ---------------------------------------------------------------------------
# subcommand handlers (library imports stay inside so --threads binds first)
# ---------------------------------------------------------------------------

def _cmd_build_qn(args, config: RunConfig) -> dict:
    import numpy as np

    from .projectors import build_qn_direct, build_qn_recursive, qn_gamma_spectrum
    from .tensor import matrix_to_json

    if args.format == "spectrum":
        comps = qn_gamma_spectrum(args.n, args.d, include_projectors=False)
        return {
            "n": args.n,
            "d": args.d,
            "gamma_spectrum": [
                {"eigenvalue": c.eigenvalue, "multiplicity": c.multiplicity, "weight": c.weight}
                for c in comps
            ],
        }
    op = build_qn_direct(args.n, args.d, allow_dense=args.dense)
    dense = op.dense(order="cut")
    rec = build_qn_recursive(args.n, args.d, allow_dense=args.dense).dense(order="cut")
    residual = float(abs(dense - rec).max())
    if args.format == "npz":
        out = args.output or f"qn_{args.n}.npz"
        np.savez_compressed(out, qn_cut_order=dense)
        args.output = None  # the report goes to stdout; the npz owns the path
        return {"n": args.n, "d": args.d, "written": out,
                "recursive_vs_direct_residual": residual}
    return {
        "n": args.n,
        "d": args.d,
        "matrix": json.loads(matrix_to_json(dense, dims=[args.d] * (2 * args.n))),
        "recursive_vs_direct_residual": residual,
    }


def _op_by_name(name: str):
    import numpy as np

    from .projectors import build_qn_direct, two_copy_projector
    from .tensor import pair_to_cut_operator, standard_ops

    if name == "q1":
        return standard_ops(4).proj_max_ent
    if name == "q2":
        return two_copy_projector(4, order="cut")
    if name == "q3":
        return build_qn_direct(3)
    if name == "pplus":
        return standard_ops(4).proj_max_ent
    if name == "ipplus":
        ops = standard_ops(4)
        return pair_to_cut_operator(np.kron(ops.identity, ops.proj_max_ent), 4, 2)
    raise ValueError(name)


def _cmd_optimize(args, config: RunConfig) -> dict:
    from .optimize import SeesawConfig, max_overlap_rank_k

    op = _op_by_name(args.op)
    cfg = SeesawConfig(restarts=args.restarts, seed=args.seed, workers=config.threads)
    report = max_overlap_rank_k(op, k=args.rank, config=cfg)
    out = report.summary()
    out["op"] = args.op
    out["rank"] = args.rank
    return out


def _cmd_classify(args, config: RunConfig) -> dict:
    from .matrix_iso import c_matrix_pipeline, is_normal_projection
    from .tensor import load_state

    state = load_state(args.state)
    vec = state.amplitudes
    rep = is_normal_projection(vec)
    cm = c_matrix_pipeline(vec)
    return {
        "classification": rep.classification,
        "commutator_residual": rep.commutator_residual,
        "overlap": rep.overlap,
        "certified": rep.certified,
        "schmidt_rank": rep.schmidt_rank,
        "c_matrix_reconstruction_residual": cm.reconstruction_residual,
    }


def _cmd_certify(args, config: RunConfig) -> dict:
    from .certificates import certify_by_cdf, certify_by_schmidt_ranks
    from .matrix_iso import is_normal_projection
    from .tensor import load_state

    vec = load_state(args.state).amplitudes
    results = {}
    if args.method in ("cdf", "all"):
        results["cdf"] = certify_by_cdf(vec).to_dict()
    if args.method in ("rank", "all"):
        results["rank"] = certify_by_schmidt_ranks(vec).to_dict()
    if args.method in ("normal", "all"):
        rep = is_normal_projection(vec)
        results["normal"] = {
            "method": "normal",
            "certified": rep.certified,
            "classification": rep.classification,
            "overlap": rep.overlap,
            "commutator_residual": rep.commutator_residual,
        }
    results["certified_by_any"] = any(v.get("certified") for v in results.values()
                                      if isinstance(v, dict))
    return results


def _cmd_appendix(args, config: RunConfig) -> dict:
    from .matrix_iso import appendix_max

    res = appendix_max(args.d, n_starts=args.starts, seed=args.seed)
    return {
        "d": res.d,
        "closed_form": res.closed_form,
        "numeric_ascent": res.numeric,
        "numeric_reduction": res.reduction_numeric,
        "max_deviation": res.agree_within,
    }


def _cmd_bounds(args, config: RunConfig) -> dict:
    from .bounds import final_bound, lambda0, product_max, strict_three_quarters_report
    from .optimize import SeesawConfig

    table = []
    for n in (1, 2, 3):
        cfg = SeesawConfig(restarts=24, seed=args.seed + n, workers=config.threads)
        row = product_max(n, cfg)
        row.pop("_report", None)
        table.append(row)
    strict = strict_three_quarters_report(restarts=args.restarts, seed=args.seed)
    fb = final_bound()
    return {
        "product_maxima": table,
        "lambda0": {str(n): lambda0(n) for n in (1, 2, 3)},
        "strict_below_three_quarters": strict,
        "final_bound": fb.to_dict(),
        "final_bound_note": (
            "faithful evaluation of the published estimate pipeline; the "
            "located crossing gives a slightly stronger bound than the "
            "printed 0.74971 (see README)"
        ),
    }


def _cmd_measures(args, config: RunConfig) -> dict:
    import numpy as np

    from .measures import (
        IsotropicTwoPairState,
        negativity_sigma_closed,
        trace_norm_partial_transpose,
        witness_midline_scan,
    )

    n = args.scan_grid
    worst = 0.0
    grid = []
    for p in np.linspace(0.0, 1.0, n):
        for s in np.linspace(0.0, 1.0 - p, n):
            st = IsotropicTwoPairState(float(p), float(s))
            closed = negativity_sigma_closed(st)
            dense = trace_norm_partial_transpose(st.density())
            worst = max(worst, abs(closed - dense))
            grid.append({"p": round(float(p), 12), "s": round(float(s), 12),
                         "negativity": closed})
    scan = witness_midline_scan([0.70, 0.74, 0.76, 0.80])
    return {
        "grid_points": len(grid),
        "negativity_closed_vs_dense_max_dev": worst,
        "witness_midline_scan": scan,
        "witness_sign_flip_between": [0.74, 0.76],
        "negativity_grid": grid,
    }


def _cmd_verify(args, config: RunConfig) -> dict:
    from .verify import run_suite

    results = run_suite(quick=args.quick, seed=args.seed, threads=config.threads)
    return results


def _cmd_report(args, config: RunConfig) -> dict:
    out = {}
    out["appendix"] = _cmd_appendix(
        argparse.Namespace(d=4, starts=2000 if args.quick else 10_000, seed=args.seed),
        config,
    )
    out["bounds"] = _cmd_bounds(
        argparse.Namespace(restarts=60 if args.quick else 400, seed=args.seed), config
    )
    out["measures"] = _cmd_measures(
        argparse.Namespace(scan_grid=6 if args.quick else 20, seed=args.seed), config
    )
    out["optimize_q2_rank2"] = _cmd_optimize(
        argparse.Namespace(op="q2", rank=2, restarts=40 if args.quick else 200,
                           seed=args.seed),
        config,
    )
    return out


_HANDLERS = {
    "build-qn": _cmd_build_qn,
    "optimize": _cmd_optimize,
    "classify": _cmd_classify,
    "certify": _cmd_certify,
    "appendix": _cmd_appendix,
    "bounds": _cmd_bounds,
    "measures": _cmd_measures,
    "verify": _cmd_verify,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # BLAS threading is pinned to 1 before numpy loads: restart-level
    # parallelism comes from the worker pool, and the numerics stay
    # bit-identical at every --threads value
    for var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, "1")

    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = os.cpu_count() or 1
    config = RunConfig(
        seed=getattr(args, "seed", 0),
        restarts=getattr(args, "restarts", 200),
        threads=args.threads,
    )
    started = time.time()
    try:
        results = _HANDLERS[args.command](args, config)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC

    doc = _report(args.command, config, results, started)
    _emit(doc, getattr(args, "output", None))
    if args.command == "verify" and not results.get("all_passed", False):
        return _EXIT_NUMERIC
    return _EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
