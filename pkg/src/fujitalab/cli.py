"""Command-line front end.

Each subcommand forces the matching experiment kind, so one config file can
be driven through different studies without editing its [experiment]
section.  Artifacts and the records.jsonl ledger land in --out.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import load_config, validate_config
from .harness import EXIT_ERROR, ExperimentRecord, run_experiment

_KIND_BY_COMMAND = {
    "run": "single",
    "sweep-p": "sweep_p",
    "bisect-amplitude": "bisect",
    "compare-bc": "compare_bc",
    "truncation-study": "truncation",
    "verify-supersolution": "verify_supersolution",
    "thresholds": "thresholds",
}

_CSV_NOTES = {
    "run": "CSV: <id>_series.csv with columns t,sup_norm,dt,boundary_value",
    "sweep-p": "CSV: <id>_sweep.csv with columns p,amplitude,predicted,outcome,t_blowup,final_sup",
    "bisect-amplitude": (
        "CSV: <id>_bisection.csv with columns "
        "iteration,amplitude_lo,amplitude_hi,amplitude_mid,outcome,t_blowup"
    ),
    "compare-bc": (
        "CSV: <id>_ordering.csv with columns t,sup_dirichlet,sup_robin,sup_neumann,max_violation"
    ),
    "truncation-study": (
        "CSV: <id>_truncation.csv with one sup_R<radius> column per family member "
        "and diff_R<a>_R<b> columns for consecutive pairs"
    ),
    "verify-supersolution": (
        "CSV: <id>_certificates.csv with columns kind,passed,min_residual,n_space,n_time,tolerance"
    ),
    "thresholds": "CSV: <id>_thresholds.csv with columns name,value",
}

_HELP = {
    "run": "march one initial profile and classify the outcome",
    "sweep-p": "repeat a run across a list of exponents p",
    "bisect-amplitude": "bisect the initial amplitude between global and blow-up outcomes",
    "compare-bc": "run dirichlet/robin/neumann side by side and check the comparison ordering",
    "truncation-study": "grow the outer radius and check domain monotonicity and convergence",
    "verify-supersolution": "sweep the closed-form barrier residuals and emit certificates",
    "thresholds": "print the exponent thresholds and hypothesis checklist for a configuration",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fujitalab",
        description=(
            "Desk-scale laboratory for blow-up versus global existence of "
            "semilinear heat flows outside a ball."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, kind in _KIND_BY_COMMAND.items():
        sp = sub.add_parser(
            name,
            help=_HELP[name],
            epilog=_CSV_NOTES[name],
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        sp.add_argument("--config", help="experiment config (INI)")
        sp.add_argument("--out", default="out", help="artifact directory (default: ./out)")
        sp.add_argument(
            "--workers", type=int, default=1, help="worker processes for sweeps (default: 1)"
        )
        sp.add_argument(
            "--seed",
            type=int,
            default=None,
            help="reserved for stochastic features; current experiments are deterministic",
        )
        sp.add_argument("--verbose", action="store_true", help="log progress to stderr")
        if name == "thresholds":
            sp.add_argument("--p", type=float, help="reaction exponent (alternative to --config)")
            sp.add_argument("--q", type=float, default=0.0, help="time weight exponent")
            sp.add_argument("--s", type=float, default=0.0, help="space weight exponent")
            sp.add_argument("--dimension", type=int, default=3, help="space dimension (1 uses two rays)")
            sp.add_argument("--inner-radius", type=float, default=None, help="hole radius")
            sp.add_argument("--a", default=None, help="diffusion preset, e.g. rational_decay:1.0")
            sp.add_argument("--b", default=None, help="drift preset, e.g. power_drift:-0.5")
    return parser


def _cfg_from_args(args) -> dict:
    kind = _KIND_BY_COMMAND[args.command]
    if args.config:
        cfg = load_config(args.config)
    elif kind == "thresholds":
        if args.p is None:
            raise ValueError("thresholds needs either --config or --p")
        domain: dict = {"dimension": args.dimension}
        if args.dimension == 1:
            domain["kind"] = "one_dim_two_ray"
        if args.inner_radius is not None:
            domain["inner_radius"] = args.inner_radius
        operator: dict = {"p": args.p, "q": args.q, "s": args.s}
        if args.a is not None:
            operator["a"] = args.a
        if args.b is not None:
            operator["b"] = args.b
        cfg = validate_config({"domain": domain, "operator": operator})
    else:
        raise ValueError(f"'{args.command}' needs --config")
    cfg["experiment"]["kind"] = kind
    return cfg


def _summary_lines(record: ExperimentRecord) -> list[str]:
    ex = record.extras
    lines = [f"record {record.record_id} ({record.kind})"]
    if record.kind == "thresholds":
        lines.extend(ex["lines"])
    elif record.kind == "single":
        o = record.outcomes[0]
        lines.append(f"predicted: {o['predicted']}")
        lines.append(f"outcome: {o['kind']} (t_final = {o['t_final']:g}, sup = {o['sup_final']:g})")
        if o.get("t_blowup") is not None:
            lines.append(f"estimated blow-up time: {o['t_blowup']:g}")
        if o.get("reason"):
            lines.append(f"reason: {o['reason']}")
    elif record.kind == "sweep_p":
        for o in record.outcomes:
            t_b = f", t_blowup ~ {o['t_blowup']:g}" if o.get("t_blowup") is not None else ""
            lines.append(f"p = {o['p']:g}: {o['kind']} (predicted {o['predicted']}){t_b}")
    elif record.kind == "compare_bc":
        for o in record.outcomes:
            lines.append(f"{o['bc']}: {o['kind']} (sup = {o['sup_final']:g})")
        lines.append(
            f"max relative ordering violation: {ex['max_relative_violation']:.3e}"
            f" (tol {ex['ordering_tol']:g})"
        )
        lines.append(f"ordering ok: {ex['ordering_ok']}, blow-up implication ok: {ex['implication_ok']}")
    elif record.kind == "truncation":
        radii = ", ".join(f"{rk:g}" for rk in ex["radii"])
        lines.append(f"outer radii: {radii} (h = {ex['spacing']:g})")
        lines.append(f"max monotonicity violation: {ex['max_monotonicity_violation']:.3e}")
        diffs = ", ".join(f"{d:.3e}" for d in ex["pair_differences"])
        lines.append(f"successive differences: {diffs}")
        ratios = ", ".join(f"{rat:g}" for rat in ex["cauchy_ratios"])
        lines.append(f"contraction ratios: {ratios} (want >= 2)")
    elif record.kind == "bisect":
        lines.append(f"threshold amplitude ~ {ex['threshold_estimate']:g}")
        lines.append(
            f"bracket [{ex['bracket_lo']:g}, {ex['bracket_hi']:g}] "
            f"(width {ex['bracket_width']:g} after {ex['iterations_done']} iterations)"
        )
    elif record.kind == "verify_supersolution":
        p = ex["params"]
        lines.append(
            f"barrier: amplitude {p['amplitude']:g} (max {ex['amplitude_max']:g}), "
            f"t0 = {p['t0']:g}, mu = {p['mu']:g}"
        )
        for c in record.certificates:
            res = "pass" if c["passed"] else "FAIL"
            margin = f" (min residual {c['min_residual']:.3e})" if c["min_residual"] is not None else ""
            lines.append(f"certificate {c['kind']}: {res}{margin}")
    lines.append("artifacts: " + ", ".join(record.artifacts))
    return lines


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = _cfg_from_args(args)
        record, code = run_experiment(cfg, args.out, workers=args.workers)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for line in _summary_lines(record):
        print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
