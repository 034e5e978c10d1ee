"""Experiment drivers with durable records and deterministic CSV artifacts.

Every experiment run appends one JSON line to ``out_dir/records.jsonl`` and
writes its tables as CSV files named by the config digest, so re-running the
same config overwrites the same artifact paths with the same bytes.  The
record embeds the full normalized config; any record can be re-run from its
own snapshot without the original INI file.

Exit codes follow one convention across all experiment kinds: 0 means the
runs classified cleanly (and certificates, where produced, passed), 2 means
an Undetermined outcome or a failing certificate, and 1 is reserved for
hard errors such as a comparison-ordering violation.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .config import (
    build_bc,
    build_domain,
    build_grid_from,
    build_operator,
    build_profile_spec,
    build_solver,
    config_digest,
    validate_config,
)
from .domain import Field, build_grid, restrict_initial_data
from .integrator import BLOWUP, GLOBAL, UNDETERMINED, RunOutcome, run
from .operators import (
    DIRICHLET,
    ROBIN,
    dirichlet,
    gamma0_report,
    hypothesis_report,
    neumann,
)
from .profiles import ProfileSpec, bump, gaussian, supersolution_matched
from .supersolution import (
    initial_data_certificate,
    select_params,
    verify_boundary,
    verify_interior,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDETERMINED = 2


class BracketError(ValueError):
    """Bisection endpoints do not straddle the blow-up threshold."""

    def __init__(self, message: str, lo_outcome: str | None = None, hi_outcome: str | None = None):
        super().__init__(message)
        self.lo_outcome = lo_outcome
        self.hi_outcome = hi_outcome


@dataclass(frozen=True)
class ExperimentRecord:
    """One completed experiment: identity, config snapshot, and results.

    record_id is the digest of the normalized config, so identical configs
    map to identical artifact names.  outcomes and certificates are lists of
    plain dicts; extras carries per-kind summary numbers.
    """

    record_id: str
    kind: str
    created: str
    duration_s: float
    version: str
    config: dict
    outcomes: tuple
    certificates: tuple
    extras: dict
    artifacts: tuple
    exit_code: int

    def to_dict(self) -> dict:
        return {
            "record_id": self.record_id,
            "kind": self.kind,
            "created": self.created,
            "duration_s": self.duration_s,
            "version": self.version,
            "config": self.config,
            "outcomes": list(self.outcomes),
            "certificates": list(self.certificates),
            "extras": self.extras,
            "artifacts": list(self.artifacts),
            "exit_code": self.exit_code,
        }


def _package_version() -> str:
    try:
        from importlib.metadata import version

        return version("fujitalab")
    except Exception:
        return "0+unknown"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(float(v))  # plain-float repr even for numpy scalars
    return str(v)


def _csv_line(values) -> str:
    return ",".join(_csv_cell(v) for v in values)


def _build_suite(cfg: dict):
    spec = build_domain(cfg)
    grid = build_grid_from(cfg, spec)
    op = build_operator(cfg)
    bc = build_bc(cfg)
    solver = build_solver(cfg)
    return spec, grid, op, bc, solver


def _profile_callable(prof: ProfileSpec, op, spec, grid, bc):
    """Turn a profile spec into a sampler; supersolution profiles also
    return the matched parameters they were built from."""
    if prof.name == "gaussian":
        return gaussian(*prof.params), None
    if prof.name == "bump":
        return bump(*prof.params), None
    params = select_params(op, spec, grid, prof.params[0], bc=bc)
    return supersolution_matched(params), params


def _params_dict(params) -> dict:
    return {
        "amplitude": params.amplitude,
        "t0": params.t0,
        "mu": params.mu,
        "p": params.p,
        "q": params.q,
        "s": params.s,
    }


def _outcome_dict(outcome: RunOutcome, **extra) -> dict:
    d = outcome.to_dict()
    d.update(extra)
    return d


def _checkpoint_key(t: float, interval: float) -> int:
    return int(round(t / interval))


# ---------------------------------------------------------------------------
# single


def _experiment_single(cfg: dict, workers: int):
    spec, grid, op, bc, solver = _build_suite(cfg)
    report = hypothesis_report(op, spec, grid, bc)
    prof = build_profile_spec(cfg)
    phi_fn, ss_params = _profile_callable(prof, op, spec, grid, bc)
    phi = restrict_initial_data(phi_fn, grid)
    logger.info("single run: profile %s, predicted %s", prof.spec_string(), report.classification)
    outcome = run(phi, op, bc, solver)
    od = _outcome_dict(
        outcome,
        profile=prof.spec_string(),
        bc=bc.kind,
        predicted=report.classification,
    )
    extras: dict = {"hypothesis": report.to_dict()}
    if ss_params is not None:
        extras["supersolution_params"] = _params_dict(ss_params)
    tables = {"series": outcome.series.csv_lines()}
    code = EXIT_UNDETERMINED if outcome.kind == UNDETERMINED else EXIT_OK
    return [od], [], extras, tables, code


# ---------------------------------------------------------------------------
# compare_bc


def _experiment_compare_bc(cfg: dict, workers: int):
    spec, grid, op, bc, solver = _build_suite(cfg)
    if bc.kind != ROBIN:
        raise ValueError(
            "compare_bc needs a robin [bc] section; dirichlet and neumann are supplied internally"
        )
    tol = cfg["experiment"]["ordering_tol"]
    prof = build_profile_spec(cfg)
    phi_fn, _ = _profile_callable(prof, op, spec, grid, bc)
    phi = restrict_initial_data(phi_fn, grid)

    # same data everywhere except the absorbing case, whose boundary node
    # starts at its pinned value
    phi_dir_values = phi.values.copy()
    phi_dir_values[0] = 0.0
    phi_dir = Field(phi_dir_values, 0.0, grid)

    cases = (
        ("dirichlet", dirichlet(), phi_dir),
        ("robin", bc, phi),
        ("neumann", neumann(), phi),
    )
    results: dict[str, RunOutcome] = {}
    for name, case_bc, data in cases:
        logger.info("compare_bc: running %s", name)
        results[name] = run(data, op, case_bc, solver, record_fields=True)

    interval = solver.output_interval
    snap = {
        name: {_checkpoint_key(f.t, interval): f for f in (results[name].snapshots or ())}
        for name in results
    }
    common = sorted(set(snap["dirichlet"]) & set(snap["robin"]) & set(snap["neumann"]))

    rows = []
    max_rel_violation = 0.0
    for k in common:
        ud = snap["dirichlet"][k].values
        ur = snap["robin"][k].values
        un = snap["neumann"][k].values
        viol = max(float((ud - ur).max()), float((ur - un).max()), 0.0)
        scale = max(float(un.max()), 1e-300)
        max_rel_violation = max(max_rel_violation, viol / scale)
        rows.append((snap["robin"][k].t, float(ud.max()), float(ur.max()), float(un.max()), viol))

    ordering_ok = max_rel_violation <= tol

    # blow-up monotonicity: more absorption cannot blow up when less does not
    kinds = {name: results[name].kind for name in results}
    implications = (("dirichlet", "robin"), ("dirichlet", "neumann"), ("robin", "neumann"))
    implication_ok = all(
        not (kinds[lower] == BLOWUP and kinds[upper] == GLOBAL)
        for lower, upper in implications
    )

    lines = ["t,sup_dirichlet,sup_robin,sup_neumann,max_violation"]
    lines.extend(_csv_line(row) for row in rows)

    outcomes = [
        _outcome_dict(results[name], bc=name, profile=prof.spec_string()) for name, _, _ in cases
    ]
    extras = {
        "common_checkpoints": len(common),
        "max_relative_violation": max_rel_violation,
        "ordering_tol": tol,
        "ordering_ok": ordering_ok,
        "implication_ok": implication_ok,
        "t_blowup": {name: results[name].t_blowup for name in results},
    }
    if not ordering_ok:
        logger.warning(
            "comparison ordering violated: relative excess %g > %g", max_rel_violation, tol
        )
    if any(results[name].kind == UNDETERMINED for name in results):
        code = EXIT_UNDETERMINED
    elif ordering_ok and implication_ok:
        code = EXIT_OK
    else:
        code = EXIT_ERROR
    return outcomes, [], extras, {"ordering": lines}, code


# ---------------------------------------------------------------------------
# truncation


def _experiment_truncation(cfg: dict, workers: int):
    spec = build_domain(cfg)
    d = cfg["domain"]
    e = cfg["experiment"]
    if d["stretch"] != "uniform":
        raise ValueError("truncation study needs uniform grids so family nodes nest")
    op = build_operator(cfg)
    bc = build_bc(cfg)
    solver = build_solver(cfg)

    R = spec.inner_radius
    h = (d["r_max"] - R) / d["intervals"]
    base = e.get("family_base", d["r_max"])
    growth = e["family_growth"]
    count = e["family_count"]
    mono_tol = e["monotonicity_tol"]
    radii = [base * growth**k for k in range(count)]

    grids = []
    for rk in radii:
        m_exact = (rk - R) / h
        m = round(m_exact)
        if m < 2 or abs(m_exact - m) > 1e-9 * max(1.0, m_exact):
            raise ValueError(
                f"outer radius {rk:g} is not an integer number of steps h = {h:g} from {R:g}"
            )
        grids.append(build_grid(spec, rk, m))

    prof = build_profile_spec(cfg)
    # one sampler shared by every member, selected on the widest grid
    phi_fn, ss_params = _profile_callable(prof, op, spec, grids[-1], bc)

    results: list[RunOutcome] = []
    for rk, g in zip(radii, grids):
        logger.info("truncation: outer radius %g with %d intervals", rk, g.num_intervals)
        phi = restrict_initial_data(phi_fn, g)
        results.append(run(phi, op, bc, solver, record_fields=True))

    interval = solver.output_interval
    snaps = [
        {_checkpoint_key(f.t, interval): f for f in (res.snapshots or ())} for res in results
    ]
    common = sorted(set.intersection(*(set(s) for s in snaps)))

    worst_mono = 0.0
    diffs = [0.0] * (count - 1)
    tails = [0.0] * (count - 1)
    rows = []
    for k in common:
        fields = [snaps[i][k].values for i in range(count)]
        row = [snaps[0][k].t] + [float(v.max()) for v in fields]
        for i in range(count - 1):
            n = grids[i].num_intervals  # shared nodes, member i's pinned outer node excluded
            gap = fields[i][:n] - fields[i + 1][:n]
            worst_mono = max(worst_mono, float(gap.max()))
            di = float(np.abs(gap).max())
            diffs[i] = max(diffs[i], di)
            tails[i] = max(tails[i], float(fields[i + 1][n:].max()))
            row.append(di)
        rows.append(tuple(row))

    ratios = []
    for i in range(count - 2):
        if diffs[i + 1] > 0.0:
            ratios.append(diffs[i] / diffs[i + 1])
        else:
            ratios.append(math.nan)  # both runs already agree to rounding
    ratio_ok = all(math.isnan(rat) or rat >= 2.0 for rat in ratios)
    mono_ok = worst_mono <= mono_tol

    header = ["t"]
    header += [f"sup_R{rk:g}" for rk in radii]
    header += [f"diff_R{radii[i]:g}_R{radii[i + 1]:g}" for i in range(count - 1)]
    lines = [",".join(header)]
    lines.extend(_csv_line(row) for row in rows)

    outcomes = [
        _outcome_dict(res, outer_radius=rk, intervals=g.num_intervals)
        for res, rk, g in zip(results, radii, grids)
    ]
    extras = {
        "radii": radii,
        "spacing": h,
        "common_checkpoints": len(common),
        "max_monotonicity_violation": worst_mono,
        "monotonicity_tol": mono_tol,
        "monotone_ok": mono_ok,
        "pair_differences": diffs,
        "cauchy_ratios": ratios,
        "ratio_ok": ratio_ok,
        "tail_sup": tails,
    }
    if ss_params is not None:
        extras["supersolution_params"] = _params_dict(ss_params)
    if not mono_ok:
        code = EXIT_ERROR
        logger.warning("domain monotonicity violated by %g (tol %g)", worst_mono, mono_tol)
    elif any(res.kind == UNDETERMINED for res in results) or not ratio_ok:
        code = EXIT_UNDETERMINED
    else:
        code = EXIT_OK
    return outcomes, [], extras, {"truncation": lines}, code


# ---------------------------------------------------------------------------
# sweep_p


def _sweep_cell(args) -> dict:
    """One exponent cell; module-level so worker processes can import it."""
    raw_cfg, p_value = args
    cfg = validate_config(raw_cfg)
    spec, grid, op, bc, solver = _build_suite(cfg)
    op = dataclasses.replace(op, p=p_value)
    report = hypothesis_report(op, spec, grid, bc)
    prof = build_profile_spec(cfg)
    phi_fn, _ = _profile_callable(prof, op, spec, grid, bc)
    phi = restrict_initial_data(phi_fn, grid)
    outcome = run(phi, op, bc, solver)
    return _outcome_dict(
        outcome,
        p=p_value,
        amplitude=prof.params[0],
        predicted=report.classification,
        profile=prof.spec_string(),
    )


def _experiment_sweep_p(cfg: dict, workers: int):
    e = cfg["experiment"]
    p_values = e.get("p_values")
    if not p_values:
        raise ValueError("sweep needs 'experiment.p_values' (comma-separated exponents)")
    jobs = [(cfg, pv) for pv in p_values]
    if workers > 1:
        logger.info("sweeping %d exponents on %d workers", len(jobs), workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_sweep_cell, jobs))
    else:
        cells = [_sweep_cell(job) for job in jobs]
    cells.sort(key=lambda c: c["p"])

    lines = ["p,amplitude,predicted,outcome,t_blowup,final_sup"]
    for c in cells:
        lines.append(
            _csv_line((c["p"], c["amplitude"], c["predicted"], c["kind"], c["t_blowup"], c["sup_final"]))
        )
    extras = {
        "p_values": [c["p"] for c in cells],
        "outcomes": {repr(c["p"]): c["kind"] for c in cells},
    }
    code = (
        EXIT_UNDETERMINED
        if any(c["kind"] == UNDETERMINED for c in cells)
        else EXIT_OK
    )
    return cells, [], extras, {"sweep": lines}, code


# ---------------------------------------------------------------------------
# bisect


def _experiment_bisect(cfg: dict, workers: int):
    e = cfg["experiment"]
    lo = e.get("amplitude_lo")
    hi = e.get("amplitude_hi")
    if lo is None or hi is None:
        raise ValueError("bisect needs 'experiment.amplitude_lo' and 'experiment.amplitude_hi'")
    if not (0.0 <= lo < hi):
        raise ValueError(f"need 0 <= amplitude_lo < amplitude_hi, got [{lo}, {hi}]")
    iterations = e["iterations"]
    spec, grid, op, bc, solver = _build_suite(cfg)
    prof = build_profile_spec(cfg)

    def run_amplitude(amp: float) -> RunOutcome:
        phi_fn, _ = _profile_callable(prof.with_amplitude(amp), op, spec, grid, bc)
        phi = restrict_initial_data(phi_fn, grid)
        return run(phi, op, bc, solver)

    logger.info("bracketing: endpoints %g and %g", lo, hi)
    out_lo = run_amplitude(lo) if lo > 0.0 else None
    lo_kind = GLOBAL if out_lo is None else out_lo.kind  # zero data stays zero
    out_hi = run_amplitude(hi)
    if lo_kind != GLOBAL or out_hi.kind != BLOWUP:
        raise BracketError(
            f"endpoints do not bracket: amplitude {lo:g} gave {lo_kind}, "
            f"{hi:g} gave {out_hi.kind}",
            lo_outcome=lo_kind,
            hi_outcome=out_hi.kind,
        )

    rows = [
        (0, lo, hi, lo, lo_kind, None),
        (0, lo, hi, hi, out_hi.kind, out_hi.t_blowup),
    ]
    outcomes = []
    code = EXIT_OK
    for i in range(1, iterations + 1):
        mid = 0.5 * (lo + hi)
        out_mid = run_amplitude(mid)
        rows.append((i, lo, hi, mid, out_mid.kind, out_mid.t_blowup))
        outcomes.append(_outcome_dict(out_mid, iteration=i, amplitude=mid))
        if out_mid.kind == BLOWUP:
            hi = mid
        elif out_mid.kind == GLOBAL:
            lo = mid
        else:
            logger.warning("bisection stopped: undetermined outcome at amplitude %g", mid)
            code = EXIT_UNDETERMINED
            break

    lines = ["iteration,amplitude_lo,amplitude_hi,amplitude_mid,outcome,t_blowup"]
    lines.extend(_csv_line(row) for row in rows)
    extras = {
        "threshold_estimate": 0.5 * (lo + hi),
        "bracket_lo": lo,
        "bracket_hi": hi,
        "bracket_width": hi - lo,
        "iterations_done": rows[-1][0],
        "profile": prof.spec_string(),
    }
    return outcomes, [], extras, {"bisection": lines}, code


# ---------------------------------------------------------------------------
# verify_supersolution


def _experiment_verify(cfg: dict, workers: int):
    spec, grid, op, bc, solver = _build_suite(cfg)
    e = cfg["experiment"]
    params = select_params(op, spec, grid, e["fraction"], bc=bc)

    certs = []
    interior = verify_interior(
        params,
        op,
        spec,
        r_probe=e.get("r_probe"),
        t_probe=e.get("t_probe"),
        n_space=e["n_space"],
        n_time=e["n_time"],
        tolerance=e["cert_tol"],
    )
    certs.append(interior.to_dict())
    if bc.kind == DIRICHLET:
        # zero boundary data is dominated by U > 0 with no residual to sweep
        certs.append(
            {
                "kind": "boundary",
                "passed": True,
                "min_residual": None,
                "n_space": 0,
                "n_time": 0,
                "tolerance": e["cert_tol"],
                "note": "dirichlet data lies below any positive profile",
            }
        )
    else:
        boundary = verify_boundary(
            params,
            bc,
            spec,
            t_probe=e.get("t_probe"),
            n_time=e["n_time"],
            tolerance=e["cert_tol"],
        )
        certs.append(boundary.to_dict())

    prof = build_profile_spec(cfg)
    phi_fn, _ = _profile_callable(prof, op, spec, grid, bc)
    phi = restrict_initial_data(phi_fn, grid)
    certs.append(initial_data_certificate(phi, params).to_dict())

    g0 = gamma0_report(op, spec, grid)["gamma0"]
    extras = {
        "params": _params_dict(params),
        "fraction": e["fraction"],
        "amplitude_max": params.amplitude / e["fraction"],
        "gamma0": g0,
        "profile": prof.spec_string(),
    }
    lines = ["kind,passed,min_residual,n_space,n_time,tolerance"]
    for c in certs:
        lines.append(
            _csv_line(
                (c["kind"], c["passed"], c["min_residual"], c["n_space"], c["n_time"], c["tolerance"])
            )
        )
    all_passed = all(c["passed"] for c in certs)
    if not all_passed:
        failing = [c["kind"] for c in certs if not c["passed"]]
        logger.warning("certificates failed: %s", ", ".join(failing))
    code = EXIT_OK if all_passed else EXIT_UNDETERMINED
    return [], certs, extras, {"certificates": lines}, code


# ---------------------------------------------------------------------------
# thresholds


def _experiment_thresholds(cfg: dict, workers: int):
    spec, grid, op, bc, solver = _build_suite(cfg)
    report = hypothesis_report(op, spec, grid, bc)
    pairs: list[tuple[str, object]] = [
        ("dimension", spec.dimension),
        ("p", op.p),
        ("q", op.q),
        ("s", op.s),
        ("gamma0", report.gamma0),
    ]
    for name in ("fujita", "blowup", "global"):
        pairs.append((f"threshold_{name}", report.thresholds.get(name)))
    pairs.append(("classification", report.classification))

    lines = ["name,value"]
    lines.extend(_csv_line(pair) for pair in pairs)

    text = [f"domain: {spec.kind}, N = {spec.dimension}, hole radius {spec.inner_radius:g}"]
    text.append(f"exponents: p = {op.p:g}, q = {op.q:g}, s = {op.s:g}")
    for name, value in pairs[4:]:
        text.append(f"{name} = {value if value is not None else 'undefined'}")
    for clause in report.clauses:
        status = "ok" if clause.passed else "FAIL"
        text.append(f"  [{status}] {clause.name}: {clause.detail}")

    extras = {
        "hypothesis": report.to_dict(),
        "lines": text,
    }
    return [], [], extras, {"thresholds": lines}, EXIT_OK


_HANDLERS = {
    "single": _experiment_single,
    "sweep_p": _experiment_sweep_p,
    "compare_bc": _experiment_compare_bc,
    "truncation": _experiment_truncation,
    "bisect": _experiment_bisect,
    "verify_supersolution": _experiment_verify,
    "thresholds": _experiment_thresholds,
}


def run_experiment(raw_cfg: dict, out_dir, workers: int = 1) -> tuple[ExperimentRecord, int]:
    """Run the experiment named by the config and persist its record.

    Returns the record and the exit code.  Artifact CSVs land in out_dir
    named ``<record_id>_<table>.csv``; the record itself is appended to
    ``out_dir/records.jsonl``.
    """
    cfg = validate_config(raw_cfg)
    kind = cfg["experiment"]["kind"]
    handler = _HANDLERS[kind]
    started = time.perf_counter()
    outcomes, certificates, extras, tables, code = handler(cfg, max(1, int(workers)))
    duration = time.perf_counter() - started

    record_id = config_digest(cfg)
    os.makedirs(out_dir, exist_ok=True)
    artifacts = []
    for name, lines in tables.items():
        fname = f"{record_id}_{name}.csv"
        with open(os.path.join(out_dir, fname), "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
        artifacts.append(fname)

    record = ExperimentRecord(
        record_id=record_id,
        kind=kind,
        created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        duration_s=round(duration, 6),
        version=_package_version(),
        config=cfg,
        outcomes=tuple(outcomes),
        certificates=tuple(certificates),
        extras=extras,
        artifacts=tuple(artifacts),
        exit_code=code,
    )
    with open(os.path.join(out_dir, "records.jsonl"), "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
    logger.info("record %s (%s) written: exit %d", record_id, kind, code)
    return record, code
