from __future__ import annotations

import json

import pytest

from fujitalab import (
    BLOWUP,
    GLOBAL,
    BracketError,
    config_digest,
    run_experiment,
    validate_config,
)

BASE = {
    "domain": {"dimension": 3, "r_max": 10.0, "intervals": 100},
    "operator": {"p": 2.0},
    "bc": {"kind": "robin", "alpha": 1.0},
    "solver": {"dt0": 1e-2, "t_max": 5.0, "output_interval": 0.5},
}


def _cfg(**experiment):
    cfg = json.loads(json.dumps(BASE))
    cfg["experiment"] = experiment
    return cfg


def _read_records(out_dir):
    with open(out_dir / "records.jsonl") as fh:
        return [json.loads(line) for line in fh]


def test_single_run_writes_record_and_csv(tmp_path):
    cfg = _cfg(kind="single", profile="gaussian:0.2,1.0")
    record, code = run_experiment(cfg, tmp_path)
    assert code == 0
    assert record.kind == "single"
    assert record.outcomes[0]["kind"] == GLOBAL
    assert record.record_id == config_digest(validate_config(cfg))

    rows = _read_records(tmp_path)
    assert len(rows) == 1
    assert rows[0]["record_id"] == record.record_id
    assert rows[0]["config"]["operator"]["p"] == 2.0

    csv_path = tmp_path / record.artifacts[0]
    header = csv_path.read_text().splitlines()[0]
    assert header == "t,sup_norm,dt,boundary_value"


def test_record_can_be_rerun_from_its_own_snapshot(tmp_path):
    cfg = _cfg(kind="single", profile="gaussian:0.2,1.0")
    record, _ = run_experiment(cfg, tmp_path)
    snapshot = _read_records(tmp_path)[0]["config"]
    record2, code2 = run_experiment(snapshot, tmp_path)
    assert code2 == 0
    assert record2.record_id == record.record_id


def test_rerun_is_bit_identical(tmp_path):
    cfg = _cfg(kind="single", profile="gaussian:1.0,4.0")
    cfg["domain"]["dimension"] = 2
    cfg["operator"]["p"] = 1.5
    record, _ = run_experiment(cfg, tmp_path)
    path = tmp_path / record.artifacts[0]
    first = path.read_bytes()
    run_experiment(cfg, tmp_path)
    assert path.read_bytes() == first
    assert len(_read_records(tmp_path)) == 2  # the ledger appends


def test_sweep_parallel_matches_serial(tmp_path):
    cfg = _cfg(kind="sweep_p", profile="gaussian:1.0,4.0", p_values=[1.4, 1.8])
    cfg["domain"]["dimension"] = 2
    serial_dir = tmp_path / "serial"
    parallel_dir = tmp_path / "parallel"
    rec1, code1 = run_experiment(cfg, serial_dir, workers=1)
    rec2, code2 = run_experiment(cfg, parallel_dir, workers=2)
    assert code1 == code2 == 0
    b1 = (serial_dir / rec1.artifacts[0]).read_bytes()
    b2 = (parallel_dir / rec2.artifacts[0]).read_bytes()
    assert b1 == b2
    assert [o["kind"] for o in rec1.outcomes] == [BLOWUP, BLOWUP]


def test_sweep_requires_p_values(tmp_path):
    with pytest.raises(ValueError, match="p_values"):
        run_experiment(_cfg(kind="sweep_p"), tmp_path)


def test_compare_bc_ordering_clean(tmp_path):
    cfg = _cfg(kind="compare_bc", profile="gaussian:0.3,1.0")
    record, code = run_experiment(cfg, tmp_path)
    assert code == 0
    assert record.extras["ordering_ok"]
    assert record.extras["implication_ok"]
    assert record.extras["max_relative_violation"] <= 1e-2
    kinds = {o["bc"]: o["kind"] for o in record.outcomes}
    assert kinds == {"dirichlet": GLOBAL, "robin": GLOBAL, "neumann": GLOBAL}


def test_compare_bc_needs_robin_reference(tmp_path):
    cfg = _cfg(kind="compare_bc")
    cfg["bc"] = {"kind": "dirichlet"}
    with pytest.raises(ValueError, match="robin"):
        run_experiment(cfg, tmp_path)


def test_truncation_monotone_and_contracting(tmp_path):
    cfg = _cfg(
        kind="truncation",
        profile="gaussian:0.3,1.0",
        family_base=4.0,
        family_growth=2.0,
        family_count=3,
    )
    cfg["domain"]["r_max"] = 4.0
    cfg["domain"]["intervals"] = 60
    record, code = run_experiment(cfg, tmp_path)
    assert code == 0
    assert record.extras["monotone_ok"]
    assert record.extras["ratio_ok"]
    assert record.extras["radii"] == [4.0, 8.0, 16.0]
    assert record.extras["spacing"] == pytest.approx(0.05)


def test_truncation_rejects_incommensurate_radii(tmp_path):
    cfg = _cfg(kind="truncation", family_base=4.0, family_growth=1.7, family_count=3)
    cfg["domain"]["r_max"] = 4.0
    cfg["domain"]["intervals"] = 60
    with pytest.raises(ValueError, match="integer number of steps"):
        run_experiment(cfg, tmp_path)


def test_bisect_brackets_and_halves(tmp_path):
    cfg = _cfg(
        kind="bisect",
        profile="gaussian:1.0,1.0",
        amplitude_lo=0.1,
        amplitude_hi=4.0,
        iterations=3,
    )
    cfg["solver"]["t_max"] = 10.0
    record, code = run_experiment(cfg, tmp_path)
    assert code == 0
    width = record.extras["bracket_width"]
    assert width == pytest.approx((4.0 - 0.1) / 2**3, rel=1e-12)
    lo, hi = record.extras["bracket_lo"], record.extras["bracket_hi"]
    assert 0.1 <= lo < hi <= 4.0
    assert record.extras["threshold_estimate"] == pytest.approx((lo + hi) / 2)


def test_bisect_rejects_bad_bracket(tmp_path):
    cfg = _cfg(
        kind="bisect",
        profile="gaussian:1.0,1.0",
        amplitude_lo=4.0,
        amplitude_hi=8.0,
        iterations=2,
    )
    cfg["solver"]["t_max"] = 10.0
    with pytest.raises(BracketError) as err:
        run_experiment(cfg, tmp_path)
    assert err.value.lo_outcome == BLOWUP
    assert err.value.hi_outcome == BLOWUP


def test_verify_supersolution_passes(tmp_path):
    cfg = _cfg(kind="verify_supersolution", profile="supersolution:0.9", fraction=0.9)
    record, code = run_experiment(cfg, tmp_path)
    assert code == 0
    kinds = [c["kind"] for c in record.certificates]
    assert kinds == ["interior", "boundary", "initial_data"]
    assert all(c["passed"] for c in record.certificates)
    assert record.extras["params"]["amplitude"] == pytest.approx(0.45)


def test_verify_supersolution_flags_oversized_data(tmp_path):
    # gaussian amplitude 1.0 pokes above the 0.45 barrier: exit code 2
    cfg = _cfg(kind="verify_supersolution", profile="gaussian:1.0,1.0", fraction=0.9)
    record, code = run_experiment(cfg, tmp_path)
    assert code == 2
    by_kind = {c["kind"]: c["passed"] for c in record.certificates}
    assert by_kind["interior"] and by_kind["boundary"]
    assert not by_kind["initial_data"]


def test_thresholds_report(tmp_path):
    record, code = run_experiment(_cfg(kind="thresholds"), tmp_path)
    assert code == 0
    assert any("classification" in line for line in record.extras["lines"])


def test_thresholds_graceful_without_gamma0(tmp_path):
    cfg = _cfg(kind="thresholds")
    cfg["operator"]["b"] = "power_drift:-3.0"
    record, code = run_experiment(cfg, tmp_path)
    assert code == 0
    assert record.extras["hypothesis"]["thresholds"]["global"] is None


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError, match="experiment.kind"):
        run_experiment(_cfg(kind="voyage"), tmp_path)
