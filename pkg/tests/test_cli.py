"""End-to-end tests of the command line front end."""

from __future__ import annotations

import json

import pytest

from fujitalab.cli import main

CONFIG_SINGLE = """\
[domain]
dimension = 2
r_max = 10.0
intervals = 100

[operator]
p = 1.5

[bc]
kind = robin
alpha = 1.0

[solver]
dt0 = 1e-2
t_max = 10.0
output_interval = 0.5

[experiment]
kind = single
profile = gaussian:1.0,4.0
"""


def _write(tmp_path, text, name="exp.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_run_subcommand_prints_outcome(tmp_path, capsys):
    cfg = _write(tmp_path, CONFIG_SINGLE)
    out = tmp_path / "artifacts"
    code = main(["run", "--config", cfg, "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 0
    assert "record " in captured.out
    assert "outcome: BlowUp" in captured.out
    assert "estimated blow-up time" in captured.out
    # the artifact paths named in the summary must exist
    assert (out / "records.jsonl").exists()
    series = list(out.glob("*_series.csv"))
    assert len(series) == 1


def test_thresholds_without_config(capsys):
    code = main(["thresholds", "--p", "1.5", "--dimension", "2"])
    captured = capsys.readouterr()
    assert code == 0
    assert "GuaranteedBlowUp" in captured.out
    assert "threshold_blowup = 2" in captured.out


def test_thresholds_needs_p_or_config(capsys):
    code = main(["thresholds"])
    captured = capsys.readouterr()
    assert code == 1
    assert "error:" in captured.err
    assert "--p" in captured.err


def test_missing_config_is_an_error(capsys):
    code = main(["run"])
    captured = capsys.readouterr()
    assert code == 1
    assert "error: 'run' needs --config" in captured.err


def test_bad_config_value_reports_error(tmp_path, capsys):
    cfg = _write(tmp_path, CONFIG_SINGLE.replace("p = 1.5", "p = 0.5"))
    code = main(["run", "--config", cfg])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.err.startswith("error:")
    assert "exponent p" in captured.err


def test_subcommand_overrides_config_kind(tmp_path, capsys):
    text = CONFIG_SINGLE + "p_values = 1.4, 1.8\n"
    cfg = _write(tmp_path, text)
    out = tmp_path / "artifacts"
    code = main(["sweep-p", "--config", cfg, "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 0
    assert "p = 1.4" in captured.out
    assert "p = 1.8" in captured.out
    with open(out / "records.jsonl") as fh:
        record = json.loads(fh.readlines()[-1])
    assert record["kind"] == "sweep_p"


def test_verify_exit_code_flags_failed_certificate(tmp_path, capsys):
    text = CONFIG_SINGLE.replace("dimension = 2", "dimension = 3")
    text = text.replace("p = 1.5", "p = 2.0")
    text = text.replace("kind = single", "kind = verify_supersolution")
    text = text.replace("profile = gaussian:1.0,4.0", "profile = gaussian:1.0,1.0")
    text += "n_space = 100\nn_time = 50\n"
    cfg = _write(tmp_path, text)
    out = tmp_path / "artifacts"
    code = main(["verify-supersolution", "--config", cfg, "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 2
    assert "FAIL" in captured.out


def test_unknown_command_exits_with_usage(capsys):
    with pytest.raises(SystemExit):
        main(["frobnicate"])
    captured = capsys.readouterr()
    assert "invalid choice" in captured.err
