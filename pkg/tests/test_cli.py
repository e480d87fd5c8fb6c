"""Command-line interface tests: output determinism, sweep tables, domain
errors, config precedence, manifests, and verify exit codes."""

import json
import time

import pytest

from bbmlab.cli import _default_workers, _parse_sweep, main
from bbmlab.verification import CheckResult


def test_rate_point_output(capsys):
    assert main(["rate", "--theta", "0.5"]) == 0
    out = capsys.readouterr().out.strip().split("\n")
    values = {line.split()[0]: float(line.split()[1]) for line in out}
    assert values["rho_bar"] == pytest.approx(0.5, abs=1e-9)
    assert values["rate"] == pytest.approx(0.414213562, abs=1e-9)
    assert values["beta*rate"] == pytest.approx(0.414213562, abs=1e-9)


def test_rate_domain_error_names_inequality(capsys):
    assert main(["rate", "--theta", "0.5", "--k", "0.4", "--d", "2"]) == 2
    err = capsys.readouterr().err
    assert "a + k*d" in err and "1 - theta^2" in err


def test_rate_sweep_csv(capsys, tmp_path):
    assert main(["rate", "--sweep", "theta=0:0.1:0.05", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out.strip().split("\n")
    assert out[0] == "theta,k,a,beta,d,rho_bar,rho_hat,rate,beta_rate"
    assert len(out) == 4
    first = out[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[7]) == pytest.approx(0.828427125, abs=1e-9)
    saved = (tmp_path / "rate_sweep.csv").read_text().strip().split("\n")
    assert saved == out
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "rate"
    assert manifest["config"]["sweep"] == "theta=0:0.1:0.05"


def test_sweep_parse_rejects_garbage():
    with pytest.raises(SystemExit):
        _parse_sweep("gamma=0:1:0.1")
    with pytest.raises(SystemExit):
        _parse_sweep("theta=0:1")
    with pytest.raises(SystemExit):
        _parse_sweep("theta=1:0:0.1")


def test_simulate_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["simulate", "--beta", "1", "--d", "1", "--t", "2", "--seed", "7"]
    assert main(args + ["--out", str(a)]) == 0
    time.sleep(0.01)
    assert main(args + ["--out", str(b)]) == 0
    assert (a / "snapshots.csv").read_bytes() == (b / "snapshots.csv").read_bytes()
    ma = json.loads((a / "manifest.json").read_text())
    mb = json.loads((b / "manifest.json").read_text())
    for key in ("started", "finished", "outputs"):
        ma.pop(key), mb.pop(key)
    assert ma == mb
    assert ma["master_seed"] == 7


def test_simulate_summary_and_truncation(tmp_path, capsys):
    out = tmp_path / "run"
    rc = main(["simulate", "--beta", "1", "--t", "12", "--cap", "500", "--seed", "3",
               "--summary", "--out", str(out)])
    assert rc == 0
    captured = capsys.readouterr()
    assert "N_t" in captured.out and "M_t" in captured.out
    assert "truncated" in captured.err
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["extra"]["truncated"] is True


def test_simulate_draws_seed_when_absent(tmp_path):
    out = tmp_path / "drawn"
    assert main(["simulate", "--t", "0.5", "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert isinstance(manifest["master_seed"], int)
    assert manifest["config"]["seed_drawn"] is True


def test_config_file_precedence(tmp_path, capsys):
    conf = tmp_path / "conf.txt"
    conf.write_text("theta = 0.5\n# comment line\nk = 0.0\n")
    assert main(["rate", "--config", str(conf)]) == 0
    assert "0.414213562" in capsys.readouterr().out
    assert main(["rate", "--config", str(conf), "--theta", "0"]) == 0
    assert "0.828427125" in capsys.readouterr().out


def test_config_file_rejects_malformed_line(tmp_path):
    conf = tmp_path / "bad.txt"
    conf.write_text("theta 0.5\n")
    with pytest.raises(SystemExit, match="key = value"):
        main(["rate", "--config", str(conf)])


def test_workers_env_default(monkeypatch):
    monkeypatch.setenv("BBMLAB_WORKERS", "3")
    assert _default_workers() == 3
    monkeypatch.setenv("BBMLAB_WORKERS", "junk")
    assert _default_workers() == 1
    monkeypatch.delenv("BBMLAB_WORKERS")
    assert _default_workers() == 1


def test_verify_geometry_quick(tmp_path, capsys):
    rc = main(["verify", "geometry", "--quick", "--seed", "5", "--out", str(tmp_path)])
    assert rc == 0
    report = json.loads((tmp_path / "verdicts.json").read_text())
    assert report["passed"] is True
    assert report["quick"] is True
    assert [c["name"] for c in report["checks"]] == ["geometry_oracles"]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert "geometry_oracles" in manifest["extra"]["check_seconds"]


def test_verify_report_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    main(["verify", "geometry", "--quick", "--seed", "5", "--out", str(a)])
    main(["verify", "geometry", "--quick", "--seed", "5", "--out", str(b)])
    assert (a / "verdicts.json").read_bytes() == (b / "verdicts.json").read_bytes()


def test_verify_exit_one_names_failing_claim(tmp_path, capsys, monkeypatch):
    fake = [
        CheckResult("alpha", "first claim holds", True, "fine", 0.1),
        CheckResult("beta", "second claim holds", False, "broken", 0.2),
    ]
    monkeypatch.setattr("bbmlab.cli.run_suite", lambda *a, **kw: fake)
    rc = main(["verify", "all", "--seed", "0", "--out", str(tmp_path)])
    assert rc == 1
    captured = capsys.readouterr()
    assert "failed: second claim holds" in captured.err
    assert "first claim holds" not in captured.err
    report = json.loads((tmp_path / "verdicts.json").read_text())
    assert report["passed"] is False
