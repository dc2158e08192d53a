import json

import pytest

from sharpmart import cli


def run_main(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants_at_two(capsys):
    code, out, _ = run_main(capsys, "constants", "--p", "2")
    assert code == 0
    doc = json.loads(out)
    vals = {r["name"]: r["value"] for r in doc["rows"]}
    assert vals["pichorides"] == pytest.approx(1.0)
    assert vals["D_p"] == pytest.approx(1.0, abs=1e-10)
    assert vals["K_p"] == pytest.approx(1.0)
    assert doc["pass"] is True and doc["config"]["params"] == {"p": "2"}
    assert all(r["provenance"] in ("closed_form", "quadrature", "root", "series", "mc") for r in doc["rows"])


def test_eval_command(capsys):
    code, out, _ = run_main(capsys, "eval", "--function", "log_U", "--K", "2", "--x", "0", "--y", "0")
    assert code == 0
    assert json.loads(out)["rows"][0]["value"] == pytest.approx(0.5)


def test_verify_log_U(capsys):
    code, out, _ = run_main(capsys, "verify", "--function", "log_U", "--K", "2", "--points", "100000")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert rows[0]["check"] == "majorization_maj1" and rows[0]["n_points"] == 100000
    assert all(r["pass"] for r in rows)


def test_simulate_exit(capsys):
    code, out, _ = run_main(capsys, "simulate", "--experiment", "exit", "--dim", "3",
                            "--n_paths", "2000", "--dt", "1e-3", "--seed", "3")
    rows = json.loads(out)["rows"]
    first = [r for r in rows if r["k"] == 1][0]
    assert first["estimate"] == pytest.approx(1 / 3, rel=0.05)
    assert code in (0, 1)


def test_csv_output_and_file(tmp_path, capsys):
    path = tmp_path / "c.csv"
    code, out, _ = run_main(capsys, "constants", "--K", "2", "--output", "csv", "--out", str(path))
    assert code == 0 and out == ""
    text = path.read_text().splitlines()
    assert text[0].startswith("# sharpmart ") and "config=" in text[0]
    assert text[1].split(",")[:3] == ["name", "p_or_k", "value"]
    assert text[-1] == "# pass=True"


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nfunction = log_U\nK = 3\nx = 0\ny = 0\n")
    code, out, _ = run_main(capsys, "eval", "--config", str(cfg), "--K", "2")
    assert code == 0
    assert json.loads(out)["rows"][0]["value"] == pytest.approx(0.5)


def test_usage_errors(capsys):
    assert run_main(capsys, "nonsense")[0] == 2
    assert run_main(capsys, "eval", "--function", "nope", "--x", "1", "--y", "1")[0] == 2
    assert run_main(capsys, "riesz", "--domain", "moon", "--check", "lp")[0] == 2
    assert run_main(capsys, "simulate", "--experiment", "warp")[0] == 2


def test_module_error_exit_code(capsys):
    code, _, err = run_main(capsys, "eval", "--function", "log_U", "--K", "0.5", "--x", "0", "--y", "0")
    assert code == 1 and "error" in err


def test_riesz_commands(capsys):
    for args in (["--domain", "circle", "--check", "lp", "--p", "1.5", "--grid", "1024"],
                 ["--domain", "sphere", "--check", "duality", "--N", "4"],
                 ["--domain", "gauss", "--check", "weak", "--p", "3"]):
        code, out, _ = run_main(capsys, "riesz", *args, "--trials", "5")
        assert code == 0, args
        assert len(json.loads(out)["rows"]) >= 5


def test_run_is_deterministic():
    cfg = cli.RunConfig("riesz", {"domain": "circle", "check": "weak", "p": "2", "trials": "10", "grid": "512"},
                        seed=5, output="csv")
    assert cli.run(cfg).to_csv() == cli.run(cfg).to_csv()


def test_fast_suite_and_negative_control():
    good = cli.suite("fast", cli.RunConfig("suite", {"name": "fast"}, seed=42))
    assert good.passed
    bad = cli.suite("fast", cli.RunConfig("suite", {"name": "fast", "mutate": "0.5"}, seed=42))
    assert not bad.passed


def test_full_suite_negative_control_includes_mc():
    runs = cli._suite_runs("full", 0.5)
    assert any(cmd == "simulate" and p.get("mutate") == 0.5 for cmd, p in runs)
    with pytest.raises(cli.UsageError):
        cli._suite_runs("medium", 1.0)


def test_report_pass_is_conjunction():
    cfg = cli.RunConfig("constants")
    rep = cli.RunReport(cfg, [{"pass": True}, {"pass": False}], passed=False)
    assert '"pass": false' in rep.to_json()
    with pytest.raises(cli.UsageError):
        cli.RunConfig("bogus")
