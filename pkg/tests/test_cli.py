import json

import pytest

from hcurv.cli import COMMANDS, ConfigError, config_hash, load_config, main, run

FAST = {
    "check-cf": ["samples=50"],
    "analyze-immersion": [],
    "solve-plateau": ["n=17", "heights=[0.1,0.01]"],
    "monitor-pogorelov": ["grids=[17,33]", "heights=[0.1,0.01]"],
    "singular-set": ["samples=800"],
    "ebc": ["boundary_samples=8"],
}


@pytest.mark.parametrize("command", COMMANDS)
def test_every_command_runs(command, tmp_path):
    status, path = run(command, out=tmp_path, overrides=FAST[command])
    assert status == 0
    rep = json.loads(path.read_text())
    assert rep["command"] == command and rep["seed"] == 0
    assert rep["config_hash"] == config_hash(rep["config"])
    assert (tmp_path / "report.meta.json").is_file()


def test_reports_are_deterministic(tmp_path):
    a = run("singular-set", out=tmp_path / "a", overrides=["samples=500"])[1].read_bytes()
    b = run("singular-set", out=tmp_path / "b", overrides=["samples=500"])[1].read_bytes()
    assert a == b
    assert (tmp_path / "a" / "faces.json").is_file() and (tmp_path / "a" / "hull.obj").is_file()


def test_config_file_and_overrides(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"samples": 10, "seed": 3}))
    eff, _, _ = load_config("check-cf", cfg, ["samples=20"])
    assert eff["samples"] == 20 and eff["seed"] == 3
    eff, _, _ = load_config("solve-plateau", None, ["domain.rho=2.0"])
    assert eff["domain"]["rho"] == 2.0


def test_config_errors_carry_line_numbers(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{\n  "samples": 10,\n\n  "bogus": 1\n}\n')
    assert main(["check-cf", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    assert "bad.json:4: unknown key 'bogus'" in capsys.readouterr().err
    cfg.write_text('{\n  "samples": "many"\n}\n')
    with pytest.raises(ConfigError, match=":2:"):
        load_config("check-cf", cfg)
    cfg.write_text('{\n  "samples": 10,\n  oops\n}\n')
    assert main(["check-cf", "--config", str(cfg)]) == 1
    assert ":3: invalid JSON" in capsys.readouterr().err


def test_divergence_exit_code(tmp_path):
    code = main(["solve-plateau", "--out", str(tmp_path), "--override", "n=17", "--override", "max_iter=1"])
    assert code == 2
    assert any(tmp_path.rglob("iterate_dump.json"))
