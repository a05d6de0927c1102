from __future__ import annotations

import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest
import yaml

from wcslab.cli.__main__ import main
from wcslab.cli.config import ConfigParseError, load_config, parse_config
from wcslab.cli.experiments import REGISTRY
from wcslab.cli.report import format_value
from wcslab.errors import ValidationError
from wcslab.verdict import Verdict

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write(tmp_path: Path, name: str, data) -> Path:
    p = tmp_path / name
    p.write_text(json.dumps(data) if name.endswith(".json") else yaml.safe_dump(data))
    return p


# ---------------------------------------------------------------- registry


def test_registry_has_ten_experiments():
    assert len(REGISTRY) == 10
    for exp in REGISTRY.values():
        assert exp.anchor and exp.summary and exp.expected and exp.columns


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in REGISTRY:
        assert name in out


def test_describe(capsys):
    assert main(["describe", "interior_dichotomy"]) == 0
    out = capsys.readouterr().out
    assert "interior[P=poly(1,-1)]: fails" in out
    assert main(["describe", "nope"]) == 3


# ---------------------------------------------------------------- config parsing


def test_config_schema_errors(tmp_path):
    with pytest.raises(ValidationError):
        parse_config({"experiment": "nope"})
    with pytest.raises(ValidationError):
        parse_config({"experiment": "interior_dichotomy", "colour": "red"})
    with pytest.raises(ValidationError):
        parse_config({"experiment": "interior_dichotomy", "grids": {"degree": 0}})
    with pytest.raises(ValidationError):
        parse_config({"experiment": "interior_dichotomy", "grids": {"tolerances": {"eps": 1}}})
    with pytest.raises(ValidationError):
        parse_config({"experiment": "interior_dichotomy", "expected": {"x": "maybe"}})
    with pytest.raises(ValidationError):
        parse_config({"experiment": "interior_dichotomy", "generator": "dilation", "generators": ["dilation"]})
    with pytest.raises(ValidationError):
        parse_config({"experiment": "interior_dichotomy", "generator": {"b": 0}})
    p = tmp_path / "list.yaml"
    p.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigParseError):
        load_config(p)
    with pytest.raises(ConfigParseError):
        load_config(tmp_path / "missing.yaml")


def test_config_hash_stable_and_sensitive(tmp_path):
    a = load_config(CONFIGS / "interior_dichotomy_P_eq_1.yaml")
    b = load_config(CONFIGS / "interior_dichotomy_P_eq_1.yaml")
    assert a.config_hash == b.config_hash
    assert a.with_overrides(degree=128).config_hash != a.config_hash
    c = parse_config({**a.raw, "output": "elsewhere"})
    assert c.config_hash == a.config_hash


def test_overrides():
    cfg = load_config(CONFIGS / "interior_dichotomy_P_eq_1.yaml").with_overrides(degree=128, tol=1e-9)
    assert cfg.grids.degree == 128
    assert cfg.grids.tolerances.tol_ode == 1e-9
    with pytest.raises(ValidationError):
        cfg.with_overrides(tol=-1.0)


def test_yaml_and_json_equivalent(tmp_path):
    data = {"experiment": "interior_dichotomy", "generator": {"b": 0, "P": {"kind": "constant", "c": 1}}}
    y = load_config(write(tmp_path, "a.yaml", data))
    j = load_config(write(tmp_path, "a.json", data))
    assert y.config_hash == j.config_hash


def test_format_value():
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(float("inf")) == "inf"
    assert format_value(complex(1, -2)) == "1-2j"
    assert format_value(Verdict.HOLDS) == "holds"


# ---------------------------------------------------------------- runs


def read_csv(path: Path):
    lines = path.read_text().splitlines()
    return lines[0], list(csv.reader(lines[1:]))


def test_run_writes_report_and_tables(tmp_path):
    out = tmp_path / "out"
    assert main(["--quiet", "run", str(CONFIGS / "interior_dichotomy_P_eq_1.yaml"), "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["status"] == "ok" and report["mismatches"] == []
    assert report["checks"][0]["verdict"]["verdict"] == "holds"
    h = report["provenance"]["config_hash"]
    for name, columns in REGISTRY["interior_dichotomy"].columns.items():
        first, rows = read_csv(out / name)
        assert first == f"# config_hash: {h}"
        assert ",".join(rows[0]) == columns
        assert len(rows) > 1


def test_run_env_var_and_precedence(tmp_path, monkeypatch):
    env_out = tmp_path / "env"
    monkeypatch.setenv("WCSLAB_OUT", str(env_out))
    cfg = CONFIGS / "interior_dichotomy_P_eq_1.yaml"
    assert main(["--quiet", "run", str(cfg)]) == 0
    assert (env_out / "report.json").exists()
    flag_out = tmp_path / "flag"
    assert main(["--quiet", "run", str(cfg), "--out", str(flag_out)]) == 0
    assert (flag_out / "report.json").exists()


def test_run_degree_override_recorded(tmp_path):
    out = tmp_path / "o"
    cfg = CONFIGS / "interior_dichotomy_P_eq_1.yaml"
    assert main(["--quiet", "run", str(cfg), "--out", str(out), "--degree", "128", "--tol", "1e-9"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["grids"]["degree"] == 128
    assert report["grids"]["tolerances"]["tol_ode"] == 1e-9


@pytest.mark.parametrize(
    "name, code",
    [
        ("seeded_mismatch.yaml", 1),
        ("malformed.yaml", 2),
        ("invalid_space.yaml", 3),
        ("numerical_failure.yaml", 4),
    ],
)
def test_exit_codes(tmp_path, name, code):
    assert main(["--quiet", "run", str(CONFIGS / name), "--out", str(tmp_path / "o")]) == code


def test_mismatch_report_lists_check(tmp_path):
    out = tmp_path / "o"
    assert main(["--quiet", "run", str(CONFIGS / "seeded_mismatch.yaml"), "--out", str(out)]) == 1
    report = json.loads((out / "report.json").read_text())
    assert report["status"] == "mismatch" and report["mismatches"]


def test_bad_tol_is_validation_error(tmp_path):
    cfg = CONFIGS / "interior_dichotomy_P_eq_1.yaml"
    assert main(["--quiet", "run", str(cfg), "--out", str(tmp_path / "o"), "--tol", "0"]) == 3


def test_plots_opt_in(tmp_path):
    out = tmp_path / "o"
    cfg = CONFIGS / "interior_dichotomy_P_eq_1.yaml"
    assert main(["--quiet", "run", str(cfg), "--out", str(out)]) == 0
    assert not list(out.glob("*.png"))
    assert main(["--quiet", "run", str(cfg), "--out", str(out), "--plots"]) == 0
    assert list(out.glob("*.png"))


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "wcslab.cli", "list"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert "structural_identities" in proc.stdout
    proc = subprocess.run(
        [sys.executable, "-m", "wcslab.cli", "run", str(CONFIGS / "malformed.yaml"), "--out", str(tmp_path)],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 2
    assert "parse error" in proc.stderr
