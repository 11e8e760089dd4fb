import io
import json
import subprocess
import sys

import pytest

from lpbench import cli


def run(argv, stdin=None, monkeypatch=None, capsys=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(stdin) if not isinstance(stdin, str) else stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def sh(monkeypatch, capsys):
    return lambda argv, stdin=None: run(argv, stdin, monkeypatch, capsys)


def test_norm(sh):
    code, out, _ = sh(["norm"], {"f": [3, 4], "weights": [1, 1], "p": 2})
    assert code == 0
    assert json.loads(out) == {"value": 5.0}


def test_norm_list_and_vector(sh):
    code, out, _ = sh(["norm"], {"f": [1, 1], "weights": [0.5, 0.5], "p": [1, 2, "inf"]})
    assert code == 0
    assert [v["value"] for v in json.loads(out)["values"]] == [1.0, 1.0, 1.0]
    code, out, _ = sh(["norm"], {"F": [[3, 4], [0, 0]], "space": {"kind": "lp", "p": 2}, "p": 1})
    assert json.loads(out) == {"value": 5.0}


def test_check_holder(sh):
    code, out, _ = sh(["check", "holder"], {"f1": [1, 2], "f2": [2, 1], "weights": [1, 1], "p": 2, "q": 2})
    assert code == 0
    c = json.loads(out.strip())
    assert c["lhs"] == pytest.approx(4.0) and c["rhs"] == pytest.approx(5.0)
    assert c["status"] == "holds"


def test_check_jsonl_and_violation(sh):
    insts = [
        {"f1": [1, 2], "f2": [2, 1], "p": 2, "q": 2},
        {"f1": [1, 1], "f2": [1, 1], "weights": [0.5, 0.5], "p": 2, "q": 2},
    ]
    code, out, _ = sh(["check", "holder"], insts)
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2
    assert json.loads(lines[1])["status"] == "equality"
    code, out, _ = sh(["check", "interpolation_literal"], {"weights": [1], "f": [0.5], "p": 2, "q": 2})
    assert code == 2
    assert json.loads(out)["status"] == "violated"


def test_check_list(sh):
    code, out, _ = sh(["check", "list"])
    assert code == 0
    assert "holder" in out.split() and "transfer_forward" in out.split()


def test_opnorm(sh):
    code, out, _ = sh(["opnorm"], {"kernel": [[1, 0], [0, 1]], "r": 2, "s": 2})
    d = json.loads(out)
    assert code == 0
    assert d["value"] == pytest.approx(1.0) and d["kind"] == "exact"


def test_opnorm_exact_only(sh):
    pl = {"kernel": [[1, 2], [3, 4]], "r": 3, "s": 1.5}
    code, out, _ = sh(["opnorm"], pl)
    assert code == 0 and json.loads(out)["kind"] != "exact"
    code, _, err = sh(["opnorm", "--exact-only"], pl)
    assert code == 65
    assert "lower bound" in err


def test_tracenorm(sh):
    code, out, _ = sh(["tracenorm"], {"matrix": [[3, 0], [0, 4]], "space": {"kind": "lp", "p": 2}, "p": 1})
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(7.0, abs=1e-9)
    code, out, _ = sh(["tracenorm"], {"matrix": [[3, 0], [0, 4]], "p": [1, 0.5]})
    vals = [e["value"] for e in json.loads(out)["estimates"]]
    assert vals[1] >= vals[0] - 1e-9


def test_kernel(sh):
    code, out, _ = sh(["kernel", "--trials", "200"], {"kernel": [[1, 1], [1, 1]], "weights": [0.5, 0.5], "f": [1, 1]})
    d = json.loads(out)
    assert code == 0
    assert d["double_sum"] == pytest.approx(1.0)
    assert d["image"]["values"] == [1.0, 1.0]
    assert d["infone_condition"]["status"] == "equality"


def test_schema_error_is_64(sh):
    code, _, err = sh(["check", "holder"], {"f1": [1, 2], "f2": [2, 1], "p": "two", "q": 2})
    assert code == 64
    assert "p" in err
    code, _, err = sh(["norm"], "{not json")
    assert code == 64
    assert "invalid JSON" in err


def test_precondition_is_65(sh):
    code, _, err = sh(["check", "holder"], {"f1": [1, 2], "f2": [2, 1], "p": 2, "q": 3})
    assert code == 65
    assert "conjugate" in err
    code, _, _ = sh(["check", "holder_normalized"], {"f1": [1, 2], "f2": [2, 1], "p": 2, "q": 2})
    assert code == 65


def test_usage_errors_are_64(sh):
    assert sh(["fuzz", "--trials", "0"])[0] == 64
    assert sh(["bogus"])[0] == 64
    assert sh(["check", "no_such_check"], {})[0] == 64


def test_io_error_is_74(sh, tmp_path):
    code, _, err = sh(["norm", "--json", str(tmp_path / "missing.json")])
    assert code == 74


def test_env_seed(monkeypatch):
    monkeypatch.setenv("LPBENCH_SEED", "17")
    assert cli.env_seed() == 17
    monkeypatch.delenv("LPBENCH_SEED")
    assert cli.env_seed() == 42
    monkeypatch.setenv("LPBENCH_SEED", "x")
    with pytest.raises(cli.CliUsageError):
        cli.env_seed()


def test_fuzz_small(sh, tmp_path):
    out_file = tmp_path / "rep.json"
    code, _, err = sh(["fuzz", "--trials", "4", "--n-max", "5", "--seed", "9", "--output", str(out_file)])
    assert code == 0, err
    rep = json.loads(out_file.read_text())
    assert rep["ok"] and rep["config"]["seed"] == 9


def test_fuzz_literal_mode(sh):
    code, out, _ = sh(["fuzz", "--paper-literal-interpolation", "--property", "interpolation_literal"])
    assert code == 2
    rep = json.loads(out)
    (p,) = rep["properties"]
    c = p["first_failure"]["replay"]
    assert c["lhs"] == 0.5 and c["rhs"] == 0.0625


def test_fuzz_config_file(sh, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trials": 3, "n_range": [1, 4], "properties": ["holder", "sharpness"]}))
    code, out, _ = sh(["fuzz", "--json", str(cfg)])
    assert code == 0
    assert [p["name"] for p in json.loads(out)["properties"]] == ["holder", "sharpness"]
    cfg.write_text(json.dumps({"trials": 0}))
    assert sh(["fuzz", "--json", str(cfg)])[0] == 64


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "lpbench.cli", "norm"],
        input=json.dumps({"f": [3, 4], "p": 2}),
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout) == {"value": 5.0}
