import json
import re
import subprocess
import sys

import pytest

from petzlab.cli import main

SCHEMA = {"theorem", "params", "trials", "seed", "tolerance", "min_slack", "mean_slack",
          "failures", "worst_seed", "version", "timestamp"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_duality_passes(capsys):
    code, out, _ = run(capsys, "check", "--theorem", "duality", "--d", "2", "--n", "2", "--k", "1")
    assert code == 0
    doc = json.loads(out)
    assert SCHEMA <= set(doc)
    assert doc["failures"] == 0 and doc["timestamp"] is not None


def test_check_thm5_equality_case(capsys):
    code, out, _ = run(capsys, "check", "--theorem", "thm5", "--d", "2", "--n", "2", "--k", "1",
                       "--omega", "tensor-power", "--seed", "7", "--no-timestamp")
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["min_slack"]) < 1e-9
    assert doc["seed"] == 7 and doc["worst_seed"] == 7 and doc["timestamp"] is None
    # slacks are written with at least 12 significant digits
    m = re.search(r'"min_slack": (\S+),', out)
    mantissa = m.group(1).split("e")[0].replace("-", "").replace(".", "")
    assert len(mantissa) >= 12


def test_check_cap_exceeded_exit_3(capsys):
    code, out, _ = run(capsys, "check", "--theorem", "thm5", "--d", "2", "--n", "5", "--k", "1")
    assert code == 3
    doc = json.loads(out)
    assert "cap" in doc["error"] and doc["kind"] == "CapExceededError"


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "check", "--theorem", "thm99")[0] == 2
    assert run(capsys, "check", "--theorem", "thm5", "--d", "two")[0] == 2
    assert run(capsys, "ensemble", "--theorem", "pinsker", "--trials", "0")[0] == 2
    assert run(capsys, "demo", "foo")[0] == 2
    assert run(capsys)[0] == 2
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"theorem": "pinsker", "colour": "red"}))
    code, _, err = run(capsys, "check", "--config", str(cfg))
    assert code == 2 and "colour" in err


def test_failure_exit_1(capsys):
    # an impossible tolerance turns tiny negative slacks into failures
    code, out, _ = run(capsys, "ensemble", "--theorem", "pinsker", "--trials", "30", "--seed", "1",
                       "--tolerance", "-1.0", "--no-timestamp")
    assert code == 1
    assert json.loads(out)["failures"] == 30


def test_ensemble_reproducible_and_config(capsys, tmp_path):
    argv = ["ensemble", "--theorem", "thm8", "--trials", "10", "--seed", "1", "--no-timestamp"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == 0 and out1 == out2
    cfg = tmp_path / "run.json"
    out_path = tmp_path / "report.json"
    cfg.write_text(json.dumps({"theorem": "thm8", "trials": 10, "seed": 1, "output": str(out_path)}))
    code3, _, _ = run(capsys, "ensemble", "--config", str(cfg), "--no-timestamp")
    assert code3 == 0
    text = out_path.read_text(encoding="utf-8")
    assert text == out1 and text.endswith("\n")


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("PETZLAB_SEED", "42")
    code, out, _ = run(capsys, "check", "--theorem", "pinsker", "--no-timestamp")
    assert code == 0 and json.loads(out)["seed"] == 42


def test_theorem_alias(capsys):
    code, out, _ = run(capsys, "check", "--theorem", "thm14CL", "--seed", "3", "--no-timestamp")
    doc = json.loads(out)
    assert code == 0 and doc["params"]["variant"] == "CL" and doc["theorem"] == "thm14"


@pytest.mark.parametrize("name,value", [("werner", 2 / 3), ("antisym", 0.5), ("slater", None)])
def test_demos(capsys, name, value):
    import math

    code, out, _ = run(capsys, "demo", name)
    assert code == 0
    fields = {line.rsplit(None, 1)[0]: float(line.rsplit(None, 1)[1]) for line in out.splitlines()[1:]}
    computed = fields["computed"]
    assert abs(fields["difference"]) < 1e-9
    expected = math.log(3) if value is None else value
    assert computed == pytest.approx(expected, abs=1e-9)


def test_entry_point_subprocess():
    res = subprocess.run([sys.executable, "-m", "petzlab.cli", "check", "--theorem", "duality",
                          "--d", "3", "--n", "3", "--k", "1", "--no-timestamp"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["failures"] == 0
