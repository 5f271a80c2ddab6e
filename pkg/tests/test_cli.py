import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from curvedpairs.cli import CampaignConfig, main, run_suite
from curvedpairs.models import random_instance, serialize_generic
from curvedpairs.ncpoly import parse_vtable_json, v_component

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.mark.parametrize("k", range(4))
def test_vtable_golden(k):
    code, text = run("vtable", "--k", str(k))
    assert code == 0
    assert text == (GOLDEN / f"vtable_k{k}.txt").read_text()


def test_vtable_examples():
    _, text = run("vtable", "--k", "1")
    assert text.splitlines() == ["V^1_0 = Z0", "V^1_1 = 1/2 Z1", "V^1_2 = -1/6 Z2"]
    _, text = run("vtable", "--k", "3")
    assert "V^3_5 = 1/360 (Z1Z2Z2 + Z2Z1Z2 + Z2Z2Z1)" in text.splitlines()


def test_vtable_json_round_trip():
    code, text = run("vtable", "--k", "2", "--json")
    obj = json.loads(text)
    assert code == 0 and obj["k"] == 2
    parsed = parse_vtable_json(obj["rows"])
    assert all(parsed[i] == v_component(2, i) for i in range(5))


def test_vtable_negative_k_is_input_error():
    assert run("vtable", "--k", "-1")[0] == 2


def test_generate_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("generate", "--seed", "7", "--out", str(a))[0] == 0
    assert run("generate", "--seed", "7", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert run("generate", "--seed", "8")[1] != a.read_text()


def test_generate_cap_is_input_error():
    assert run("generate", "--m", "5", "--n", "2")[0] == 2


@pytest.mark.parametrize("suite", ["axioms", "transgression", "ch-invariance", "linf",
                                   "route-agreement", "oracle-agreement", "mc"])
def test_verify_suites_pass(suite):
    code, text = run("verify", suite, "--k", "1", "--samples", "2")
    assert code == 0, text
    assert text.splitlines()[-1].startswith(f"verify {suite}: ")
    assert all(line.startswith("PASS") for line in text.splitlines()[:-1])


def test_verify_convolution_small():
    code, text = run("verify", "convolution", "--m", "1", "--weight-bound", "2")
    assert code == 0, text


def test_verify_json_and_reproducible(tmp_path):
    path = tmp_path / "i.json"
    run("generate", "--seed", "3", "--out", str(path))
    outs = [run("verify", "linf", "--instance", str(path), "--k", "1", "--json") for _ in range(2)]
    assert outs[0] == outs[1]
    obj = json.loads(outs[0][1])
    assert obj["counts"]["fail"] == 0 and obj["instance_digest"]


def test_invalid_instance_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"model": "grassmann", "theta": 0, "eta": 0,
                               "V_degrees": [0, 1, 2],
                               "delta": [[0, 0, 0], [1, 0, 0], [0, 1, 0]]}))
    assert run("verify", "axioms", "--instance", str(bad))[0] == 2
    assert run("verify", "axioms", "--instance", str(tmp_path / "missing.json"))[0] == 2


def test_unknown_suite_rejected():
    with pytest.raises(SystemExit) as err:
        run("verify", "nonsense")
    assert err.value.code == 2
    with pytest.raises(ValueError):
        run_suite("nonsense", CampaignConfig())


def test_oracle_agreement_k_cap():
    assert run("verify", "oracle-agreement", "--k", "4")[0] == 2


def test_failure_exit_1(monkeypatch):
    from curvedpairs import cli
    mutated = lambda cfg: cli.suite_oracle_agreement(cfg, mutate={"k": 1, "i": 2, "term": 0})
    monkeypatch.setitem(cli.SUITES, "oracle-agreement", mutated)
    code, text = run("verify", "oracle-agreement", "--k", "1")
    assert code == 1
    fail = next(line for line in text.splitlines() if line.startswith("FAIL"))
    assert json.loads(fail.split(" ", 2)[2])["tuple"]


def test_sigma_k0_is_trace(tmp_path):
    inst = random_instance(0, m=2)
    path = tmp_path / "g.json"
    path.write_text(json.dumps(serialize_generic(inst)))
    code, text = run("sigma", "--instance", str(path), "--k", "0", "--json")
    assert code == 0
    obj = json.loads(text)
    rows = obj["sigma"]["coefficients"]
    assert all(len(r["tuple"]) == 1 for r in rows)
    sp = inst.split()
    ker = sp.pair.target_kernel(0)
    expected = {sp.lie.space.labels[j]: ker.reduce(b) for j, b in enumerate(sp.iota)}
    assert {r["tuple"][0] for r in rows} == {k for k, v in expected.items() if v}
    assert obj["report"]["counts"]["fail"] == 0


def test_sigma_section_route():
    code, text = run("sigma", "--k", "1", "--route", "section", "--phi-seed", "3")
    assert code == 0
    assert "PASS delta_closed" in text
    assert run("sigma", "--k", "1", "--phi-seed", "3")[0] == 2


def test_report_command():
    code, text = run("report", "--k", "1", "--samples", "1", "--m", "1")
    assert code == 0, text
    assert text.splitlines()[-1].startswith("report: ")


def test_module_entry_point_and_stderr():
    proc = subprocess.run([sys.executable, "-m", "curvedpairs", "vtable", "--k", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("V^1_0 = Z0")
    assert proc.stderr.startswith("wall-clock")
