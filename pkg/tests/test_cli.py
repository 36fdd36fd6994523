import importlib.util
import json
import pathlib
import subprocess
import sys

import pytest

from xmodcov.cli import main, run, validate_document
from xmodcov.crossed import beta, delta
from xmodcov.catalogue import named_crossed_modules
from xmodcov.serialize import Bundle, Registry, SchemaError, dumps

GOLDEN = pathlib.Path(__file__).parent / "golden"
_spec = importlib.util.spec_from_file_location("regenerate", GOLDEN / "regenerate.py")
regenerate = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(regenerate)


def _report(argv):
    code, report, _, _ = run(argv + ["--emit", "json"])
    return code, report


@pytest.mark.parametrize("name,template", regenerate.RUNS, ids=[r[0] for r in regenerate.RUNS])
def test_golden_reports(name, template):
    code, report = _report(regenerate.argv_for(template))
    got = dumps({"exit": code, "report": report})
    assert got == (GOLDEN / "expected" / f"{name}.json").read_text(encoding="utf-8")


def test_emitted_documents_revalidate():
    for path in sorted((GOLDEN / "expected").glob("*.json")):
        report = json.loads(path.read_text())["report"]
        if "output" not in report["details"]:
            continue
        reg = Registry()
        reg.add(report)
        for n in reg.primary:
            assert validate_document(reg, n), (path.name, n)


def test_golden_semantics():
    exp = lambda n: json.loads((GOLDEN / "expected" / f"{n}.json").read_text())
    assert exp("validate_c4")["exit"] == 0
    cm2 = exp("validate_cm2")
    assert cm2["exit"] == 1 and cm2["report"]["details"]["first_failure"]["failure"] == "CM2"
    sig = exp("validate_sigma")["report"]["details"]["first_failure"]
    assert sig["failure"] == "sigma i != mu" and sig["witness"] == [1]
    assert exp("cohomology_c2_n3")["report"]["details"]["divisors"] == [2]
    cl = exp("classify_x2")["report"]["details"]
    assert cl["count"] == 2 == exp("oracle_x2")["report"]["details"]["count"]
    assert exp("bound_exceeded")["exit"] == 2 and exp("cohomology_n4")["exit"] == 2


def test_cm2_witness_is_a_real_violation(tmp_path):
    reg = Registry()
    reg.add_file(GOLDEN / "inputs" / "cm2_violation.json")
    X = reg.get("chi_S3_mu0")
    m, n = validate_document(reg, "chi_S3_mu0").witness
    assert X.act(n, X.mu.map[m]) != X.M.conj(n, m)


def test_beta_delta_pipeline(tmp_path):
    X = named_crossed_modules()["C4-x2->C4"]
    code, rb = _report(["beta", str(GOLDEN / "inputs" / "crossed_x2.json")])
    assert code == 0
    f = tmp_path / "beta.json"
    f.write_text(dumps(rb))
    code, rd = _report(["delta", str(f)])
    assert code == 0
    reg = Registry()
    reg.add(rd)
    Y = reg.get(reg.first("crossed_module"))
    D, _ = delta(beta(X))
    assert Y.M.mul == D.M.mul and Y.P.mul == X.P.mul and Y.mu.map == D.mu.map
    from xmodcov.crossed import delta_beta_isomorphism

    assert delta_beta_isomorphism(X).target.M.mul == Y.M.mul
    code, rp = _report(["pi0", str(f)])
    assert code == 0 and rp["details"]["pi0"]["order"] == 2


def test_schema_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "group", "name": "g", "payload": {"mul": [[0, 1], [1]]}}')
    code, r = _report(["validate", str(bad)])
    assert code == 1 and "wrong length" in r["details"]["first_failure"]["failure"]
    bad.write_text("{not json")
    code, r = _report(["validate", str(bad)])
    assert code == 1 and "invalid JSON" in r["details"]["error"]
    bad.write_text('{"kind": "crossed_module", "name": "x", "payload": {"M": "nope", "P": "nope", "mu": [], "action": []}}')
    code, r = _report(["validate", str(bad)])
    assert code == 1 and "unresolved" in r["details"]["first_failure"]["failure"]
    code, r = _report(["classify", str(bad)])
    assert code == 1 and "no document of kind" in r["details"]["error"]
    with pytest.raises(SchemaError):
        Registry().add({"kind": "nonsense", "payload": {}})


def test_includes(tmp_path):
    X = named_crossed_modules()["C2-0->C2"]
    b = Bundle()
    b.group(X.M, "A")
    groups = tmp_path / "groups.json"
    groups.write_text(dumps(b.as_json()))
    doc = {"kind": "crossed_module", "name": "z", "payload": {"M": "A", "P": "A", "mu": [0, 0], "action": [[0, 0], [1, 1]]}}
    xm = tmp_path / "xm.json"
    xm.write_text(json.dumps(doc))
    assert _report(["validate", str(xm)])[0] == 1
    code, r = _report(["validate", str(xm), "--include", str(groups)])
    assert code == 0 and [d["name"] for d in r["details"]["documents"]] == ["z"]


def test_text_mode_and_console_entry(capsys):
    assert main(["cohomology", str(GOLDEN / "inputs" / "module_c2_triv.json"), "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("cohomology: value") and "time:" in out


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "xmodcov", "classify", str(GOLDEN / "inputs" / "kernel_x2_id.json"), "--emit", "json"]
    outs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1] and b'"count": 2' in outs[0]
    r = subprocess.run(argv[:3] + ["validate", str(GOLDEN / "inputs" / "cm2_violation.json")], capture_output=True)
    assert r.returncode == 1
