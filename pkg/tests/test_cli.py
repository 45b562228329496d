import csv
import io
import json

import jsonschema
import pytest

from primlab import cli, strongprime


def run(argv, monkeypatch, tmp_path=None, env=None):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    for k, v in (env or {}).items():
        monkeypatch.setenv(k, v)
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_gamma_k_json(monkeypatch):
    vals = {}
    for k in (5, 6, 7):
        code, out, _ = run(["gamma-k", "--k", str(k), "--z", "1"], monkeypatch)
        assert code == 0
        env = json.loads(out)
        assert set(env) == {"command", "config_digest", "started", "finished", "payload", "version"}
        p = env["payload"]
        assert {"k", "z", "value", "est_error", "method", "config_digest"} <= set(p)
        vals[k] = p["value"]
    assert vals[6] < vals[5] and vals[6] < vals[7]


def test_gamma_k_methods(monkeypatch):
    code, out, _ = run(["gamma-k", "--k", "2", "--z", "1.5", "--method", "direct", "--sieve-limit", "100000"],
                       monkeypatch)
    p = json.loads(out)["payload"]
    assert code == 0 and p["method"] == "direct" and p["rigorous_tail"]
    code, out, _ = run(["gamma-k", "--k", "30", "--z", "1", "--method", "asymptotic"], monkeypatch)
    assert json.loads(out)["payload"]["method"] == "asymptotic:eq1"


def test_byte_identical(monkeypatch):
    a = run(["certify", "--z-lo", "1.9", "--z-hi", "2", "--q-max", "30"], monkeypatch)[1]
    b = run(["certify", "--z-lo", "1.9", "--z-hi", "2", "--q-max", "30"], monkeypatch)[1]
    assert a == b


def test_certify_report_file(monkeypatch, tmp_path):
    path = tmp_path / "cert.json"
    code, out, _ = run(["certify", "--z-lo", "0.44", "--z-hi", "2", "--q-max", "300", "--report", str(path)],
                       monkeypatch)
    assert code == 0 and out == ""
    env = json.loads(path.read_text())
    assert env["payload"]["overall"] is True
    jsonschema.validate(env["payload"], strongprime.REPORT_SCHEMA)


def test_certify_failure_exit(monkeypatch):
    code, out, _ = run(["certify", "--z-lo", "0.1", "--z-hi", "0.2", "--q-max", "3"], monkeypatch)
    assert code == 1
    assert json.loads(out)["payload"]["overall"] is False


def test_layers_csv(monkeypatch):
    code, out, _ = run(["layers", "--k", "3", "--x", "1000", "--all-k", "--output", "csv"], monkeypatch)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["k", "x", "count", "bound", "pass"]
    assert [int(r["count"]) for r in rows] == [168, 299, 247]


def test_layers_enumerate(monkeypatch):
    code, out, _ = run(["layers", "--k", "2", "--x", "10", "--enumerate"], monkeypatch)
    assert json.loads(out)["payload"]["rows"][0]["elements"] == [4, 6, 9, 10]


def test_mertens_commands(monkeypatch, tmp_path):
    code, out, _ = run(["mertens", "--bundle", "--q", "3", "--z", "1"], monkeypatch)
    p = json.loads(out)["payload"]
    assert code == 0 and {"q", "z", "mu", "m_lower", "M_upper", "r_upper"} <= set(p)
    grid = tmp_path / "grid.txt"
    grid.write_text("100\n286\n1000 5000\n")
    code, out, _ = run(["mertens", "--check", "mertens3", "--grid", str(grid)], monkeypatch)
    p = json.loads(out)["payload"]
    assert code == 0 and p["checked"] == 3 and p["skipped"] == [100.0]
    code, out, _ = run(["mertens", "--check", "two-product", "--x-max", "100000"], monkeypatch)
    assert code == 0


def test_primset(monkeypatch, tmp_path):
    f = tmp_path / "set.txt"
    f.write_text("6\n10\n15\n")
    code, out, _ = run(["primset", "check", "--file", str(f), "--z", "1"], monkeypatch)
    p = json.loads(out)["payload"]
    assert code == 0 and p["primitive"] and p["inequality_pass"]
    f.write_text("2\n4\n")
    code, _, _ = run(["primset", "check", "--file", str(f)], monkeypatch)
    assert code == 1
    code, out, _ = run(["primset", "exhaust", "--hi", "12"], monkeypatch)
    p = json.loads(out)["payload"]
    assert code == 0 and p["antichains"] == 252 and p["enumerators_agree"]


def test_primset_explicit_order(monkeypatch, tmp_path):
    f = tmp_path / "set.txt"
    f.write_text("3\n6\n")
    order = tmp_path / "order.txt"
    order.write_text("3\n2\n")
    # with 3 before 2, 6 = 3 * 2 lies in L_3
    code, out, _ = run(["primset", "check", "--file", str(f), "--order", str(order)], monkeypatch)
    assert json.loads(out)["payload"]["l_primitive"] is False


def test_density(monkeypatch, tmp_path):
    path = tmp_path / "anti.txt"
    code, out, _ = run(["density", "--N", "6", "--z", "1", "--exact-rational", "--method", "flow",
                        "--emit-antichain", str(path)], monkeypatch)
    p = json.loads(out)["payload"]
    assert code == 0 and p["density"] == "62/147" and p["certificate_ok"] is True
    assert path.read_text().split() == ["2", "3", "5"]
    code, out, _ = run(["density", "--N", "1000", "--z", "1"], monkeypatch)
    assert code == 0 and json.loads(out)["payload"]["method"] == "flow"


def test_exit_codes(monkeypatch, tmp_path):
    assert run(["bogus"], monkeypatch)[0] == 2
    code, _, err = run([], monkeypatch)
    assert code == 2 and "usage" in err
    assert run(["gamma-k", "--k", "2"], monkeypatch)[0] == 2
    assert run(["gamma-k", "--k", "2", "--z", "3"], monkeypatch)[0] == 2
    assert run(["density", "--N", "100", "--z", "1", "--sieve-limit", "50"], monkeypatch)[0] == 3
    code, _, _ = run(["density", "--N", "100", "--z", "1"], monkeypatch, env={"PRIMLAB_SIEVE_LIMIT": "50"})
    assert code == 3
    assert run(["suite", "--level", "desk", "--sieve-limit", "1000"], monkeypatch)[0] == 3


def test_config_file(monkeypatch, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# tolerances\nabs-tol = 1e-15\nsieve_limit = 2000\noutput = csv\n")
    code, out, _ = run(["gamma-k", "--k", "1", "--z", "1", "--config", str(cfg)], monkeypatch)
    assert code == 0 and out.startswith("key,value")
    # flags override the file
    code, out, _ = run(["gamma-k", "--k", "1", "--z", "1", "--config", str(cfg), "--output", "json"], monkeypatch)
    assert json.loads(out)["command"] == "gamma-k"
    cfg.write_text("nonsense\n")
    assert run(["gamma-k", "--k", "1", "--z", "1", "--config", str(cfg)], monkeypatch)[0] == 2
    cfg.write_text("typo_key = 3\n")
    assert run(["gamma-k", "--k", "1", "--z", "1", "--config", str(cfg)], monkeypatch)[0] == 2


def test_config_digest_tracks_config(monkeypatch):
    a = json.loads(run(["gamma-k", "--k", "1", "--z", "1"], monkeypatch)[1])["config_digest"]
    b = json.loads(run(["gamma-k", "--k", "1", "--z", "1", "--seed", "7"], monkeypatch)[1])["config_digest"]
    assert a != b


def test_text_output(monkeypatch):
    code, out, _ = run(["gamma-k", "--k", "1", "--z", "1", "--output", "text"], monkeypatch)
    assert code == 0 and out.startswith("gamma-k")


def test_suite_smoke(monkeypatch):
    code, out, err = run(["suite", "--level", "smoke"], monkeypatch)
    p = json.loads(out)["payload"]
    assert len(p["criteria"]) == 9
    # exit status mirrors the battery verdict and names failing criteria
    assert code == (0 if p["pass"] else 1)
    for c in p["criteria"]:
        assert f"criterion {c['criterion']}" in err
    if p["failed"]:
        assert "failed criteria" in err
