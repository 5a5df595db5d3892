import io
import json
from importlib import resources

import pytest

from curvehunt.cli import run

SCHEMA = json.loads(resources.files("curvehunt").joinpath("data", "cli_schema.json").read_text())
TYPES = {"int": int, "str": str, "bool": bool, "list": list, "object": dict}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), stdout=out, stderr=err)
    return status, out.getvalue(), err.getvalue()


def validate(line):
    rec = json.loads(line)
    fields = SCHEMA["types"][rec["type"]]
    for name, typ in fields.items():
        assert name in rec, (rec["type"], name)
        v = rec[name]
        allowed = [t for t in typ.split("|")]
        ok = (v is None and "null" in allowed) or any(
            isinstance(v, TYPES[t]) and not (t == "int" and isinstance(v, bool))
            for t in allowed if t != "null")
        assert ok, (rec["type"], name, v)
    return rec


def test_count_example():
    assert call("count", "--curve", "y^2+y=x^3+x", "--field", "2", "--ext", "1")[:2] == (0, "5\n")


def test_lpoly_example():
    status, out, _ = call("lpoly", "--curve", "y^2+y=(x^2+x)/(x^3+x^2+1)", "--field", "2")
    assert (status, out) == (0, "1 + 3t + 5t^2 + 6t^3 + 4t^4\n")


def test_parse_error_exit_two_with_position():
    status, out, err = call("count", "--curve", "y^2+", "--field", "2")
    assert status == 2 and out == ""
    assert "position 4" in err and "curves.parse_curve" in err


def test_domain_errors_exit_one():
    status, _, err = call("count", "--curve", "y^2=x^2", "--field", "3")
    assert status == 1 and "curves.parse_curve" in err
    status, _, err = call("aj", "--curve", "y^2+y=x^3+x", "--field", "2", "--vector",
                          "-1,1,0,0,0", "--function")
    assert status == 1 and "jacobian.function_with_divisor" in err


def test_usage_errors_exit_two():
    assert call("bogus")[0] == 2
    assert call("count", "--field", "2")[0] == 2
    assert call("count", "--curve", "y^2+y=x^3+x", "--field", "6")[0] == 2
    assert call("--jobs", "0", "count", "--curve", "y^2+y=x^3+x", "--field", "2")[0] == 2


@pytest.mark.parametrize("argv", [
    ["count", "--curve", "y^2+y=x^3+x", "--field", "2", "--ext", "1,2,3"],
    ["lpoly", "--curve", "y^2=x^5+x^3+x+1", "--field", "3"],
    ["classgroup", "--curve", "y^2+y=x^3+x", "--field", "2", "--degree", "2"],
    ["aj", "--curve", "y^2+y=x^3+x", "--field", "2", "--vector", "-3,-1,1,2,1", "--function"],
    ["cover", "as", "--curve", "y^2+y=x^3+x", "--field", "2", "--function", "x"],
    ["cover", "fibre", "--curve", "y^2+y=x^3+x", "--field", "2", "--function", "x",
     "--function", "x^3"],
    ["cover", "subgroup", "--curve", "y^2+y=(x^2+x)/(x^3+x^2+1)", "--field", "2",
     "--index", "19"],
    ["cover", "extend", "--curve", "y^2+y=x^3+x", "--field", "2", "--n", "3"],
    ["enumerate", "--family", "hyperelliptic", "--field", "2", "--genus", "1", "--max", "3"],
    ["hunt", "--family", "explicit", "--field", "2", "--curves", "y^2+y=x^3+x",
     "--strategies", "subgroups,extensions", "--indices", "5", "--n", "2", "--records", "post"],
    ["records", "lookup", "2", "32"],
    ["records", "classify", "2", "32", "27", "--snapshot", "pre"],
    ["verify-paper", "--scope", "census"],
    ["count", "--curve", "y^2+", "--field", "2"],
])
def test_json_lines_follow_the_schema(argv):
    status, out, _ = call("--json", *argv)
    lines = out.splitlines()
    assert lines
    for line in lines:
        validate(line)
    if status == 0:
        assert all(json.loads(l)["type"] != "error" for l in lines)


def test_cover_machine_line():
    status, out, _ = call("cover", "subgroup", "--curve", "y^2+y=(x^2+x)/(x^3+x^2+1)",
                          "--field", "2", "--index", "19")
    assert status == 0
    assert out.splitlines()[-1].split()[:6] == ["class-field-subgroup", "2", "20", "19",
                                               "exact", "19"]


def test_output_independent_of_jobs():
    argv = ["enumerate", "--family", "hyperelliptic", "--field", "2", "--genus", "2",
            "--h-degree", "1", "--f-degree", "5", "--max", "6"]
    a = call("--jobs", "1", *argv)
    b = call("--jobs", "3", *argv)
    assert a[0] == b[0] == 0
    assert a[1] == b[1]


def test_verify_paper_empty_scope():
    status, out, _ = call("--json", "verify-paper", "--scope", "")
    assert status == 0
    rec = validate(out.strip())
    assert rec == {"type": "summary", "scopes": [], "checks": 0, "failures": 0,
                   "discrepancies": 0, "tensions": 0}


def test_config_file(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("jobs = 2\nmax_coeff = 1\n")
    status, out, _ = call("--config", str(cfg), "hunt", "--family", "explicit", "--field", "2",
                          "--curves", "y^2+y=x^3+x", "--strategies", "relations", "--top", "1")
    assert status == 0
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    assert call("--config", str(bad), "records", "lookup", "2", "3")[0] == 2


def test_hunt_writes_report(tmp_path):
    path = tmp_path / "r.jsonl"
    status, _, _ = call("hunt", "--family", "explicit", "--field", "2", "--curves",
                        "y^2+y=(x^2+x)/(x^3+x^2+1)", "--strategies", "subgroups",
                        "--indices", "19", "--records", "post", "--out", str(path))
    assert status == 0
    rows = [json.loads(l) for l in path.read_text().splitlines()]
    assert {(r["q"], r["g"], r["N"]) for r in rows} == {(2, 20, 19)}
    assert set(rows[0]) == {"q", "g", "N", "bound_flag", "certificate", "classification"}
