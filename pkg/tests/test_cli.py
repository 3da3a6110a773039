import json

import pytest

from parasasaki.catalog import sl2_std, gen_quad_ext
from parasasaki.cli import main
from parasasaki.pipeline import CHECK_IDS, run_pipeline
from parasasaki.serialize import (
    InputError,
    dumps,
    instance_to_json,
    loads,
    parse_instance,
    raw_from_system,
)


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(p)


def sl2_json():
    return instance_to_json(raw_from_system(sl2_std()))


def test_instance_round_trip():
    data = instance_to_json(raw_from_system(gen_quad_ext(2)))
    again = instance_to_json(parse_instance(loads(dumps(data))))
    assert dumps(again) == dumps(data)


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d.pop("dim"), "dim"),
        (lambda d: d.update(brackets=[{"i": 1, "j": 0, "out": {"0": "1"}}]), "i < j"),
        (lambda d: d.update(brackets=[{"i": 0, "j": 1, "out": {"9": "1"}}]), "out of range"),
        (lambda d: d.update(sigma=[[1, 0], [0, 1]]), "sigma"),
        (lambda d: d.pop("para_complex"), "para_complex"),
        (lambda d: d.update(metric_on_n=[["1/0", 0], [0, 1]]), "bad scalar"),
        (lambda d: d.update(basis=["h", "h", "y"]), "distinct"),
    ],
)
def test_malformed_input(mutate, message):
    data = sl2_json()
    mutate(data)
    with pytest.raises(InputError, match=message):
        parse_instance(data)


def test_check_catalog_exit_zero(capsys):
    assert main(["check", "--catalog", "sl_r:1,1"]) == 0
    out = capsys.readouterr().out
    assert sum(1 for line in out.splitlines() if "  pass" in line) >= 40


def test_check_quad_ext_exit_zero():
    assert main(["check", "--catalog", "quad_ext:1", "--emit", "json", "--out", "/dev/null"]) == 0


def test_check_json_file(tmp_path, capsys):
    path = write(tmp_path, "sl2.json", sl2_json())
    assert main(["check", path, "--emit", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert [c["id"] for c in report["checks"]] == list(CHECK_IDS)
    assert report["outputs"]["alpha"] == "1/4"
    assert "base" in report


def test_broken_jacobi_exit_one(tmp_path, capsys):
    data = sl2_json()
    data["brackets"][0]["out"]["1"] = "3"   # [h,x] = 3x while [h,y] = -2y, [x,y] = h
    path = write(tmp_path, "broken.json", data)
    assert main(["check", path, "--emit", "json"]) == 1
    report = json.loads(capsys.readouterr().out)
    jac = next(c for c in report["checks"] if c["id"] == "algebra.jacobi")
    assert jac["status"] == "fail"
    assert {"i", "j", "l", "k", "value"} <= jac["witness"].keys()
    assert all(c["status"] == "not_run" for c in report["checks"] if c["stage"] != "algebra")


def test_malformed_file_exit_two(tmp_path):
    assert main(["check", write(tmp_path, "bad.json", "{not json")]) == 2
    assert main(["check", write(tmp_path, "bad2.json", {"dim": 2})]) == 2
    assert main(["check", "--catalog", "sl_c:1,1,0,0"]) == 2
    assert main(["check"]) == 2
    assert main(["check", "--scale", "x", "--catalog", "sl2_std"]) == 2


@pytest.mark.parametrize(
    "spec, key, value",
    [("sl_r:1,1", "alpha", "1/4"), ("quad_ext:2", "alpha", "1/8"),
     ("sl_c:1,1,1,1", "lambda", "1"), ("sl_c:1,1,1,1", "mu", "1")],
)
def test_build_outputs(spec, key, value, capsys):
    assert main(["build", "--catalog", spec]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data[key] == value


def test_build_failure_names_axiom(tmp_path, capsys):
    data = sl2_json()
    data["metric_on_n"] = [["1", "0"], ["0", "1"]]
    assert main(["build", write(tmp_path, "m.json", data)]) == 1
    assert "system.III" in capsys.readouterr().err


def test_report_round_trip_byte_identical(tmp_path):
    out = tmp_path / "r.json"
    assert main(["check", "--catalog", "sl_c:1,1,2,3", "--emit", "json", "--out", str(out)]) == 0
    text = out.read_text()
    assert dumps(loads(text)) == text


def reports(tmp_path, *variants):
    paths = []
    for n, extra in enumerate(variants):
        p = tmp_path / f"r{n}.json"
        main(["check", "--emit", "json", "--out", str(p), *extra])
        paths.append(str(p))
    return paths


def test_report_diff_identical(tmp_path, capsys):
    a, b = reports(tmp_path, ["--catalog", "sl2_std"], ["--catalog", "sl2_std"])
    assert main(["report-diff", a, b]) == 0
    assert capsys.readouterr().out == ""


def test_report_diff_choice_and_scale(tmp_path, capsys):
    a, b, c = reports(
        tmp_path,
        ["--catalog", "sl_c:1,1,2,3"],
        ["--catalog", "sl_c:1,1,2,3", "--alt-tiebreak"],
        ["--catalog", "sl_c:1,1,2,3", "--scale", "3/2"],
    )
    assert main(["report-diff", a, b]) == 0
    assert main(["report-diff", a, c]) == 0
    ra, rb, rc = (json.loads(open(p).read()) for p in (a, b, c))
    assert ra["outputs"]["alpha"] != rb["outputs"]["alpha"]
    assert ra["outputs"]["alpha"] == "1/52"
    assert rc["outputs"]["alpha"] == "1/78"   # alpha / t


def test_report_diff_pass_vs_fail(tmp_path, capsys):
    data = sl2_json()
    data["metric_on_n"] = [["1", "0"], ["0", "1"]]
    bad = write(tmp_path, "m.json", data)
    a, b = reports(tmp_path, ["--catalog", "sl2_std"], [bad])
    assert main(["report-diff", a, b]) == 1
    assert "system.III: pass -> fail" in capsys.readouterr().out


def test_report_diff_schema_mismatch(tmp_path):
    a = write(tmp_path, "a.json", {"checks": [{"id": "x", "status": "pass"}]})
    assert main(["report-diff", a, a]) == 2


def test_fail_entries_carry_witness():
    raw = raw_from_system(sl2_std())
    rep = run_pipeline(raw, alpha_override="1/2")
    for entry in rep.to_json()["checks"]:
        if entry["status"] == "fail":
            assert entry["witness"]
