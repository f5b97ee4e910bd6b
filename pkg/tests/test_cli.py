import io
import json
import subprocess
import sys

import pytest

from rigidlab.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def report(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return json.loads(out)


def flatten(d, prefix=""):
    flat = {}
    for k, v in d.items():
        if isinstance(v, dict):
            flat.update(flatten(v, f"{prefix}{k}."))
        else:
            flat[prefix + k] = v
    return flat


def test_laman_builtin():
    r = report("laman", "--graph", "builtin:k33")
    assert r["count_ok"] and r["full_ok"]
    assert r["manifest"]["subcommand"] == "laman"
    assert set(r["manifest"]) == {"subcommand", "params", "seed", "version", "wall_time"}


def test_laman_from_file(tmp_path):
    path = tmp_path / "k33.json"
    path.write_text(json.dumps({
        "vertices": ["a", "b", "c", "x", "y", "z"],
        "edges": [[u, v] for u in "abc" for v in "xyz"],
    }))
    r = report("laman", "--graph", str(path))
    assert r["count_ok"] and r["full_ok"] and r["edges"] == 9


def test_rank_and_dof():
    assert report("rank", "--graph", "builtin:c4")["generic_rank"] == 4
    assert report("rank", "--graph", "builtin:triangle")["dof"] == 0


def test_verify_eq1_modes():
    r = report("verify-eq1", "--mode", "factorization")
    assert r["holds"]
    r = report("verify-eq1", "--mode", "membership")
    assert r["holds"]


def test_groebner_and_eliminate():
    r = report("groebner", "--vars", "x,y", "--polys", "x^2 + y^2 - 1; x - y", "--order", "lex")
    assert r["basis"] == ["y^2 - 1/2", "x - y"]
    r = report("eliminate", "--vars", "t,x,y", "--polys", "x - t; y - t^2", "--drop", "t")
    assert r["basis"] == ["x^2 - y"]


def test_groebner_member_flag():
    r = report("groebner", "--vars", "x,y", "--polys", "x - y", "--member", "x^2 - y^2")
    assert r["member"] is True


def test_census_lattice_golden():
    r = report("census", "--generator", "lattice", "--side", "10", "--radius-sq", "5", "--brute")
    assert r["count"] == r["brute_count"] == 288


def test_census_points_file(tmp_path):
    path = tmp_path / "pts.txt"
    path.write_text("0 0\n1 0\n1 1\n0 1\n")
    assert report("census", "--points", str(path))["count"] == 4


def test_cm_points(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text("0 0\n1 0\n0.5 0.8660254037844386\n")
    r = report("cm", "--points", str(path))
    assert r["gram"]["realizable"]


def test_solve_dim_curve():
    r = report("solve", "--graph", "builtin:triangle", "--start", "1.1,0.4,0.9")
    assert r["converged"] and r["vars"] == ["x2", "x3", "y3"]
    r = report("dim", "--graph", "builtin:c4", "--start", "1.0,1.5,0.87,0.5,0.87")
    assert r["converged"] and r["local_dimension"] == 1
    r = report("curve", "--x2", "1", "--count", "11")
    assert r["count"] == len(r["points"]) > 0


def test_collapse_small():
    r = report("collapse", "--graph", "builtin:k33", "--attempts", "30", "--seed", "2")
    assert r["distinct_nondegenerate_count"] == 0 and r["attempts"] == 30


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["laman"],
        ["laman", "--graph", "builtin:nope"],
        ["laman", "--graph", "/nonexistent/g.json"],
        ["groebner", "--vars", "x,y", "--polys", "x + + y"],
        ["groebner", "--vars", "x,y", "--polys", "x + z"],
        ["census"],
        ["census", "--generator", "lattice", "--radius-sq", "3"],
        ["curve", "--x2", "3"],
        ["scaling", "--generator", "lattice", "--sizes", "20,10"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, out, err = call(*argv)
    assert code == 2
    assert out == ""


def test_diagnostic_is_one_line():
    code, out, err = call("laman", "--graph", "builtin:nope")
    assert code == 2 and err.count("\n") == 1 and err.startswith("rigidlab: error:")


@pytest.mark.parametrize("text", ["{not json", '{"vertices": ["a"], "edges": [["a", "a"]]}', '{"edges": []}'])
def test_malformed_graph_file_exit_2(tmp_path, text):
    path = tmp_path / "g.json"
    path.write_text(text)
    assert call("laman", "--graph", str(path))[0] == 2


def test_malformed_points_file_exit_2(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("1 2 3\n")
    assert call("census", "--points", str(path))[0] == 2


def test_limit_flag_exits_3():
    code, out, err = call("verify-eq1", "--mode", "membership", "--limit", "1")
    assert code == 3 and "limit" in err and out == ""


def test_limit_env_exits_3(monkeypatch):
    monkeypatch.setenv("RIGIDLAB_LIMITS", "pairs=2")
    code, _, _ = call("groebner", "--vars", "x,y,z", "--polys", "x^2 + y + z - 1; x + y^2 + z - 1; x + y + z^2 - 1")
    assert code == 3


def test_text_and_json_carry_same_content():
    argv = ["collapse", "--graph", "builtin:c4", "--attempts", "20", "--seed", "1"]
    data = flatten(report(*argv))
    code, out, _ = call(*argv, "--format", "text")
    assert code == 0
    text = {}
    for line in out.splitlines():
        key, _, value = line.partition(": ")
        text[key] = json.loads(value)
    data.pop("manifest.wall_time")
    text.pop("manifest.wall_time")
    text.pop("manifest.params.format", None)
    assert text == data


def test_scaling_text_has_table():
    code, out, _ = call("scaling", "--generator", "lattice", "--sizes", "10,20", "--format", "text")
    assert code == 0
    assert out.splitlines()[0].split()[:2] == ["n", "count"]
    assert "288" in out


def test_output_file(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = call("laman", "--graph", "builtin:k33", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["full_ok"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rigidlab", "laman", "--graph", "builtin:triangle"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count_ok"]
