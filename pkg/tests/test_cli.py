import json

import pytest

from minfb.cli import main
from minfb.graph import format_ndfas

from helpers import graph, triangle


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_json(tmp_path, capsys):
    f = write(tmp_path, "t.ndfas", format_ndfas(triangle()))
    code, out, _ = run(capsys, "solve", "--input", f, "--k", "1", "--deterministic")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "solved" and doc["size"] == 1


def test_solve_no_solution(tmp_path, capsys):
    f = write(tmp_path, "t.ndfas", format_ndfas(triangle()))
    code, out, _ = run(capsys, "solve", "--input", f, "--k", "0", "--human")
    assert code == 1 and "no_solution" in out


def test_bad_input(tmp_path, capsys):
    f = write(tmp_path, "bad.ndfas", "p ndfas 2 1\na 1 1 0\n")
    code, _, err = run(capsys, "solve", "--input", f, "--k", "1")
    assert code == 2 and "loop" in err
    code, _, _ = run(capsys, "solve", "--input", str(tmp_path / "missing"), "--k", "1")
    assert code == 2


def test_hint_precondition_exit_code(tmp_path, capsys):
    f = write(tmp_path, "z.ndfas", format_ndfas(graph(2, [(0, 1, 0), (1, 0, -1)])))
    code, _, err = run(capsys, "solve", "--input", f, "--k", "1", "--algorithm", "pm1-wplus")
    assert code == 2 and "weights" in err


def test_resource_exit_code(tmp_path, capsys):
    g = graph(4, [(0, 1, -3), (1, 0, 2), (2, 3, -3), (3, 2, 2)])
    f = write(tmp_path, "r.ndfas", format_ndfas(g))
    code, _, err = run(capsys, "solve", "--input", f, "--k", "1", "--cap", "0.1")
    assert code == 3 and "oracle" in err


def test_system_input(tmp_path, capsys):
    doc = {"variables": ["x", "y"], "k": 1, "constraints": [
        {"pos": "x", "neg": "y", "rhs": -1}, {"pos": "y", "neg": "x", "rhs": -1}]}
    f = write(tmp_path, "s.json", json.dumps(doc))
    code, out, _ = run(capsys, "solve", "--input", f, "--format", "minfb-json")
    res = json.loads(out)
    assert code == 0 and res["blocker_rows"] == [0]
    x = res["assignment"]
    assert x["y"] - x["x"] <= -1


def test_verify(tmp_path, capsys):
    f = write(tmp_path, "t.ndfas", format_ndfas(triangle()))
    good = write(tmp_path, "good.json", json.dumps({"arcs": [2]}))
    assert run(capsys, "verify", "--input", f, "--solution", good, "--k", "1")[0] == 0
    bad = write(tmp_path, "bad.txt", "")
    assert run(capsys, "verify", "--input", f, "--solution", bad, "--k", "0")[0] == 1
    unknown = write(tmp_path, "u.txt", "9")
    assert run(capsys, "verify", "--input", f, "--solution", unknown)[0] == 2


@pytest.mark.parametrize("family,extra", [
    ("partition", ["--numbers", "1", "1", "2"]),
    ("mcclique", ["--coloring", "1", "1", "2", "--edges", "1-3"]),
])
def test_generate(tmp_path, capsys, family, extra):
    out = tmp_path / "g.ndfas"
    code, stdout, _ = run(capsys, "generate", family, *extra, "--out", str(out))
    assert code == 0 and out.exists()
    meta = json.loads(out.with_suffix(".meta.json").read_text())
    assert meta["family"] == family and meta["expected"] == "yes"
    code, stdout, _ = run(capsys, "solve", "--input", str(out), "--k", str(meta["budget"]))
    assert code == 0


def test_generate_from_graph(tmp_path, capsys):
    src = write(tmp_path, "dag.ndfas", format_ndfas(graph(3, [(0, 2, 0), (0, 1, 0), (1, 2, 0)])))
    out = tmp_path / "c.ndfas"
    code, _, _ = run(capsys, "generate", "bedc-chain", "--input", src, "--s", "1", "--t", "3",
                     "--k", "1", "--ell", "1", "--out", str(out))
    assert code == 0
    assert run(capsys, "solve", "--input", str(out), "--k", "1")[0] == 0
    code, _, err = run(capsys, "generate", "dfas", "--out", str(out))
    assert code == 2 and "--input" in err
    code, _, err = run(capsys, "generate", "partition", "--numbers", "1", "2", "--out", str(out))
    assert code == 2 and "odd" in err


def test_decompose(tmp_path, capsys):
    f = write(tmp_path, "t.ndfas", format_ndfas(triangle()))
    code, out, _ = run(capsys, "decompose", "--input", f)
    assert code == 0 and out.startswith("s td 1 3 3")
