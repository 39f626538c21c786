from __future__ import annotations

import csv
import io
import json

import pytest

from heavytile.cli import VALIDATORS, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert main(["gen", "random-mindeg", "--n", "64", "--mu", "1/10", "--seed", "1", "-o", str(d / "g.txt")]) == 0
    assert main(["gen", "random", "--n", "12", "--seed", "7", "-o", str(d / "small.txt")]) == 0
    assert main(["gen", "extremal", "--n", "8", "--r", "4", "--t", "1/2", "-o", str(d / "e.txt")]) == 0
    (d / "p.txt").write_text(" ".join(map(str, range(32))) + "\n" + " ".join(map(str, range(32, 64))) + "\n")
    return d


def test_extremal_has_no_factor(files, capsys):
    code, out, err = run(capsys, "oracle", "factor", files / "e.txt")
    assert code == 1 and "no factor" in err
    assert json.loads(out)["answer"] is False


def test_gen_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(capsys, "gen", "random", "--n", "12", "--seed", "7", "-o", a)[0] == 0
    assert run(capsys, "gen", "random", "--n", "12", "--seed", "7", "-o", b)[0] == 0
    assert a.read_text() == b.read_text()
    run(capsys, "gen", "random", "--n", "12", "--seed", "8", "-o", b)
    assert a.read_text() != b.read_text()


EMITTERS = {
    "degree": ("g.txt", ["degree", "--mu", "1/10"]),
    "tiling": ("g.txt", ["tile", "--mu", "1/10"]),
    "reach-certificate": ("g.txt", ["reach", "certify", "--u", "0", "--v", "1", "--m", "1"]),
    "two-from-three": ("g.txt", ["reach", "two-from-three", "--triple", "0,1,2"]),
    "reachability-partition": ("g.txt", ["reach", "partition", "--m", "1", "--seed", "0"]),
    "absorber": ("g.txt", ["absorb", "build", "--S", "0,1,2,3", "--m", "1"]),
    "absorbing-set": ("g.txt", ["absorb", "build-set", "--gamma", "1/2", "--xi", "1/16", "--m", "1", "--seed", "0"]),
    "robust": ("g.txt", ["lattice", "robust", "--partition", "{p}", "--vector", "2,2", "--m", "0"]),
    "transferral": ("g.txt", ["lattice", "transferral", "--partition", "{p}", "--m", "0"]),
    "connector": ("g.txt", ["lattice", "merge", "--partition", "{p}", "--m", "6", "--x", "10", "--y", "40"]),
    "colors": ("g.txt", ["reduce", "quantize", "--p", "4"]),
    "reduced-weights": ("g.txt", ["reduce", "weights", "--p", "4", "--partition", "{p}"]),
    "reduced-degree-report": ("g.txt", ["reduce", "degree-report", "--p", "4", "--partition", "{p}", "--d", "0,0,0,0"]),
    "pipeline": ("g.txt", ["pipeline", "--seed", "0"]),
    "oracle-factor": ("small.txt", ["oracle", "factor"]),
    "oracle-maxtile": ("e.txt", ["oracle", "maxtile"]),
    "oracle-connector": ("small.txt", ["oracle", "connector", "--u", "0", "--v", "1"]),
}


def test_every_validator_has_an_emitter():
    assert set(EMITTERS) == set(VALIDATORS)


@pytest.mark.parametrize("kind", sorted(EMITTERS))
def test_validate_replays_emitted_output(kind, files, capsys):
    graph, argv = EMITTERS[kind]
    argv = [a.replace("{p}", str(files / "p.txt")) for a in argv]
    cert = files / f"{kind}.json"
    code, _, err = run(capsys, *argv, files / graph, "-o", cert)
    doc = json.loads(cert.read_text())
    assert doc["kind"] == kind
    if kind == "oracle-factor":
        assert code in (0, 1)
    else:
        assert code == 0, err
    code, out, err = run(capsys, "validate", files / graph, cert)
    assert code == 0, err
    assert json.loads(out) == {"kind": "validation", "of": kind, "valid": True, "violations": []}


def test_tampered_absorber_names_invariant(files, capsys):
    cert = files / "ab.json"
    run(capsys, "absorb", "build", files / "g.txt", "--S", "0,1,2,3", "--m", "1", "-o", cert)
    doc = json.loads(cert.read_text())
    blocks = doc["factor_with"]
    blocks[1] = blocks[0]
    cert.write_text(json.dumps(doc))
    code, out, err = run(capsys, "validate", files / "g.txt", cert)
    assert code == 1
    assert "covered twice" in err and json.loads(out)["valid"] is False


def test_tampered_tiling_is_rejected(files, capsys):
    cert = files / "tile.json"
    run(capsys, "tile", files / "g.txt", "-o", cert)
    doc = json.loads(cert.read_text())
    for key, bad in (("rho", "0"), ("rho_num", 0)):
        forged = dict(doc, **{key: bad})
        cert.write_text(json.dumps(forged))
        code, _, err = run(capsys, "validate", files / "g.txt", cert)
        assert code == 1 and "rho" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "random", "--n", "12"],
        ["pipeline", "{g}"],
        ["scan", "--n", "8", "--mu-grid", "0"],
        ["degree", "{g}", "--t", "1/3"],
        ["reduce", "quantize", "{g}", "--p", "7"],
        ["degree", "{missing}"],
        ["degree", "{g}", "--bogus"],
        ["validate", "{g}", "{g}"],
        ["tile", "{g}", "--jobs", "0"],
        ["oracle", "factor", "{g}", "--cap", "12"],
    ],
)
def test_usage_errors_exit_2(argv, files, capsys):
    subs = {"{g}": str(files / "g.txt"), "{missing}": str(files / "nope.txt")}
    code, _, err = run(capsys, *[subs.get(a, a) for a in argv])
    assert code == 2 and err


def test_graph_from_stdin(files, capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO((files / "e.txt").read_text()))
    code, out, _ = run(capsys, "degree", "--format", "text")
    assert code == 0 and "min_degree: 4\n" in out


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--n", "8", "--family", "extremal", "--mu-grid=-1/4,0", "--seed", "0", "--samples", "2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["mu"] for r in rows] == ["-1/4", "-1/4", "0", "0"]
    assert [r["success"] for r in rows] == ["0", "0", "1", "1"]
