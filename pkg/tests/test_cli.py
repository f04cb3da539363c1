import json

import pytest

from conftest import neg_cycle
from signedcut.cli import main
from signedcut.graph import dump_graph, load_graph, verify_dsplit


@pytest.fixture
def k5(tmp_path):
    path = tmp_path / "k5.sg"
    assert main(["generate", "--family", "negative-clique", "--n", "5", "--out", str(path)]) == 0
    return path


def test_generate_k5(k5):
    g = load_graph(k5.read_text())
    assert g.n == 5 and g.m == 10


def test_generate_even_clique_fails(capsys):
    assert main(["generate", "--family", "negative-clique", "--n", "4"]) == 2
    assert "odd" in capsys.readouterr().err


def test_generate_dsplit(tmp_path):
    out = tmp_path / "ds.sg"
    main(["generate", "--family", "dsplit", "--d", "2", "--k-size", "6", "--i-size", "9", "--seed", "7",
          "--out", str(out)])
    part = json.loads((tmp_path / "ds.sg.partition.json").read_text())
    g = load_graph(out.read_text())
    assert verify_dsplit(g, part["cliques"][0], part["independent"][0], 2) == []


def test_solve(k5, tmp_path, capsys):
    assert main(["solve", str(k5), "--k", "1"]) == 1
    assert json.loads(capsys.readouterr().out)["verdict"] == "NO"
    edge = tmp_path / "e.sg"
    edge.write_text("p sgraph 2 1\ne 0 1 -\n")
    assert main(["solve", str(edge), "--k", "1"]) == 0


def test_solve_cap(tmp_path, capsys):
    big = tmp_path / "big.sg"
    assert main(["generate", "--family", "random-signed", "--n", "30", "--p-edge", "0.1", "--out", str(big)]) == 0
    assert main(["solve", str(big), "--k", "1"]) == 2
    assert "cap" in capsys.readouterr().err


def test_solve_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.sg"
    bad.write_text("p sgraph 2 1\ne 0 0 -\n")
    assert main(["solve", str(bad), "--k", "1"]) == 2
    assert "line 2" in capsys.readouterr().err


def test_kernelize_k5(k5, capsys):
    assert main(["kernelize", str(k5), "--k", "1"]) == 1
    rec = json.loads(capsys.readouterr().out)
    assert rec["schema"] == 1
    assert rec["report"]["kernel"]["n"] == 1
    assert [s["rule"] for s in rec["report"]["trace"]] == ["R8", "R8"]
    assert (k5.parent / "k5.kernel.sg").exists()


def test_kernelize_c5(tmp_path):
    path = tmp_path / "c5.sg"
    path.write_text(dump_graph(neg_cycle(5)))
    assert main(["kernelize", str(path), "--k", "1"]) == 0


def test_kernelize_linear(tmp_path):
    out = tmp_path / "ds.sg"
    main(["generate", "--family", "dsplit", "--d", "2", "--k-size", "4", "--i-size", "8", "--seed", "1",
          "--out", str(out)])
    assert load_graph(out.read_text()).n == 12
    assert main(["kernelize", str(out), "--k", "1", "--linear", "--d", "2",
                 "--class", "dsplit", "--partition", str(out) + ".partition.json"]) == 0


def test_verify_corpus_and_corruption(k5, capsys):
    main(["kernelize", str(k5), "--k", "1"])
    assert main(["verify", str(k5.parent), "--jobs", "1"]) == 0
    rec_path = k5.parent / "k5.run.json"
    rec = json.loads(rec_path.read_text())
    rec["report"]["trace"][0]["removed"] = [3, 4]
    rec_path.write_text(json.dumps(rec))
    capsys.readouterr()
    assert main(["verify", str(k5.parent), "--jobs", "1"]) == 1
    assert "replay mismatch" in capsys.readouterr().out


def test_verify_empty(tmp_path, capsys):
    assert main(["verify", str(tmp_path)]) == 0
    assert "cases=0" in capsys.readouterr().out


def test_usage_error():
    assert main(["frobnicate"]) == 2
