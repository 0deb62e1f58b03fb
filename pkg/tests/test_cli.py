import json

import pytest

from elliptic_blocks.cli import main
from elliptic_blocks.corpus import fixture_text


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code = main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name in ("G1", "G2", "G3", "special_pair"):
        p = tmp_path / f"{name.lower()}.json"
        p.write_text(fixture_text(name))
        paths[name] = str(p)
    return paths


def test_appendix_verify(capsys):
    code, rep = run_json(capsys, "appendix", "verify")
    assert code == 0 and rep["exit_status"] == 0
    assert all(r["passed"] for r in rep["results"])


def test_appendix_text_output(capsys):
    code, out = run(capsys, "appendix", "verify")
    assert code == 0
    assert "PASS  G1.eigenvector" in out and "FAIL" not in out


def test_appendix_export(capsys, tmp_path):
    code, rep = run_json(capsys, "appendix", "export", "--out", str(tmp_path / "fx"))
    assert code == 0
    assert (tmp_path / "fx" / "g3.json").read_text() == fixture_text("G3")


def test_reports_are_byte_identical(capsys, files):
    runs = []
    for _ in range(2):
        main(["finiteness", "--decorated", files["special_pair"], "--json"])
        main(["plan", "--degree", "300", "--genus", "3", "--json"])
        main(["check", "--graph", files["G2"], "--json"])
        runs.append(capsys.readouterr().out)
    assert runs[0] == runs[1]


def test_check_block(capsys, files):
    code, rep = run_json(capsys, "check", "--graph", files["G1"])
    assert code == 0
    assert {r["check"] for r in rep["results"]} >= {"eigenvector", "boundary_edge"}


def test_check_failure_has_witness(capsys, tmp_path, files):
    doc = json.loads(fixture_text("G1"))
    doc["vertices"][2]["lambda"] = 5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, rep = run_json(capsys, "check", "--graph", str(bad))
    assert code == 1
    failed = [r for r in rep["results"] if not r["passed"]]
    assert failed and all(r.get("witnesses") for r in failed)


def test_prime_conflict_is_input_error(capsys, files):
    code, rep = run_json(capsys, "check", "--graph", files["G1"], "--prime", "29")
    assert code == 2
    assert "error" in rep["data"]


@pytest.mark.parametrize("text", ["{", '{"vertices": [], "edges": []}',
                                  '{"vertices": [{"id": "a"}], "edges": [], "bogus": 1}'])
def test_bad_input_exits_2(capsys, tmp_path, text):
    p = tmp_path / "x.json"
    p.write_text(text)
    code, rep = run_json(capsys, "rational-check", "--graph", str(p))
    assert code == 2 and rep["exit_status"] == 2


def test_missing_file_exits_2(capsys, tmp_path):
    code, rep = run_json(capsys, "solve", "--graph", str(tmp_path / "nope.json"), "--prime", "23")
    assert code == 2


def test_solve(capsys, files):
    code, rep = run_json(capsys, "solve", "--graph", files["G1"])
    assert code == 0
    assert rep["data"]["dimension"] == 2


def test_rational_check_witness(capsys, tmp_path):
    import networkx as nx

    h = nx.petersen_graph()
    doc = {"vertices": [{"id": str(v)} for v in h.nodes],
           "edges": [{"u": str(u), "v": str(v)} for u, v in h.edges]}
    p = tmp_path / "petersen.json"
    p.write_text(json.dumps(doc))
    code, rep = run_json(capsys, "rational-check", "--graph", str(p))
    assert code == 1
    (res,) = [r for r in rep["results"] if r["check"] == "rational_triviality"]
    assert res["witnesses"] and any(res["witnesses"][0].values())


def test_finiteness_special_pair(capsys, files):
    code, rep = run_json(capsys, "finiteness", "--decorated", files["special_pair"])
    assert code == 0
    first = rep["data"]["branches"][0]
    assert first["kind"] == "INFINITE" and first["rank"] == 2 and first["variables"] == 3


def test_reduce_reports_unreducible(capsys, files):
    code, rep = run_json(capsys, "reduce", "--decorated", files["special_pair"])
    assert code == 1
    assert rep["results"][0]["witnesses"]


def test_make_h_then_insert(capsys, files, tmp_path):
    h = tmp_path / "h2.json"
    code, rep = run_json(capsys, "make-h", "--block", files["G2"], "--out", str(h))
    assert code == 0 and rep["data"]["edges"] == 19 and rep["data"]["betti"] == 0
    out = tmp_path / "joined.json"
    code, rep = run_json(capsys, "insert", "--host", files["G1"], "--site", "0,1",
                         "--h", str(h), "--out", str(out))
    assert code == 0
    assert (rep["data"]["edges"], rep["data"]["betti"]) == (29, 1)
    code, rep = run_json(capsys, "check", "--graph", str(out))
    assert code == 0


def test_insert_bad_site(capsys, files):
    code, rep = run_json(capsys, "insert", "--host", files["G1"], "--site", "0,5",
                         "--h", files["G2"])
    assert code == 1
    assert rep["results"][0]["witnesses"]


def test_plan_unreachable(capsys):
    code, rep = run_json(capsys, "plan", "--degree", "169", "--genus", "1")
    assert code == 1
    assert rep["data"]["plan"] == "UNREACHABLE"
    assert rep["results"][0]["witnesses"][0]["unrepresentable_remainder"] == 169


def test_plan_replay(capsys):
    code, rep = run_json(capsys, "plan", "--degree", "256", "--genus", "2", "--replay")
    assert code == 0
    assert all(r["passed"] for r in rep["results"])
    assert rep["data"]["stated_bound"] == 256


def test_search_seed_from_env(capsys, monkeypatch):
    monkeypatch.setenv("ELLIPTIC_BLOCKS_SEED", "17")
    code, rep = run_json(capsys, "search", "--prime", "23", "--max-vertices", "12",
                         "--cycles-only")
    assert code == 0
    assert rep["data"]["seed"] == 17
    assert [b["name"] for b in rep["data"]["blocks"]] == ["C11[r=2]"]
    monkeypatch.setenv("ELLIPTIC_BLOCKS_SEED", "x")
    code, _ = run_json(capsys, "search", "--prime", "23", "--max-vertices", "12")
    assert code == 2


def test_search_writes_blocks(capsys, tmp_path):
    code, rep = run_json(capsys, "search", "--prime", "7", "--max-vertices", "12",
                         "--cycles-only", "--out-dir", str(tmp_path))
    assert code == 0
    for b in rep["data"]["blocks"]:
        code, check = run_json(capsys, "check", "--graph", b["file"])
        assert code == 0


def test_figures_are_written(capsys, files, tmp_path):
    figs = tmp_path / "figs"
    code, rep = run_json(capsys, "appendix", "verify", "--figures", str(figs))
    assert code == 0
    assert {p.name for p in figs.iterdir()} == {"G1.png", "G2.png", "G3.png",
                                               "special_pair.png"}
    code, rep = run_json(capsys, "plan", "--degree", "300", "--genus", "3",
                         "--figures", str(figs))
    assert (figs / "reachability.png").stat().st_size > 0
    code, rep = run_json(capsys, "make-h", "--block", files["G1"], "--figures", str(figs))
    assert rep["figures"]
