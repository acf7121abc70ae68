import json
import os

from mazelab.cli import main
from mazelab.labycat import Maze, MazeHom, quadratic_generators
from mazelab.msetcat import MultHom, Multation, identity_multation, mset2_generators
from mazelab.multisets import MultiSet

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fx(name):
    return os.path.join(FIXTURES, name)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compose_laby_n_table_cell(capsys):
    code, out, _ = run(capsys, "compose", "--category", "laby_n",
                       "--degree", "2", fx("A.json"), fx("B.json"))
    assert code == 0
    hom = MazeHom.from_json(json.loads(out))
    gens = quadratic_generators()
    assert hom == MazeHom.of(gens["I2"]) + MazeHom.of(gens["S"])


def test_compose_mset(capsys):
    code, out, _ = run(capsys, "compose", "--category", "mset",
                       fx("alpha.json"), fx("beta.json"))
    assert code == 0
    hom = MultHom.from_json(json.loads(out))
    i12 = identity_multation(MultiSet(["1", "2"]))
    sigma = mset2_generators()["sigma"]
    assert hom == MultHom.from_terms(i12.dom, i12.cod,
                                     [(i12, 1), (sigma, 1)])


def test_compose_laby_seven_terms(capsys):
    code, out, _ = run(capsys, "compose", "--category", "laby",
                       fx("P.json"), fx("Q.json"))
    assert code == 0
    hom = MazeHom.from_json(json.loads(out))
    assert len(hom.comb) == 7
    assert sorted(m.size for m, _ in hom.comb) == [2, 2, 3, 3, 3, 3, 4]


def test_compose_domain_mismatch_exit_code(capsys):
    code, _, err = run(capsys, "compose", "--category", "laby",
                       fx("A.json"), fx("A.json"))
    assert code == 3
    assert "shape error" in err


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "compose", "--category", "laby",
                       str(bad), str(bad))
    assert code == 2
    assert "parse error" in err


def test_enumeration_limit_exit_code(tmp_path, capsys):
    fat1 = tmp_path / "fat1.json"
    fat1.write_text(json.dumps({
        "dom": ["x"], "cod": ["y"],
        "passages": [[["x", "y", "1"], 10]],
    }))
    fat2 = tmp_path / "fat2.json"
    fat2.write_text(json.dumps({
        "dom": ["y"], "cod": ["z"],
        "passages": [[["y", "z", "1"], 10]],
    }))
    code, _, err = run(capsys, "compose", "--category", "laby",
                       str(fat2), str(fat1))
    assert code == 4
    assert "resource limit" in err


def test_normalize(capsys):
    code, out, _ = run(capsys, "normalize", "--kind", "numerical",
                       "--degree", "3", fx("parallel21.json"))
    assert code == 0
    hom = MazeHom.from_json(json.loads(out))
    from mazelab.labycat import Passage

    double = Maze(("x",), ("y",), [(Passage("x", "y", 1), 2)])
    triple = Maze(("x",), ("y",), [(Passage("x", "y", 1), 3)])
    assert hom == MazeHom.from_terms(("x",), ("y",),
                                     [(double, 2), (triple, 1)])


def test_ariadne_and_theseus(capsys):
    code, out, _ = run(capsys, "ariadne", "--degree", "2", fx("C.json"))
    assert code == 0
    data = json.loads(out)
    assert len(data["entries"]) == 1
    hom = MultHom.from_json(data["entries"][0][2])
    iota11 = identity_multation(MultiSet(["1", "1"]))
    assert hom == MultHom.of(iota11, 2)

    code, out, _ = run(capsys, "theseus", "--degree", "2", fx("alpha.json"))
    assert code == 0
    hom = MazeHom.from_json(json.loads(out))
    assert hom == MazeHom.of(quadratic_generators()["A"])


def test_xi(capsys):
    code, out, _ = run(capsys, "xi", fx("corr_double.json"))
    assert code == 0
    maze = Maze.from_json(json.loads(out))
    from mazelab.labycat import Passage

    assert maze == Maze(("x",), ("y",), [(Passage("x", "y", 1), 2)])
    # and back
    code, out2, _ = run(capsys, "xi", "--inverse", fx("C.json"))
    assert code == 0
    span = json.loads(out2)
    assert len(span["middle"]) == 2


def test_tables(capsys):
    code, out, _ = run(capsys, "tables", "--degree", "2")
    assert code == 0
    assert "I+S" in out
    assert "2A" in out
    assert "2B" in out
    assert "2C" in out
    assert "--" in out
    assert "i+s" in out
    assert "2i" in out


def test_tables_wrong_degree(capsys):
    code, _, err = run(capsys, "tables", "--degree", "3")
    assert code == 2


def test_eval_laby_frobenius(capsys):
    code, out, _ = run(capsys, "eval", "--kind", "laby",
                       fx("frobenius_laby.json"), fx("m3.json"))
    assert code == 0
    data = json.loads(out)
    assert data["matrix"] == [[1]]
    assert data["cod_orders"] == [2]
    assert data["dom_blocks"] == [[], [1]]


def test_eval_laby_identity(capsys):
    code, out, _ = run(capsys, "eval", "--kind", "laby",
                       fx("identity_laby.json"), fx("m22.json"))
    assert code == 0
    data = json.loads(out)
    assert data["matrix"] == [[1, 2], [0, 1]]


def test_eval_mset_square(capsys):
    code, out, _ = run(capsys, "eval", "--kind", "mset",
                       fx("square_mset.json"), fx("m3.json"))
    assert code == 0
    data = json.loads(out)
    assert data["matrix"] == [[9]]


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "tables")
    assert code == 0
    assert "table1: pass" in out
    assert "table2: pass" in out


def test_verify_lemmas(capsys):
    code, out, _ = run(capsys, "verify", "lemmas", "--seed", "3",
                       "--trials", "40")
    assert code == 0
    assert "counting_lemmas: pass" in out


def test_deterministic_output(capsys):
    _, first, _ = run(capsys, "compose", "--category", "laby_n",
                      "--degree", "2", fx("A.json"), fx("B.json"))
    _, second, _ = run(capsys, "compose", "--category", "laby_n",
                       "--degree", "2", fx("A.json"), fx("B.json"))
    assert first == second


def test_pretty_format(capsys):
    code, out, _ = run(capsys, "compose", "--category", "laby_n",
                       "--degree", "2", "--format", "pretty",
                       fx("A.json"), fx("B.json"))
    assert code == 0
    assert "-(1)->" in out
    code, out, _ = run(capsys, "compose", "--category", "mset",
                       "--format", "pretty", fx("alpha.json"), fx("beta.json"))
    assert code == 0
    assert "[1 2]" in out


def test_normalize_homogeneous_rational_output(capsys):
    code, out, _ = run(capsys, "normalize", "--kind", "homogeneous",
                       "--degree", "3", fx("C.json"))
    assert code == 0
    hom = MazeHom.from_json(json.loads(out))
    assert all(maze.size == 3 for maze, _ in hom.comb)


def test_verify_reports_failures(capsys, monkeypatch):
    from mazelab import verify as verify_mod

    monkeypatch.setitem(verify_mod._CHECKS, "table1",
                        lambda seed, trials: ("table1", False, "forced"))
    code, out, _ = run(capsys, "verify", "tables")
    assert code == 1
    assert "table1: FAIL (forced)" in out


def test_fixture_roundtrips():
    # parse then print is the identity on every shipped fixture
    from mazelab.bridge import Correspondence
    from mazelab.functor_lab import (
        LabyModulePresentation,
        MSetModulePresentation,
    )

    loaders = {
        "A.json": Maze, "B.json": Maze, "C.json": Maze, "S.json": Maze,
        "P.json": Maze, "Q.json": Maze, "parallel21.json": Maze,
        "alpha.json": Multation, "beta.json": Multation,
        "sigma.json": Multation,
        "frobenius_laby.json": LabyModulePresentation,
        "identity_laby.json": LabyModulePresentation,
        "square_mset.json": MSetModulePresentation,
        "frobenius_mset.json": MSetModulePresentation,
        "corr_double.json": Correspondence,
    }
    for name, cls in loaders.items():
        with open(fx(name)) as fh:
            data = json.load(fh)
        obj = cls.from_json(data)
        again = cls.from_json(obj.to_json())
        if hasattr(obj, "table"):
            assert again.table == obj.table, name
        else:
            assert again == obj, name
