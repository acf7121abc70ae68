import random
from fractions import Fraction

import pytest

from mazelab.bridge import (
    AriadneMatrix,
    Correspondence,
    all_pure_mazes_on,
    ariadne_hom,
    ariadne_maze,
    ariadne_object,
    roundtrip_check,
    theseus_multation,
    xi_correspondence,
    xi_inverse,
)
from mazelab.errors import DomainMismatchError
from mazelab.labycat import (
    Maze,
    MazeHom,
    Passage,
    maze_compose,
    normalize_homogeneous,
    normalize_numerical,
    quadratic_generators,
    skeleton,
)
from mazelab.msetcat import MultHom, Multation, identity_multation, mset2_generators
from mazelab.multisets import MultiSet


def ms(*names):
    return MultiSet(list(names))


def test_ariadne_object():
    assert ariadne_object(skeleton(1), 2) == [ms("1", "1")]
    assert ariadne_object(skeleton(2), 2) == [ms("1", "2")]
    assert ariadne_object(skeleton(3), 2) == []
    assert ariadne_object(skeleton(2), 3) == [ms("1", "1", "2"), ms("1", "2", "2")]


def test_ariadne_on_quadratic_generators():
    gens = quadratic_generators()
    mgens = mset2_generators()
    got_a = ariadne_maze(gens["A"], 2)
    assert got_a.nonzero_keys() == [(ms("1", "2"), ms("1", "1"))]
    assert got_a.entry(ms("1", "2"), ms("1", "1")) == MultHom.of(mgens["alpha"])

    got_b = ariadne_maze(gens["B"], 2)
    assert got_b.entry(ms("1", "1"), ms("1", "2")) == MultHom.of(mgens["beta"])

    got_s = ariadne_maze(gens["S"], 2)
    assert got_s.entry(ms("1", "2"), ms("1", "2")) == MultHom.of(mgens["sigma"])

    got_c = ariadne_maze(gens["C"], 2)
    iota11 = identity_multation(ms("1", "1"))
    assert got_c.entry(ms("1", "1"), ms("1", "1")) == MultHom.of(iota11, 2)


def test_ariadne_kills_oversized_mazes():
    fan3 = Maze.pure([("1", "1"), ("1", "2"), ("1", "3")])
    assert ariadne_maze(fan3, 2).is_zero()


def test_ariadne_labels_enter_as_powers():
    maze = Maze(("x",), ("y",), [Passage("x", "y", 3)])
    got = ariadne_maze(maze, 2)
    mu = Multation(ms("x", "x"), ms("y", "y"), [(("x", "y"), 2)])
    assert got.entry(ms("y", "y"), ms("x", "x")) == MultHom.of(mu, 9)


def test_ariadne_functoriality_on_table():
    # push the degree-2 multiplication table through the translation
    gens = quadratic_generators()
    n = 2
    for left, right in [("A", "B"), ("B", "A"), ("A", "C"), ("C", "B"),
                        ("C", "C"), ("S", "A"), ("B", "S"), ("S", "S")]:
        p, q = gens[left], gens[right]
        lhs = ariadne_maze(p, n).compose(ariadne_maze(q, n))
        rhs = ariadne_hom(maze_compose(p, q), n)
        assert lhs == rhs, (left, right)


def random_pure_maze(rng, universe, max_passages=3):
    pairs = [(x, y) for x in universe for y in universe]
    size = rng.randint(1, max_passages)
    return Maze.pure([rng.choice(pairs) for _ in range(size)])


def test_ariadne_functoriality_random():
    rng = random.Random(1234)
    universe = skeleton(3)
    for n in (2, 3):
        for _ in range(50):
            q = random_pure_maze(rng, universe)
            # p must start where q ends
            pairs = [(y, z) for y in q.cod for z in universe]
            size = rng.randint(len(q.cod), 3)
            if size < len(q.cod):
                continue
            combo = [rng.choice(pairs) for _ in range(size)]
            if {a for a, _ in combo} != set(q.cod):
                continue
            p = Maze.pure(combo, q.cod, {b for _, b in combo})
            lhs = ariadne_maze(p, n).compose(ariadne_maze(q, n))
            rhs = ariadne_hom(maze_compose(p, q), n)
            assert lhs == rhs


def test_ariadne_respects_label_splitting():
    # the label-additivity rewriting is invisible after translation
    rng = random.Random(7)
    from mazelab.labycat import expand_label

    for _ in range(20):
        a = rng.randint(-2, 3)
        b = rng.randint(-2, 3)
        base = Maze(("x",), ("y", "z"),
                    [Passage("x", "y", a + b), Passage("x", "z", 1)])
        target = base.instances()[0]
        expanded = expand_label(base, target, [a, b])
        for n in (2, 3):
            lhs = ariadne_maze(base, n)
            rhs = ariadne_hom(expanded, n)
            assert lhs == rhs, (a, b, n)


def test_ariadne_respects_numerical_normal_form():
    rng = random.Random(21)
    universe = skeleton(2)
    for n in (2, 3):
        for _ in range(25):
            maze = random_pure_maze(rng, universe)
            labelled = Maze(maze.dom, maze.cod,
                            [(Passage(p.src, p.dst, rng.randint(-2, 3)), m)
                             for p, m in maze.passages])
            lhs = ariadne_maze(labelled, n)
            rhs = ariadne_hom(
                normalize_numerical(MazeHom.of(labelled), n), n)
            assert lhs == rhs


def test_ariadne_respects_scaling():
    rng = random.Random(3)
    universe = skeleton(2)
    for n in (2, 3):
        for a in (-1, 2, 3):
            for _ in range(10):
                maze = random_pure_maze(rng, universe)
                lhs = ariadne_maze(maze.relabel_all(a), n)
                rhs = ariadne_maze(maze, n).scale(Fraction(a) ** n)
                assert lhs == rhs


def test_theseus_values():
    i12 = identity_multation(ms("1", "2"))
    assert theseus_multation(i12, 2) == MazeHom.identity(skeleton(2))

    i11 = identity_multation(ms("1", "1"))
    c = quadratic_generators()["C"]
    assert theseus_multation(i11, 2) == MazeHom.of(c, Fraction(1, 2))

    alpha = mset2_generators()["alpha"]
    assert theseus_multation(alpha, 2) == MazeHom.of(quadratic_generators()["A"])

    with pytest.raises(DomainMismatchError):
        theseus_multation(i11, 3)


def test_theseus_lands_in_homogeneous_normal_form():
    # the image of a multation is already an exactly-n pure maze
    for n in (2, 3):
        for a in ariadne_object(skeleton(2), n):
            mu = identity_multation(a)
            hom = theseus_multation(mu, n)
            assert normalize_homogeneous(hom, n) == hom


def test_roundtrip_small():
    assert roundtrip_check(skeleton(1), 1)
    assert roundtrip_check(skeleton(2), 2)
    assert roundtrip_check(skeleton(3), 2)


def test_roundtrip_exhaustive_degree_3():
    for size in (1, 2, 3):
        for n in (1, 2, 3):
            assert roundtrip_check(skeleton(size), n), (size, n)


def test_xi_identity_and_folds():
    ident = Correspondence(("x",), ("u",), ("x",), {"u": "x"}, {"u": "x"})
    assert xi_correspondence(ident) == Maze.identity(("x",))

    doubled = Correspondence(("y",), ("u1", "u2"), ("x",),
                             {"u1": "y", "u2": "y"}, {"u1": "x", "u2": "x"})
    got = xi_correspondence(doubled)
    assert got == Maze(("x",), ("y",), [(Passage("x", "y", 1), 2)])

    fold = Correspondence(("y",), ("u1", "u2"), ("x1", "x2"),
                          {"u1": "y", "u2": "y"},
                          {"u1": "x1", "u2": "x2"})
    got = xi_correspondence(fold)
    assert got == Maze.pure([("x1", "y"), ("x2", "y")])


def test_xi_rejects_non_surjective():
    with pytest.raises(ValueError):
        Correspondence(("y1", "y2"), ("u",), ("x",), {"u": "y1"}, {"u": "x"})


def all_surjections(src, dst):
    from itertools import product

    out = []
    for values in product(dst, repeat=len(src)):
        if set(values) == set(dst):
            out.append(dict(zip(src, values)))
    return out


def test_xi_bijection_exhaustive():
    # all spans with middle size <= 3 between sets of size <= 2, up to
    # middle renaming, against all pure mazes with <= 3 passages
    for dsize in (1, 2):
        for csize in (1, 2):
            dom = [f"x{i}" for i in range(dsize)]
            cod = [f"y{i}" for i in range(csize)]
            images = {}
            for msize in range(1, 4):
                middle = [f"u{i}" for i in range(msize)]
                for left in all_surjections(middle, cod):
                    for right in all_surjections(middle, dom):
                        c = Correspondence(cod, middle, dom, left, right)
                        images.setdefault(xi_correspondence(c), set()).add(
                            tuple(sorted(c.fiber_counts().items())))
            # injectivity on canonical forms: each maze has one fiber form
            for maze, forms in images.items():
                assert len(forms) == 1
            # surjectivity: every pure maze with exact endpoints is hit
            from mazelab.labycat import pure_mazes_between

            expected = set()
            for s in (1, 2, 3):
                expected.update(pure_mazes_between(dom, cod, [s]))
            assert set(images) == expected
            # and xi_inverse is a section
            for maze in expected:
                assert xi_correspondence(xi_inverse(maze)) == maze


def test_ariadne_matrix_json_roundtrip():
    gens = quadratic_generators()
    got = ariadne_maze(gens["A"], 2)
    assert AriadneMatrix.from_json(got.to_json()) == got


def test_all_pure_mazes_on():
    mazes = all_pure_mazes_on(skeleton(2), 2)
    gens = quadratic_generators()
    assert gens["S"] in mazes
    assert gens["C"] in mazes
    assert gens["I2"] in mazes
    # every maze has exactly 2 passages and valid endpoints
    for m in mazes:
        assert m.size == 2
