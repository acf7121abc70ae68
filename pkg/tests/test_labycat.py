import random
from fractions import Fraction

import pytest

from mazelab.errors import DomainMismatchError
from mazelab.labycat import (
    Maze,
    MazeHom,
    Passage,
    box_product,
    collapse_parallel,
    compose_in_laby_n,
    expand_label,
    laby2_table,
    maze_compose,
    maze_hom_compose,
    normalize_homogeneous,
    normalize_numerical,
    pure_mazes_between,
    quadratic_generators,
    skeleton,
    splitting_idempotents,
    validate_maze,
)
from mazelab.scalars import binomial


def parallel_pure(count, dom=("x",), cod=("y",)):
    return Maze(dom, cod, [(Passage(dom[0], cod[0], 1), count)])


def test_validate_maze():
    assert validate_maze(Maze((), ()))
    assert not validate_maze(Maze(("x",), ("y",)))
    assert validate_maze(Maze.identity(skeleton(2)))
    stray = Maze(("x",), ("y",), [Passage("x", "z", 1)])
    assert not validate_maze(stray)


def test_box_product_worked_example():
    # Two fan mazes through a single middle point: all four passage pairs
    # compose, with labels multiplied in passing.
    a, b, c, d = 2, 3, 5, 7
    p = Maze(("z",), ("x", "y"), [Passage("z", "x", a), Passage("z", "y", b)])
    q = Maze(("x", "y"), ("z",), [Passage("x", "z", c), Passage("y", "z", d)])
    pairs = box_product(p, q)
    assert len(pairs) == 4
    composed = sorted(
        (qj.src, pi.dst, pi.label * qj.label) for (_, pi), (_, qj) in pairs)
    assert composed == [
        ("x", "x", a * c),
        ("x", "y", b * c),
        ("y", "x", a * d),
        ("y", "y", b * d),
    ]


def test_identity_box_product_size():
    i2 = Maze.identity(skeleton(2))
    assert len(box_product(i2, i2)) == 2
    c = quadratic_generators()["C"]
    assert len(box_product(c, c)) == 4


def test_worked_composition_seven_terms():
    a, b, c, d = 2, 3, 5, 7  # distinct labels keep the bookkeeping visible
    p = Maze(("z",), ("x", "y"), [Passage("z", "x", a), Passage("z", "y", b)])
    q = Maze(("x", "y"), ("z",), [Passage("x", "z", c), Passage("y", "z", d)])
    got = maze_compose(p, q)
    pac = Passage("x", "x", a * c)
    pbc = Passage("x", "y", b * c)
    pad = Passage("y", "x", a * d)
    pbd = Passage("y", "y", b * d)
    xy = ("x", "y")
    full = Maze(xy, xy, [pac, pbc, pad, pbd])
    match1 = Maze(xy, xy, [pac, pbd])
    match2 = Maze(xy, xy, [pbc, pad])
    threes = [
        Maze(xy, xy, [pbc, pad, pbd]),
        Maze(xy, xy, [pac, pad, pbd]),
        Maze(xy, xy, [pac, pbc, pbd]),
        Maze(xy, xy, [pac, pbc, pad]),
    ]
    expected = MazeHom.from_terms(
        xy, xy, [(m, 1) for m in [full, match1, match2] + threes])
    assert got == expected
    assert len(got.comb) == 7
    sizes = sorted(m.size for m, _ in got.comb)
    assert sizes == [2, 2, 3, 3, 3, 3, 4]


def test_identity_laws():
    gens = quadratic_generators()
    for name in ["A", "B", "C", "S"]:
        m = gens[name]
        left = maze_compose(Maze.identity(m.cod), m)
        right = maze_compose(m, Maze.identity(m.dom))
        assert left == MazeHom.of(m)
        assert right == MazeHom.of(m)


def test_empty_maze_is_identity_of_empty_set():
    empty = Maze((), ())
    assert maze_compose(empty, empty) == MazeHom.of(empty)


def random_pure_maze(rng, max_side=3, max_passages=3):
    while True:
        nd = rng.randint(1, max_side)
        nc = rng.randint(1, max_side)
        if max(nd, nc) > max_passages:
            continue
        dom = [str(i + 1) for i in range(nd)]
        cod = [chr(ord("a") + i) for i in range(nc)]
        size = rng.randint(max(nd, nc), max_passages)
        options = [(x, y) for x in dom for y in cod]
        combo = [rng.choice(options) for _ in range(size)]
        maze = Maze.pure(combo, dom, cod)
        if validate_maze(maze):
            return maze


def test_associativity_random_triples():
    # Sizes are capped pairwise so the middle composites stay enumerable:
    # a q.r term can have |q||r| passages and meets p in the second step.
    rng = random.Random(42)
    for _ in range(25):
        size_r = rng.randint(1, 3)
        size_q = rng.randint(1, min(3, 5 - size_r))
        size_p = rng.randint(1, min(3, 5 - size_q))
        r = random_pure_maze(rng, max_passages=size_r)
        q = _random_maze_between(rng, r.cod, max_passages=size_q)
        p = _random_maze_between(rng, q.cod, max_passages=size_p)
        lhs = maze_hom_compose(MazeHom.of(p), maze_compose(q, r))
        rhs = maze_hom_compose(maze_compose(p, q), MazeHom.of(r))
        assert lhs == rhs


def _random_maze_between(rng, dom, max_side=2, max_passages=3):
    max_passages = max(max_passages, len(dom))
    nc = rng.randint(1, min(max_side, max_passages))
    cod = [f"w{i}" for i in range(nc)]
    options = [(x, y) for x in dom for y in cod]
    for _ in range(200):
        size = rng.randint(max(len(dom), nc), max_passages)
        combo = [rng.choice(options) for _ in range(size)]
        maze = Maze.pure(combo, dom, cod)
        if validate_maze(maze):
            return maze
    raise AssertionError("could not build a valid maze")


def test_expand_label_axiom_two_shape():
    p = Maze(("x",), ("y",), [Passage("x", "y", 5)])
    passage = p.instances()[0]
    got = expand_label(p, passage, [2, 3])
    expected = MazeHom.from_terms(
        ("x",), ("y",),
        [(Maze(("x",), ("y",), [Passage("x", "y", 2)]), 1),
         (Maze(("x",), ("y",), [Passage("x", "y", 3)]), 1),
         (Maze(("x",), ("y",), [Passage("x", "y", 2), Passage("x", "y", 3)]), 1)])
    assert got == expected
    assert expand_label(p, passage, [5]) == MazeHom.of(p)


def test_collapse_parallel_inclusion_exclusion():
    p = Maze(("x",), ("y",), [Passage("x", "y", 2), Passage("x", "y", 3)])
    group = p.instances()
    got = collapse_parallel(p, group)
    expected = MazeHom.from_terms(
        ("x",), ("y",),
        [(Maze(("x",), ("y",), [Passage("x", "y", 5)]), 1),
         (Maze(("x",), ("y",), [Passage("x", "y", 2)]), -1),
         (Maze(("x",), ("y",), [Passage("x", "y", 3)]), -1),
         (Maze(("x",), ("y",), [Passage("x", "y", 0)]), 1)])
    assert got == expected
    # A one-passage group keeps the signed zero-label term; it is the
    # normalization step that kills it, giving back the maze itself.
    single = Maze(("x",), ("y",), [Passage("x", "y", 7)])
    collapsed = collapse_parallel(single, single.instances())
    zeroed = Maze(("x",), ("y",), [Passage("x", "y", 0)])
    assert collapsed == MazeHom.of(single) - MazeHom.of(zeroed)
    assert normalize_numerical(collapsed, 1) == \
        normalize_numerical(MazeHom.of(single), 1)


def test_collapse_then_expand_roundtrip_mod_zero_labels():
    # Collapsing two parallel passages then re-expanding the summed label
    # returns the original plus terms that die under normalization.
    n = 4
    p = Maze(("x",), ("y",), [Passage("x", "y", 2), Passage("x", "y", 3)])
    collapsed = collapse_parallel(p, p.instances())
    rebuilt_terms = []
    for maze, coeff in collapsed.comb:
        lone = maze.instances()[0]
        if lone.label == 5:
            rebuilt_terms.append((expand_label(maze, lone, [2, 3]), coeff))
        else:
            rebuilt_terms.append((MazeHom.of(maze), coeff))
    total = MazeHom.zero(p.dom, p.cod)
    for hom, coeff in rebuilt_terms:
        total = total + hom.scale(coeff)
    assert normalize_numerical(total, n) == normalize_numerical(MazeHom.of(p), n)


def test_normalize_numerical_worked_instance():
    # Two parallel passages labelled 2 and 1 at degree 3.
    p = Maze(("x",), ("y",), [Passage("x", "y", 2), Passage("x", "y", 1)])
    got = normalize_numerical(MazeHom.of(p), 3)
    expected = MazeHom.from_terms(
        ("x",), ("y",),
        [(parallel_pure(2), 2), (parallel_pure(3), 1)])
    assert got == expected


def test_normalize_numerical_general_binomial_expansion():
    # Same shape for all integer labels a, b in [-2, 3], against the
    # directly-written double binomial sum.
    n = 3
    for a in range(-2, 4):
        for b in range(-2, 4):
            p = Maze(("x",), ("y",),
                     [(Passage("x", "y", a), 1), (Passage("x", "y", b), 1)]
                     if a != b else [(Passage("x", "y", a), 2)])
            got = normalize_numerical(MazeHom.of(p), n)
            terms = []
            for d1 in range(1, n):
                for d2 in range(1, n - d1 + 1):
                    coeff = binomial(a, d1) * binomial(b, d2)
                    if coeff:
                        terms.append((parallel_pure(d1 + d2), coeff))
            assert got == MazeHom.from_terms(("x",), ("y",), terms), (a, b)


def test_normalize_numerical_fixes_pure_and_kills_zero_labels():
    n = 3
    for maze in [parallel_pure(1), parallel_pure(2), Maze.identity(skeleton(2))]:
        assert normalize_numerical(MazeHom.of(maze), n) == MazeHom.of(maze)
    withzero = Maze(("x",), ("y",), [Passage("x", "y", 0), Passage("x", "y", 2)])
    assert normalize_numerical(MazeHom.of(withzero), n).is_zero()
    big = parallel_pure(4)
    assert normalize_numerical(MazeHom.of(big), n).is_zero()


def test_normalize_numerical_idempotent():
    rng = random.Random(5)
    for _ in range(20):
        maze = random_pure_maze(rng)
        labelled = Maze(maze.dom, maze.cod,
                        [(Passage(p.src, p.dst, rng.randint(-2, 3)), m)
                         for p, m in maze.passages])
        h = normalize_numerical(MazeHom.of(labelled), 3)
        assert normalize_numerical(h, 3) == h
        for m, _ in h.comb:
            assert m.is_pure() and m.size <= 3


def test_laby2_table():
    gens = quadratic_generators()
    table = laby2_table()
    i1 = MazeHom.of(gens["I1"])
    i2 = MazeHom.of(gens["I2"])
    assert table[("A", "B")] == i2 + MazeHom.of(gens["S"])
    assert table[("B", "A")] == MazeHom.of(gens["C"])
    assert table[("A", "C")] == MazeHom.of(gens["A"], 2)
    assert table[("C", "B")] == MazeHom.of(gens["B"], 2)
    assert table[("C", "C")] == MazeHom.of(gens["C"], 2)
    assert table[("S", "A")] == MazeHom.of(gens["A"])
    assert table[("B", "S")] == MazeHom.of(gens["B"])
    assert table[("S", "S")] == i2
    assert table[("S", "S")] != MazeHom.of(gens["S"])
    for cell in [("A", "A"), ("A", "S"), ("B", "B"), ("B", "C"),
                 ("C", "A"), ("C", "S"), ("S", "B"), ("S", "C")]:
        assert table[cell] is None
    # the algebraic dependencies among the generators
    assert table[("B", "A")] == MazeHom.of(gens["C"])          # C = BA
    assert table[("A", "B")] - i2 == MazeHom.of(gens["S"])     # S = AB - I


def test_quotient_compatibility():
    # normal form of the raw composite equals the composite of normal
    # forms, also for labelled inputs
    rng = random.Random(9)
    for n in (2, 3):
        for _ in range(15):
            q = random_pure_maze(rng)
            p = _random_maze_between(rng, q.cod)
            q = Maze(q.dom, q.cod,
                     [(Passage(x.src, x.dst, rng.randint(-2, 3)), m)
                      for x, m in q.passages])
            p = Maze(p.dom, p.cod,
                     [(Passage(x.src, x.dst, rng.randint(-2, 3)), m)
                      for x, m in p.passages])
            raw = normalize_numerical(maze_compose(p, q), n)
            quot = compose_in_laby_n(
                normalize_numerical(MazeHom.of(p), n),
                normalize_numerical(MazeHom.of(q), n), n)
            assert raw == quot


def test_normalize_homogeneous_doubling_anomaly():
    # degree 2: the doubled passage equals twice the single one
    single = MazeHom.of(parallel_pure(1))
    double = MazeHom.of(parallel_pure(2))
    assert normalize_homogeneous(single, 2) == double.scale(Fraction(1, 2))
    assert normalize_homogeneous(double - single.scale(2), 2).is_zero()


def test_normalize_homogeneous_exact_terms_only():
    n = 3
    h = MazeHom.of(parallel_pure(1)) + MazeHom.of(parallel_pure(3))
    out = normalize_homogeneous(h, n)
    assert all(m.size == n and m.is_pure() for m, _ in out.comb)
    assert normalize_homogeneous(out, n) == out
    # exactly-n input is untouched
    assert normalize_homogeneous(MazeHom.of(parallel_pure(3)), 3) == \
        MazeHom.of(parallel_pure(3))


def test_degree_four_fan_identity():
    # The two-target fan identity at degree 4: the three fatter fans sum
    # to six times the plain fan.
    def fan(k1, k2):
        return Maze(("x",), ("u", "v"),
                    [(Passage("x", "u", 1), k1), (Passage("x", "v", 1), k2)])

    lhs = MazeHom.of(fan(3, 1)) + MazeHom.of(fan(2, 2)) + MazeHom.of(fan(1, 2))
    rhs = MazeHom.of(fan(1, 1), 6)
    assert normalize_homogeneous(lhs - rhs, 4).is_zero()
    assert not normalize_homogeneous(lhs - MazeHom.of(fan(1, 1), 5), 4).is_zero()


def test_splitting_idempotents_pair_example():
    out = splitting_idempotents(skeleton(2), 3)
    assert len(out) == 2
    (s1, e1), (s2, e2) = out
    assert s1.items() == (("1", 2), ("2", 1))
    assert s2.items() == (("1", 1), ("2", 2))
    # 2 I = P + Q
    i2 = MazeHom.identity(skeleton(2))
    p = e1.scale(2)
    q = e2.scale(2)
    assert normalize_homogeneous(i2.scale(2) - (p + q), 3).is_zero()
    # orthogonality and idempotence
    for (sa, ea) in out:
        for (sb, eb) in out:
            comp = normalize_homogeneous(maze_hom_compose(ea, eb), 3)
            if sa == sb:
                assert comp == normalize_homogeneous(ea, 3)
            else:
                assert comp.is_zero()


def test_splitting_idempotents_small_cases():
    out = splitting_idempotents(skeleton(1), 1)
    assert len(out) == 1
    assert out[0][1] == MazeHom.identity(skeleton(1))
    out = splitting_idempotents(skeleton(2), 2)
    assert len(out) == 1
    assert out[0][1] == MazeHom.identity(skeleton(2))
    assert splitting_idempotents(skeleton(3), 2) == []


def test_splitting_idempotents_properties_various():
    for size in (1, 2, 3):
        for n in range(size, 5):
            out = splitting_idempotents(skeleton(size), n)
            total = MazeHom.zero(skeleton(size), skeleton(size))
            for sa, ea in out:
                total = total + ea
                for sb, eb in out:
                    comp = normalize_homogeneous(maze_hom_compose(ea, eb), n)
                    if sa == sb:
                        assert comp == normalize_homogeneous(ea, n)
                    else:
                        assert comp.is_zero()
            assert normalize_homogeneous(
                total - MazeHom.identity(skeleton(size)), n).is_zero()


def test_pure_mazes_between():
    quad = pure_mazes_between(skeleton(1), skeleton(2), [2])
    assert quad == [quadratic_generators()["A"]]
    all2 = pure_mazes_between(skeleton(2), skeleton(2), [2])
    gens = quadratic_generators()
    assert set(all2) == {gens["I2"], gens["S"]}
    assert pure_mazes_between((), (), [0]) == [Maze((), ())]


def test_domain_mismatch_raises():
    gens = quadratic_generators()
    with pytest.raises(DomainMismatchError):
        maze_compose(gens["A"], gens["A"])


def test_compose_enumeration_guard():
    from mazelab.errors import EnumerationLimitError

    fat = Maze(("x",), ("y",), [(Passage("x", "y", 1), 10)])
    fat2 = Maze(("y",), ("z",), [(Passage("y", "z", 1), 10)])
    with pytest.raises(EnumerationLimitError):
        maze_compose(fat2, fat)


def test_json_roundtrip():
    gens = quadratic_generators()
    labelled = Maze(("x",), ("y",),
                    [(Passage("x", "y", Fraction(-3, 2)), 2)])
    for maze in [gens["A"], gens["I0"], labelled]:
        assert Maze.from_json(maze.to_json()) == maze
    hom = MazeHom.of(labelled, Fraction(1, 2)) + MazeHom.of(
        Maze(("x",), ("y",), [Passage("x", "y", 1)]))
    assert MazeHom.from_json(hom.to_json()) == hom
