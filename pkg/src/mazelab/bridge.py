"""Translation between the maze and multation worlds.

The forward functor expands a maze over all multiplicity assignments of
total weight n, reading each assignment as a product of divided column
powers; its value on a maze is a matrix of multation arrows indexed by
the cardinality-n multi-sets supported on the endpoints.  The reverse
functor sends a multation to its underlying pure maze scaled by the
reciprocal of its degree.  On exactly-n pure mazes these are mutually
inverse, and that is checked exhaustively at desk scale.

The span category of surjections is not modelled on its own; its basis
is translated to pure mazes by fiber counts and composition on the span
side is defined by transport through this translation.
"""

from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

from .errors import DomainMismatchError
from .labycat import Maze, MazeHom, Passage
from .msetcat import MultHom, Multation, divided_reduce
from .multisets import MultiSet, compositions, enumerate_supported, guard_count


def ariadne_object(names, n: int):
    """The cardinality-n multi-sets supported exactly on a set, i.e. the
    summands a set splits into; empty when the set is too large."""
    return enumerate_supported(set(names), n)


class AriadneMatrix:
    """A matrix of multation arrows indexed by multi-sets.

    Entry (B, A) is a MultHom from A to B; absent entries are zero.  Rows
    carry multi-sets supported in the codomain set, columns multi-sets
    supported in the domain set.
    """

    __slots__ = ("dom", "cod", "n", "entries")

    def __init__(self, dom, cod, n, entries=None):
        dom = tuple(sorted(set(dom)))
        cod = tuple(sorted(set(cod)))
        clean = {}
        for (b, a), hom in (entries or {}).items():
            if hom.is_zero():
                continue
            if not set(a.support) <= set(dom) or not set(b.support) <= set(cod):
                raise ValueError("entry index outside the endpoint sets")
            if a.cardinality != n or b.cardinality != n:
                raise ValueError("entry index of wrong cardinality")
            clean[(b, a)] = hom
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AriadneMatrix is immutable")

    def entry(self, b: MultiSet, a: MultiSet) -> MultHom:
        hom = self.entries.get((b, a))
        if hom is None:
            return MultHom.zero(a, b)
        return hom

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, AriadneMatrix) and self.dom == other.dom
                and self.cod == other.cod and self.n == other.n
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.dom, self.cod, self.n,
                     tuple(sorted(self.entries.items(),
                                  key=lambda kv: (kv[0][0].sort_key(),
                                                  kv[0][1].sort_key())))))

    def __add__(self, other):
        if (self.dom, self.cod, self.n) != (other.dom, other.cod, other.n):
            raise DomainMismatchError("matrix shapes differ")
        keys = set(self.entries) | set(other.entries)
        out = {}
        for b, a in keys:
            out[(b, a)] = self.entry(b, a) + other.entry(b, a)
        return AriadneMatrix(self.dom, self.cod, self.n, out)

    def scale(self, factor):
        return AriadneMatrix(self.dom, self.cod, self.n,
                             {k: h.scale(factor) for k, h in self.entries.items()})

    def compose(self, other: "AriadneMatrix") -> "AriadneMatrix":
        """Ordinary matrix composition, summing over middle indices."""
        if self.n != other.n:
            raise DomainMismatchError("degrees differ")
        if set(self.dom) != set(other.cod):
            raise DomainMismatchError("matrix endpoints do not line up")
        from .msetcat import multhom_compose

        out = {}
        for (c, b1), left in self.entries.items():
            for (b2, a), right in other.entries.items():
                if b1 != b2:
                    continue
                prod = multhom_compose(left, right)
                key = (c, a)
                out[key] = out.get(key, MultHom.zero(a, c)) + prod
        return AriadneMatrix(other.dom, self.cod, self.n, out)

    def nonzero_keys(self):
        return sorted(self.entries,
                      key=lambda k: (k[0].sort_key(), k[1].sort_key()))

    def to_json(self):
        rows = enumerate_supported(set(self.cod), self.n)
        cols = enumerate_supported(set(self.dom), self.n)
        row_index = {b: i for i, b in enumerate(rows)}
        col_index = {a: i for i, a in enumerate(cols)}
        entries = []
        for b, a in self.nonzero_keys():
            entries.append([row_index[b], col_index[a],
                            self.entries[(b, a)].to_json()])
        return {
            "n": self.n,
            "dom": list(self.dom),
            "cod": list(self.cod),
            "rows": [b.to_json() for b in rows],
            "cols": [a.to_json() for a in cols],
            "entries": entries,
        }

    @classmethod
    def from_json(cls, data):
        rows = [MultiSet.from_json(b) for b in data["rows"]]
        cols = [MultiSet.from_json(a) for a in data["cols"]]
        entries = {}
        for ri, ci, hom in data["entries"]:
            entries[(rows[ri], cols[ci])] = MultHom.from_json(hom)
        return cls(data["dom"], data["cod"], int(data["n"]), entries)


def ariadne_maze(p: Maze, n: int) -> AriadneMatrix:
    """Value of the forward functor on one maze.

    Sums over all multiplicity assignments to the tagged passage
    instances with total weight n; each assignment contributes the product
    of its labels' powers times the divided-power merge of its columns.
    """
    inst = p.instances()
    k = len(inst)
    entries = {}
    if k <= n:
        for degs in compositions(n, k):
            scalar_part = Fraction(1)
            for passage, d in zip(inst, degs):
                scalar_part *= passage.label ** d
            if scalar_part == 0:
                continue
            coeff, merged = divided_reduce(
                [((passage.src, passage.dst), d)
                 for passage, d in zip(inst, degs)])
            dom_ms = MultiSet([(passage.src, d)
                               for passage, d in zip(inst, degs)])
            cod_ms = MultiSet([(passage.dst, d)
                               for passage, d in zip(inst, degs)])
            mu = Multation(dom_ms, cod_ms, list(merged))
            key = (cod_ms, dom_ms)
            term = MultHom.from_terms(dom_ms, cod_ms,
                                      [(mu, scalar_part * coeff)])
            entries[key] = entries.get(key, MultHom.zero(dom_ms, cod_ms)) + term
    return AriadneMatrix(p.dom, p.cod, n, entries)


def ariadne_hom(h: MazeHom, n: int) -> AriadneMatrix:
    """Linear extension of ariadne_maze to formal combinations."""
    out = AriadneMatrix(h.dom, h.cod, n)
    for maze, c in h.comb:
        out = out + ariadne_maze(maze, n).scale(c)
    return out


def theseus_multation(mu: Multation, n: int) -> MazeHom:
    """The reverse functor on one multation: its pure maze of columns,
    scaled by the reciprocal of the multation's degree."""
    if mu.dom.cardinality != n or mu.cod.cardinality != n:
        raise DomainMismatchError(
            f"multation endpoints must have cardinality {n}")
    maze = Maze(mu.dom.support, mu.cod.support,
                [(Passage(a, b, 1), m) for (a, b), m in mu.pairs])
    return MazeHom.of(maze, Fraction(1, mu.degree))


def theseus_hom(hom: MultHom, n: int) -> MazeHom:
    """Linear extension of theseus_multation."""
    out = None
    for mu, c in hom.comb:
        term = theseus_multation(mu, n).scale(c)
        out = term if out is None else out + term
    if out is None:
        return MazeHom.zero(hom.dom.support, hom.cod.support)
    return out


def all_cardinality_multisets(universe, n: int):
    """All multi-sets of cardinality n with support inside the universe."""
    universe = tuple(sorted(set(universe)))
    if n == 0:
        return [MultiSet()]
    if not universe:
        return []
    guard_count(comb(len(universe) + n - 1, n))
    return sorted(
        (MultiSet(list(combo))
         for combo in combinations_with_replacement(universe, n)),
        key=MultiSet.sort_key)


def all_pure_mazes_on(universe, n: int):
    """All pure mazes with exactly n passages whose endpoint sets are the
    supports of the passage multiset, inside the universe."""
    universe = tuple(sorted(set(universe)))
    out = []
    if n == 0:
        return [Maze((), ())]
    pairs_universe = [(x, y) for x in universe for y in universe]
    guard_count(comb(len(pairs_universe) + n - 1, n))
    for combo in combinations_with_replacement(pairs_universe, n):
        out.append(Maze.pure(combo))
    return sorted(set(out), key=Maze.sort_key)


def roundtrip_failures(universe, n: int):
    """Counterexamples to the inverse-pair property, as strings.

    Checks forward-after-reverse on every basis multation between
    cardinality-n multi-sets over the universe, and reverse-after-forward
    on every exactly-n pure maze inside it.
    """
    from .msetcat import all_multations

    failures = []
    objs = all_cardinality_multisets(universe, n)
    for a in objs:
        for b in objs:
            for mu in all_multations(a, b):
                back = ariadne_hom(theseus_multation(mu, n), n)
                keys = back.nonzero_keys()
                if keys != [(b, a)] or back.entry(b, a) != MultHom.of(mu):
                    failures.append(f"forward(reverse({mu!r})) != {mu!r}")
    for maze in all_pure_mazes_on(universe, n):
        forward = ariadne_maze(maze, n)
        keys = forward.nonzero_keys()
        if len(keys) != 1:
            failures.append(f"forward({maze!r}) is not a single entry")
            continue
        (b, a) = keys[0]
        back = theseus_hom(forward.entry(b, a), n)
        if back != MazeHom.of(maze):
            failures.append(f"reverse(forward({maze!r})) = {back!r}")
    return failures


def roundtrip_check(universe, n: int) -> bool:
    """True iff the two functors invert each other over the universe."""
    return not roundtrip_failures(universe, n)


class Correspondence:
    """A span of surjections cod <- middle -> dom, read right to left."""

    __slots__ = ("cod", "middle", "dom", "left", "right")

    def __init__(self, cod, middle, dom, left, right):
        cod = tuple(sorted(set(cod)))
        middle = tuple(sorted(set(middle)))
        dom = tuple(sorted(set(dom)))
        left = dict(left)
        right = dict(right)
        if set(left) != set(middle) or set(right) != set(middle):
            raise ValueError("maps must be defined exactly on the middle set")
        if set(left.values()) != set(cod):
            raise ValueError("left leg is not surjective")
        if set(right.values()) != set(dom):
            raise ValueError("right leg is not surjective")
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "middle", middle)
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def __setattr__(self, name, value):
        raise AttributeError("Correspondence is immutable")

    def fiber_counts(self):
        counts = {}
        for u in self.middle:
            key = (self.right[u], self.left[u])
            counts[key] = counts.get(key, 0) + 1
        return counts

    def __eq__(self, other):
        return (isinstance(other, Correspondence) and self.dom == other.dom
                and self.cod == other.cod
                and self.fiber_counts() == other.fiber_counts())

    def __hash__(self):
        return hash((self.dom, self.cod,
                     tuple(sorted(self.fiber_counts().items()))))

    def to_json(self):
        return {
            "cod": list(self.cod),
            "middle": list(self.middle),
            "dom": list(self.dom),
            "left": [[u, self.left[u]] for u in self.middle],
            "right": [[u, self.right[u]] for u in self.middle],
        }

    @classmethod
    def from_json(cls, data):
        return cls(data["cod"], data["middle"], data["dom"],
                   {u: y for u, y in data["left"]},
                   {u: x for u, x in data["right"]})


def xi_correspondence(c: Correspondence) -> Maze:
    """The pure maze whose passage multiplicities are the fiber counts of
    the span's joint map."""
    return Maze(c.dom, c.cod,
                [(Passage(x, y, 1), count)
                 for (x, y), count in sorted(c.fiber_counts().items())])


def xi_inverse(maze: Maze) -> Correspondence:
    """The canonical span of a pure maze: one middle element per tagged
    passage instance."""
    if not maze.is_pure():
        raise ValueError("only pure mazes correspond to spans")
    middle = []
    left = {}
    right = {}
    for i, p in enumerate(maze.instances()):
        u = f"u{i + 1}"
        middle.append(u)
        left[u] = p.dst
        right[u] = p.src
    return Correspondence(maze.cod, middle, maze.dom, left, right)


def factorization_verify(h, j, n: int) -> bool:
    """Whether a maze-side presentation factors through a multation-side
    one: every stored pure maze value must equal the block matrix obtained
    by pushing the maze forward and applying the multation presentation.

    Shape disagreements (wrong degree, blocks that do not assemble to the
    stored groups) report False rather than raising; they are exactly what
    the verifier exists to detect.
    """
    from .functor_lab import abhom_block
    from .labycat import skeleton

    if getattr(j, "degree", None) != n or getattr(h, "degree", None) != n:
        return False
    universe = set(j.universe)
    for k in range(n + 1):
        names = skeleton(k)
        if not set(names) <= universe and k > 0:
            return False
        blocks = enumerate_supported(set(names), n)
        expect = []
        for b in blocks:
            if not j.has_group(b):
                return False
            expect.extend(j.group(b).orders)
        if tuple(expect) != h.group(k).orders:
            return False
    for maze in h.mazes():
        rows = enumerate_supported(set(maze.cod), n)
        cols = enumerate_supported(set(maze.dom), n)
        matrix = ariadne_maze(maze, n)
        grid = []
        for b in rows:
            row = []
            for a in cols:
                row.append(j.eval_hom(matrix.entry(b, a)))
            grid.append(row)
        assembled = abhom_block(grid,
                                [j.group(a).orders for a in cols],
                                [j.group(b).orders for b in rows])
        if assembled != h.hom(maze):
            return False
    return True
