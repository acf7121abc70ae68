"""Mazes and the labyrinth category with its quotients.

A maze is a multi-set of labelled passages between two finite sets, with
no dead ends.  Arrows of the category are formal linear combinations of
mazes; composition sums over all sub-multi-sets of the composable-pair
product whose projections cover both factors.

Repeated passages are handled with tagged-instance semantics: every
instance of a repeated passage counts separately both when forming the
pair product and when checking that a subset covers it.  This is what
makes composition functorial under the multation translation and is
validated against the degree-2 multiplication table.

Two normal forms are provided: the numerical quotient rewrites every
maze into pure mazes with at most n passages via the binomial expansion
axiom, and the homogeneous quotient further rewrites pure mazes with
fewer than n passages into exactly-n ones by the label-scaling axiom,
instantiated at scale 2 where the rewriting matrix is invertible.
"""

from fractions import Fraction
from math import comb

from .errors import DomainMismatchError
from .multisets import ENUM_LIMIT, MultiSet, compositions, guard_count
from .scalars import LinComb, binomial, scalar, scalar_str


class Passage:
    """A labelled formal arrow between elements of two finite sets."""

    __slots__ = ("src", "dst", "label")

    def __init__(self, src: str, dst: str, label=1):
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "label", scalar(label))

    def __setattr__(self, name, value):
        raise AttributeError("Passage is immutable")

    def sort_key(self):
        return (self.src, self.dst, self.label.numerator, self.label.denominator)

    def __eq__(self, other):
        return (isinstance(other, Passage) and self.src == other.src
                and self.dst == other.dst and self.label == other.label)

    def __hash__(self):
        return hash((self.src, self.dst, self.label))

    def __repr__(self):
        return f"{self.src} -({scalar_str(self.label)})-> {self.dst}"


class Maze:
    """A multi-set of passages X -> Y.

    The constructor does not reject dead ends so that validity itself can
    be queried; every operation that composes or normalizes assumes valid
    input (see validate_maze).
    """

    __slots__ = ("dom", "cod", "passages")

    def __init__(self, dom, cod, passages=()):
        if hasattr(passages, "items"):
            passages = passages.items()
        counts = {}
        for entry in passages:
            if isinstance(entry, Passage):
                p, mult = entry, 1
            else:
                p, mult = entry
            if mult <= 0:
                raise ValueError("passage multiplicities must be positive")
            counts[p] = counts.get(p, 0) + mult
        object.__setattr__(self, "dom", tuple(sorted(set(dom))))
        object.__setattr__(self, "cod", tuple(sorted(set(cod))))
        object.__setattr__(self, "passages", tuple(
            sorted(counts.items(), key=lambda pm: pm[0].sort_key())))

    def __setattr__(self, name, value):
        raise AttributeError("Maze is immutable")

    @classmethod
    def identity(cls, names):
        names = tuple(sorted(set(names)))
        return cls(names, names, [Passage(x, x, 1) for x in names])

    @classmethod
    def pure(cls, pair_list, dom=None, cod=None):
        """Pure maze from (src, dst) pairs with repetition; dom and cod
        default to the supports of the pairs."""
        passages = [Passage(a, b, 1) for a, b in pair_list]
        if dom is None:
            dom = {p.src for p in passages}
        if cod is None:
            cod = {p.dst for p in passages}
        return cls(dom, cod, passages)

    @property
    def size(self) -> int:
        """Number of passages counted with multiplicity."""
        return sum(m for _, m in self.passages)

    def instances(self):
        """Passage instances with repetition, in canonical order."""
        out = []
        for p, m in self.passages:
            out.extend([p] * m)
        return out

    def is_pure(self) -> bool:
        return all(p.label == 1 for p, _ in self.passages)

    def is_simple(self) -> bool:
        seen = set()
        for p, m in self.passages:
            if m > 1 or (p.src, p.dst) in seen:
                return False
            seen.add((p.src, p.dst))
        return True

    def relabel_all(self, a):
        """a [.] P: multiply every label by a."""
        a = scalar(a)
        return Maze(self.dom, self.cod,
                    [(Passage(p.src, p.dst, a * p.label), m)
                     for p, m in self.passages])

    def sort_key(self):
        return (self.dom, self.cod,
                tuple((p.sort_key(), m) for p, m in self.passages))

    def __eq__(self, other):
        return (isinstance(other, Maze) and self.dom == other.dom
                and self.cod == other.cod and self.passages == other.passages)

    def __hash__(self):
        return hash((self.dom, self.cod, self.passages))

    def __repr__(self):
        inner = ", ".join(
            repr(p) + (f" x{m}" if m > 1 else "")
            for p, m in self.passages)
        return f"[{inner or 'empty'}: {set(self.dom) or '{}'}->{set(self.cod) or '{}'}]"

    def to_json(self):
        return {
            "dom": list(self.dom),
            "cod": list(self.cod),
            "passages": [[[p.src, p.dst, scalar_str(p.label)], m]
                         for p, m in self.passages],
        }

    @classmethod
    def from_json(cls, data):
        return cls(data["dom"], data["cod"],
                   [(Passage(s, d, scalar(lab)), int(m))
                    for (s, d, lab), m in data["passages"]])


def validate_maze(m: Maze) -> bool:
    """True iff endpoints lie in dom/cod and there are no dead ends."""
    sources = set()
    targets = set()
    for p, _ in m.passages:
        if p.src not in m.dom or p.dst not in m.cod:
            return False
        sources.add(p.src)
        targets.add(p.dst)
    return sources == set(m.dom) and targets == set(m.cod)


class MazeHom:
    """A formal linear combination of mazes sharing dom and cod."""

    __slots__ = ("dom", "cod", "comb")

    def __init__(self, dom, cod, comb: LinComb):
        dom = tuple(sorted(set(dom)))
        cod = tuple(sorted(set(cod)))
        for maze, _ in comb:
            if maze.dom != dom or maze.cod != cod:
                raise ValueError("all terms must share dom and cod")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "comb", comb)

    def __setattr__(self, name, value):
        raise AttributeError("MazeHom is immutable")

    @classmethod
    def zero(cls, dom, cod):
        return cls(dom, cod, LinComb())

    @classmethod
    def of(cls, maze: Maze, coeff=1):
        return cls(maze.dom, maze.cod, LinComb([(maze, coeff)]))

    @classmethod
    def from_terms(cls, dom, cod, terms):
        return cls(dom, cod, LinComb(terms))

    @classmethod
    def identity(cls, names):
        return cls.of(Maze.identity(names))

    def __eq__(self, other):
        return (isinstance(other, MazeHom) and self.dom == other.dom
                and self.cod == other.cod and self.comb == other.comb)

    def __hash__(self):
        return hash((self.dom, self.cod, self.comb))

    def __add__(self, other):
        if other.dom != self.dom or other.cod != self.cod:
            raise DomainMismatchError("cannot add arrows with different endpoints")
        return MazeHom(self.dom, self.cod, self.comb + other.comb)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, factor):
        return MazeHom(self.dom, self.cod, self.comb.scale(factor))

    def is_zero(self):
        return self.comb.is_zero()

    def __repr__(self):
        if self.is_zero():
            return "0"
        return " + ".join(
            (f"{scalar_str(c)}*" if c != 1 else "") + repr(maze)
            for maze, c in self.comb)

    def to_json(self):
        return {
            "dom": list(self.dom),
            "cod": list(self.cod),
            "terms": [[scalar_str(c), maze.to_json()] for maze, c in self.comb],
        }

    @classmethod
    def from_json(cls, data):
        terms = [(Maze.from_json(m), scalar(c)) for c, m in data["terms"]]
        return cls(data["dom"], data["cod"], LinComb(terms))


def box_product(p: Maze, q: Maze):
    """Tagged multi-set of composable passage pairs of P (x) Q.

    Returns a list of ((i, passage of P), (j, passage of Q)) where i and j
    index the instance lists, so repeated passages stay distinguishable.
    """
    if set(p.dom) != set(q.cod):
        raise DomainMismatchError(
            f"cannot form pair product: {set(q.cod)} != {set(p.dom)}")
    pairs = []
    for i, pi in enumerate(p.instances()):
        for j, qj in enumerate(q.instances()):
            if qj.dst == pi.src:
                pairs.append(((i, pi), (j, qj)))
    return pairs


def maze_compose(p: Maze, q: Maze) -> MazeHom:
    """p . q as the sum over covering subsets of the pair product.

    A subset qualifies when its projections hit every tagged instance of
    both mazes; each subset is read as the maze of composed passages with
    multiplied labels, and equal mazes accumulate coefficients.

    Covering subsets decompose as one nonempty bundle of pairs per
    instance of q, so enumeration runs per bundle with pruning on which
    instances of p can still be reached.
    """
    if not (validate_maze(p) and validate_maze(q)):
        raise ValueError("maze_compose requires valid mazes")
    pairs = box_product(p, q)
    np_, nq = p.size, q.size
    full_p = (1 << np_) - 1

    groups = [[] for _ in range(nq)]
    for (i, pi), (j, qj) in pairs:
        groups[j].append((i, pi, qj))

    # Nonempty choices per group, each tagged with its p-coverage mask.
    choices = []
    for members in groups:
        if not members:
            # q has an instance nothing composes with; impossible for
            # valid mazes, but then there is no covering subset at all.
            return MazeHom.zero(q.dom, p.cod)
        opts = []
        for mask in range(1, 1 << len(members)):
            cover = 0
            chosen = []
            for t, (i, pi, qj) in enumerate(members):
                if mask >> t & 1:
                    cover |= 1 << i
                    chosen.append((pi, qj))
            opts.append((cover, tuple(chosen)))
        choices.append(opts)

    # Hopeless sizes fail fast; borderline ones fall to the lazy budget
    # below, which charges actual work after pruning.
    bound = 1
    for opts in choices:
        bound *= len(opts)
        if bound > ENUM_LIMIT**2:
            guard_count(bound)

    # What the remaining groups could still cover, for pruning.
    suffix = [0] * (len(choices) + 1)
    for t in range(len(choices) - 1, -1, -1):
        reach = 0
        for cover, _ in choices[t]:
            reach |= cover
        suffix[t] = suffix[t + 1] | reach

    accum = {}
    budget = [ENUM_LIMIT]

    def rec(t, covered, chosen):
        if covered | suffix[t] != full_p:
            return
        if t == len(choices):
            composed = [Passage(qj.src, pi.dst, pi.label * qj.label)
                        for pi, qj in chosen]
            maze = Maze(q.dom, p.cod, composed)
            accum[maze] = accum.get(maze, 0) + 1
            return
        for cover, bundle in choices[t]:
            budget[0] -= 1
            if budget[0] < 0:
                guard_count(ENUM_LIMIT + 1)
            rec(t + 1, covered | cover, chosen + list(bundle))

    rec(0, 0, [])
    return MazeHom(q.dom, p.cod, LinComb(accum.items()))


def maze_hom_compose(f: MazeHom, g: MazeHom) -> MazeHom:
    """Bilinear extension of maze composition (f after g)."""
    if set(g.cod) != set(f.dom):
        raise DomainMismatchError("cannot compose: middle sets differ")
    out = MazeHom.zero(g.dom, f.cod)
    for p, c in f.comb:
        for q, d in g.comb:
            out = out + maze_compose(p, q).scale(c * d)
    return out


def expand_label(p: Maze, passage: Passage, parts) -> MazeHom:
    """Split one passage whose label is a sum into the sum over nonempty
    subsets of parallel passages labelled by the parts."""
    parts = [scalar(x) for x in parts]
    if not parts:
        raise ValueError("parts must be nonempty")
    if sum(parts) != passage.label:
        raise ValueError("parts must sum to the passage label")
    remaining = dict(p.passages)
    if remaining.get(passage, 0) < 1:
        raise ValueError("passage not present in maze")
    if remaining[passage] == 1:
        del remaining[passage]
    else:
        remaining[passage] -= 1
    terms = []
    n = len(parts)
    for mask in range(1, 1 << n):
        new = dict(remaining)
        for i in range(n):
            if mask >> i & 1:
                q = Passage(passage.src, passage.dst, parts[i])
                new[q] = new.get(q, 0) + 1
        terms.append((Maze(p.dom, p.cod, new), 1))
    return MazeHom(p.dom, p.cod, LinComb(terms))


def collapse_parallel(p: Maze, group) -> MazeHom:
    """Inverse rewriting: replace a group of parallel passages by the
    signed sum over subsets of a single passage labelled by the subset sum.

    The empty subset contributes its zero-labelled passage with sign; that
    term is killed later by numerical normalization.
    """
    group = list(group)
    if not group:
        raise ValueError("group must be nonempty")
    src, dst = group[0].src, group[0].dst
    if any(q.src != src or q.dst != dst for q in group):
        raise ValueError("passages are not parallel")
    remaining = dict(p.passages)
    for q in group:
        if remaining.get(q, 0) < 1:
            raise ValueError("group passage not present in maze")
        if remaining[q] == 1:
            del remaining[q]
        else:
            remaining[q] -= 1
    n = len(group)
    terms = []
    for mask in range(1 << n):
        total = sum((group[i].label for i in range(n) if mask >> i & 1),
                    Fraction(0))
        sign = (-1) ** (n - bin(mask).count("1"))
        new = dict(remaining)
        q = Passage(src, dst, total)
        new[q] = new.get(q, 0) + 1
        terms.append((Maze(p.dom, p.cod, new), sign))
    return MazeHom(p.dom, p.cod, LinComb(terms))


def _numerical_terms(maze: Maze, n: int):
    """Binomial expansion of one maze into pure mazes with <= n passages.

    Yields (coefficient, pure maze).  Multiplicity assignments run over
    tagged passage instances, so repeated passages expand independently.
    """
    inst = maze.instances()
    k = len(inst)
    if k > n:
        return
    if k == 0:
        yield Fraction(1), maze
        return
    if any(p.label == 0 for p in inst):
        return
    for total in range(k, n + 1):
        for degs in compositions(total, k):
            coeff = Fraction(1)
            for p, d in zip(inst, degs):
                coeff *= binomial(p.label, d)
                if coeff == 0:
                    break
            if coeff == 0:
                continue
            pure = Maze(maze.dom, maze.cod,
                        [(Passage(p.src, p.dst, 1), 1)
                         for p, d in zip(inst, degs) for _ in range(d)])
            yield coeff, pure


def normalize_numerical(h: MazeHom, n: int) -> MazeHom:
    """Normal form in the degree-n numerical quotient: a combination of
    pure mazes with at most n passages."""
    terms = []
    for maze, c in h.comb:
        for coeff, pure in _numerical_terms(maze, n):
            terms.append((pure, c * coeff))
    return MazeHom(h.dom, h.cod, LinComb(terms))


def compose_in_laby_n(f: MazeHom, g: MazeHom, n: int) -> MazeHom:
    """Composite in the degree-n numerical quotient, in normal form."""
    f = normalize_numerical(f, n)
    g = normalize_numerical(g, n)
    return normalize_numerical(maze_hom_compose(f, g), n)


def normalize_homogeneous(h: MazeHom, n: int) -> MazeHom:
    """Normal form in the degree-n homogeneous quotient: a rational
    combination of pure mazes with exactly n passages.

    Pure mazes with m < n passages are rewritten through the scaling axiom
    evaluated at 2: (2^n - 2^m) P equals the expansion of the relabelled
    maze over strictly larger multiplicity assignments, and 2^n - 2^m is
    invertible.  Recursion is on passage count, so it terminates.
    """
    current = dict(normalize_numerical(h, n).comb)
    for m in range(n):
        layer = [(maze, c) for maze, c in current.items() if maze.size == m]
        for maze, c in layer:
            del current[maze]
            denom = Fraction(2**n - 2**m)
            inst = maze.instances()
            for total in range(m + 1, n + 1):
                for degs in compositions(total, m):
                    coeff = Fraction(1)
                    for d in degs:
                        coeff *= binomial(2, d)
                        if coeff == 0:
                            break
                    if coeff == 0:
                        continue
                    pure = Maze(maze.dom, maze.cod,
                                [(Passage(p.src, p.dst, 1), 1)
                                 for p, d in zip(inst, degs)
                                 for _ in range(d)])
                    current[pure] = current.get(pure, Fraction(0)) + c * coeff / denom
        current = {maze: c for maze, c in current.items() if c != 0}
    return MazeHom(h.dom, h.cod, LinComb(current.items()))


def splitting_idempotents(names, n: int):
    """The direct-sum system splitting the identity of a set in the
    degree-n homogeneous quotient.

    Returns (S, e_S) pairs: S assigns each element a positive multiplicity
    summing to n, and e_S is the loop maze repeating each identity passage
    that often, scaled by 1/deg S.  Empty when |names| > n.
    """
    names = tuple(sorted(set(names)))
    out = []
    if len(names) > n:
        return out
    if not names:
        return out
    for degs in compositions(n, len(names)):
        s = MultiSet(list(zip(names, degs)))
        maze = Maze(names, names,
                    [(Passage(x, x, 1), d) for x, d in zip(names, degs)])
        out.append((s, MazeHom.of(maze, Fraction(1, s.degree))))
    return out


def rename_maze(maze: Maze, dom_map, cod_map) -> Maze:
    """Transport a maze along bijective renamings of its two endpoints."""
    return Maze(
        [dom_map[x] for x in maze.dom],
        [cod_map[y] for y in maze.cod],
        [(Passage(dom_map[p.src], cod_map[p.dst], p.label), m)
         for p, m in maze.passages])


def pure_mazes_between(dom, cod, sizes):
    """All pure mazes with dom/cod exactly the given sets and passage count
    in `sizes`, canonically ordered."""
    from itertools import combinations_with_replacement

    dom = tuple(sorted(set(dom)))
    cod = tuple(sorted(set(cod)))
    universe = [(x, y) for x in dom for y in cod]
    out = []
    for s in sizes:
        if s == 0:
            if not dom and not cod:
                out.append(Maze((), ()))
            continue
        if not universe:
            continue
        guard_count(comb(len(universe) + s - 1, s))
        for combo in combinations_with_replacement(universe, s):
            if {a for a, _ in combo} != set(dom):
                continue
            if {b for _, b in combo} != set(cod):
                continue
            out.append(Maze.pure(combo, dom, cod))
    return sorted(out, key=Maze.sort_key)


def skeleton(k: int):
    """The canonical k-element set {"1", ..., "k"}."""
    return tuple(str(i) for i in range(1, k + 1))


def quadratic_generators():
    """The four non-identity pure mazes of the degree-2 skeleton, plus the
    identities, keyed by their conventional one-letter names."""
    one = skeleton(1)
    two = skeleton(2)
    return {
        "A": Maze(one, two, [Passage("1", "1", 1), Passage("1", "2", 1)]),
        "B": Maze(two, one, [Passage("1", "1", 1), Passage("2", "1", 1)]),
        "C": Maze(one, one, [(Passage("1", "1", 1), 2)]),
        "S": Maze(two, two, [Passage("1", "2", 1), Passage("2", "1", 1)]),
        "I0": Maze((), ()),
        "I1": Maze.identity(one),
        "I2": Maze.identity(two),
    }


def laby2_table():
    """All pairwise composites of A, B, C, S in the degree-2 numerical
    quotient: dict (row, col) -> normal-form MazeHom, None if the pair is
    not composable."""
    gens = quadratic_generators()
    names = ["A", "B", "C", "S"]
    table = {}
    for r in names:
        for c in names:
            p, q = gens[r], gens[c]
            if set(q.cod) == set(p.dom):
                table[(r, c)] = compose_in_laby_n(
                    MazeHom.of(p), MazeHom.of(q), 2)
            else:
                table[(r, c)] = None
    return table
