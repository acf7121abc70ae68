"""The multi-set category: multations and their composition.

A multation A -> B is a sub-multi-set of A x B whose marginals are
exactly A and B; it generalizes a permutation.  Read as a formal product
of divided powers of its columns, composition multiplies those products:
each repeated column z appearing with exponents i and j merges into
z^(i+j) with a binomial factor, and matching middle letters are summed
over all ways of pairing them off.

Compositions are computed over the rationals and asserted integral at
the end; the divided-power structure guarantees integrality, so a
failure means a bug.
"""

from fractions import Fraction
from itertools import product as iproduct
from math import factorial

from .errors import DomainMismatchError, IntegralityError
from .multisets import MultiSet, guard_count
from .scalars import LinComb, multinomial, scalar, scalar_str


class Multation:
    """A multation between multi-sets of equal cardinality.

    `pairs` maps columns (a, b) to positive multiplicities; the multi-set
    of first coordinates must equal dom and of second coordinates cod.
    """

    __slots__ = ("dom", "cod", "pairs")

    def __init__(self, dom: MultiSet, cod: MultiSet, pairs):
        if hasattr(pairs, "items"):
            pairs = pairs.items()
        counts = {}
        for (a, b), mult in pairs:
            if mult <= 0:
                raise ValueError("column multiplicities must be positive")
            counts[(a, b)] = counts.get((a, b), 0) + mult
        firsts = {}
        seconds = {}
        for (a, b), mult in counts.items():
            firsts[a] = firsts.get(a, 0) + mult
            seconds[b] = seconds.get(b, 0) + mult
        if MultiSet(firsts) != dom:
            raise ValueError("first coordinates do not reproduce the domain")
        if MultiSet(seconds) != cod:
            raise ValueError("second coordinates do not reproduce the codomain")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "pairs", tuple(sorted(counts.items())))

    def __setattr__(self, name, value):
        raise AttributeError("Multation is immutable")

    @classmethod
    def identity(cls, a: MultiSet):
        """iota_A: every element paired off with itself."""
        return cls(a, a, [((x, x), m) for x, m in a.items()])

    @property
    def degree(self) -> int:
        out = 1
        for _, m in self.pairs:
            out *= factorial(m)
        return out

    @property
    def cardinality(self) -> int:
        return sum(m for _, m in self.pairs)

    def columns(self):
        """Columns with multiplicity, in canonical order."""
        out = []
        for col, m in self.pairs:
            out.extend([col] * m)
        return out

    def __eq__(self, other):
        return (isinstance(other, Multation) and self.dom == other.dom
                and self.cod == other.cod and self.pairs == other.pairs)

    def __hash__(self):
        return hash((self.dom, self.cod, self.pairs))

    def sort_key(self):
        return (self.dom.sort_key(), self.cod.sort_key(), self.pairs)

    def __repr__(self):
        cols = self.columns()
        top = " ".join(a for a, _ in cols)
        bot = " ".join(b for _, b in cols)
        return f"[{top}; {bot}]"

    def to_json(self):
        return {
            "dom": self.dom.to_json(),
            "cod": self.cod.to_json(),
            "pairs": [[[a, b], m] for (a, b), m in self.pairs],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            MultiSet.from_json(data["dom"]),
            MultiSet.from_json(data["cod"]),
            [((a, b), int(m)) for (a, b), m in data["pairs"]],
        )


def identity_multation(a: MultiSet) -> Multation:
    return Multation.identity(a)


def divided_reduce(powers):
    """Merge a formal product of divided column powers into one basis term.

    `powers` is a list of (column, exponent) with positive exponents.
    Repeated columns merge by z^[i] z^[j] = C(i+j, i) z^[i+j]; the returned
    coefficient is the resulting integer multinomial, the returned basis the
    merged column multi-set as sorted ((a, b), mult) pairs.
    """
    groups = {}
    for col, exp in powers:
        if exp < 1:
            raise ValueError("exponents must be >= 1")
        groups.setdefault(col, []).append(exp)
    coeff = 1
    merged = []
    for col in sorted(groups):
        exps = groups[col]
        coeff *= multinomial(exps)
        merged.append((col, sum(exps)))
    return coeff, tuple(merged)


class MultHom:
    """A formal linear combination of multations sharing dom and cod."""

    __slots__ = ("dom", "cod", "comb")

    def __init__(self, dom: MultiSet, cod: MultiSet, comb: LinComb):
        for mu, _ in comb:
            if mu.dom != dom or mu.cod != cod:
                raise ValueError("all terms must share dom and cod")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "comb", comb)

    def __setattr__(self, name, value):
        raise AttributeError("MultHom is immutable")

    @classmethod
    def zero(cls, dom, cod):
        return cls(dom, cod, LinComb())

    @classmethod
    def from_terms(cls, dom, cod, terms):
        return cls(dom, cod, LinComb(terms))

    @classmethod
    def of(cls, mu: Multation, coeff=1):
        return cls(mu.dom, mu.cod, LinComb([(mu, coeff)]))

    def __eq__(self, other):
        return (isinstance(other, MultHom) and self.dom == other.dom
                and self.cod == other.cod and self.comb == other.comb)

    def __hash__(self):
        return hash((self.dom, self.cod, self.comb))

    def __add__(self, other):
        if other.dom != self.dom or other.cod != self.cod:
            raise DomainMismatchError("cannot add arrows with different endpoints")
        return MultHom(self.dom, self.cod, self.comb + other.comb)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, factor):
        return MultHom(self.dom, self.cod, self.comb.scale(factor))

    def is_zero(self):
        return self.comb.is_zero()

    def __repr__(self):
        if self.is_zero():
            return "0"
        return " + ".join(
            (f"{scalar_str(c)}*" if c != 1 else "") + repr(mu)
            for mu, c in self.comb)

    def to_json(self):
        return {
            "dom": self.dom.to_json(),
            "cod": self.cod.to_json(),
            "terms": [[scalar_str(c), mu.to_json()] for mu, c in self.comb],
        }

    @classmethod
    def from_json(cls, data):
        dom = MultiSet.from_json(data["dom"])
        cod = MultiSet.from_json(data["cod"])
        terms = [(Multation.from_json(m), scalar(c)) for c, m in data["terms"]]
        return cls(dom, cod, LinComb(terms))


def _tables(row_counts, col_counts):
    """All nonnegative integer matrices with the given row and column sums.

    row_counts / col_counts are sorted (name, count) tuples; yields dicts
    (row_name, col_name) -> positive count.
    """
    rows = list(row_counts)
    cols = list(col_counts)
    if sum(c for _, c in rows) != sum(c for _, c in cols):
        return

    def rec(i, remaining, acc):
        if i == len(rows):
            if all(r == 0 for r in remaining):
                yield dict(acc)
            return
        name, need = rows[i]

        def fill(j, left, partial):
            if j == len(cols):
                if left == 0:
                    yield partial
                return
            cap = min(left, remaining[j])
            for take in range(cap + 1):
                yield from fill(j + 1, left - take, partial + [take])

        for row in fill(0, need, []):
            for j, take in enumerate(row):
                remaining[j] -= take
            yield from rec(i + 1, remaining,
                           acc + [((name, cols[j][0]), t)
                                  for j, t in enumerate(row) if t])
            for j, take in enumerate(row):
                remaining[j] += take

    yield from rec(0, [c for _, c in cols], [])


def multation_compose(mu: Multation, nu: Multation) -> MultHom:
    """Compose mu . nu by summing over all ways of matching middle letters.

    Equal middle letters are grouped; for each letter the pairings of
    incoming against outgoing columns are enumerated as contingency tables
    rather than raw permutations, which collapses the equal terms up front.
    """
    if nu.cod != mu.dom:
        raise DomainMismatchError(
            f"cannot compose: middle multi-sets differ ({nu.cod!r} vs {mu.dom!r})")
    middle = nu.cod

    per_letter = []
    for b, _ in middle.items():
        row_counts = tuple(sorted(
            (a, m) for (a, b2), m in nu.pairs if b2 == b))
        col_counts = tuple(sorted(
            (c, m) for (b2, c), m in mu.pairs if b2 == b))
        tables = list(_tables(row_counts, col_counts))
        per_letter.append(tables)

    count = 1
    for tables in per_letter:
        count *= len(tables)
    guard_count(count)

    accum = {}
    for family in iproduct(*per_letter):
        cols = {}
        table_factor = 1
        for table in family:
            for (a, c), t in table.items():
                cols[(a, c)] = cols.get((a, c), 0) + t
                table_factor *= factorial(t)
        basis = Multation(nu.dom, mu.cod, list(cols.items()))
        accum[basis] = accum.get(basis, Fraction(0)) + \
            Fraction(basis.degree, table_factor)

    for basis, coeff in accum.items():
        if coeff.denominator != 1:
            raise IntegralityError(
                f"non-integral composition coefficient {coeff} at {basis!r}")
    return MultHom(nu.dom, mu.cod,
                   LinComb((b, c) for b, c in accum.items()))


def multhom_compose(f: MultHom, g: MultHom) -> MultHom:
    """Bilinear extension of multation composition (f after g)."""
    if g.cod != f.dom:
        raise DomainMismatchError("cannot compose: middle multi-sets differ")
    out = MultHom.zero(g.dom, f.cod)
    for mu, c in f.comb:
        for nu, d in g.comb:
            out = out + multation_compose(mu, nu).scale(c * d)
    return out


def all_multations(a: MultiSet, b: MultiSet):
    """All multations a -> b, in canonical order (empty if |a| != |b|)."""
    if a.cardinality != b.cardinality:
        return []
    out = [Multation(a, b, list(t.items()))
           for t in _tables(a.items(), b.items())]
    return sorted(out, key=Multation.sort_key)


def mset2_generators():
    """The three non-identity basis multations of the degree-2 skeleton."""
    m11 = MultiSet(["1", "1"])
    m12 = MultiSet(["1", "2"])
    alpha = Multation(m11, m12, [(("1", "1"), 1), (("1", "2"), 1)])
    beta = Multation(m12, m11, [(("1", "1"), 1), (("2", "1"), 1)])
    sigma = Multation(m12, m12, [(("1", "2"), 1), (("2", "1"), 1)])
    return {"alpha": alpha, "beta": beta, "sigma": sigma}


def mset2_table():
    """All pairwise composites of the degree-2 generators.

    Returns a dict (row, col) -> MultHom for row . col where the pair is
    composable, None where it is not.
    """
    gens = mset2_generators()
    names = ["alpha", "beta", "sigma"]
    table = {}
    for r in names:
        for c in names:
            f, g = gens[r], gens[c]
            if g.cod == f.dom:
                table[(r, c)] = multhom_compose(MultHom.of(f), MultHom.of(g))
            else:
                table[(r, c)] = None
    return table
