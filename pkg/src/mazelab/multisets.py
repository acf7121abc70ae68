"""Finite multi-sets over an ordered universe of named elements.

A multi-set is a map from element names to positive multiplicities.  The
cardinality counts elements with multiplicity; the degree is the product
of the factorials of the multiplicities, which is the symmetry factor
that divided-power bookkeeping keeps dividing by.

Elements are short strings compared lexicographically.  Lifting a
multi-set to the plain set of its element instances tags instances as
"name#k", so the lifted universe is again made of strings.
"""

from math import comb, factorial

from .errors import EnumerationLimitError

# Ceiling on the number of items any enumeration in the package may
# produce.  Composition sums are exponential in passage count; desk scale
# keeps well under this.
ENUM_LIMIT = 2**20

LIFT_SEP = "#"
PAIR_SEP = ","


class MultiSet:
    """Immutable multi-set with canonically sorted support."""

    __slots__ = ("_items",)

    def __init__(self, elements=()):
        """Build from an iterable of names, or of (name, multiplicity) pairs,
        or a mapping name -> multiplicity."""
        counts = {}
        if hasattr(elements, "items"):
            pairs = elements.items()
        else:
            elements = list(elements)
            if elements and isinstance(elements[0], tuple) and len(elements[0]) == 2 \
                    and isinstance(elements[0][1], int):
                pairs = elements
            else:
                pairs = [(name, 1) for name in elements]
        for name, mult in pairs:
            if not isinstance(name, str) or not name:
                raise ValueError(f"invalid element name {name!r}")
            if mult < 0:
                raise ValueError(f"negative multiplicity for {name!r}")
            if mult:
                counts[name] = counts.get(name, 0) + mult
        object.__setattr__(self, "_items", tuple(sorted(counts.items())))

    def __setattr__(self, name, value):
        raise AttributeError("MultiSet is immutable")

    @classmethod
    def from_pairs(cls, pairs):
        return cls(list(pairs))

    def items(self):
        return self._items

    @property
    def support(self):
        return tuple(name for name, _ in self._items)

    def mult(self, name: str) -> int:
        for n, m in self._items:
            if n == name:
                return m
        return 0

    @property
    def cardinality(self) -> int:
        return sum(m for _, m in self._items)

    @property
    def degree(self) -> int:
        out = 1
        for _, m in self._items:
            out *= factorial(m)
        return out

    def elements(self):
        """All elements with multiplicity, in canonical order."""
        out = []
        for name, m in self._items:
            out.extend([name] * m)
        return out

    def is_empty(self) -> bool:
        return not self._items

    def __eq__(self, other):
        return isinstance(other, MultiSet) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __contains__(self, name):
        return self.mult(name) > 0

    def sort_key(self):
        return self._items

    def __repr__(self):
        return "{" + ",".join(self.elements()) + "}"

    # The five multi-set operations: degree functions combine by max,
    # sum, min, truncated difference and pointwise product respectively.

    def union(self, other):
        names = set(self.support) | set(other.support)
        return MultiSet({n: max(self.mult(n), other.mult(n)) for n in names})

    def disjoint_union(self, other):
        names = set(self.support) | set(other.support)
        return MultiSet({n: self.mult(n) + other.mult(n) for n in names})

    def intersection(self, other):
        return MultiSet({n: min(m, other.mult(n)) for n, m in self._items})

    def difference(self, other):
        return MultiSet({n: max(m - other.mult(n), 0) for n, m in self._items})

    def product(self, other):
        out = {}
        for a, ma in self._items:
            for b, mb in other._items:
                out[a + PAIR_SEP + b] = ma * mb
        return MultiSet(out)

    def is_sub(self, other) -> bool:
        return all(m <= other.mult(n) for n, m in self._items)

    def __le__(self, other):
        return self.is_sub(other)

    def to_json(self):
        return [[name, mult] for name, mult in self._items]

    @classmethod
    def from_json(cls, data):
        return cls([(name, int(mult)) for name, mult in data])


def ms_combine(op: str, a: MultiSet, b: MultiSet) -> MultiSet:
    """Dispatch one of the five multi-set operations by name."""
    ops = {
        "union": MultiSet.union,
        "disjoint_union": MultiSet.disjoint_union,
        "intersection": MultiSet.intersection,
        "difference": MultiSet.difference,
        "product": MultiSet.product,
    }
    if op not in ops:
        raise ValueError(f"unknown multiset operation {op!r}")
    return ops[op](a, b)


def is_sub(a: MultiSet, b: MultiSet) -> bool:
    return a.is_sub(b)


def support_lift(m: MultiSet):
    """The set of tagged instances (x, k), 1 <= k <= mult(x), one name per
    instance, serialized "x#k"."""
    out = []
    for name, mult in m.items():
        out.extend(f"{name}{LIFT_SEP}{k}" for k in range(1, mult + 1))
    return tuple(out)


def support_project(name: str) -> str:
    """Undo support_lift on a single tagged name."""
    return name.rsplit(LIFT_SEP, 1)[0]


def guard_count(count: int):
    if count > ENUM_LIMIT:
        raise EnumerationLimitError(
            f"enumeration of {count} items exceeds the guard of {ENUM_LIMIT}")


def compositions(total: int, parts: int):
    """All tuples of `parts` positive integers summing to `total`.

    Ordered with earlier parts largest first, which is the conventional
    display order for multi-sets of fixed support and growing tail.
    """
    if parts == 0:
        return [()] if total == 0 else []
    if total < parts:
        return []
    guard_count(comb(total - 1, parts - 1))
    out = []

    def rec(remaining, slots, prefix):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for first in range(remaining - slots + 1, 0, -1):
            rec(remaining - first, slots - 1, prefix + (first,))

    rec(total, parts, ())
    return out


def enumerate_supported(s, n: int):
    """All multi-sets with support exactly `s` and cardinality `n`.

    `s` may be a set/iterable of names or a MultiSet; a MultiSet support is
    lifted to its instance set first (so the results live over the tagged
    universe).  Canonical (lexicographic) order.
    """
    if isinstance(s, MultiSet):
        names = support_lift(s)
    else:
        names = tuple(sorted(set(s)))
    if n == 0:
        return [MultiSet()] if not names else []
    if not names:
        return []
    return [
        MultiSet(list(zip(names, degs)))
        for degs in compositions(n, len(names))
    ]


def enumerate_sub_multisets(m: MultiSet):
    """All sub-multi-sets of m, including the empty one and m itself."""
    count = 1
    for _, mult in m.items():
        count *= mult + 1
    guard_count(count)
    out = [MultiSet()]
    for name, mult in m.items():
        out = [
            MultiSet(list(prev.items()) + ([(name, k)] if k else []))
            for prev in out
            for k in range(mult + 1)
        ]
    return sorted(out, key=lambda s: (s.cardinality, s.sort_key()))
