"""Exact scalar arithmetic and formal linear combinations.

Scalars are arbitrary-precision rationals (``fractions.Fraction``), which
already keeps them reduced with a positive denominator.  Nothing in this
package ever touches floating point.
"""

from fractions import Fraction

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def scalar(value) -> Fraction:
    """Coerce an int, string ("p" or "p/q") or Fraction to a Scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


def scalar_str(value: Fraction) -> str:
    """Serialize as "p" or "p/q" in reduced form."""
    value = scalar(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def binomial(r, k: int) -> Fraction:
    """Generalized binomial coefficient r(r-1)...(r-k+1) / k!.

    Defined for any rational r and natural k; k < 0 is rejected.
    """
    if k < 0:
        raise ValueError(f"binomial undefined for k = {k} < 0")
    r = scalar(r)
    num = ONE
    for i in range(k):
        num *= r - i
    den = 1
    for i in range(2, k + 1):
        den *= i
    return num / den


def binomial_product(labels, degrees) -> Fraction:
    """Product of binomial(label_i, degree_i) over paired sequences.

    This is the per-passage coefficient of the binomial expansion axiom:
    each passage contributes binom(label, multiplicity assigned to it).
    """
    labels = list(labels)
    degrees = list(degrees)
    if len(labels) != len(degrees):
        raise ValueError("labels and degrees must have equal length")
    out = ONE
    for lab, deg in zip(labels, degrees):
        out *= binomial(lab, deg)
        if out == 0:
            return ZERO
    return out


# ``maze_binomial`` is the name used by callers that think of the paired
# sequences as (passage label, assigned multiplicity).
maze_binomial = binomial_product


def multinomial(parts) -> int:
    """(sum parts)! / prod(part!) for nonnegative integer parts."""
    parts = list(parts)
    if any(p < 0 for p in parts):
        raise ValueError("multinomial parts must be nonnegative")
    total = 0
    out = 1
    for p in parts:
        for i in range(1, p + 1):
            total += 1
            out = out * total // i
    return out


class LinComb:
    """A formal linear combination over an ordered basis.

    Stored canonically: terms sorted by the basis element's ``sort_key()``,
    duplicates merged, zero coefficients dropped.  Instances are immutable;
    all operations return new combinations.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged = {}
        for basis, coeff in terms:
            coeff = scalar(coeff)
            if basis in merged:
                merged[basis] += coeff
            else:
                merged[basis] = coeff
        kept = [(b, c) for b, c in merged.items() if c != 0]
        kept.sort(key=lambda bc: bc[0].sort_key())
        object.__setattr__(self, "terms", tuple(kept))

    def __setattr__(self, name, value):
        raise AttributeError("LinComb is immutable")

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, LinComb) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other):
        return LinComb(self.terms + other.terms)

    def __sub__(self, other):
        return LinComb(self.terms + tuple((b, -c) for b, c in other.terms))

    def scale(self, factor):
        factor = scalar(factor)
        return LinComb((b, factor * c) for b, c in self.terms)

    def map_basis(self, fn):
        """Apply fn to every basis element, recanonicalizing."""
        return LinComb((fn(b), c) for b, c in self.terms)

    def coefficient(self, basis) -> Fraction:
        for b, c in self.terms:
            if b == basis:
                return c
        return ZERO

    def __repr__(self):
        if not self.terms:
            return "LinComb(0)"
        bits = " + ".join(f"{scalar_str(c)}*{b!r}" for b, c in self.terms)
        return f"LinComb({bits})"


def lincomb_combine(combs, scales) -> LinComb:
    """Scaled sum of linear combinations, recanonicalized."""
    combs = list(combs)
    scales = [scalar(s) for s in scales]
    if len(combs) != len(scales):
        raise ValueError("need one scale per combination")
    terms = []
    for comb, s in zip(combs, scales):
        terms.extend((b, s * c) for b, c in comb.terms)
    return LinComb(terms)
