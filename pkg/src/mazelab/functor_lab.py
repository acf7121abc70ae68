"""Module functors and their combinatorial presentations.

Functors on free modules are represented by callables on integer
matrices.  Their deviations (inclusion-exclusion multilinearization
defects) and cross-effect projectors are computed directly; a functor's
maze-side presentation stores the projector-restricted deviation matrix
of every small pure maze, and the multation-side presentation stores the
divided-power action on every small multation.

Both presentations can be evaluated back into honest matrix maps on free
modules: the maze side by summing over labelled sub-mazes of a matrix,
the multation side by summing monomial-weighted multation actions over
blocks of cardinality-n multi-sets.  The round trips and the comparison
along the maze-to-multation translation are the substantive consistency
checks of this module.

Carriers are finitely generated abelian groups in invariant-factor form;
maps between direct sums are integer matrices compared entrywise modulo
the target generator orders.
"""

from fractions import Fraction

from . import bridge
from .errors import ShapeMismatchError
from .labycat import (
    Maze,
    MazeHom,
    Passage,
    normalize_numerical,
    pure_mazes_between,
    rename_maze,
    skeleton,
)
from .matrices import IntMat, column_lattice_basis, kron_power, solve_in_lattice
from .msetcat import MultHom, Multation, all_multations
from .multisets import MultiSet, guard_count
from .scalars import scalar

MAX_FUNCTOR_DEGREE = 3
MAX_MATRIX_SIDE = 3


# ---------------------------------------------------------------------------
# matrix functors and the deviation calculus


class MatrixFunctor:
    """A functor on free modules presented by matrices.

    `dim` maps a rank to the value's rank; `arrow` maps a b x a integer
    matrix to a dim(b) x dim(a) one.  The callable must be pure; identity
    and composition preservation are checked by tests, not assumed.
    """

    __slots__ = ("name", "dim", "arrow")

    def __init__(self, name, dim, arrow):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "arrow", arrow)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixFunctor is immutable")

    def __call__(self, m: IntMat) -> IntMat:
        out = self.arrow(m)
        if out.nrows != self.dim(m.nrows) or out.ncols != self.dim(m.ncols):
            raise ShapeMismatchError(
                f"functor {self.name} returned a wrongly shaped value")
        return out

    def __repr__(self):
        return f"MatrixFunctor({self.name})"


def tensor_power_functor(n: int) -> MatrixFunctor:
    """The n-fold tensor power, for n = 1 the identity functor."""
    if not 1 <= n <= MAX_FUNCTOR_DEGREE:
        raise ValueError(f"tensor power degree must be in 1..{MAX_FUNCTOR_DEGREE}")

    def arrow(m: IntMat) -> IntMat:
        return kron_power(m, n)

    return MatrixFunctor(f"tensor^{n}", lambda a: a**n, arrow)


def identity_functor() -> MatrixFunctor:
    return tensor_power_functor(1)


def direct_sum_functor(f: MatrixFunctor, g: MatrixFunctor) -> MatrixFunctor:
    def dim(a):
        return f.dim(a) + g.dim(a)

    def arrow(m: IntMat) -> IntMat:
        top = f(m)
        bot = g(m)
        rows = [list(r) + [0] * bot.ncols for r in top.rows]
        rows += [[0] * top.ncols + list(r) for r in bot.rows]
        return IntMat(top.nrows + bot.nrows, top.ncols + bot.ncols, rows)

    return MatrixFunctor(f"{f.name}+{g.name}", dim, arrow)


def deviation(f: MatrixFunctor, maps) -> IntMat:
    """Alternating sum of f over subset sums of the given maps.

    With k maps this is the (k-1)-st deviation; the empty subset
    contributes f of the zero map with sign (-1)^k.
    """
    maps = list(maps)
    if not maps:
        raise ValueError("deviation needs at least one map")
    nrows, ncols = maps[0].nrows, maps[0].ncols
    for m in maps:
        if (m.nrows, m.ncols) != (nrows, ncols):
            raise ShapeMismatchError("deviation maps must share their shape")
    k = len(maps)
    total = IntMat.zeros(f.dim(nrows), f.dim(ncols))
    for mask in range(1 << k):
        s = IntMat.zeros(nrows, ncols)
        for i in range(k):
            if mask >> i & 1:
                s = s + maps[i]
        sign = (-1) ** (k - bin(mask).count("1"))
        total = total + f(s).scale(sign)
    return total


def surjective_pair_subsets(m: int, n: int):
    """All K inside [m] x [n] with both projections surjective, as lists
    of (i, j) pairs (1-based)."""
    pairs = [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]
    guard_count(1 << len(pairs))
    out = []
    for mask in range(1 << len(pairs)):
        rows = 0
        cols = 0
        chosen = []
        for t, (i, j) in enumerate(pairs):
            if mask >> t & 1:
                rows |= 1 << i
                cols |= 1 << j
                chosen.append((i, j))
        if rows == ((1 << (m + 1)) - 2) and cols == ((1 << (n + 1)) - 2):
            out.append(chosen)
    return out


def signed_cover_sum(m: int, n: int, l_pairs) -> int:
    """Sum of (-1)^|K| over all K between l_pairs and [m] x [n] whose two
    projections are surjective, by brute-force enumeration."""
    pairs = [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]
    index = {p: t for t, p in enumerate(pairs)}
    l_mask = 0
    for p in set(l_pairs):
        if p not in index:
            raise ValueError(f"pair {p} outside [{m}] x [{n}]")
        l_mask |= 1 << index[p]
    free = ((1 << len(pairs)) - 1) & ~l_mask
    guard_count(1 << bin(free).count("1"))
    row_masks = []
    for i in range(1, m + 1):
        rm = 0
        for j in range(1, n + 1):
            rm |= 1 << index[(i, j)]
        row_masks.append(rm)
    col_masks = []
    for j in range(1, n + 1):
        cm = 0
        for i in range(1, m + 1):
            cm |= 1 << index[(i, j)]
        col_masks.append(cm)
    total = 0
    sub = free
    while True:
        k = l_mask | sub
        if all(k & rm for rm in row_masks) and all(k & cm for cm in col_masks):
            total += -1 if bin(k).count("1") & 1 else 1
        if sub == 0:
            break
        sub = (sub - 1) & free
    return total


def check_deviation_formula(f: MatrixFunctor, alphas, betas) -> bool:
    """Deviation of compositions against the sum over surjective pair
    subsets of deviations of products; exact matrix equality."""
    alphas = list(alphas)
    betas = list(betas)
    if not alphas or not betas:
        raise ValueError("need at least one map on each side")
    if alphas[0].ncols != betas[0].nrows:
        raise ShapeMismatchError("alpha and beta shapes are not composable")
    lhs = deviation(f, alphas) @ deviation(f, betas)
    m, n = len(alphas), len(betas)
    rhs = IntMat.zeros(lhs.nrows, lhs.ncols)
    for k_pairs in surjective_pair_subsets(m, n):
        prods = [alphas[i - 1] @ betas[j - 1] for (i, j) in k_pairs]
        rhs = rhs + deviation(f, prods)
    return lhs == rhs


def index_subsets(a: int):
    """Subsets of [a] as 1-based tuples, ordered by size then entries."""
    out = [()]
    for mask in range(1, 1 << a):
        out.append(tuple(i + 1 for i in range(a) if mask >> i & 1))
    out.sort(key=lambda s: (len(s), s))
    return out


def cross_effect_projectors(f: MatrixFunctor, a: int):
    """The complete orthogonal system of projectors slicing f of rank a
    into its cross-effects, indexed by subsets of [a].

    The subset X contributes f deviated over the coordinate projections
    it names.  Idempotence, orthogonality and completeness are asserted;
    a functor that fails them is not additive-compatible.
    """
    if a > MAX_MATRIX_SIDE:
        raise ValueError(f"rank {a} above the guard {MAX_MATRIX_SIDE}")
    pis = [IntMat.unit(a, a, i, i) for i in range(a)]
    out = []
    for x in index_subsets(a):
        if x:
            e = deviation(f, [pis[i - 1] for i in x])
        else:
            e = f(IntMat.zeros(a, a))
        out.append((x, e))
    dim = f.dim(a)
    total = IntMat.zeros(dim, dim)
    for x, e in out:
        if e @ e != e:
            raise ValueError(f"projector for {x} is not idempotent")
        total = total + e
    for x, e in out:
        for y, e2 in out:
            if x != y and not (e @ e2).is_zero():
                raise ValueError(f"projectors for {x} and {y} not orthogonal")
    if total != f(IntMat.identity(a)):
        raise ValueError("projectors do not sum to the identity")
    return out


_CE_BASIS_CACHE = {}


def cross_effect_basis(f: MatrixFunctor, a: int):
    """Echelon lattice basis of the top cross-effect image at rank a.

    Cached per functor instance; the computation is deterministic.
    """
    key = (id(f), a)
    cached = _CE_BASIS_CACHE.get(key)
    if cached is not None and cached[0] is f:
        return cached[1]
    for x, e in cross_effect_projectors(f, a):
        if len(x) == a:
            result = column_lattice_basis(e)
            _CE_BASIS_CACHE[key] = (f, result)
            return result
    raise AssertionError("unreachable")


def phi_forward(f: MatrixFunctor, maze: Maze):
    """The presentation value of one maze: the deviation of the labelled
    transport maps, restricted to the top cross-effect of the source and
    corestricted to that of the target.

    Requires integer labels; the restriction is guaranteed for functors
    with free values, and a failed corestriction raises.
    """
    dom = maze.dom
    cod = maze.cod
    a, b = len(dom), len(cod)
    dom_idx = {x: i for i, x in enumerate(dom)}
    cod_idx = {y: i for i, y in enumerate(cod)}
    maps = []
    for p in maze.instances():
        if p.label.denominator != 1:
            raise ValueError("transport labels must be integers")
        maps.append(IntMat.unit(b, a, cod_idx[p.dst], dom_idx[p.src],
                                p.label.numerator))
    if maps:
        dev = deviation(f, maps)
    else:
        if a or b:
            raise ValueError("a maze without passages must be empty-to-empty")
        dev = f(IntMat.zeros(0, 0))
    piv_x, basis_x = cross_effect_basis(f, a)
    piv_y, basis_y = cross_effect_basis(f, b)
    cols = []
    for v in basis_x:
        w = dev @ IntMat(len(v), 1, [[x] for x in v])
        coords = solve_in_lattice(piv_y, basis_y, [r[0] for r in w.rows])
        if coords is None:
            raise ValueError(
                "deviation does not map the source cross-effect into the "
                "target one; functor is not free-valued or not functorial")
        cols.append(coords)
    mat = IntMat(len(basis_y), len(basis_x),
                 [[cols[j][i] for j in range(len(cols))]
                  for i in range(len(basis_y))])
    return mat


# ---------------------------------------------------------------------------
# finitely generated abelian groups and their maps


class FgAbGroup:
    """Free rank plus an invariant-factor chain of torsion orders."""

    __slots__ = ("rank", "torsion")

    def __init__(self, rank: int, torsion=()):
        torsion = tuple(int(d) for d in torsion)
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        for d in torsion:
            if d < 2:
                raise ValueError("torsion orders must be >= 2")
        for d1, d2 in zip(torsion, torsion[1:]):
            if d2 % d1 != 0:
                raise ValueError("torsion orders must form a divisibility chain")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "torsion", torsion)

    def __setattr__(self, name, value):
        raise AttributeError("FgAbGroup is immutable")

    @property
    def orders(self):
        """Per-generator orders, 0 marking free generators."""
        return (0,) * self.rank + self.torsion

    @property
    def dim(self) -> int:
        return self.rank + len(self.torsion)

    def is_trivial(self) -> bool:
        return self.dim == 0

    def __eq__(self, other):
        return (isinstance(other, FgAbGroup) and self.rank == other.rank
                and self.torsion == other.torsion)

    def __hash__(self):
        return hash((self.rank, self.torsion))

    def __repr__(self):
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["rank"]), data.get("torsion", ()))


def _reduce_rows(rows, cod_orders):
    out = []
    for i, row in enumerate(rows):
        d = cod_orders[i]
        out.append([x % d if d else x for x in row])
    return out


class AbHom:
    """An integer-matrix map between direct sums of cyclic groups.

    dom_orders and cod_orders list the generator orders (0 for free).
    Entries in torsion rows are kept reduced, so structural equality is
    congruence.  Well-definedness demands that each domain generator's
    order annihilate its image column.
    """

    __slots__ = ("dom_orders", "cod_orders", "mat")

    def __init__(self, dom_orders, cod_orders, mat: IntMat):
        dom_orders = tuple(int(d) for d in dom_orders)
        cod_orders = tuple(int(d) for d in cod_orders)
        if mat.nrows != len(cod_orders) or mat.ncols != len(dom_orders):
            raise ShapeMismatchError("matrix does not match the generator counts")
        for j, dj in enumerate(dom_orders):
            if dj == 0:
                continue
            for i, di in enumerate(cod_orders):
                v = dj * mat.rows[i][j]
                if (v % di if di else v) != 0:
                    raise ValueError(
                        f"column {j} is not well defined on a generator of "
                        f"order {dj}")
        reduced = IntMat(mat.nrows, mat.ncols,
                         _reduce_rows(mat.rows, cod_orders))
        object.__setattr__(self, "dom_orders", dom_orders)
        object.__setattr__(self, "cod_orders", cod_orders)
        object.__setattr__(self, "mat", reduced)

    def __setattr__(self, name, value):
        raise AttributeError("AbHom is immutable")

    @classmethod
    def zero(cls, dom_orders, cod_orders):
        return cls(dom_orders, cod_orders,
                   IntMat.zeros(len(cod_orders), len(dom_orders)))

    @classmethod
    def identity(cls, orders):
        return cls(orders, orders, IntMat.identity(len(orders)))

    @classmethod
    def of_groups(cls, dom: FgAbGroup, cod: FgAbGroup, rows):
        return cls(dom.orders, cod.orders,
                   IntMat(cod.dim, dom.dim, rows))

    def __eq__(self, other):
        return (isinstance(other, AbHom)
                and self.dom_orders == other.dom_orders
                and self.cod_orders == other.cod_orders
                and self.mat == other.mat)

    def __hash__(self):
        return hash((self.dom_orders, self.cod_orders, self.mat))

    def __add__(self, other):
        self._same_ends(other)
        return AbHom(self.dom_orders, self.cod_orders, self.mat + other.mat)

    def __sub__(self, other):
        self._same_ends(other)
        return AbHom(self.dom_orders, self.cod_orders, self.mat - other.mat)

    def scale(self, factor: int):
        if isinstance(factor, Fraction):
            if factor.denominator != 1:
                raise ValueError("AbHom scaling must be integral")
            factor = factor.numerator
        return AbHom(self.dom_orders, self.cod_orders, self.mat.scale(factor))

    def compose(self, other: "AbHom") -> "AbHom":
        if other.cod_orders != self.dom_orders:
            raise ShapeMismatchError("homomorphisms are not composable")
        return AbHom(other.dom_orders, self.cod_orders, self.mat @ other.mat)

    def _same_ends(self, other):
        if (self.dom_orders != other.dom_orders
                or self.cod_orders != other.cod_orders):
            raise ShapeMismatchError("homomorphisms have different endpoints")

    def is_zero(self):
        return self.mat.is_zero()

    def __repr__(self):
        return f"AbHom({self.mat!r}: {self.dom_orders}->{self.cod_orders})"

    def to_json(self):
        return self.mat.to_json()


def abhom_block(grid, col_orders_list, row_orders_list) -> AbHom:
    """Assemble a block matrix of AbHoms into one AbHom.

    grid[i][j] maps the j-th column block to the i-th row block; None
    stands for a zero block.
    """
    dom_orders = tuple(d for orders in col_orders_list for d in orders)
    cod_orders = tuple(d for orders in row_orders_list for d in orders)
    rows = []
    for i, row_orders in enumerate(row_orders_list):
        height = len(row_orders)
        block_rows = [[] for _ in range(height)]
        for j, col_orders in enumerate(col_orders_list):
            width = len(col_orders)
            hom = grid[i][j]
            if hom is None:
                piece = [[0] * width for _ in range(height)]
            else:
                if (len(hom.cod_orders) != height
                        or len(hom.dom_orders) != width):
                    raise ShapeMismatchError(
                        f"block ({i},{j}) has the wrong shape")
                piece = [list(r) for r in hom.mat.rows]
            for r in range(height):
                block_rows[r].extend(piece[r])
        rows.extend(block_rows)
    return AbHom(dom_orders, cod_orders,
                 IntMat(len(cod_orders), len(dom_orders), rows))


def extract_block(hom: AbHom, row_orders_list, col_orders_list,
                  row_index: int, col_index: int) -> AbHom:
    """Cut one block back out of a block-assembled AbHom."""
    r0 = sum(len(o) for o in row_orders_list[:row_index])
    r1 = r0 + len(row_orders_list[row_index])
    c0 = sum(len(o) for o in col_orders_list[:col_index])
    c1 = c0 + len(col_orders_list[col_index])
    rows = [list(row[c0:c1]) for row in hom.mat.rows[r0:r1]]
    return AbHom(col_orders_list[col_index], row_orders_list[row_index],
                 IntMat(r1 - r0, c1 - c0, rows))


# ---------------------------------------------------------------------------
# maze-side presentations


class LabyModulePresentation:
    """A linear functor out of the degree-n maze quotient, as finite data:
    carriers on the skeleton [0..n] and one map per small pure maze."""

    __slots__ = ("degree", "groups", "table")

    def __init__(self, degree: int, groups, table, check=True):
        groups = list(groups)
        if len(groups) != degree + 1:
            raise ValueError("need one carrier per skeleton set 0..degree")
        table = dict(table)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "table", table)
        for maze, hom in table.items():
            j, k = len(maze.dom), len(maze.cod)
            if (hom.dom_orders != groups[j].orders
                    or hom.cod_orders != groups[k].orders):
                raise ShapeMismatchError(
                    f"value of {maze!r} does not match the carriers")
        if check:
            self.check()

    def __setattr__(self, name, value):
        raise AttributeError("LabyModulePresentation is immutable")

    def group(self, k: int) -> FgAbGroup:
        return self.groups[k]

    def block_group(self, k: int) -> FgAbGroup:
        """Carrier for a block index; trivial beyond the degree, where
        the truncation axiom forces the value to vanish."""
        if k > self.degree:
            return FgAbGroup(0)
        return self.groups[k]

    def mazes(self):
        return sorted(self.table, key=Maze.sort_key)

    def hom(self, maze: Maze) -> AbHom:
        """Value on a pure maze between any small sets, transported to the
        skeleton by the order-preserving renaming."""
        dom_map = {x: str(i + 1) for i, x in enumerate(maze.dom)}
        cod_map = {y: str(i + 1) for i, y in enumerate(maze.cod)}
        key = rename_maze(maze, dom_map, cod_map)
        if key not in self.table:
            raise KeyError(f"presentation lacks a value for {maze!r}")
        return self.table[key]

    def eval_hom(self, h: MazeHom):
        """Evaluate on a combination of pure mazes sharing endpoints,
        returning Fraction matrix rows (coefficients may be rational)."""
        j, k = len(h.dom), len(h.cod)
        rows = [[Fraction(0)] * self.groups[j].dim
                for _ in range(self.groups[k].dim)]
        for maze, c in h.comb:
            val = self.hom(maze)
            for i, row in enumerate(val.mat.rows):
                for jj, x in enumerate(row):
                    rows[i][jj] += c * x
        return rows

    def eval_labeled(self, maze: Maze):
        """Binomial-expand a labelled maze into the pure table and
        evaluate; Fraction matrix rows."""
        return self.eval_hom(normalize_numerical(MazeHom.of(maze), self.degree))

    def check(self):
        """Identity values and functoriality over the stored table."""
        for k in range(self.degree + 1):
            ident = Maze.identity(skeleton(k))
            if self.hom(ident) != AbHom.identity(self.groups[k].orders):
                raise ValueError(f"identity of [{k}] does not map to identity")
        mazes = self.mazes()
        for p in mazes:
            for q in mazes:
                if set(q.cod) != set(p.dom):
                    continue
                composite = bridge_compose_table(self, p, q)
                direct = self.hom(p).compose(self.hom(q))
                if not frac_rows_equal(composite, _frac_of_abhom(direct),
                                       self.groups[len(p.cod)].orders):
                    raise ValueError(
                        f"table is not functorial on {p!r} after {q!r}")

    def to_json(self):
        return {
            "degree": self.degree,
            "groups": [g.to_json() for g in self.groups],
            "homs": [{"maze": m.to_json(), "matrix": self.table[m].to_json()}
                     for m in self.mazes()],
        }

    @classmethod
    def from_json(cls, data, check=True):
        degree = int(data["degree"])
        groups = [FgAbGroup.from_json(g) for g in data["groups"]]
        table = {}
        for item in data["homs"]:
            maze = Maze.from_json(item["maze"])
            j, k = len(maze.dom), len(maze.cod)
            hom = AbHom.of_groups(groups[j], groups[k], item["matrix"])
            table[maze] = hom
        return cls(degree, groups, table, check=check)

    @classmethod
    def quadratic(cls, k_group: FgAbGroup, x_group: FgAbGroup,
                  y_group: FgAbGroup, alpha: AbHom, beta: AbHom, check=True):
        """Degree-2 presentation from the classifying diagram: carriers
        for [0], [1], [2] and the two crossing maps."""
        from .labycat import quadratic_generators

        gens = quadratic_generators()
        if alpha.dom_orders != x_group.orders or \
                alpha.cod_orders != y_group.orders:
            raise ShapeMismatchError("alpha must map the [1] carrier to [2]")
        if beta.dom_orders != y_group.orders or \
                beta.cod_orders != x_group.orders:
            raise ShapeMismatchError("beta must map the [2] carrier to [1]")
        table = {
            gens["I0"]: AbHom.identity(k_group.orders),
            gens["I1"]: AbHom.identity(x_group.orders),
            gens["I2"]: AbHom.identity(y_group.orders),
            gens["A"]: alpha,
            gens["B"]: beta,
            gens["C"]: beta.compose(alpha),
            gens["S"]: alpha.compose(beta) - AbHom.identity(y_group.orders),
        }
        return cls(2, [k_group, x_group, y_group], table, check=check)

    @classmethod
    def from_functor(cls, f: MatrixFunctor, degree: int, check=True):
        """The presentation of a free-valued matrix functor: carriers are
        the top cross-effects, values the restricted deviations."""
        if degree > MAX_FUNCTOR_DEGREE:
            raise ValueError("degree above the guard")
        groups = []
        for k in range(degree + 1):
            _, basis = cross_effect_basis(f, k)
            groups.append(FgAbGroup(len(basis)))
        table = {}
        for j in range(degree + 1):
            for k in range(degree + 1):
                for maze in pure_mazes_between(skeleton(j), skeleton(k),
                                               range(degree + 1)):
                    mat = phi_forward(f, maze)
                    table[maze] = AbHom.of_groups(groups[j], groups[k],
                                                  mat.rows)
        return cls(degree, groups, table, check=check)


def _frac_of_abhom(hom: AbHom):
    return [[Fraction(x) for x in row] for row in hom.mat.rows]


def bridge_compose_table(h: LabyModulePresentation, p: Maze, q: Maze):
    """Evaluate the quotient composite of two pure mazes through the
    table, as Fraction rows."""
    from .labycat import compose_in_laby_n

    composite = compose_in_laby_n(MazeHom.of(p), MazeHom.of(q), h.degree)
    return h.eval_hom(composite)


def frac_rows_equal(rows_a, rows_b, cod_orders) -> bool:
    """Entrywise congruence of Fraction matrices modulo the target orders.

    Torsion rows compare modulo their order, which requires the difference
    to be an integer multiple of it; free rows compare exactly.
    """
    if len(rows_a) != len(rows_b):
        return False
    for i, (ra, rb) in enumerate(zip(rows_a, rows_b)):
        if len(ra) != len(rb):
            return False
        d = cod_orders[i]
        for x, y in zip(ra, rb):
            diff = Fraction(x) - Fraction(y)
            if d == 0:
                if diff != 0:
                    return False
            else:
                if diff.denominator != 1 or diff.numerator % d != 0:
                    return False
    return True


# ---------------------------------------------------------------------------
# evaluation of maze presentations on matrices


def _subset_names(indices):
    return tuple(str(i) for i in indices)


def phi_block_index(h: LabyModulePresentation, a: int):
    """The blocks of the evaluated functor on rank a: the subsets of [a]
    with their carriers, in (size, entries) order."""
    subsets = index_subsets(a)
    orders = [h.block_group(len(x)).orders for x in subsets]
    return subsets, orders


def phi_inverse_eval(h: LabyModulePresentation, m: IntMat) -> AbHom:
    """Evaluate the presented functor on an integer matrix.

    The value on rank a is the direct sum of the carriers over subsets of
    [a]; the matrix acts blockwise by summing, over sub-mazes labelled by
    its entries, the binomial-expanded table values.
    """
    b, a = m.nrows, m.ncols
    if max(a, b) > MAX_MATRIX_SIDE:
        raise ValueError("matrix side above the guard")
    col_subsets, col_orders = phi_block_index(h, a)
    row_subsets, row_orders = phi_block_index(h, b)
    n = h.degree
    grid = []
    for y in row_subsets:
        row = []
        for x in col_subsets:
            dom_g = h.block_group(len(x))
            cod_g = h.block_group(len(y))
            total = AbHom.zero(dom_g.orders, cod_g.orders)
            if x == () and y == ():
                total = AbHom.identity(h.group(0).orders)
                row.append(total)
                continue
            if not x or not y or dom_g.is_trivial() or cod_g.is_trivial():
                row.append(total)
                continue
            if len(x) > n or len(y) > n:
                row.append(total)
                continue
            pairs = [(yy, xx) for yy in y for xx in x]
            if len(pairs) <= 30:
                for mask in range(1 << len(pairs)):
                    chosen = [pairs[t] for t in range(len(pairs))
                              if mask >> t & 1]
                    if len(chosen) > n:
                        continue
                    if {xx for _, xx in chosen} != set(x):
                        continue
                    if {yy for yy, _ in chosen} != set(y):
                        continue
                    maze = Maze(_subset_names(x), _subset_names(y),
                                [Passage(str(xx), str(yy),
                                         m.rows[yy - 1][xx - 1])
                                 for yy, xx in chosen])
                    val = h.eval_labeled(maze)
                    total = total + _abhom_from_frac(
                        val, dom_g.orders, cod_g.orders)
            else:
                raise ValueError("block too large to enumerate")
            row.append(total)
        grid.append(row)
    return abhom_block(grid, col_orders, row_orders)


def _abhom_from_frac(rows, dom_orders, cod_orders) -> AbHom:
    ints = []
    for row in rows:
        out = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError("expected an integral evaluation")
            out.append(x.numerator)
        ints.append(out)
    return AbHom(dom_orders, cod_orders,
                 IntMat(len(cod_orders), len(dom_orders), ints))


def _instance_subset_matrices(maze: Maze):
    """For every subset of the maze's passage instances, the matrix of
    summed labels (cod x dom), with the subset's parity sign."""
    dom = maze.dom
    cod = maze.cod
    a, b = len(dom), len(cod)
    dom_idx = {x: i for i, x in enumerate(dom)}
    cod_idx = {y: i for i, y in enumerate(cod)}
    inst = maze.instances()
    k = len(inst)
    for mask in range(1 << k):
        rows = [[0] * a for _ in range(b)]
        for i in range(k):
            if mask >> i & 1:
                p = inst[i]
                if p.label.denominator != 1:
                    raise ValueError("labels must be integers here")
                rows[cod_idx[p.dst]][dom_idx[p.src]] += p.label.numerator
        sign = (-1) ** (k - bin(mask).count("1"))
        yield sign, IntMat(b, a, rows)


def _phi_deviation_block(h: LabyModulePresentation, maze: Maze):
    """Deviation of the evaluated functor along a maze's transports,
    restricted to the full-support blocks (with a consistency assertion
    that the other row blocks vanish there)."""
    a, b = len(maze.dom), len(maze.cod)
    col_subsets, col_orders = phi_block_index(h, a)
    row_subsets, row_orders = phi_block_index(h, b)
    total = None
    for sign, mat in _instance_subset_matrices(maze):
        term = phi_inverse_eval(h, mat).scale(sign)
        total = term if total is None else total + term
    full_col = col_subsets.index(tuple(range(1, a + 1)))
    full_row = row_subsets.index(tuple(range(1, b + 1)))
    for i, y in enumerate(row_subsets):
        block = extract_block(total, row_orders, col_orders, i, full_col)
        if i != full_row and not block.is_zero():
            raise AssertionError(
                "deviation leaks outside the target cross-effect block")
    return extract_block(total, row_orders, col_orders, full_row, full_col)


def phi_roundtrip_check(h: LabyModulePresentation) -> bool:
    return not phi_roundtrip_failures(h)


def phi_roundtrip_failures(h: LabyModulePresentation):
    """Re-derive every stored value from the evaluated functor by
    deviations and compare; returns mismatch descriptions."""
    failures = []
    for maze in h.mazes():
        got = _phi_deviation_block(h, maze)
        if got != h.hom(maze):
            failures.append(f"round trip differs on {maze!r}")
    return failures


def numerical_axiom_check(h: LabyModulePresentation, maze: Maze) -> bool:
    """The binomial expansion law on one labelled maze: the deviation
    evaluation must equal the expanded pure-table evaluation."""
    got = _phi_deviation_block(h, maze)
    expected = h.eval_labeled(maze)
    return frac_rows_equal(_frac_of_abhom(got), expected,
                           h.group(len(maze.cod)).orders)


def quasi_homogeneous_check(h: LabyModulePresentation, samples) -> bool:
    """Whether rescaling every label by a scales stored values by a^n."""
    n = h.degree
    for maze in h.mazes():
        base = _frac_of_abhom(h.hom(maze))
        for a in samples:
            a = scalar(a)
            lhs = h.eval_labeled(maze.relabel_all(a))
            rhs = [[a**n * x for x in row] for row in base]
            if not frac_rows_equal(lhs, rhs, h.group(len(maze.cod)).orders):
                return False
    return True


# ---------------------------------------------------------------------------
# multation-side presentations


class MSetModulePresentation:
    """A linear functor out of the degree-n multation category over a
    finite universe, as finite data."""

    __slots__ = ("degree", "universe", "groups", "table")

    def __init__(self, degree: int, universe, groups, table, check=True):
        universe = tuple(sorted(set(universe)))
        groups = dict(groups)
        table = dict(table)
        for a in bridge.all_cardinality_multisets(universe, degree):
            if a not in groups:
                raise ValueError(f"missing carrier for {a!r}")
        for mu, hom in table.items():
            if (hom.dom_orders != groups[mu.dom].orders
                    or hom.cod_orders != groups[mu.cod].orders):
                raise ShapeMismatchError(
                    f"value of {mu!r} does not match the carriers")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "table", table)
        if check:
            self.check()

    def __setattr__(self, name, value):
        raise AttributeError("MSetModulePresentation is immutable")

    def objects(self):
        return bridge.all_cardinality_multisets(self.universe, self.degree)

    def has_group(self, a: MultiSet) -> bool:
        return a in self.groups

    def group(self, a: MultiSet) -> FgAbGroup:
        return self.groups[a]

    def hom(self, mu: Multation) -> AbHom:
        if mu not in self.table:
            raise KeyError(f"presentation lacks a value for {mu!r}")
        return self.table[mu]

    def eval_hom(self, hom: MultHom) -> AbHom:
        total = AbHom.zero(self.groups[hom.dom].orders,
                           self.groups[hom.cod].orders)
        for mu, c in hom.comb:
            total = total + self.hom(mu).scale(c)
        return total

    def check(self):
        for a in self.objects():
            ident = Multation.identity(a)
            if self.hom(ident) != AbHom.identity(self.groups[a].orders):
                raise ValueError(f"identity of {a!r} does not map to identity")
        from .msetcat import multation_compose

        objs = self.objects()
        for a in objs:
            for b in objs:
                for c in objs:
                    for nu in all_multations(a, b):
                        for mu in all_multations(b, c):
                            lhs = self.eval_hom(multation_compose(mu, nu))
                            rhs = self.hom(mu).compose(self.hom(nu))
                            if lhs != rhs:
                                raise ValueError(
                                    f"table is not functorial on "
                                    f"{mu!r} after {nu!r}")

    def to_json(self):
        objs = self.objects()
        mus = sorted(self.table, key=Multation.sort_key)
        return {
            "degree": self.degree,
            "universe": list(self.universe),
            "groups": [{"multiset": a.to_json(),
                        **self.groups[a].to_json()} for a in objs],
            "homs": [{"multation": mu.to_json(),
                      "matrix": self.table[mu].to_json()} for mu in mus],
        }

    @classmethod
    def from_json(cls, data, check=True):
        universe = data["universe"]
        groups = {}
        for item in data["groups"]:
            groups[MultiSet.from_json(item["multiset"])] = \
                FgAbGroup.from_json(item)
        table = {}
        for item in data["homs"]:
            mu = Multation.from_json(item["multation"])
            table[mu] = AbHom.of_groups(groups[mu.dom], groups[mu.cod],
                                        item["matrix"])
        return cls(int(data["degree"]), universe, groups, table, check=check)

    @classmethod
    def tensor_power(cls, n: int, universe, check=True):
        """The multation module of the n-fold tensor power: carriers are
        spanned by words with prescribed letter content, and a multation
        acts by summing over content-compatible assignments of its columns
        to the word's slots."""
        universe = tuple(sorted(set(universe)))
        objs = bridge.all_cardinality_multisets(universe, n)
        words = {a: _words_with_content(a, n) for a in objs}
        groups = {a: FgAbGroup(len(words[a])) for a in objs}
        table = {}
        for a in objs:
            for b in objs:
                for mu in all_multations(a, b):
                    rows = [[0] * len(words[a]) for _ in words[b]]
                    row_index = {w: i for i, w in enumerate(words[b])}
                    for j, w in enumerate(words[a]):
                        for out in _multation_on_word(mu, w):
                            rows[row_index[out]][j] += 1
                    table[mu] = AbHom.of_groups(groups[a], groups[b], rows)
        return cls(n, universe, groups, table, check=check)

    @classmethod
    def frobenius_twist(cls, carrier: FgAbGroup, universe, degree: int,
                        check=True):
        """A linear carrier placed in the given degree along power maps:
        constant multi-sets x^n carry the group, everything else is zero,
        and the single-column multations act as the identity."""
        universe = tuple(sorted(set(universe)))
        objs = bridge.all_cardinality_multisets(universe, degree)
        zero = FgAbGroup(0)
        groups = {}
        for a in objs:
            constant = len(a.support) == 1
            groups[a] = carrier if constant else zero
        table = {}
        for a in objs:
            for b in objs:
                for mu in all_multations(a, b):
                    if (len(a.support) == 1 and len(b.support) == 1):
                        table[mu] = AbHom.identity(carrier.orders)
                    else:
                        table[mu] = AbHom.zero(groups[a].orders,
                                               groups[b].orders)
        return cls(degree, universe, groups, table, check=check)


def _words_with_content(a: MultiSet, n: int):
    from itertools import permutations

    return sorted(set(permutations(a.elements(), n)))


def _multation_on_word(mu: Multation, word):
    """All words produced by assigning mu's column types to the slots of
    `word` with the prescribed counts, matching first letters."""
    slots_by_letter = {}
    for i, letter in enumerate(word):
        slots_by_letter.setdefault(letter, []).append(i)
    cols_by_letter = {}
    for (a, b), m in mu.pairs:
        cols_by_letter.setdefault(a, []).append((b, m))
    if set(slots_by_letter) != set(cols_by_letter):
        return
    per_letter = []
    for letter, slots in sorted(slots_by_letter.items()):
        targets = cols_by_letter[letter]
        if sum(m for _, m in targets) != len(slots):
            return
        per_letter.append((slots, targets))

    def assignments(slots, targets):
        if not targets:
            if not slots:
                yield {}
            return
        from itertools import combinations

        (b, m), rest = targets[0], targets[1:]
        for chosen in combinations(slots, m):
            remaining = [s for s in slots if s not in chosen]
            for sub in assignments(remaining, rest):
                combined = dict(sub)
                for s in chosen:
                    combined[s] = b
                yield combined

    def rec(idx, acc):
        if idx == len(per_letter):
            out = list(word)
            for s, b in acc.items():
                out[s] = b
            yield tuple(out)
            return
        slots, targets = per_letter[idx]
        for assign in assignments(slots, targets):
            merged = dict(acc)
            merged.update(assign)
            yield from rec(idx + 1, merged)

    yield from rec(0, {})


def psi_block_index(j: MSetModulePresentation, names):
    """Blocks of the evaluated functor on a set: the cardinality-n
    multi-sets supported inside it, with their carriers."""
    blocks = bridge.all_cardinality_multisets(names, j.degree)
    orders = [j.group(a).orders for a in blocks]
    return blocks, orders


def psi_inverse_eval(j: MSetModulePresentation, m: IntMat) -> AbHom:
    """Evaluate the presented functor on an integer matrix: blocks are
    indexed by cardinality-n multi-sets, and each multation between them
    contributes its monomial in the matrix entries times its stored map."""
    b, a = m.nrows, m.ncols
    if max(a, b) > MAX_MATRIX_SIDE:
        raise ValueError("matrix side above the guard")
    dom_names = skeleton(a)
    cod_names = skeleton(b)
    if not set(dom_names) <= set(j.universe) or \
            not set(cod_names) <= set(j.universe):
        raise ValueError("matrix is larger than the presentation's universe")
    col_blocks, col_orders = psi_block_index(j, dom_names)
    row_blocks, row_orders = psi_block_index(j, cod_names)
    grid = []
    for bb in row_blocks:
        row = []
        for aa in col_blocks:
            total = AbHom.zero(j.group(aa).orders, j.group(bb).orders)
            for mu in all_multations(aa, bb):
                weight = 1
                for (x, y), mult in mu.pairs:
                    weight *= m.rows[int(y) - 1][int(x) - 1] ** mult
                    if weight == 0:
                        break
                if weight == 0:
                    continue
                total = total + j.hom(mu).scale(weight)
            row.append(total)
        grid.append(row)
    return abhom_block(grid, col_orders, row_orders)


def _psi_deviation_block(j: MSetModulePresentation, maze: Maze):
    """Deviation of the evaluated functor along a maze's transports,
    restricted to the exact-support blocks."""
    a, b = len(maze.dom), len(maze.cod)
    col_blocks, col_orders = psi_block_index(j, skeleton(a))
    row_blocks, row_orders = psi_block_index(j, skeleton(b))
    total = None
    for sign, mat in _instance_subset_matrices(maze):
        term = psi_inverse_eval(j, mat).scale(sign)
        total = term if total is None else total + term
    col_exact = [i for i, aa in enumerate(col_blocks)
                 if set(aa.support) == set(skeleton(a))]
    row_exact = [i for i, bb in enumerate(row_blocks)
                 if set(bb.support) == set(skeleton(b))]
    for i in range(len(row_blocks)):
        if i in row_exact:
            continue
        for jj in col_exact:
            if not extract_block(total, row_orders, col_orders, i, jj).is_zero():
                raise AssertionError(
                    "deviation leaks outside the exact-support blocks")
    grid = [[extract_block(total, row_orders, col_orders, i, jj)
             for jj in col_exact] for i in row_exact]
    return (grid,
            [col_blocks[jj] for jj in col_exact],
            [row_blocks[i] for i in row_exact])


def check_ariadne_thread(j: MSetModulePresentation) -> bool:
    return not ariadne_thread_failures(j)


def ariadne_thread_failures(j: MSetModulePresentation):
    """Compare the deviation evaluation of the multation module with the
    pushforward of mazes through the translation functor, on all small
    pure mazes inside the universe."""
    n = j.degree
    failures = []
    max_side = min(len(j.universe), MAX_MATRIX_SIDE)
    for a_size in range(max_side + 1):
        for b_size in range(max_side + 1):
            for maze in pure_mazes_between(skeleton(a_size), skeleton(b_size),
                                           range(n + 1)):
                grid, col_blocks, row_blocks = _psi_deviation_block(j, maze)
                matrix = bridge.ariadne_maze(maze, n)
                for bi, bb in enumerate(row_blocks):
                    for ai, aa in enumerate(col_blocks):
                        expected = j.eval_hom(matrix.entry(bb, aa))
                        if grid[bi][ai] != expected:
                            failures.append(
                                f"thread mismatch on {maze!r} at "
                                f"({bb!r}, {aa!r})")
    return failures


# ---------------------------------------------------------------------------
# the degree-2 classification


def quadratic_relations_check(k_group: FgAbGroup, x_group: FgAbGroup,
                              y_group: FgAbGroup, alpha: AbHom,
                              beta: AbHom) -> bool:
    """The two classifying relations of degree-2 presentations."""
    if alpha.dom_orders != x_group.orders or \
            alpha.cod_orders != y_group.orders or \
            beta.dom_orders != y_group.orders or \
            beta.cod_orders != x_group.orders:
        raise ShapeMismatchError("alpha and beta do not fit the carriers")
    bab = beta.compose(alpha).compose(beta)
    aba = alpha.compose(beta).compose(alpha)
    return bab == beta.scale(2) and aba == alpha.scale(2)


def quadratic_homogeneous_criterion(k_group: FgAbGroup, x_group: FgAbGroup,
                                    y_group: FgAbGroup, alpha: AbHom,
                                    beta: AbHom) -> bool:
    """Effective criterion for a degree-2 presentation to carry a
    homogeneous structure: trivial constant part and beta alpha = 2."""
    if not quadratic_relations_check(k_group, x_group, y_group, alpha, beta):
        raise ValueError("the classifying relations do not hold")
    if not k_group.is_trivial():
        return False
    doubled = AbHom.identity(x_group.orders).scale(2)
    return beta.compose(alpha) == doubled
