"""Command-line front end.

Subcommands: compose, normalize, ariadne, theseus, xi, tables, eval,
verify.  Files are the JSON shapes each module defines; output is
canonical JSON (or a pretty rendering with --format pretty) on stdout.

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 shape or
domain mismatch, 4 enumeration limit.
"""

import argparse
import json
import sys
import time

from . import bridge, verify
from .errors import (
    DomainMismatchError,
    EnumerationLimitError,
    ParseError,
    ShapeMismatchError,
)
from .labycat import (
    Maze,
    MazeHom,
    laby2_table,
    maze_hom_compose,
    normalize_homogeneous,
    normalize_numerical,
    quadratic_generators,
)
from .functor_lab import (
    LabyModulePresentation,
    MSetModulePresentation,
    phi_block_index,
    phi_inverse_eval,
    psi_block_index,
    psi_inverse_eval,
)
from .matrices import IntMat
from .msetcat import MultHom, Multation, mset2_generators, mset2_table
from .multisets import MultiSet
from .scalars import scalar_str


def _load(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _dump(obj):
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def load_maze_hom(path) -> MazeHom:
    data = _load(path)
    try:
        if "passages" in data:
            return MazeHom.of(Maze.from_json(data))
        if "terms" in data:
            return MazeHom.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"{path}: malformed maze data ({exc})") from exc
    raise ParseError(f"{path}: neither a maze nor a maze combination")


def load_mult_hom(path) -> MultHom:
    data = _load(path)
    try:
        if "pairs" in data:
            return MultHom.of(Multation.from_json(data))
        if "terms" in data:
            return MultHom.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"{path}: malformed multation data ({exc})") from exc
    raise ParseError(f"{path}: neither a multation nor a combination")


def load_matrix(path) -> IntMat:
    data = _load(path)
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError(f"{path}: expected a JSON array of rows")
    ncols = len(data[0]) if data else 0
    try:
        return IntMat(len(data), ncols, data)
    except (ShapeMismatchError, ValueError, TypeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def pretty_maze(maze: Maze) -> str:
    head = "{" + ",".join(maze.dom) + "} -> {" + ",".join(maze.cod) + "}"
    if not maze.passages:
        return f"maze {head} (no passages)"
    lines = [f"maze {head}"]
    for p, m in maze.passages:
        suffix = f"  x{m}" if m > 1 else ""
        lines.append(f"  {p.src} -({scalar_str(p.label)})-> {p.dst}{suffix}")
    return "\n".join(lines)


def pretty_maze_hom(hom: MazeHom) -> str:
    if hom.is_zero():
        return "0"
    parts = []
    for maze, c in hom.comb:
        prefix = "" if c == 1 else f"{scalar_str(c)} * "
        parts.append(prefix + pretty_maze(maze))
    return "\n+ ".join(parts)


def pretty_multation(mu: Multation) -> str:
    cols = mu.columns()
    widths = [max(len(a), len(b)) for a, b in cols]
    top = " ".join(a.ljust(w) for (a, _), w in zip(cols, widths))
    bot = " ".join(b.ljust(w) for (_, b), w in zip(cols, widths))
    return f"[{top}]\n[{bot}]"


def pretty_mult_hom(hom: MultHom) -> str:
    if hom.is_zero():
        return "0"
    parts = []
    for mu, c in hom.comb:
        prefix = "" if c == 1 else f"{scalar_str(c)} * "
        parts.append(prefix + "\n" + pretty_multation(mu))
    return "\n+ ".join(parts)


def cmd_compose(args) -> int:
    if args.category == "mset":
        f = load_mult_hom(args.files[0])
        g = load_mult_hom(args.files[1])
        from .msetcat import multhom_compose

        result = multhom_compose(f, g)
        _emit(result, pretty_mult_hom, args.format)
        return 0
    f = load_maze_hom(args.files[0])
    g = load_maze_hom(args.files[1])
    if args.category == "laby":
        result = maze_hom_compose(f, g)
    else:
        if args.degree is None:
            raise ParseError("--degree is required for quotient composition")
        result = maze_hom_compose(f, g)
        result = normalize_numerical(result, args.degree)
        if args.category == "laby_hom":
            result = normalize_homogeneous(result, args.degree)
    _emit(result, pretty_maze_hom, args.format)
    return 0


def cmd_normalize(args) -> int:
    hom = load_maze_hom(args.file)
    if args.kind == "numerical":
        result = normalize_numerical(hom, args.degree)
    else:
        result = normalize_homogeneous(hom, args.degree)
    _emit(result, pretty_maze_hom, args.format)
    return 0


def cmd_ariadne(args) -> int:
    hom = load_maze_hom(args.file)
    matrix = bridge.ariadne_hom(hom, args.degree)
    if args.format == "pretty":
        lines = [f"degree {args.degree} translation "
                 f"{{{','.join(matrix.dom)}}} -> {{{','.join(matrix.cod)}}}"]
        if matrix.is_zero():
            lines.append("  0")
        for b, a in matrix.nonzero_keys():
            lines.append(f"  ({b!r} <- {a!r}):")
            entry = pretty_mult_hom(matrix.entry(b, a))
            lines.extend("    " + ln for ln in entry.splitlines())
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        _dump(matrix.to_json())
    return 0


def cmd_theseus(args) -> int:
    hom = load_mult_hom(args.file)
    result = bridge.theseus_hom(hom, args.degree)
    _emit(result, pretty_maze_hom, args.format)
    return 0


def cmd_xi(args) -> int:
    data = _load(args.file)
    if args.inverse:
        try:
            maze = Maze.from_json(data)
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"{args.file}: malformed maze ({exc})") from exc
        corr = bridge.xi_inverse(maze)
        _dump(corr.to_json())
        return 0
    try:
        corr = bridge.Correspondence.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"{args.file}: malformed span ({exc})") from exc
    maze = bridge.xi_correspondence(corr)
    if args.format == "pretty":
        sys.stdout.write(pretty_maze(maze) + "\n")
    else:
        _dump(maze.to_json())
    return 0


def _cell_name(hom, names) -> str:
    if hom is None:
        return "--"
    if hom.is_zero():
        return "0"
    parts = []
    for basis, c in hom.comb:
        name = names.get(basis)
        if name is None:
            return "?"
        prefix = "" if c == 1 else scalar_str(c)
        parts.append(prefix + name)
    return "+".join(parts)


def render_tables() -> str:
    gens = quadratic_generators()
    maze_names = {gens[k]: k for k in ("A", "B", "C", "S")}
    maze_names[gens["I1"]] = "I"
    maze_names[gens["I2"]] = "I"
    maze_names[gens["I0"]] = "I"
    t1 = laby2_table()
    order1 = ["A", "B", "C", "S"]
    lines = ["degree-2 maze composition (row o column):"]
    header = "      " + "".join(f"{c:>6s}" for c in order1)
    lines.append(header)
    for r in order1:
        cells = [_cell_name(t1[(r, c)], maze_names) for c in order1]
        lines.append(f"{r:>6s}" + "".join(f"{c:>6s}" for c in cells))

    mgens = mset2_generators()
    from .msetcat import identity_multation

    mult_names = {mgens[k]: k[0] for k in ("alpha", "beta", "sigma")}
    mult_names[identity_multation(MultiSet(["1", "1"]))] = "i"
    mult_names[identity_multation(MultiSet(["1", "2"]))] = "i"
    t2 = mset2_table()
    order2 = ["alpha", "beta", "sigma"]
    lines.append("")
    lines.append("degree-2 multation composition (row o column):")
    lines.append("      " + "".join(f"{c[0]:>6s}" for c in order2))
    for r in order2:
        cells = [_cell_name(t2[(r, c)], mult_names) for c in order2]
        lines.append(f"{r[0]:>6s}" + "".join(f"{c:>6s}" for c in cells))
    return "\n".join(lines)


def cmd_tables(args) -> int:
    if args.degree != 2:
        raise ParseError("only the degree-2 tables are available")
    sys.stdout.write(render_tables() + "\n")
    return 0


def cmd_eval(args) -> int:
    matrix = load_matrix(args.matrix)
    data = _load(args.module)
    try:
        if args.kind == "laby":
            pres = LabyModulePresentation.from_json(data)
            hom = phi_inverse_eval(pres, matrix)
            col_blocks, _ = phi_block_index(pres, matrix.ncols)
            row_blocks, _ = phi_block_index(pres, matrix.nrows)
            col_legend = [list(x) for x in col_blocks]
            row_legend = [list(y) for y in row_blocks]
        else:
            pres = MSetModulePresentation.from_json(data)
            from .labycat import skeleton

            hom = psi_inverse_eval(pres, matrix)
            col_blocks, _ = psi_block_index(pres, skeleton(matrix.ncols))
            row_blocks, _ = psi_block_index(pres, skeleton(matrix.nrows))
            col_legend = [a.to_json() for a in col_blocks]
            row_legend = [b.to_json() for b in row_blocks]
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"{args.module}: {exc}") from exc
    _dump({
        "dom_blocks": col_legend,
        "cod_blocks": row_legend,
        "dom_orders": list(hom.dom_orders),
        "cod_orders": list(hom.cod_orders),
        "matrix": hom.to_json(),
    })
    return 0


def cmd_verify(args) -> int:
    t0 = time.time()
    results = verify.run_suite(args.suite, seed=args.seed, trials=args.trials)
    failed = 0
    for name, ok, detail in results:
        if ok:
            sys.stdout.write(f"{name}: pass\n")
        else:
            failed += 1
            sys.stdout.write(f"{name}: FAIL ({detail})\n")
    dt = time.time() - t0
    sys.stdout.write(f"{len(results) - failed}/{len(results)} checks passed "
                     f"in {dt:.2f}s\n")
    return 1 if failed else 0


def _emit(result, pretty, fmt):
    if fmt == "pretty":
        sys.stdout.write(pretty(result) + "\n")
    else:
        _dump(result.to_json())


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mazelab",
        description="exact computations in the maze and multation categories")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=["json", "pretty"], default="json")

    p = sub.add_parser("compose", help="compose two arrows")
    p.add_argument("--category", choices=["laby", "laby_n", "laby_hom", "mset"],
                   default="laby")
    p.add_argument("--degree", "-n", type=int)
    add_format(p)
    p.add_argument("files", nargs=2)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("normalize", help="normal form in a quotient")
    p.add_argument("--kind", choices=["numerical", "homogeneous"],
                   default="numerical")
    p.add_argument("--degree", "-n", type=int, required=True)
    add_format(p)
    p.add_argument("file")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("ariadne", help="translate a maze to multations")
    p.add_argument("--degree", "-n", type=int, required=True)
    add_format(p)
    p.add_argument("file")
    p.set_defaults(func=cmd_ariadne)

    p = sub.add_parser("theseus", help="translate a multation to a maze")
    p.add_argument("--degree", "-n", type=int, required=True)
    add_format(p)
    p.add_argument("file")
    p.set_defaults(func=cmd_theseus)

    p = sub.add_parser("xi", help="translate a span of surjections")
    p.add_argument("--inverse", action="store_true",
                   help="read a pure maze and emit its canonical span")
    add_format(p)
    p.add_argument("file")
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("tables", help="print the degree-2 tables")
    p.add_argument("--degree", "-n", type=int, default=2)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("eval", help="evaluate a presentation on a matrix")
    p.add_argument("--kind", choices=["laby", "mset"], required=True)
    p.add_argument("module")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(verify.SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return 2
    except (DomainMismatchError, ShapeMismatchError) as exc:
        sys.stderr.write(f"shape error: {exc}\n")
        return 3
    except EnumerationLimitError as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return 4


if __name__ == "__main__":
    sys.exit(main())
