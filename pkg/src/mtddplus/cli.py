"""Batch command-line interface.

Exit codes: 0 success (and "equal" / "zero"), 1 "unequal" / "nonzero",
2 a size or densification limit was hit, 3 invalid input, 4 usage error.
Errors are printed to stderr as one line ``error: <Kind>: <message>``.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import automata, generators, linsolve, oracle, ops
from .equality import equal_grammars, is_zero
from .errors import LimitError, MtddError, ParseError, ValidationError
from .grammar import NAME_RE, Grammar, grammar_size, parse_grammar, serialize
from .semiring import parse_ring

EXIT_OK, EXIT_FALSE, EXIT_LIMIT, EXIT_INPUT, EXIT_USAGE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load(spec: str) -> tuple[Grammar, str]:
    """``file`` or ``file:Var``; the variable defaults to the start variable."""
    path, var = spec, None
    if ":" in spec and not os.path.exists(spec):
        head, tail = spec.rsplit(":", 1)
        if NAME_RE.fullmatch(tail):
            path, var = head, tail
    g = parse_grammar(_read(path))
    if var is None:
        var = g.start
    elif var not in g.rules:
        raise ValidationError(f"{path} has no variable {var!r}")
    return g, var


def _emit(args, g: Grammar, comments=()):
    _write(args.output, serialize(g, comments))


def cmd_check(args):
    g, v = _load(args.file)
    sub = g.with_start(v)
    print(f"ok ring={g.ring} dim={g.dimension} height={sub.height} vars={len(g)} "
          f"size={grammar_size(g)}")
    if v == g.start and g.extra_top_vars:
        print("note: other top-height variables: " + " ".join(sorted(g.extra_top_vars)))
    return EXIT_OK


def cmd_size(args):
    g, v = _load(args.file)
    print(grammar_size(g if v == g.start else g.restrict(v)))
    return EXIT_OK


def cmd_entry(args):
    g, v = _load(args.file)
    circuit, value = ops.entry_of(g, v, args.i, args.j)
    if args.circuit:
        _write(args.circuit, serialize(circuit))
    print(value)
    return EXIT_OK


def _cmd_aggregate(mode):
    def run(args):
        g, v = _load(args.file)
        circuit, value = ops.aggregate(g, v, mode)
        if args.circuit:
            _write(args.circuit, serialize(circuit))
        print(value)
        return EXIT_OK
    return run


def _cmd_binary(op):
    def run(args):
        g1, a1 = _load(args.f)
        g2, a2 = _load(args.g)
        if op == "add":
            out = ops.add_top(g1, a1, g2, a2)
        else:
            fn = {"mul": ops.multiply, "tensor": ops.tensor, "hadamard": ops.hadamard}[op]
            out = fn(g1, a1, g2, a2, rule_limit=args.rule_limit)
        _emit(args, out)
        return EXIT_OK
    return run


def cmd_transpose(args):
    g, v = _load(args.f)
    _emit(args, ops.transpose(g, v))
    return EXIT_OK


def cmd_power(args):
    g, v = _load(args.f)
    _emit(args, ops.power(g, v, args.n, rule_limit=args.rule_limit))
    return EXIT_OK


def cmd_equal(args):
    g1, a1 = _load(args.f)
    g2, a2 = _load(args.g)
    eq = equal_grammars(g1, a1, g2, a2)
    print("equal" if eq else "unequal")
    return EXIT_OK if eq else EXIT_FALSE


def cmd_iszero(args):
    g, v = _load(args.file)
    z = is_zero(g, v)
    print("zero" if z else "nonzero")
    return EXIT_OK if z else EXIT_FALSE


def cmd_gen(args):
    if len(args.params) not in (1, 2):
        raise UsageError("gen takes one parameter (two for scaled-identity)")
    try:
        nums = [int(p) for p in args.params]
    except ValueError:
        raise UsageError(f"integer parameters expected, got {args.params}") from None
    extra = nums[1] if len(nums) == 2 else None
    _emit(args, generators.gen_basic(args.kind, nums[0], extra, parse_ring(args.ring)))
    return EXIT_OK


def cmd_sat(args):
    cnf = generators.parse_dimacs(_read(args.cnf))
    ring = parse_ring(args.ring)
    if args.kind == "diag":
        _, g = generators.sat_diag(cnf, ring)
    elif args.kind == "clause-vector":
        _, g = generators.sat_clause_vectors(cnf, ring)
    else:
        g = generators.sat_nilpotent(cnf, ring)
        print(generators.nilpotent_exponent(cnf))
    _emit(args, g)
    return EXIT_OK


def cmd_dfa2mtdd(args):
    _emit(args, automata.dfa_to_mtdd(automata.parse_dfa(_read(args.file))))
    return EXIT_OK


def cmd_mtdd2dfa(args):
    g, v = _load(args.file)
    _write(args.output, automata.format_dfa(automata.mtdd_to_dfa(g.restrict(v))))
    return EXIT_OK


def cmd_tm_step(args):
    tm = automata.parse_tm(_read(args.machine))
    dfa = automata.tm_step_dfa(tm, args.tape_len)
    if args.dfa:
        _write(args.output, automata.format_dfa(dfa))
    else:
        _emit(args, automata.dfa_to_mtdd(dfa))
    return EXIT_OK


def _split_word(text: str) -> list[str]:
    if text in ("", "-"):
        return []
    if "," in text:
        return [s for s in text.split(",")]
    return list(text)


def cmd_tm_reduce(args):
    tm = automata.parse_tm(_read(args.machine))
    g = automata.reduction_graph(args.kind, tm, _split_word(args.input), args.tape_len)
    _emit(args, g)
    return EXIT_OK


def cmd_oracle(args):
    g, v = _load(args.file)
    m = oracle.densify(g, v, cap=args.dense_cap)
    if args.what == "det":
        if g.dimension != 2:
            raise ValidationError("determinant needs a matrix grammar")
        print(oracle.dense_det(m, g.ring.modulus))
    else:
        rows = m.tolist() if g.dimension == 2 else [m.tolist()]
        for row in rows:
            print(" ".join(str(x) for x in row))
    return EXIT_OK


def cmd_howell(args):
    rows = []
    for lineno, line in enumerate(_read(args.file).splitlines(), 1):
        if line.strip():
            try:
                rows.append([int(x) for x in line.split()])
            except ValueError:
                raise ParseError("integer matrix expected", lineno) from None
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValidationError("rows of unequal length")
    for row in linsolve.howell_form(rows, args.k):
        print(" ".join(map(str, row)))
    return EXIT_OK


def cmd_report(args):
    from .report import to_csv, write_report

    csv_path, png_path, rows = write_report(Path(args.out_dir), seed=args.seed,
                                            samples=args.samples, max_height=args.max_height,
                                            ring=parse_ring(args.ring))
    sys.stdout.write(to_csv(rows))
    print(f"# wrote {csv_path} and {png_path}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mtddplus", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def out(sp):
        sp.add_argument("-o", "--output", default="-", help="output file (default: stdout)")

    def limit(sp):
        sp.add_argument("--rule-limit", type=int, default=ops.DEFAULT_RULE_LIMIT)

    sp = sub.add_parser("check", help="validate a grammar file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("size", help="grammar size in bits")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_size)

    sp = sub.add_parser("entry", help="one matrix (or vector) entry, 1-based")
    sp.add_argument("file")
    sp.add_argument("i", type=int)
    sp.add_argument("j", type=int, nargs="?")
    sp.add_argument("--circuit", help="also write the +-circuit here")
    sp.set_defaults(func=cmd_entry)

    for name, helptext in (("trace", "trace of a matrix"), ("sum", "sum of all entries")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("file")
        sp.add_argument("--circuit", help="also write the +-circuit here")
        sp.set_defaults(func=_cmd_aggregate(name))

    for name in ("mul", "add", "tensor", "hadamard"):
        sp = sub.add_parser(name, help=f"{name} of two grammars")
        sp.add_argument("f")
        sp.add_argument("g")
        out(sp)
        limit(sp)
        sp.set_defaults(func=_cmd_binary(name))

    sp = sub.add_parser("transpose")
    sp.add_argument("f")
    out(sp)
    sp.set_defaults(func=cmd_transpose)

    sp = sub.add_parser("power", help="n-th power by iterated multiplication")
    sp.add_argument("f")
    sp.add_argument("n", type=int)
    out(sp)
    limit(sp)
    sp.set_defaults(func=cmd_power)

    sp = sub.add_parser("equal", help="exit 0 if equal, 1 otherwise")
    sp.add_argument("f")
    sp.add_argument("g")
    sp.set_defaults(func=cmd_equal)

    sp = sub.add_parser("iszero", help="exit 0 if the matrix is zero, 1 otherwise")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_iszero)

    sp = sub.add_parser("gen", help="generate a grammar family")
    sp.add_argument("kind", choices=sorted(generators.BASIC_KINDS))
    sp.add_argument("params", nargs="+")
    sp.add_argument("--ring", default="Z")
    out(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("sat", help="3-CNF encodings (nilpotent also prints its exponent)")
    sp.add_argument("kind", choices=["diag", "clause-vector", "nilpotent"])
    sp.add_argument("cnf")
    sp.add_argument("--ring", default="Z")
    out(sp)
    sp.set_defaults(func=cmd_sat)

    sp = sub.add_parser("dfa2mtdd")
    sp.add_argument("file")
    out(sp)
    sp.set_defaults(func=cmd_dfa2mtdd)

    sp = sub.add_parser("mtdd2dfa")
    sp.add_argument("file")
    out(sp)
    sp.set_defaults(func=cmd_mtdd2dfa)

    sp = sub.add_parser("tm-step", help="one-step relation of a machine")
    sp.add_argument("machine")
    sp.add_argument("tape_len", type=int)
    sp.add_argument("--dfa", action="store_true", help="write the layered DFA instead")
    out(sp)
    sp.set_defaults(func=cmd_tm_step)

    sp = sub.add_parser("tm-reduce", help="determinant / counting reduction graph")
    sp.add_argument("kind", choices=["det", "count"])
    sp.add_argument("machine")
    sp.add_argument("input", help="input word; one symbol per character, or comma separated")
    sp.add_argument("tape_len", type=int)
    out(sp)
    sp.set_defaults(func=cmd_tm_reduce)

    sp = sub.add_parser("oracle", help="dense expansion or determinant (small heights only)")
    sp.add_argument("what", choices=["densify", "det"])
    sp.add_argument("file")
    sp.add_argument("--dense-cap", type=int, default=oracle.DEFAULT_DENSE_CAP)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("howell", help="Howell form of an integer matrix modulo k")
    sp.add_argument("k", type=int)
    sp.add_argument("file")
    sp.set_defaults(func=cmd_howell)

    sp = sub.add_parser("report", help="size-growth CSV on stdout plus CSV and PNG files")
    sp.add_argument("-d", "--out-dir", default="report")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--max-height", type=int, default=6)
    sp.add_argument("--ring", default="Z")
    sp.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: UsageError: {e}", file=sys.stderr)
        return EXIT_USAGE
    except LimitError as e:
        print(f"error: LimitError: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except MtddError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
