"""Polynomial-time operations on grammar-represented matrices.

Binary constructions (product, tensor, Hadamard) create one output variable
per reachable pair of input variables, so memoization is over name pairs and
the output never mentions the input names.  All builders are worklist based;
no Python recursion depth limits apply to deep grammars.
"""

from __future__ import annotations

from typing import Callable

from .circuit import eval_circuit
from .errors import LimitError, MismatchError, ValidationError
from .grammar import (Add, Const, Grammar, NameGen, Pair, Quad, compact,
                      merge_disjoint, rename_rule, topo_order)

DEFAULT_RULE_LIMIT = 10**7


def _check_compatible(g1: Grammar, g2: Grammar, dimension: int | None = None):
    if g1.ring != g2.ring:
        raise MismatchError(f"ring mismatch: {g1.ring} vs {g2.ring}")
    if g1.dimension != g2.dimension:
        raise MismatchError(f"dimension mismatch: {g1.dimension} vs {g2.dimension}")
    if dimension is not None and g1.dimension != dimension:
        raise MismatchError(f"operation needs dimension {dimension}, got {g1.dimension}")


def _check_heights(g1, a1, g2, a2):
    h1, h2 = g1.height_of(a1), g2.height_of(a2)
    if h1 != h2:
        raise MismatchError(f"height mismatch: {a1} has {h1}, {a2} has {h2}")


class _PairBuilder:
    """Shared memo/worklist machinery for the pairwise constructions."""

    def __init__(self, prefix: str, rule_limit: int | None):
        self.fresh = NameGen(prefix)
        self.names: dict[tuple[str, str], str] = {}
        self.todo: list[tuple[str, str]] = []
        self.rules: dict = {}
        self.rule_limit = rule_limit

    def pair(self, a: str, b: str) -> str:
        key = (a, b)
        name = self.names.get(key)
        if name is None:
            name = self.names[key] = self.fresh()
            self.todo.append(key)
        return name

    def run(self, root: tuple[str, str], step: Callable[[str, str], object]) -> str:
        top = self.pair(*root)
        while self.todo:
            a, b = self.todo.pop()
            self.rules[self.names[(a, b)]] = step(a, b)
            if self.rule_limit is not None and len(self.rules) > self.rule_limit:
                raise LimitError(f"rule limit {self.rule_limit} exceeded")
        return top


def multiply(g1: Grammar, a1: str, g2: Grammar, a2: str,
             rule_limit: int | None = DEFAULT_RULE_LIMIT) -> Grammar:
    """Grammar for val(a1) * val(a2); start is the pair variable <a1,a2>."""
    _check_compatible(g1, g2, dimension=2)
    _check_heights(g1, a1, g2, a2)
    ring = g1.ring
    b = _PairBuilder("M", rule_limit)

    def step(x, y):
        rx, ry = g1.rules[x], g2.rules[y]
        if isinstance(rx, Add):
            return Add(b.pair(rx.a, y), b.pair(rx.b, y))
        if isinstance(ry, Add):
            return Add(b.pair(x, ry.a), b.pair(x, ry.b))
        if isinstance(rx, Const):
            return Const(ring.mul(rx.c, ry.c))
        blocks = []
        for i in (0, 1):
            for j in (0, 1):
                c = b.fresh()
                b.rules[c] = Add(b.pair(rx.block(i, 0), ry.block(0, j)),
                                 b.pair(rx.block(i, 1), ry.block(1, j)))
                blocks.append(c)
        return Quad(*blocks)

    root = b.run((a1, a2), step)
    return Grammar(b.rules, root, ring, 2)


def add_top(g1: Grammar, a1: str, g2: Grammar, a2: str) -> Grammar:
    """Merged grammar with one new start rule ``S -> a1 + a2``."""
    _check_compatible(g1, g2)
    _check_heights(g1, a1, g2, a2)
    merged, ren = merge_disjoint(g1.restrict(a1), g2.restrict(a2))
    s = NameGen("S", merged.rules)()
    rules = dict(merged.rules)
    rules[s] = Add(a1, ren[a2])
    return Grammar(rules, s, g1.ring, g1.dimension)


def transpose(g: Grammar, a: str | None = None) -> Grammar:
    """Renamed copy (suffix ``_t``) of the part reachable from ``a``, blocks transposed."""
    if g.dimension != 2:
        raise MismatchError("transpose needs a dimension-2 grammar")
    a = g.start if a is None else a
    names = {v: f"{v}_t" for v in g.reachable(a)}
    rules = {}
    for v, new in names.items():
        r = rename_rule(g.rules[v], names)
        rules[new] = Quad(r.tl, r.bl, r.tr, r.br) if isinstance(r, Quad) else r
    return Grammar(rules, names[a], g.ring, 2)


def negate(g: Grammar, a: str | None = None) -> Grammar:
    a = g.start if a is None else a
    rules = {}
    for v in g.reachable(a):
        r = g.rules[v]
        rules[v] = Const(g.ring.neg(r.c)) if isinstance(r, Const) else r
    return Grammar(rules, a, g.ring, g.dimension)


def entry_of(g: Grammar, a: str | None, i: int, j: int | None = None) -> tuple[Grammar, int]:
    """+-circuit for entry (i, j) (1-based) and its value.

    A block variable of height k selects its child by bit k-1 of i-1 (and
    j-1), so the top level reads the most significant bit.  Vector grammars
    take only ``i``.
    """
    a = g.start if a is None else a
    h = g.height_of(a)
    n = 1 << h
    if g.dimension == 2:
        if j is None:
            raise ValidationError("matrix entry needs a column index")
        idx = (i, j)
    else:
        if j is not None:
            raise ValidationError("vector entry takes a single index")
        idx = (i,)
    for x in idx:
        if not 1 <= x <= n:
            raise ValidationError(f"index {x} out of range 1..{n}")
    rows, cols = i - 1, (j - 1 if j is not None else 0)
    rep: dict[str, str] = {}
    rules = {}
    for v in g.reachable(a):
        r = g.rules[v]
        if isinstance(r, Quad):
            k = g.heights[v] - 1
            rep[v] = rep[r.block((rows >> k) & 1, (cols >> k) & 1)]
        elif isinstance(r, Pair):
            k = g.heights[v] - 1
            rep[v] = rep[r.children[(rows >> k) & 1]]
        elif isinstance(r, Add):
            rules[v] = Add(rep[r.a], rep[r.b])
            rep[v] = v
        else:
            rules[v] = r
            rep[v] = v
    root = rep[a]
    circuit = Grammar({v: rules[v] for v in topo_order(rules, [root])}, root, g.ring, g.dimension)
    return circuit, eval_circuit(circuit)


def aggregate(g: Grammar, a: str | None, mode: str) -> tuple[Grammar, int]:
    """+-circuit for the trace (``mode='trace'``) or the sum of all entries."""
    if mode not in ("trace", "sum"):
        raise ValueError(f"mode must be 'trace' or 'sum', got {mode!r}")
    if mode == "trace" and g.dimension != 2:
        raise MismatchError("trace needs a dimension-2 grammar")
    a = g.start if a is None else a
    fresh = NameGen("S_", g.rules)
    rules = {}
    for v in g.reachable(a):
        r = g.rules[v]
        if isinstance(r, Quad):
            if mode == "trace":
                rules[v] = Add(r.tl, r.br)
            else:
                top, bottom = fresh(), fresh()
                rules[top] = Add(r.tl, r.tr)
                rules[bottom] = Add(r.bl, r.br)
                rules[v] = Add(top, bottom)
        elif isinstance(r, Pair):
            rules[v] = Add(r.left, r.right)
        else:
            rules[v] = r
    circuit = Grammar(rules, a, g.ring, g.dimension)
    return circuit, eval_circuit(circuit)


def tensor(g: Grammar, a: str, h: Grammar, b: str,
           rule_limit: int | None = DEFAULT_RULE_LIMIT) -> Grammar:
    """Kronecker product val(a) (x) val(b); heights add."""
    _check_compatible(g, h, dimension=2)
    ring = g.ring
    pb = _PairBuilder("T", rule_limit)

    def step(c, d):
        rc, rd = g.rules[c], h.rules[d]
        if isinstance(rc, Const):
            if isinstance(rd, Const):
                return Const(ring.mul(rc.c, rd.c))
            if isinstance(rd, Add):
                return Add(pb.pair(c, rd.a), pb.pair(c, rd.b))
            return Quad(*(pb.pair(c, x) for x in rd.children))
        if isinstance(rc, Add):
            return Add(pb.pair(rc.a, d), pb.pair(rc.b, d))
        return Quad(*(pb.pair(x, d) for x in rc.children))

    root = pb.run((a, b), step)
    return Grammar(pb.rules, root, ring, 2)


def hadamard(g: Grammar, a: str, h: Grammar, b: str,
             rule_limit: int | None = DEFAULT_RULE_LIMIT) -> Grammar:
    """Entrywise product of two same-height variables."""
    _check_compatible(g, h)
    _check_heights(g, a, h, b)
    ring = g.ring
    pb = _PairBuilder("H", rule_limit)

    def step(x, y):
        rx, ry = g.rules[x], h.rules[y]
        if isinstance(rx, Add):
            return Add(pb.pair(rx.a, y), pb.pair(rx.b, y))
        if isinstance(ry, Add):
            return Add(pb.pair(x, ry.a), pb.pair(x, ry.b))
        if isinstance(rx, Const):
            return Const(ring.mul(rx.c, ry.c))
        kids = [pb.pair(p, q) for p, q in zip(rx.children, ry.children)]
        return Quad(*kids) if isinstance(rx, Quad) else Pair(*kids)

    root = pb.run((a, b), step)
    return Grammar(pb.rules, root, ring, g.dimension)


def power(g: Grammar, a: str | None, n: int, rule_limit: int | None = DEFAULT_RULE_LIMIT,
          simplify: bool = True) -> Grammar:
    """val(a)**n by left-to-right iterated multiplication.

    Output size can grow with every factor; ``rule_limit`` aborts with
    ``LimitError`` instead of running away.  With ``simplify`` the running
    product is compacted after each step.
    """
    from .generators import identity

    if n < 0:
        raise ValueError("exponent must be non-negative")
    if g.dimension != 2:
        raise MismatchError("power needs a dimension-2 grammar")
    a = g.start if a is None else a
    if n == 0:
        return identity(g.height_of(a), g.ring)
    acc = g.restrict(a)
    if simplify:
        acc = compact(acc)
    for _ in range(n - 1):
        acc = multiply(acc, acc.start, g, a, rule_limit)
        if simplify:
            acc = compact(acc)
    return acc
