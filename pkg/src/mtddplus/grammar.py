"""MTDD+ grammars: rules, validation, the size measure, text format, merging.

A grammar maps variable names to exactly one rule each.  Block rules split a
matrix into quadrants (``Quad``) or a vector into halves (``Pair``); ``Add``
sums two variables of equal height; ``Const`` is a height-0 ring element.
Heights are always computed, never declared.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

from .errors import MismatchError, ParseError, ValidationError
from .semiring import Ring, Z, parse_ring


@dataclass(frozen=True)
class Quad:
    tl: str
    tr: str
    bl: str
    br: str

    @property
    def children(self) -> tuple[str, ...]:
        return (self.tl, self.tr, self.bl, self.br)

    def block(self, i: int, j: int) -> str:
        """Quadrant at row half ``i`` and column half ``j`` (0-based)."""
        return self.children[2 * i + j]


@dataclass(frozen=True)
class Pair:
    left: str
    right: str

    @property
    def children(self) -> tuple[str, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Add:
    a: str
    b: str

    @property
    def children(self) -> tuple[str, ...]:
        return (self.a, self.b)


@dataclass(frozen=True)
class Const:
    c: int

    @property
    def children(self) -> tuple[str, ...]:
        return ()


Rule = Union[Quad, Pair, Add, Const]

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class Grammar:
    """A validated MTDD+ (``dimension=2``) or its vector analogue (``dimension=1``).

    Instances are treated as immutable once constructed.
    """

    def __init__(self, rules: Mapping[str, Rule], start: str, ring: Ring = Z, dimension: int = 2):
        if dimension not in (1, 2):
            raise ValidationError(f"dimension must be 1 or 2, got {dimension}")
        self.ring = ring
        self.dimension = dimension
        self.rules: dict[str, Rule] = dict(rules)
        self.start = start
        for name, rule in self.rules.items():
            if isinstance(rule, Const) and rule.c != ring.canon(rule.c):
                self.rules[name] = Const(ring.canon(rule.c))
        self.heights = validate(self)
        top = self.heights[start]
        self.extra_top_vars = [v for v, h in self.heights.items() if h == top and v != start]

    @property
    def height(self) -> int:
        return self.heights[self.start]

    def height_of(self, var: str) -> int:
        try:
            return self.heights[var]
        except KeyError:
            raise ValidationError(f"unknown variable {var!r}") from None

    def __len__(self) -> int:
        return len(self.rules)

    def __contains__(self, var: str) -> bool:
        return var in self.rules

    def __getitem__(self, var: str) -> Rule:
        return self.rules[var]

    def with_start(self, var: str) -> "Grammar":
        if var not in self.rules:
            raise ValidationError(f"unknown variable {var!r}")
        g = object.__new__(Grammar)
        g.ring, g.dimension, g.rules, g.heights = self.ring, self.dimension, self.rules, self.heights
        g.start = var
        g.extra_top_vars = []
        return g

    def reachable(self, var: str | None = None) -> list[str]:
        """Variables reachable from ``var``, children before parents."""
        return topo_order(self.rules, [self.start if var is None else var])

    def restrict(self, var: str | None = None) -> "Grammar":
        """Copy holding only the variables reachable from ``var``."""
        var = self.start if var is None else var
        return Grammar({v: self.rules[v] for v in self.reachable(var)}, var, self.ring, self.dimension)

    def count(self, kind) -> int:
        return sum(isinstance(r, kind) for r in self.rules.values())

    def __eq__(self, other):
        if not isinstance(other, Grammar):
            return NotImplemented
        return (self.ring, self.dimension, self.start, self.rules) == (
            other.ring, other.dimension, other.start, other.rules)

    def __repr__(self):
        return (f"Grammar(ring={self.ring}, dim={self.dimension}, start={self.start!r}, "
                f"vars={len(self.rules)}, height={self.height})")


def topo_order(rules: Mapping[str, Rule], roots: Iterable[str]) -> list[str]:
    """Iterative post-order DFS; raises on cycles and unknown variables."""
    order: list[str] = []
    state: dict[str, int] = {}  # 1 = on stack, 2 = done
    for root in roots:
        if state.get(root) == 2:
            continue
        stack: list[tuple[str, Iterator[str]]] = []
        if root not in rules:
            raise ValidationError(f"unknown variable {root!r}")
        state[root] = 1
        stack.append((root, iter(rules[root].children)))
        while stack:
            var, it = stack[-1]
            for child in it:
                s = state.get(child)
                if s == 2:
                    continue
                if s == 1:
                    raise ValidationError(f"cycle detected through {child!r}")
                if child not in rules:
                    raise ValidationError(f"unknown variable {child!r} (used by {var!r})")
                state[child] = 1
                stack.append((child, iter(rules[child].children)))
                break
            else:
                stack.pop()
                state[var] = 2
                order.append(var)
    return order


def validate(g: Grammar) -> dict[str, int]:
    """Compute the height of every variable, enforcing all structural invariants."""
    rules = g.rules
    if g.start not in rules:
        raise ValidationError(f"start variable {g.start!r} has no rule")
    heights: dict[str, int] = {}
    for var in topo_order(rules, list(rules)):
        rule = rules[var]
        if isinstance(rule, Const):
            heights[var] = 0
        elif isinstance(rule, Add):
            ha, hb = heights[rule.a], heights[rule.b]
            if ha != hb:
                raise ValidationError(
                    f"height mismatch in {var} -> {rule.a} + {rule.b}: {ha} vs {hb}")
            heights[var] = ha
        else:
            if isinstance(rule, Quad) and g.dimension != 2:
                raise ValidationError(f"block rule for {var!r} in a dimension-1 grammar")
            if isinstance(rule, Pair) and g.dimension != 1:
                raise ValidationError(f"pair rule for {var!r} in a dimension-2 grammar")
            hs = {heights[c] for c in rule.children}
            if len(hs) != 1:
                raise ValidationError(f"children of {var!r} have different heights {sorted(hs)}")
            heights[var] = hs.pop() + 1
    top = max(heights.values())
    if heights[g.start] != top:
        raise ValidationError(
            f"start {g.start!r} has height {heights[g.start]}, but the maximal height is {top}")
    return heights


def grammar_size(g: Grammar) -> int:
    """Const(c) costs max(1, ceil(log2(|c|+1))); any other rule ceil(log2 |N|)."""
    pointer = (len(g.rules) - 1).bit_length()
    total = 0
    for rule in g.rules.values():
        if isinstance(rule, Const):
            total += max(1, abs(rule.c).bit_length())
        else:
            total += pointer
    return total


def is_plus_circuit(g: Grammar) -> bool:
    return all(isinstance(r, (Add, Const)) for r in g.rules.values())


class NameGen:
    """Deterministic fresh names that avoid a reserved set."""

    def __init__(self, prefix: str = "V", reserved: Iterable[str] = ()):
        self.prefix = prefix
        self.used = set(reserved)
        self.n = 0

    def __call__(self) -> str:
        while True:
            name = f"{self.prefix}{self.n}"
            self.n += 1
            if name not in self.used:
                self.used.add(name)
                return name


def merge_disjoint(g1: Grammar, g2: Grammar) -> tuple[Grammar, dict[str, str]]:
    """Union of two grammars; colliding g2 names get a numeric suffix.

    Returns the merged grammar (start = g1's start) and the g2 renaming map,
    which covers every g2 variable (identity entries included).
    """
    if g1.ring != g2.ring:
        raise MismatchError(f"ring mismatch: {g1.ring} vs {g2.ring}")
    if g1.dimension != g2.dimension:
        raise MismatchError(f"dimension mismatch: {g1.dimension} vs {g2.dimension}")
    taken = set(g1.rules)
    rename: dict[str, str] = {}
    for v in g2.rules:
        if v not in taken:
            rename[v] = v
        else:
            i = 1
            while f"{v}_{i}" in taken or f"{v}_{i}" in g2.rules:
                i += 1
            rename[v] = f"{v}_{i}"
        taken.add(rename[v])
    rules = dict(g1.rules)
    for v, r in g2.rules.items():
        rules[rename[v]] = rename_rule(r, rename)
    g = object.__new__(Grammar)
    g.ring, g.dimension, g.rules, g.start = g1.ring, g1.dimension, rules, g1.start
    g.heights = dict(g1.heights)
    for v, h in g2.heights.items():
        g.heights[rename[v]] = h
    # the merged start need not be at the maximal height; callers re-root it
    g.extra_top_vars = []
    return g, rename


def rename_rule(rule: Rule, m: Mapping[str, str]) -> Rule:
    if isinstance(rule, Quad):
        return Quad(m[rule.tl], m[rule.tr], m[rule.bl], m[rule.br])
    if isinstance(rule, Pair):
        return Pair(m[rule.left], m[rule.right])
    if isinstance(rule, Add):
        return Add(m[rule.a], m[rule.b])
    return rule


def rename_vars(g: Grammar, m: Mapping[str, str]) -> Grammar:
    return Grammar({m[v]: rename_rule(r, m) for v, r in g.rules.items()}, m[g.start],
                   g.ring, g.dimension)


def compact(g: Grammar, var: str | None = None) -> Grammar:
    """Hash-cons structurally identical rules and fold syntactic zeros.

    Sound simplifications only: ``X + 0 -> X``, a block of zeros is zero, and
    sums of two constants are folded.  Keeps the reachable part of ``var``.
    """
    var = g.start if var is None else var
    ring = g.ring
    rep: dict[str, str] = {}
    zero: set[str] = set()
    seen: dict[Rule, str] = {}
    out: dict[str, Rule] = {}
    for v in g.reachable(var):
        rule = g.rules[v]
        if isinstance(rule, Add):
            a, b = rep[rule.a], rep[rule.b]
            if a in zero:
                rep[v] = b
                continue
            if b in zero:
                rep[v] = a
                continue
            ra, rb = out[a], out[b]
            if isinstance(ra, Const) and isinstance(rb, Const):
                rule = Const(ring.add(ra.c, rb.c))
            else:
                rule = Add(*sorted((a, b)))
        elif not isinstance(rule, Const):
            rule = rename_rule(rule, rep)
        key = rule
        if key in seen:
            rep[v] = seen[key]
            continue
        seen[key] = v
        rep[v] = v
        out[v] = rule
        if (isinstance(rule, Const) and rule.c == 0) or (
                not isinstance(rule, (Const, Add)) and all(c in zero for c in rule.children)):
            zero.add(v)
    root = rep[var]
    keep = topo_order(out, [root])
    return Grammar({v: out[v] for v in keep}, root, ring, g.dimension)


# --- text format -------------------------------------------------------------

_QUAD_RE = re.compile(r"^\[\s*(\S+)\s+(\S+)\s*;\s*(\S+)\s+(\S+)\s*\]$")
_PAIR_RE = re.compile(r"^\[\s*(\S+)\s+(\S+)\s*\]$")
_ADD_RE = re.compile(r"^(\S+)\s*\+\s*(\S+)$")
_INT_RE = re.compile(r"^[+-]?\d+$")


def parse_grammar(text: str) -> Grammar:
    ring: Ring | None = None
    dimension = 2
    start: str | None = None
    rules: dict[str, Rule] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col = raw.index(line[0]) + 1
        if "->" in line:
            lhs, rhs = (s.strip() for s in line.split("->", 1))
            if not NAME_RE.fullmatch(lhs):
                raise ParseError(f"bad variable name {lhs!r}", lineno, col)
            if lhs in rules:
                raise ParseError(f"duplicate rule for {lhs!r}", lineno, col)
            rules[lhs] = _parse_rhs(rhs, lineno, raw.index("->") + 3)
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "semiring":
            ring = parse_ring(rest)
        elif key == "dim":
            if rest not in ("1", "2"):
                raise ParseError(f"dim must be 1 or 2, got {rest!r}", lineno, col)
            dimension = int(rest)
        elif key == "start":
            if not NAME_RE.fullmatch(rest):
                raise ParseError(f"bad start variable {rest!r}", lineno, col)
            start = rest
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno, col)
    if start is None:
        raise ParseError("missing 'start' line")
    if start not in rules:
        raise ValidationError(f"start variable {start!r} has no rule")
    for rule in rules.values():
        if isinstance(rule, Quad) and dimension != 2:
            raise ValidationError("block rule '[A B ; C D]' in a dim 1 grammar")
        if isinstance(rule, Pair) and dimension != 1:
            raise ValidationError("pair rule '[A B]' in a dim 2 grammar")
    return Grammar(rules, start, ring or Z, dimension)


def _parse_rhs(rhs: str, lineno: int, col: int) -> Rule:
    def names(*xs):
        for x in xs:
            if not NAME_RE.fullmatch(x):
                raise ParseError(f"bad variable name {x!r}", lineno, col)
        return xs

    if _INT_RE.match(rhs):
        return Const(int(rhs))
    m = _QUAD_RE.match(rhs)
    if m:
        return Quad(*names(*m.groups()))
    m = _PAIR_RE.match(rhs)
    if m:
        return Pair(*names(*m.groups()))
    m = _ADD_RE.match(rhs)
    if m:
        return Add(*names(*m.groups()))
    raise ParseError(f"cannot parse right-hand side {rhs!r}", lineno, col)


def format_rule(rule: Rule) -> str:
    if isinstance(rule, Quad):
        return f"[{rule.tl} {rule.tr} ; {rule.bl} {rule.br}]"
    if isinstance(rule, Pair):
        return f"[{rule.left} {rule.right}]"
    if isinstance(rule, Add):
        return f"{rule.a} + {rule.b}"
    return str(rule.c)


def serialize(g: Grammar, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"semiring {g.ring}")
    if g.dimension != 2:
        lines.append(f"dim {g.dimension}")
    lines.append(f"start {g.start}")
    lines.extend(f"{v} -> {format_rule(r)}" for v, r in g.rules.items())
    return "\n".join(lines) + "\n"
