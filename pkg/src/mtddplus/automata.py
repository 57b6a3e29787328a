"""Layered DFAs over the paired alphabet {0,1}x{0,1} and Turing-machine graphs.

A layered DFA of depth m reads ``u (x) v`` for bit strings u, v of length m
and so defines a graph on {0,1}^m.  Its states map one-to-one onto MTDD
variables (layer i <-> height m-i), which is how configuration graphs of
space-bounded machines become small grammars.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product

from .errors import MismatchError, ParseError, ValidationError
from .grammar import Add, Const, Grammar, NameGen, Quad
from .semiring import Z

SYMBOLS = ((0, 0), (0, 1), (1, 0), (1, 1))
MOVES = {"L": -1, "R": 1, "S": 0}


@dataclass
class LayeredDFA:
    layers: list[list[str]]
    initial: str
    final: str
    transitions: dict[tuple[str, tuple[int, int]], str]

    def __post_init__(self):
        self.validate()

    @property
    def depth(self) -> int:
        return len(self.layers) - 1

    def validate(self):
        if len(self.layers) < 2:
            raise ValidationError("a layered DFA needs depth >= 1")
        if self.layers[0] != [self.initial]:
            raise ValidationError("layer 0 must contain exactly the initial state")
        last = self.layers[-1]
        if len(last) != 2 or self.final not in last:
            raise ValidationError("the last layer must hold exactly two states, one of them final")
        layer_of = {}
        for i, layer in enumerate(self.layers):
            for q in layer:
                if q in layer_of:
                    raise ValidationError(f"state {q!r} appears in two layers")
                layer_of[q] = i
        for (q, sym), p in self.transitions.items():
            if q not in layer_of or p not in layer_of:
                raise ValidationError(f"transition {q} {sym} -> {p} uses an unknown state")
            if sym not in SYMBOLS:
                raise ValidationError(f"bad symbol {sym}")
            if layer_of[p] != layer_of[q] + 1:
                raise ValidationError(f"transition {q} {sym} -> {p} does not go one layer down")
        for layer in self.layers[:-1]:
            for q in layer:
                for sym in SYMBOLS:
                    if (q, sym) not in self.transitions:
                        raise ValidationError(f"state {q!r} has no {sym} transition")
        self._layer_of = layer_of

    def run(self, u: int, v: int) -> bool:
        """Accepts u (x) v?  u, v are depth-bit integers, most significant bit first."""
        q = self.initial
        m = self.depth
        for i in range(m - 1, -1, -1):
            q = self.transitions[(q, ((u >> i) & 1, (v >> i) & 1))]
        return q == self.final

    def count_accepted(self) -> int:
        """Number of accepted pairs, by counting paths layer by layer."""
        ways = {self.initial: 1}
        for layer in self.layers[:-1]:
            nxt: dict[str, int] = {}
            for q in layer:
                w = ways.get(q, 0)
                if w:
                    for sym in SYMBOLS:
                        p = self.transitions[(q, sym)]
                        nxt[p] = nxt.get(p, 0) + w
            ways = nxt
        return ways.get(self.final, 0)

    def edges(self) -> set[tuple[int, int]]:
        """All accepted pairs (u, v); only for small depth."""
        out = set()
        stack = [(self.initial, 0, 0)]
        while stack:
            q, u, v = stack.pop()
            layer = self._layer_of[q]
            if layer == self.depth:
                if q == self.final:
                    out.add((u, v))
                continue
            for a, b in SYMBOLS:
                stack.append((self.transitions[(q, (a, b))], 2 * u + a, 2 * v + b))
        return out


class _Builder:
    """Incremental layered DFA construction keyed by arbitrary hashable states."""

    def __init__(self, depth: int, prefix: str = "s"):
        self.depth = depth
        self.prefix = prefix
        self.names: list[dict] = [dict() for _ in range(depth + 1)]
        self.transitions: dict = {}

    def state(self, layer: int, key) -> str:
        names = self.names[layer]
        if key not in names:
            names[key] = f"{self.prefix}{layer}_{len(names)}"
        return names[key]

    def finish(self, initial_key) -> LayeredDFA:
        acc = self.state(self.depth, "ACC")
        self.state(self.depth, "REJ")
        layers = [list(n.values()) for n in self.names]
        return LayeredDFA(layers, self.names[0][initial_key], acc, self.transitions)


def _explore(depth: int, start, step, accepting, prefix="s") -> LayeredDFA:
    """Layered DFA from a successor function ``step(layer, key, sym) -> key``.

    The key reached after the last layer is judged by ``accepting``.
    """
    b = _Builder(depth, prefix)
    frontier = [start]
    b.state(0, start)
    for layer in range(depth):
        nxt = []
        for key in frontier:
            q = b.state(layer, key)
            for sym in SYMBOLS:
                k2 = step(layer, key, sym)
                if layer + 1 == depth:
                    k2 = "ACC" if accepting(k2) else "REJ"
                new = k2 not in b.names[layer + 1]
                b.transitions[(q, sym)] = b.state(layer + 1, k2)
                if new:
                    nxt.append(k2)
        frontier = nxt
    return b.finish(start)


def dfa_union(*dfas: LayeredDFA) -> LayeredDFA:
    """Product automaton accepting the union of the languages."""
    depth = dfas[0].depth
    if any(a.depth != depth for a in dfas):
        raise MismatchError("union needs layered DFAs of equal depth")

    def step(_layer, key, sym):
        return tuple(a.transitions[(q, sym)] for a, q in zip(dfas, key))

    def accepting(key):
        return any(q == a.final for a, q in zip(dfas, key))

    return _explore(depth, tuple(a.initial for a in dfas), step, accepting, "u")


def dfa_from_pairs(depth: int, pairs) -> LayeredDFA:
    """Accepts exactly the given (u, v) pairs of depth-bit integers."""
    pairs = sorted(set(pairs))

    def step(layer, key, sym):
        if key is None:
            return None
        u, v = 2 * key[0] + sym[0], 2 * key[1] + sym[1]
        shift = depth - layer - 1
        if any((pu >> shift, pv >> shift) == (u, v) for pu, pv in pairs):
            return (u, v)
        return None

    return _explore(depth, (0, 0), step, lambda key: key is not None, "w")


def dfa_diagonal_nonzero(depth: int) -> LayeredDFA:
    """Accepts w (x) w for every w except the all-zero string."""

    def step(_layer, key, sym):
        if key == "dead" or sym[0] != sym[1]:
            return "dead"
        return "one" if key == "one" or sym[0] else "zero"

    return _explore(depth, "zero", step, lambda key: key == "one", "d")


def dfa_to_mtdd(a: LayeredDFA) -> Grammar:
    """Adjacency matrix grammar: entry (u+1, v+1) is 1 iff u (x) v is accepted."""
    name = {}
    for i, layer in enumerate(a.layers):
        for j, q in enumerate(layer):
            name[q] = f"q{i}_{j}"
    rules = {}
    for i, layer in enumerate(a.layers):
        for q in layer:
            if i == a.depth:
                rules[name[q]] = Const(1 if q == a.final else 0)
            else:
                rules[name[q]] = Quad(*(name[a.transitions[(q, s)]] for s in SYMBOLS))
    return Grammar(rules, name[a.initial], Z, 2)


def mtdd_to_dfa(g: Grammar) -> LayeredDFA:
    """Inverse of dfa_to_mtdd for Add-free 0/1 grammars of height >= 1."""
    if g.dimension != 2:
        raise ValidationError("only dimension-2 grammars correspond to paired-alphabet DFAs")
    if g.height < 1:
        raise ValidationError("a height-0 grammar has no layered DFA (depth >= 1 needed)")
    order = g.reachable()
    for v in order:
        r = g.rules[v]
        if isinstance(r, Add):
            raise ValidationError(f"addition rule for {v!r}: not an MTDD")
        if isinstance(r, Const) and r.c not in (0, 1):
            raise ValidationError(f"terminal {r.c} of {v!r} is not 0/1")
    depth = g.height
    fresh = NameGen("F", g.rules)
    f0, f1 = fresh(), fresh()
    state = {}
    layers: list[list[str]] = [[] for _ in range(depth + 1)]
    for v in reversed(order):
        r = g.rules[v]
        if isinstance(r, Const):
            state[v] = f1 if r.c == 1 else f0
        else:
            state[v] = v
            layers[depth - g.heights[v]].append(v)
    layers[depth] = [f0, f1]
    trans = {}
    for v in order:
        r = g.rules[v]
        if isinstance(r, Quad):
            for s, child in zip(SYMBOLS, r.children):
                trans[(v, s)] = state[child]
    return LayeredDFA(layers, g.start, f1, trans)


_DFA_TRANS_RE = re.compile(r"^(\S+)\s*\(\s*([01])\s*,\s*([01])\s*\)\s*->\s*(\S+)$")


def parse_dfa(text: str) -> LayeredDFA:
    depth = None
    layers: dict[int, list[str]] = {}
    initial = final = None
    trans = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _DFA_TRANS_RE.match(line)
        if m:
            q, x, y, p = m.groups()
            if (q, (int(x), int(y))) in trans:
                raise ParseError(f"duplicate transition for {q} ({x},{y})", lineno)
            trans[(q, (int(x), int(y)))] = p
            continue
        parts = line.split()
        try:
            if parts[0] == "depth" and len(parts) == 2:
                depth = int(parts[1])
            elif parts[0] == "layer" and len(parts) >= 2:
                layers[int(parts[1])] = parts[2:]
            elif parts[0] == "initial" and len(parts) == 2:
                initial = parts[1]
            elif parts[0] == "final" and len(parts) == 2:
                final = parts[1]
            else:
                raise ParseError(f"unrecognized line {line!r}", lineno)
        except ValueError:
            raise ParseError(f"bad number in {line!r}", lineno) from None
    if depth is None or initial is None or final is None:
        raise ParseError("DFA file needs 'depth', 'initial' and 'final' lines")
    if sorted(layers) != list(range(depth + 1)):
        raise ParseError(f"expected layers 0..{depth}")
    return LayeredDFA([layers[i] for i in range(depth + 1)], initial, final, trans)


def format_dfa(a: LayeredDFA) -> str:
    lines = [f"depth {a.depth}"]
    lines += [f"layer {i} " + " ".join(layer) for i, layer in enumerate(a.layers)]
    lines += [f"initial {a.initial}", f"final {a.final}"]
    for layer in a.layers[:-1]:
        for q in layer:
            for s in SYMBOLS:
                lines.append(f"{q} ({s[0]},{s[1]}) -> {a.transitions[(q, s)]}")
    return "\n".join(lines) + "\n"


# --- Turing machines -----------------------------------------------------------

@dataclass
class TuringMachine:
    """Single-tape machine; configurations are words ``u q v`` with the head on v[0]."""

    states: list[str]
    initial: str
    accept: str
    blank: str
    tape: list[str]
    transitions: dict[tuple[str, str], list[tuple[str, str, str]]] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.states)) != len(self.states) or len(set(self.tape)) != len(self.tape):
            raise ValidationError("duplicate state or tape symbol")
        if set(self.states) & set(self.tape):
            raise ValidationError("states and tape symbols must be disjoint")
        if self.initial not in self.states or self.accept not in self.states:
            raise ValidationError("initial and accepting states must be declared")
        if self.blank not in self.tape:
            raise ValidationError("blank must be a tape symbol")
        for (q, a), succ in self.transitions.items():
            if q not in self.states or a not in self.tape:
                raise ValidationError(f"transition on undeclared ({q}, {a})")
            if q == self.accept:
                raise ValidationError("the accepting state has no outgoing transitions")
            for q2, b, mv in succ:
                if q2 not in self.states or b not in self.tape or mv not in MOVES:
                    raise ValidationError(f"bad transition ({q}, {a}) -> ({q2}, {b}, {mv})")
        self.transitions = {k: sorted(set(v)) for k, v in self.transitions.items()}

    @property
    def deterministic(self) -> bool:
        return all(len(s) <= 1 for s in self.transitions.values())

    @property
    def input_alphabet(self) -> list[str]:
        return [a for a in self.tape if a != self.blank]

    @property
    def symbols(self) -> list[str]:
        """Coding order: tape symbols, then states; codes are 1-based."""
        return list(self.tape) + list(self.states)

    @property
    def width(self) -> int:
        """Bits per symbol: ceil(log2(|Q| + |Gamma| + 1)), so code 0 is never used."""
        return len(self.symbols).bit_length()

    def code(self, sym: str) -> int:
        return self.symbols.index(sym) + 1

    def encode(self, config) -> int:
        k = self.width
        value = 0
        for sym in config:
            value = (value << k) | self.code(sym)
        return value

    def decode(self, value: int, length: int) -> tuple[str, ...] | None:
        k = self.width
        out = []
        for i in range(length - 1, -1, -1):
            c = (value >> (i * k)) & ((1 << k) - 1)
            if not 1 <= c <= len(self.symbols):
                return None
            out.append(self.symbols[c - 1])
        return tuple(out)

    def initial_config(self, word, tape_len: int) -> tuple[str, ...]:
        word = list(word)
        if len(word) > tape_len:
            raise ValidationError(f"input of length {len(word)} exceeds tape length {tape_len}")
        for a in word:
            if a not in self.input_alphabet:
                raise ValidationError(f"input symbol {a!r} is not in the input alphabet")
        return (self.initial, *word, *[self.blank] * (tape_len - len(word)))

    def accepting_config(self, tape_len: int) -> tuple[str, ...]:
        return (self.accept, *[self.blank] * tape_len)


def parse_tm(text: str) -> TuringMachine:
    """``states ... ; initial q ; accept q ; blank _ ; tape ... ;`` then ``q a -> q' b M`` lines."""
    header: dict[str, list[str]] = {}
    trans: dict[tuple[str, str], list] = {}
    body = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            body.append((lineno, line))
            continue
        for part in line.split(";"):
            words = part.split()
            if not words:
                continue
            if words[0] not in ("states", "initial", "accept", "blank", "tape"):
                raise ParseError(f"unknown header field {words[0]!r}", lineno)
            header[words[0]] = words[1:]
    for key in ("states", "initial", "accept", "blank", "tape"):
        if key not in header:
            raise ParseError(f"machine header lacks {key!r}")
    for key in ("initial", "accept", "blank"):
        if len(header[key]) != 1:
            raise ParseError(f"{key!r} takes exactly one name")
    for lineno, line in body:
        lhs, rhs = line.split("->", 1)
        l, r = lhs.split(), rhs.split()
        if len(l) != 2 or len(r) != 3:
            raise ParseError(f"transition must read 'q a -> q2 b L|R|S': {line!r}", lineno)
        trans.setdefault((l[0], l[1]), []).append(tuple(r))
    return TuringMachine(header["states"], header["initial"][0], header["accept"][0],
                         header["blank"][0], header["tape"], trans)


def format_tm(tm: TuringMachine) -> str:
    lines = [f"states {' '.join(tm.states)} ; initial {tm.initial} ; accept {tm.accept} ; "
             f"blank {tm.blank} ; tape {' '.join(tm.tape)} ;"]
    for (q, a), succ in tm.transitions.items():
        for q2, b, mv in succ:
            lines.append(f"{q} {a} -> {q2} {b} {mv}")
    return "\n".join(lines) + "\n"


def _window_nfa(tm: TuringMachine):
    """Symbol-level NFA for c1 |- c2 read as pairs (c1[i], c2[i]).

    Outside one short window both words carry the same tape symbol.  The
    window is ``(q,q')(a,b)`` for a stay, ``(q,b)(a,q')`` for a right move
    (then at least one more cell), ``(c,q')(q,c)(a,b)`` for a left move.
    """
    gamma = list(tm.tape)
    windows = []  # (pairs, needs_more)
    for (q, a), succ in tm.transitions.items():
        for q2, b, mv in succ:
            if mv == "S":
                windows.append((((q, q2), (a, b)), False))
            elif mv == "R":
                windows.append((((q, b), (a, q2)), True))
            else:
                for c in gamma:
                    windows.append((((c, q2), (q, c), (a, b)), False))

    def delta(state, pair):
        out = set()
        if state == "pre":
            if pair[0] == pair[1] and pair[0] in gamma:
                out.add("pre")
            for w, (pairs, need) in enumerate(windows):
                if pairs[0] == pair:
                    out.add(("win", w, 1) if len(pairs) > 1 else ("need" if need else "post"))
        elif state in ("post", "need"):
            if pair[0] == pair[1] and pair[0] in gamma:
                out.add("post")
        else:
            _, w, i = state
            pairs, need = windows[w]
            if pairs[i] == pair:
                out.add(("win", w, i + 1) if i + 1 < len(pairs) else ("need" if need else "post"))
        return out

    return delta


def tm_step_dfa(tm: TuringMachine, tape_len: int) -> LayeredDFA:
    """Layered DFA of depth width*(tape_len+1) for the one-step relation.

    Moves that would leave the tape produce no successor.  The symbol-level
    window automaton is determinised on the fly and expanded to k bit-pair
    steps per symbol, with an explicit dead state for invalid codes.
    """
    if tape_len < 1:
        raise ValidationError("tape length must be >= 1")
    k = tm.width
    length = tape_len + 1
    depth = k * length
    delta = _window_nfa(tm)
    syms = tm.symbols
    dsucc: dict = {}

    def symbol_step(S, pair):
        key = (S, pair)
        if key not in dsucc:
            out = set()
            for s in S:
                out |= delta(s, pair)
            dsucc[key] = frozenset(out)
        return dsucc[key]

    def step(layer, key, sym):
        if key is None:
            return None
        S, xs, ys = key
        xs, ys = 2 * xs + sym[0], 2 * ys + sym[1]
        if (layer + 1) % k:
            return (S, xs, ys)
        if not (1 <= xs <= len(syms) and 1 <= ys <= len(syms)):
            return None
        S2 = symbol_step(S, (syms[xs - 1], syms[ys - 1]))
        return (S2, 0, 0) if S2 else None

    def accepting(key):
        return key is not None and "post" in key[0]

    return _explore(depth, (frozenset({"pre"}), 0, 0), step, accepting, "t")


def reduction_graph(kind: str, tm: TuringMachine, word, tape_len: int) -> Grammar:
    """Adjacency grammar of the determinant (``det``) or counting (``count``) graph.

    Nodes are bit strings of length K = width*(tape_len+1); node 0^K (row 1)
    gets an edge to the initial configuration and one from the accepting
    configuration.  ``det`` additionally puts a loop on every other node.
    """
    if kind not in ("det", "count"):
        raise ValidationError(f"reduction kind must be 'det' or 'count', got {kind!r}")
    if kind == "det" and not tm.deterministic:
        raise ValidationError("the determinant reduction needs a deterministic machine")
    w0 = tm.encode(tm.initial_config(word, tape_len))
    wf = tm.encode(tm.accepting_config(tape_len))
    step = tm_step_dfa(tm, tape_len)
    K = step.depth
    parts = [step, dfa_from_pairs(K, [(0, w0), (wf, 0)])]
    if kind == "det":
        parts.append(dfa_diagonal_nonzero(K))
    return dfa_to_mtdd(dfa_union(*parts))


def random_layered_dfa(rng, depth: int, max_width: int = 4) -> LayeredDFA:
    """Random total layered DFA; ``rng`` is a ``random.Random``."""
    layers = [["s0_0"]]
    for i in range(1, depth):
        layers.append([f"s{i}_{j}" for j in range(rng.randint(1, max_width))])
    layers.append([f"s{depth}_0", f"s{depth}_1"])
    trans = {}
    for i in range(depth):
        for q in layers[i]:
            for s in SYMBOLS:
                trans[(q, s)] = rng.choice(layers[i + 1])
    return LayeredDFA(layers, "s0_0", f"s{depth}_{rng.randint(0, 1)}", trans)


def all_pairs(depth: int):
    n = 1 << depth
    return product(range(n), range(n))
