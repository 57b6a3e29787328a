"""Exact dense reference implementations for small heights.

Everything here works on numpy object arrays of Python ints, so values
never overflow.  These functions are deliberately naive; they exist to check
the succinct algorithms, not to compete with them.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .errors import LimitError, MismatchError, ValidationError
from .grammar import Add, Const, Grammar, Pair, Quad

DEFAULT_DENSE_CAP = 10
SAT_VAR_CAP = 20
TM_CONFIG_CAP = 200_000


def densify(g: Grammar, a: str | None = None, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Unfold val(a) into a 2^h x 2^h (or length 2^h) object array."""
    a = g.start if a is None else a
    h = g.height_of(a)
    if h > cap:
        raise LimitError(f"height {h} exceeds dense cap {cap}")
    ring = g.ring
    memo: dict[str, np.ndarray] = {}
    for v in g.reachable(a):
        r = g.rules[v]
        if isinstance(r, Const):
            shape = (1, 1) if g.dimension == 2 else (1,)
            m = np.empty(shape, dtype=object)
            m.fill(ring.canon(r.c))
        elif isinstance(r, Add):
            m = _canon(memo[r.a] + memo[r.b], ring)
        elif isinstance(r, Quad):
            m = np.block([[memo[r.tl], memo[r.tr]], [memo[r.bl], memo[r.br]]])
        elif isinstance(r, Pair):
            m = np.concatenate([memo[r.left], memo[r.right]])
        else:  # pragma: no cover
            raise TypeError(r)
        memo[v] = m
    return memo[a]


def _canon(m: np.ndarray, ring) -> np.ndarray:
    if ring.modulus is None:
        return m
    return np.vectorize(ring.canon, otypes=[object])(m) if m.size else m


def as_object(rows) -> np.ndarray:
    arr = np.empty((len(rows), len(rows[0]) if len(rows) else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            arr[i, j] = int(x)
    return arr


def dense_det(m, modulus: int | None = None) -> int:
    """Exact determinant by Bareiss fraction-free elimination over Z.

    For a modulus the determinant is computed over Z and reduced afterwards.
    """
    a = [[int(x) for x in row] for row in np.asarray(m, dtype=object).tolist()]
    n = len(a)
    if any(len(row) != n for row in a):
        raise MismatchError("determinant of a non-square matrix")
    if n == 0:
        return 1 if modulus is None else 1 % modulus
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    det = sign * a[n - 1][n - 1]
    return det if modulus is None else det % modulus


def cofactor_det(m) -> int:
    """Laplace expansion along the first row; exponential, for cross-checks only."""
    a = [[int(x) for x in row] for row in np.asarray(m, dtype=object).tolist()]

    def rec(rows, cols):
        if not rows:
            return 1
        r, total = rows[0], 0
        for k, c in enumerate(cols):
            if a[r][c]:
                total += (-1) ** k * a[r][c] * rec(rows[1:], cols[:k] + cols[k + 1:])
        return total

    return rec(list(range(len(a))), list(range(len(a))))


def dense_mul(a: np.ndarray, b: np.ndarray, modulus: int | None = None) -> np.ndarray:
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise MismatchError(f"cannot multiply shapes {a.shape} and {b.shape}")
    out = a.dot(b)
    return out if modulus is None else out % modulus


def dense_pow(a: np.ndarray, n: int, modulus: int | None = None) -> np.ndarray:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MismatchError("power of a non-square matrix")
    if n < 0:
        raise ValueError("exponent must be non-negative")
    out = np.eye(a.shape[0], dtype=int).astype(object)
    for _ in range(n):
        out = dense_mul(out, a, modulus)
    return out


# --- Turing machines -------------------------------------------------------------

def configurations(tm, tape_len: int):
    """All words u q v with |uv| = tape_len and |v| >= 1."""
    count = len(tm.states) * len(tm.tape) ** tape_len * tape_len
    if count > TM_CONFIG_CAP:
        raise LimitError(f"{count} configurations exceed cap {TM_CONFIG_CAP}")
    for tape in product(tm.tape, repeat=tape_len):
        for pos in range(tape_len):
            for q in tm.states:
                yield (*tape[:pos], q, *tape[pos:])


def successors(tm, config) -> list[tuple]:
    """Direct one-step simulation; moves off either end of the tape are dropped."""
    states = set(tm.states)
    pos = next(i for i, s in enumerate(config) if s in states)
    q = config[pos]
    tape = list(config[:pos] + config[pos + 1:])
    out = []
    for q2, b, mv in tm.transitions.get((q, tape[pos]), []):
        new = list(tape)
        new[pos] = b
        p2 = pos + {"L": -1, "R": 1, "S": 0}[mv]
        if not 0 <= p2 < len(tape):
            continue
        out.append(tuple(new[:p2] + [q2] + new[p2:]))
    return out


def simulate_tm(tm, tape_len: int) -> set[tuple[tuple, tuple]]:
    """The one-step relation on configurations of the given tape length."""
    return {(c, d) for c in configurations(tm, tape_len) for d in successors(tm, c)}


def count_accepting_paths(tm, word, tape_len: int, length: int) -> int:
    """Number of runs of exactly ``length`` steps from the initial to the accepting configuration."""
    word = list(word)
    if len(word) > tape_len:
        raise ValidationError("input longer than the tape")
    start = (tm.initial, *word, *[tm.blank] * (tape_len - len(word)))
    goal = (tm.accept, *[tm.blank] * tape_len)
    ways = {start: 1}
    for _ in range(length):
        nxt: dict[tuple, int] = {}
        for c, w in ways.items():
            for d in successors(tm, c):
                nxt[d] = nxt.get(d, 0) + w
        ways = nxt
    return ways.get(goal, 0)


def is_acyclic(tm, tape_len: int) -> bool:
    """True iff the configuration graph has no directed cycle."""
    edges: dict[tuple, list] = {}
    for c, d in simulate_tm(tm, tape_len):
        edges.setdefault(c, []).append(d)
    color: dict[tuple, int] = {}
    for root in edges:
        if root in color:
            continue
        stack = [(root, iter(edges.get(root, [])))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if color.get(nxt) == 1:
                    return False
                if nxt not in color:
                    color[nxt] = 1
                    stack.append((nxt, iter(edges.get(nxt, []))))
                    break
            else:
                color[node] = 2
                stack.pop()
    return True


# --- SAT -------------------------------------------------------------------------

def brute_force_sat(cnf) -> bool:
    """Exhaustive assignment enumeration (x1 is the most significant bit)."""
    n = cnf.num_vars
    if n > SAT_VAR_CAP:
        raise LimitError(f"{n} variables exceed brute-force cap {SAT_VAR_CAP}")
    for t in range(1 << n):
        if all(any(((t >> (n - abs(lit))) & 1) == (lit > 0) for lit in clause)
               for clause in cnf.clauses):
            return True
    return False
