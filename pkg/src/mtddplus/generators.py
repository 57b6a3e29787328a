"""Constructors for concrete grammar families and the 3-CNF encodings.

Assignment convention for the CNF constructions: an index ``t`` (0-based) in
``[0, 2^n)`` is the truth assignment whose binary expansion, most significant
bit first, gives x1..xn, with bit 1 meaning *true*.  Hence the block level of
height ``h`` decides variable ``x_{n+1-h}``, and the second half (bottom /
right) of every split is the *true* branch.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, ValidationError
from .grammar import Add, Const, Grammar, Pair, Quad
from .ops import add_top
from .semiring import Ring, Z


class _Rules(dict):
    """Rule dict that ignores re-definitions of shared helper variables."""

    def put(self, name, rule):
        if name not in self:
            self[name] = rule
        return name


def _zeros(r: _Rules, n: int, dimension: int = 2, p: str = "") -> str:
    r.put(f"{p}Z0", Const(0))
    for j in range(1, n + 1):
        z = f"{p}Z{j-1}"
        r.put(f"{p}Z{j}", Quad(z, z, z, z) if dimension == 2 else Pair(z, z))
    return f"{p}Z{n}"


def _ones(r: _Rules, n: int, dimension: int = 2, p: str = "") -> str:
    r.put(f"{p}O0", Const(1))
    for j in range(1, n + 1):
        o = f"{p}O{j-1}"
        r.put(f"{p}O{j}", Quad(o, o, o, o) if dimension == 2 else Pair(o, o))
    return f"{p}O{n}"


def _identity(r: _Rules, n: int, p: str = "") -> str:
    _zeros(r, n, 2, p)
    r.put(f"{p}I0", Const(1))
    for j in range(1, n + 1):
        i, z = f"{p}I{j-1}", f"{p}Z{j-1}"
        r.put(f"{p}I{j}", Quad(i, z, z, i))
    return f"{p}I{n}"


def _check_n(n):
    if not isinstance(n, int) or n < 0:
        raise ValidationError(f"height parameter must be a non-negative integer, got {n!r}")


def identity(n: int, ring: Ring = Z) -> Grammar:
    _check_n(n)
    r = _Rules()
    return Grammar(r, _identity(r, n), ring)


def zero(n: int, ring: Ring = Z, dimension: int = 2) -> Grammar:
    _check_n(n)
    r = _Rules()
    return Grammar(r, _zeros(r, n, dimension), ring, dimension)


def ones(n: int, ring: Ring = Z, dimension: int = 2) -> Grammar:
    _check_n(n)
    r = _Rules()
    return Grammar(r, _ones(r, n, dimension), ring, dimension)


def lower_triangular(n: int, ring: Ring = Z) -> Grammar:
    """Ones on and below the diagonal."""
    _check_n(n)
    r = _Rules()
    _zeros(r, n)
    _ones(r, n)
    r.put("L0", Const(1))
    for j in range(1, n + 1):
        r.put(f"L{j}", Quad(f"L{j-1}", f"Z{j-1}", f"O{j-1}", f"L{j-1}"))
    return Grammar(r, f"L{n}", ring)


def _all_equal(r: _Rules, n: int) -> str:
    # E_j has every entry 2^j; D_j = E_j + E_j
    r.put("E0", Const(1))
    for j in range(1, n + 1):
        r.put(f"D{j-1}", Add(f"E{j-1}", f"E{j-1}"))
        d = f"D{j-1}"
        r.put(f"E{j}", Quad(d, d, d, d))
    return f"E{n}"


def all_equal(n: int, ring: Ring = Z) -> Grammar:
    """The 2^n x 2^n matrix with every entry equal to 2^n."""
    _check_n(n)
    r = _Rules()
    return Grammar(r, _all_equal(r, n), ring)


def row_index(n: int, ring: Ring = Z) -> Grammar:
    """Every entry of row k (1-based) equals k."""
    _check_n(n)
    r = _Rules()
    _all_equal(r, max(n - 1, 0))
    r.put("C0", Const(1))
    for j in range(1, n + 1):
        c = f"C{j-1}"
        r.put(f"CE{j-1}", Add(c, f"E{j-1}"))
        r.put(f"C{j}", Quad(c, c, f"CE{j-1}", f"CE{j-1}"))
    return Grammar(r, f"C{n}", ring)


def walsh(n: int, ring: Ring = Z) -> Grammar:
    """Sylvester-Hadamard matrix H_n = [[H, H], [H, -H]] using a twin -H chain."""
    _check_n(n)
    r = _Rules()
    r.put("W0", Const(1))
    r.put("N0", Const(-1))
    for j in range(1, n + 1):
        w, m = f"W{j-1}", f"N{j-1}"
        r.put(f"W{j}", Quad(w, w, w, m))
        r.put(f"N{j}", Quad(m, m, m, w))
    return Grammar(r, f"W{n}", ring)


def _scalar_chain(r: _Rules, c: int, p: str = "") -> str:
    """A +-circuit for c built by double-and-add from +-1."""
    if c == 0:
        return r.put(f"{p}K0", Const(0))
    unit = 1 if c > 0 else -1
    base = r.put(f"{p}U", Const(unit))
    acc = base
    for step, bit in enumerate(bin(abs(c))[3:]):
        acc = r.put(f"{p}K{step}d", Add(acc, acc))
        if bit == "1":
            acc = r.put(f"{p}K{step}a", Add(acc, base))
    return acc


def scaled_identity(n: int, c: int, ring: Ring = Z, p: str = "") -> Grammar:
    """c * I_{2^n}, the diagonal terminal built by a doubling chain."""
    _check_n(n)
    if c == 0:
        raise ValidationError("scaled identity needs c != 0")
    r = _Rules()
    _zeros(r, n, 2, p)
    r.put(f"{p}S0", Add(_scalar_chain(r, c, p), f"{p}Z0"))
    for j in range(1, n + 1):
        s, z = f"{p}S{j-1}", f"{p}Z{j-1}"
        r.put(f"{p}S{j}", Quad(s, z, z, s))
    return Grammar(r, f"{p}S{n}", ring)


def _log2_exact(m: int) -> int:
    if m < 1 or m & (m - 1):
        raise ValidationError(f"parameter must be a power of two, got {m}")
    return m.bit_length() - 1


def _unit_vector(r: _Rules, d: int, pos: int) -> str:
    """Length-2^d vector with a single 1 at 0-based position pos."""
    name = f"U{d}_{pos}"
    if name in r:
        return name
    if d == 0:
        return r.put(name, Const(1))
    half = 1 << (d - 1)
    z = f"Z{d-1}"
    if pos < half:
        return r.put(name, Pair(_unit_vector(r, d - 1, pos), z))
    return r.put(name, Pair(z, _unit_vector(r, d - 1, pos - half)))


def binary_enum_vector(m: int, ring: Ring = Z) -> Grammar:
    """Vector of length m*2^m listing all m-bit strings in lexicographic order.

    m must be a power of two.  X_{i+1} = (X_i, X_i + B_i) where B_i repeats
    the unit vector for bit i 2^i times; bit i is placed at position m-1-i so
    that the enumeration comes out lexicographic.
    """
    d = _log2_exact(m)
    r = _Rules()
    x = _zeros(r, d, 1)
    for i in range(m):
        b = _unit_vector(r, d, m - 1 - i)
        for j in range(1, i + 1):
            b = r.put(f"B{i}_{j}", Pair(b, b))
        y = r.put(f"Y{i}", Add(x, b))
        x = r.put(f"X{i+1}", Pair(x, y))
    return Grammar(r, x, ring, 1)


def product_witness(m: int, ring: Ring = Z) -> Grammar:
    """MTDD whose column sums spell the binary_enum_vector(m) pattern.

    C_{i+1} = [[C_i, C_i], [0, B_i]] where B_i has the unit row vector for bit
    i repeated 2^i times along its first row.  Multiplying the all-ones matrix
    by it yields a matrix whose every row is binary_enum_vector(m).
    """
    d = _log2_exact(m)
    r = _Rules()
    _zeros(r, d + m - 1)

    def unit_row(h, pos):
        # 2^h x 2^h matrix with a single 1 at (1, pos+1)
        name = f"R{h}_{pos}"
        if name in r:
            return name
        if h == 0:
            return r.put(name, Const(1))
        half = 1 << (h - 1)
        z = f"Z{h-1}"
        if pos < half:
            return r.put(name, Quad(unit_row(h - 1, pos), z, z, z))
        return r.put(name, Quad(z, unit_row(h - 1, pos - half), z, z))

    c = f"Z{d}"
    for i in range(m):
        b = unit_row(d, m - 1 - i)
        for j in range(1, i + 1):
            z = f"Z{d+j-1}"
            b = r.put(f"B{i}_{j}", Quad(b, b, z, z))
        c = r.put(f"C{i+1}", Quad(c, c, f"Z{d+i}", b))
    return Grammar(r, c, ring)


BASIC_KINDS = {
    "identity": identity,
    "zero": zero,
    "ones": ones,
    "lower-triangular": lower_triangular,
    "row-index": row_index,
    "all-equal": all_equal,
    "walsh": walsh,
    "scaled-identity": scaled_identity,
    "binary-enum-vector": binary_enum_vector,
    "product-witness": product_witness,
}


def gen_basic(kind: str, n: int, extra: int | None = None, ring: Ring = Z) -> Grammar:
    kind = kind.replace("_", "-")
    if kind not in BASIC_KINDS:
        raise ValidationError(f"unknown generator {kind!r}; choose from {', '.join(BASIC_KINDS)}")
    if kind == "scaled-identity":
        if extra is None:
            raise ValidationError("scaled-identity needs the scalar c")
        return scaled_identity(n, extra, ring)
    if extra is not None:
        raise ValidationError(f"{kind} takes a single parameter")
    return BASIC_KINDS[kind](n, ring=ring)


# --- CNF ---------------------------------------------------------------------

@dataclass(frozen=True)
class Cnf:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for cl in self.clauses:
            if not cl:
                raise ValidationError("empty clause")
            if len(cl) > 3:
                raise ValidationError(f"clause {cl} has more than 3 literals")
            vs = [abs(x) for x in cl]
            if any(not 1 <= v <= self.num_vars for v in vs):
                raise ValidationError(f"clause {cl} mentions a variable outside 1..{self.num_vars}")
            if any(a >= b for a, b in zip(vs, vs[1:])):
                raise ValidationError(f"clause {cl} must list distinct variables in increasing order")

    @classmethod
    def of(cls, num_vars: int, clauses) -> "Cnf":
        return cls(num_vars, tuple(_normalize_clause(c) for c in clauses))

    def satisfied_by(self, clause_index: int, t: int) -> bool:
        """Whether assignment index t (x1 = most significant bit) satisfies a clause."""
        for lit in self.clauses[clause_index]:
            bit = (t >> (self.num_vars - abs(lit))) & 1
            if bit == (1 if lit > 0 else 0):
                return True
        return False


def _normalize_clause(lits) -> tuple[int, ...]:
    lits = [int(x) for x in lits]
    if len({abs(x) for x in lits}) != len(lits):
        raise ValidationError(f"clause {lits} repeats a variable (duplicate or complementary literal)")
    return tuple(sorted(lits, key=abs))


def parse_dimacs(text: str) -> Cnf:
    num_vars = None
    declared = None
    clauses = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad problem line {line!r}", lineno)
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"bad problem line {line!r}", lineno) from None
            continue
        if num_vars is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        tokens = line.split()
        if tokens == ["0"] and not current:
            raise ParseError("empty clause", lineno)
        for tok in tokens:
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno)
                if len(current) > 3:
                    raise ParseError(f"clause width {len(current)} > 3", lineno)
                try:
                    clauses.append(_normalize_clause(current))
                except ValidationError as e:
                    raise ParseError(str(e), lineno) from None
                current = []
            else:
                if abs(lit) > num_vars:
                    raise ParseError(f"literal {lit} exceeds declared {num_vars} variables", lineno)
                current.append(lit)
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("last clause not terminated by 0")
    if declared is not None and declared != len(clauses):
        raise ParseError(f"header declares {declared} clauses, found {len(clauses)}")
    return Cnf(num_vars, tuple(clauses))


def format_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines += [" ".join(map(str, cl)) + " 0" for cl in cnf.clauses]
    return "\n".join(lines) + "\n"


def _clause_rules(r: _Rules, cnf: Cnf, clause, p: str, dimension: int) -> str:
    """Clause indicator: diagonal (dimension 2) or vector (dimension 1)."""
    n = cnf.num_vars
    sign = {abs(l): l > 0 for l in clause}
    if dimension == 2:
        _identity(r, n, "")
    else:
        _ones(r, n, 1, "")
    _zeros(r, n, dimension, "")
    sat = "I" if dimension == 2 else "O"
    r.put(f"{p}A0", Const(0))
    for h in range(1, n + 1):
        var = n + 1 - h
        a, s, z = f"{p}A{h-1}", f"{sat}{h-1}", f"Z{h-1}"
        if var not in sign:
            lo, hi = a, a
        elif sign[var]:
            lo, hi = a, s
        else:
            lo, hi = s, a
        r.put(f"{p}A{h}", Quad(lo, z, z, hi) if dimension == 2 else Pair(lo, hi))
    return f"{p}A{n}"


def sat_diag(cnf: Cnf, ring: Ring = Z) -> tuple[list[Grammar], Grammar]:
    """Clause diagonals G_1..G_m, the summand -m*I, and their sum.

    Every diagonal entry of the sum is (#satisfied clauses) - m, so its
    determinant vanishes iff the formula is satisfiable.
    """
    n, m = cnf.num_vars, len(cnf.clauses)
    parts = []
    for i, cl in enumerate(cnf.clauses, 1):
        r = _Rules()
        parts.append(Grammar(r, _clause_rules(r, cnf, cl, f"c{i}_", 2), ring))
    parts.append(scaled_identity(n, -m, ring, "m_") if m else zero(n, ring))
    total = parts[0]
    for g in parts[1:]:
        total = add_top(total, total.start, g, g.start)
    return parts, total


def sat_clause_vectors(cnf: Cnf, ring: Ring = Z) -> tuple[list[Grammar], Grammar]:
    """Per-clause 0/1 vectors over all assignments (1 = satisfied) and their sum."""
    n = cnf.num_vars
    parts = []
    for i, cl in enumerate(cnf.clauses, 1):
        r = _Rules()
        parts.append(Grammar(r, _clause_rules(r, cnf, cl, f"c{i}_", 1), ring, 1))
    if not parts:
        return [], zero(n, ring, 1)
    total = parts[0]
    for g in parts[1:]:
        total = add_top(total, total.start, g, g.start)
    return parts, total


def nilpotent_exponent(cnf: Cnf) -> int:
    """Clause count after padding so that the block count is a power of two."""
    blocks = 1
    while blocks < len(cnf.clauses) + 1:
        blocks *= 2
    return blocks - 1


def sat_nilpotent(cnf: Cnf, ring: Ring = Z) -> Grammar:
    """Block super-diagonal matrix with the clause diagonals on the super-diagonal.

    Its power ``nilpotent_exponent(cnf)`` is zero iff the formula is
    unsatisfiable; padding clauses are identity blocks.
    """
    n = cnf.num_vars
    total = nilpotent_exponent(cnf)
    b = total.bit_length() if total else 0  # 2^b blocks
    r = _Rules()
    _identity(r, n)
    _zeros(r, n + b)
    diag = []
    for i, cl in enumerate(cnf.clauses, 1):
        diag.append(_clause_rules(r, cnf, cl, f"c{i}_", 2))
    diag += [f"I{n}"] * (total - len(diag))

    def block(s, r0, c0):
        # 2^s x 2^s block grid starting at block row r0, block column c0
        size = 1 << s
        lo, hi = c0 - r0 - (size - 1), c0 - r0 + (size - 1)
        if not lo <= 1 <= hi:
            return f"Z{n + s}"
        if s == 0:
            return diag[r0]
        name = f"N{s}_{r0}_{c0}"
        if name in r:
            return name
        half = size // 2
        kids = [block(s - 1, r0 + di * half, c0 + dj * half) for di in (0, 1) for dj in (0, 1)]
        return r.put(name, Quad(*kids))

    return Grammar(r, block(b, 0, 0), ring)
