"""Sparse homogeneous linear systems over Z and Z/kZ.

An equation ``sum_i a_i * X_i = 0`` is a dict ``{var: a_i}`` with nonzero
coefficients.  The equality engine only ever needs systems that are
*equivalent* (same solutions in the ambient group), never explicit solutions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List

from .semiring import Ring

Equation = Dict[str, int]


@dataclass
class EquationSystem:
    ring: Ring
    equations: List[Equation] = field(default_factory=list)

    @property
    def var_index(self) -> list[str]:
        """Distinct variables in order of first appearance."""
        seen: dict[str, None] = {}
        for eq in self.equations:
            for v in eq:
                seen.setdefault(v)
        return list(seen)

    def __len__(self):
        return len(self.equations)

    def matrix(self, columns: list[str] | None = None) -> tuple[list[list[int]], list[str]]:
        cols = self.var_index if columns is None else columns
        return [[eq.get(v, 0) for v in cols] for eq in self.equations], cols


def standardize(sys: EquationSystem) -> EquationSystem:
    """Drop zero coefficients (after reduction mod k) and empty equations."""
    out = []
    for eq in sys.equations:
        clean = {}
        for v, c in eq.items():
            c = sys.ring.canon(c)
            if c:
                clean[v] = c
        if clean:
            out.append(clean)
    return EquationSystem(sys.ring, out)


def _content(vec: dict) -> int:
    g = 0
    for x in vec.values():
        g = gcd(g, x)
    return g


def reduce_z(sys: EquationSystem, witnesses: bool = False):
    """Keep a maximal prefix-greedy subset of rationally independent equations.

    Equation i is dropped when its coefficient vector lies in the rational span
    of the equations kept before it; over a torsion-free group such an
    equation is implied by the kept ones.  Elimination is fraction-free with
    content normalisation, so entries stay integral.

    With ``witnesses=True`` also returns ``{dropped_index: (lam, {kept_index:
    mu})}`` with ``lam * row[dropped] == sum(mu[j] * row[j])``, lam != 0.
    """
    basis: list[tuple[str, dict, dict]] = []  # (pivot var, reduced row, combo over originals)
    kept: list[int] = []
    wit: dict[int, tuple[int, dict[int, int]]] = {}
    order = {v: i for i, v in enumerate(sys.var_index)}
    for idx, eq in enumerate(sys.equations):
        row = dict(eq)
        combo: dict[int, Fraction] = {idx: Fraction(1)}
        for piv, brow, bcombo in basis:
            x = row.get(piv)
            if not x:
                continue
            p = brow[piv]
            new = {}
            for v in set(row) | set(brow):
                val = p * row.get(v, 0) - x * brow.get(v, 0)
                if val:
                    new[v] = val
            newc: dict[int, Fraction] = {}
            for k in set(combo) | set(bcombo):
                val = p * combo.get(k, 0) - x * bcombo.get(k, 0)
                if val:
                    newc[k] = val
            g = _content(new)
            if g > 1:
                new = {v: c // g for v, c in new.items()}
                newc = {k: c / g for k, c in newc.items()}
            row, combo = new, newc
            if not row:
                break
        if row:
            piv = min(row, key=order.__getitem__)
            basis.append((piv, row, combo))
            kept.append(idx)
        elif witnesses:
            # 0 = sum combo[k] * a_k  =>  lam * a_idx = sum mu_j a_j
            den = 1
            for c in combo.values():
                den = den * c.denominator // gcd(den, c.denominator)
            lam = int(combo[idx] * den)
            mu = {k: int(-c * den) for k, c in combo.items() if k != idx}
            wit[idx] = (lam, mu)
    out = EquationSystem(sys.ring, [sys.equations[i] for i in kept])
    if witnesses:
        return out, wit
    return out


# --- Howell normal form ------------------------------------------------------

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _unit_normalizer(a: int, k: int) -> int:
    """A unit u mod k with u*a = gcd(a, k) (mod k)."""
    g = gcd(a, k)
    kk = k // g
    if kk == 1:
        return 1
    u0 = pow(a // g, -1, kk)
    u = u0
    while gcd(u, k) != 1:
        u += kk
    return u % k


def howell_form(rows: list[list[int]], k: int) -> list[list[int]]:
    """Howell normal form over Z/kZ: same row span, at most ncols nonzero rows.

    Echelon reduction combines each pair of rows through the extended gcd
    (a unimodular 2x2 step), pivots are normalised to divisors of k, entries
    above a pivot are reduced below it, and for a zero-divisor pivot p the
    stabiliser row (k/p)*row is fed back into the remaining columns.
    """
    if k < 2:
        raise ValueError("modulus must be >= 2")
    if not rows:
        return []
    ncols = len(rows[0])
    A = [[x % k for x in r] for r in rows]
    r = 0
    for j in range(ncols):
        if r >= len(A):
            break
        for i in range(r + 1, len(A)):
            b = A[i][j]
            if not b:
                continue
            a = A[r][j]
            g, s, t = _xgcd(a, b)
            u, v = -b // g, a // g
            ri, rr = A[i], A[r]
            A[r] = [(s * x + t * y) % k for x, y in zip(rr, ri)]
            A[i] = [(u * x + v * y) % k for x, y in zip(rr, ri)]
        if not A[r][j]:
            continue
        unit = _unit_normalizer(A[r][j], k)
        A[r] = [(unit * x) % k for x in A[r]]
        p = A[r][j]
        for i in range(r):
            q = A[i][j] // p
            if q:
                A[i] = [(x - q * y) % k for x, y in zip(A[i], A[r])]
        if p != 1:
            stab = [((k // p) * x) % k for x in A[r]]
            if any(stab):
                A.append(stab)
        r += 1
    return [row for row in A[:r] if any(row)]


def reduce_zk(sys: EquationSystem, k: int | None = None) -> EquationSystem:
    """Replace the system by the nonzero rows of its Howell form."""
    k = sys.ring.modulus if k is None else k
    if k is None:
        raise ValueError("reduce_zk needs a modulus")
    mat, cols = sys.matrix()
    out = []
    for row in howell_form(mat, k):
        out.append({v: c for v, c in zip(cols, row) if c})
    return EquationSystem(sys.ring, out)


def reduce(sys: EquationSystem) -> EquationSystem:
    if sys.ring.modulus is None:
        return reduce_z(sys)
    return reduce_zk(sys)
