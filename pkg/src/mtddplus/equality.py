"""Deciding val(A1) == val(A2) without expanding the matrices.

The engine keeps a homogeneous linear system over the grammar variables of
one height, starting from ``A1 - A2 = 0``.  At each height it substitutes
addition rules, shrinks the system to an equivalent one with at most as many
equations as variables, then splits every equation into one equation per
quadrant (or half) and moves one height down.  At height 0 the constants are
plugged in.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MismatchError
from .grammar import Add, Const, Grammar, merge_disjoint, topo_order
from .linsolve import EquationSystem, reduce, standardize


@dataclass
class EqualityStats:
    """Observations collected during one run (for tests and diagnostics)."""

    max_abs_coeff: int = 0
    # (height, equations after reduction, distinct variables)
    reductions: list[tuple[int, int, int]] = field(default_factory=list)


def _expand_adds(g: Grammar, sys: EquationSystem) -> EquationSystem:
    """Replace every Add variable by its two children, parents first."""
    rules = g.rules
    roots = sorted({v for eq in sys.equations for v in eq if isinstance(rules[v], Add)})
    if not roots:
        return sys
    # same-height closure of Add rules, reversed post-order = parents first
    add_rules = {}
    stack = list(roots)
    while stack:
        v = stack.pop()
        if v in add_rules:
            continue
        r = rules[v]
        add_rules[v] = r
        for c in r.children:
            if isinstance(rules[c], Add) and c not in add_rules:
                stack.append(c)
    leaves = {v: Const(0) for r in add_rules.values() for v in r.children if v not in add_rules}
    order = [v for v in reversed(topo_order({**leaves, **add_rules}, roots)) if v in add_rules]
    eqs = [dict(eq) for eq in sys.equations]
    for v in order:
        a, b = add_rules[v].children
        for eq in eqs:
            c = eq.pop(v, None)
            if c is None:
                continue
            eq[a] = eq.get(a, 0) + c
            eq[b] = eq.get(b, 0) + c
    return standardize(EquationSystem(sys.ring, eqs))


def _shrink(sys: EquationSystem, height: int, stats: EqualityStats | None) -> EquationSystem:
    nvars = len(sys.var_index)
    if len(sys) > nvars:
        sys = reduce(sys)
        if stats is not None:
            stats.reductions.append((height, len(sys), nvars))
    if stats is not None:
        for eq in sys.equations:
            for c in eq.values():
                stats.max_abs_coeff = max(stats.max_abs_coeff, abs(c))
    return sys


def _decompose(g: Grammar, sys: EquationSystem) -> EquationSystem:
    parts = 4 if g.dimension == 2 else 2
    eqs = []
    for eq in sys.equations:
        split = [dict() for _ in range(parts)]
        for v, c in eq.items():
            for k, child in enumerate(g.rules[v].children):
                split[k][child] = split[k].get(child, 0) + c
        eqs.extend(split)
    return standardize(EquationSystem(sys.ring, eqs))


def equal_vals(g: Grammar, a1: str, a2: str, stats: EqualityStats | None = None) -> bool:
    """True iff val(a1) == val(a2); both variables must have the same height."""
    h1, h2 = g.height_of(a1), g.height_of(a2)
    if h1 != h2:
        raise MismatchError(f"height mismatch: {a1} has {h1}, {a2} has {h2}")
    if a1 == a2:
        return True
    sys = standardize(EquationSystem(g.ring, [{a1: 1, a2: -1}]))
    for height in range(h1, -1, -1):
        sys = _expand_adds(g, sys)
        sys = _shrink(sys, height, stats)
        if not sys.equations:
            return True
        if height == 0:
            ring = g.ring
            for eq in sys.equations:
                total = 0
                for v, c in eq.items():
                    total += c * g.rules[v].c
                if not ring.is_zero(total):
                    return False
            return True
        sys = _decompose(g, sys)
        sys = _shrink(sys, height - 1, stats)
    return True


def equal_grammars(g1: Grammar, a1: str | None, g2: Grammar, a2: str | None,
                   stats: EqualityStats | None = None) -> bool:
    """Compare variables living in two different grammars."""
    a1 = g1.start if a1 is None else a1
    a2 = g2.start if a2 is None else a2
    merged, ren = merge_disjoint(g1, g2)
    return equal_vals(merged, a1, ren[a2], stats)


def is_zero(g: Grammar, a: str | None = None) -> bool:
    """True iff val(a) is the all-zero matrix or vector."""
    from .generators import zero

    a = g.start if a is None else a
    z = zero(g.height_of(a), g.ring, g.dimension)
    return equal_grammars(g, a, z, None)
