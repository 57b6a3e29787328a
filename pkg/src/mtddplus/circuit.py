"""Evaluation of +-circuits (grammars made only of Add and Const rules)."""

from __future__ import annotations

from collections import Counter

from .errors import ValidationError
from .grammar import Add, Const, Grammar


def eval_circuit(c: Grammar, var: str | None = None, visits: Counter | None = None) -> int:
    """Exact value of ``var`` (default: the start variable).

    Each reachable variable is evaluated exactly once; pass a ``Counter`` as
    ``visits`` to observe that.
    """
    ring = c.ring
    values: dict[str, int] = {}
    for v in c.reachable(var):
        rule = c.rules[v]
        if visits is not None:
            visits[v] += 1
        if isinstance(rule, Const):
            values[v] = rule.c
        elif isinstance(rule, Add):
            values[v] = ring.add(values[rule.a], values[rule.b])
        else:
            raise ValidationError(f"{v!r} is not a +-circuit rule")
    return values[c.start if var is None else var]
