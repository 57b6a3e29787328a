"""Random grammars plus value-preserving rewrites and terminal mutations.

Used by the property tests, the acceptance suite and the ``report``
subcommand.  All functions take a ``random.Random`` so runs are reproducible.
"""

from __future__ import annotations

import random

from .grammar import Add, Const, Grammar, NameGen, Pair, Quad
from .semiring import Ring, Z


def random_grammar(rng: random.Random, height: int, ring: Ring = Z, dimension: int = 2,
                   width: int = 3, add_prob: float = 0.3, const_range: int = 3) -> Grammar:
    """A validated grammar whose start variable has the given height.

    Each height gets 1..width block (or constant) variables and, with
    probability ``add_prob`` each, a few addition variables over what is
    already there, including chains of additions.
    """
    rules: dict = {}
    levels: list[list[str]] = []
    for h in range(height + 1):
        level: list[str] = []
        for k in range(rng.randint(1, width)):
            name = f"G{h}_{k}"
            if h == 0:
                rules[name] = Const(ring.canon(rng.randint(-const_range, const_range)))
            else:
                below = levels[h - 1]
                parts = 4 if dimension == 2 else 2
                kids = [rng.choice(below) for _ in range(parts)]
                rules[name] = Quad(*kids) if dimension == 2 else Pair(*kids)
            level.append(name)
        k = 0
        while rng.random() < add_prob and k < width:
            name = f"A{h}_{k}"
            rules[name] = Add(rng.choice(level), rng.choice(level))
            level.append(name)
            k += 1
        levels.append(level)
    start = levels[height][-1] if rng.random() < 0.5 else rng.choice(levels[height])
    return Grammar(rules, start, ring, dimension).restrict(start)


def random_pair(rng: random.Random, height: int, ring: Ring = Z, dimension: int = 2, **kw):
    return (random_grammar(rng, height, ring, dimension, **kw),
            random_grammar(rng, height, ring, dimension, **kw))


def rewrite_equal(rng: random.Random, g: Grammar) -> Grammar:
    """A structurally different grammar with the same value.

    Rewrites applied at random: commute additions, duplicate a block child
    under a fresh name, wrap a child as ``child + 0``, and push an addition
    of two block rules into the blocks (``[A..] + [B..] = [A+B ..]``).
    """
    rules = dict(g.rules)
    fresh = NameGen("R", rules)
    zeros: dict[int, str] = {}

    def zero_of(h):
        if h not in zeros:
            name = fresh()
            if h == 0:
                rules[name] = Const(0)
            else:
                z = zero_of(h - 1)
                rules[name] = Quad(z, z, z, z) if g.dimension == 2 else Pair(z, z)
            zeros[h] = name
        return zeros[h]

    for v in g.reachable():
        r = rules[v]
        if isinstance(r, Add):
            a, b = r.a, r.b
            if rng.random() < 0.5:
                a, b = b, a
            ra, rb = g.rules[a], g.rules[b]
            if (rng.random() < 0.5 and type(ra) is type(rb) and isinstance(ra, (Quad, Pair))):
                kids = []
                for x, y in zip(ra.children, rb.children):
                    s = fresh()
                    rules[s] = Add(x, y)
                    kids.append(s)
                rules[v] = Quad(*kids) if isinstance(ra, Quad) else Pair(*kids)
            else:
                rules[v] = Add(a, b)
        elif isinstance(r, (Quad, Pair)):
            kids = list(r.children)
            k = rng.randrange(len(kids))
            choice = rng.random()
            if choice < 0.3:
                dup = fresh()
                rules[dup] = g.rules[kids[k]]
                kids[k] = dup
            elif choice < 0.6:
                wrap = fresh()
                rules[wrap] = Add(kids[k], zero_of(g.heights[kids[k]]))
                kids[k] = wrap
            rules[v] = type(r)(*kids)
    return Grammar(rules, g.start, g.ring, g.dimension).restrict()


def mutate_terminal(rng: random.Random, g: Grammar) -> Grammar:
    """Change the value of one reachable constant variable."""
    consts = [v for v in g.reachable() if isinstance(g.rules[v], Const)]
    v = rng.choice(consts)
    rules = dict(g.rules)
    delta = rng.choice([1, 2, -1])
    rules[v] = Const(g.ring.canon(g.rules[v].c + delta))
    return Grammar(rules, g.start, g.ring, g.dimension)
