import random

import pytest

from mtddplus.oracle import densify
from mtddplus.randgen import mutate_terminal, random_grammar, rewrite_equal
from mtddplus.semiring import Z, Zmod


@pytest.mark.parametrize("ring", [Z, Zmod(7)])
def test_random_grammar_has_requested_height(ring):
    rng = random.Random(5)
    for h in range(7):
        g = random_grammar(rng, h, ring)
        assert g.height == h
        assert set(g.reachable()) == set(g.rules)


def test_random_vectors():
    rng = random.Random(6)
    g = random_grammar(rng, 4, dimension=1)
    assert densify(g).shape == (16,)


def test_rewrite_preserves_value_and_changes_structure():
    rng = random.Random(7)
    changed = 0
    for _ in range(50):
        g = random_grammar(rng, rng.randint(1, 5))
        r = rewrite_equal(rng, g)
        assert (densify(r) == densify(g)).all()
        changed += r.rules != g.rules
    assert changed > 40


@pytest.mark.parametrize("ring", [Z, Zmod(7)])
def test_mutation_changes_one_constant(ring):
    rng = random.Random(8)
    for _ in range(50):
        g = random_grammar(rng, rng.randint(0, 4), ring)
        m = mutate_terminal(rng, g)
        diff = [v for v in g.rules if g.rules[v] != m.rules[v]]
        assert len(diff) == 1


def test_seeded_runs_repeat():
    a = random_grammar(random.Random(9), 5)
    b = random_grammar(random.Random(9), 5)
    assert a.rules == b.rules and a.start == b.start
