import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtddplus.equality import EqualityStats, equal_grammars, equal_vals, is_zero
from mtddplus.errors import MismatchError
from mtddplus.generators import identity, scaled_identity, walsh, zero
from mtddplus.grammar import Add, Const, Grammar, Pair, Quad, grammar_size, merge_disjoint
from mtddplus.ops import add_top, multiply, negate
from mtddplus.oracle import densify
from mtddplus.randgen import mutate_terminal, random_grammar, random_pair, rewrite_equal
from mtddplus.semiring import Z, Zmod

RINGS = [Z, Zmod(7), Zmod(6)]


def dense_equal(g1, g2):
    return bool((densify(g1) == densify(g2)).all())


def test_reflexive(rng):
    for _ in range(20):
        g = random_grammar(rng, rng.randint(0, 6))
        assert equal_vals(g, g.start, g.start)
        assert equal_grammars(g, None, g, None)


def test_commuted_sums_at_every_level():
    rules = {"b0": Const(2), "c0": Const(-5)}
    for h in range(1, 6):
        b, c = f"b{h-1}", f"c{h-1}"
        rules[f"b{h}"] = Quad(b, c, c, b)
        rules[f"c{h}"] = Quad(c, c, b, b)
    for h in range(6):
        rules[f"x{h}"] = Add(f"b{h}", f"c{h}")
        rules[f"y{h}"] = Add(f"c{h}", f"b{h}")
    g = Grammar(rules, "b5")
    for h in range(6):
        assert equal_vals(g, f"x{h}", f"y{h}")
    assert not equal_vals(g, "b3", "c3")


@pytest.mark.parametrize("ring", RINGS, ids=str)
@pytest.mark.parametrize("dim", [1, 2])
def test_random_pairs_match_dense(ring, dim):
    rng = random.Random(23)
    for _ in range(200):
        g1, g2 = random_pair(rng, rng.randint(0, 6), ring, dim)
        assert equal_grammars(g1, None, g2, None) == dense_equal(g1, g2)


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_rewrites_and_mutations(ring):
    rng = random.Random(29)
    for _ in range(100):
        g = random_grammar(rng, rng.randint(0, 6), ring)
        r = rewrite_equal(rng, g)
        assert dense_equal(g, r)
        assert equal_grammars(g, None, r, None)
        m = mutate_terminal(rng, g)
        assert equal_grammars(g, None, m, None) == dense_equal(g, m)


def test_height_mismatch():
    g = identity(3)
    with pytest.raises(MismatchError):
        equal_vals(g, "I3", "I2")


def test_is_zero_examples(rng):
    assert is_zero(zero(8))
    assert not is_zero(identity(3))
    for _ in range(20):
        g = random_grammar(rng, rng.randint(0, 5))
        n = negate(g)
        s = add_top(g, g.start, n, n.start)
        assert is_zero(s) and (densify(s) == 0).all()
    v = zero(4, dimension=1)
    assert is_zero(v)


def test_is_zero_specific_variable():
    g = identity(2)
    assert is_zero(g, "Z1") and not is_zero(g, "I1")


def test_walsh_identity_large():
    for n in (8, 16):
        w = walsh(n)
        ww = multiply(w, w.start, w, w.start)
        assert equal_grammars(ww, None, scaled_identity(n, 2**n), None)
        assert not equal_grammars(ww, None, scaled_identity(n, 2**n - 1), None)


def test_stats_bounds(rng):
    for ring in (Z, Zmod(5)):
        for _ in range(100):
            g1, g2 = random_pair(rng, rng.randint(1, 6), ring)
            merged, ren = merge_disjoint(g1, g2)
            stats = EqualityStats()
            equal_vals(merged, g1.start, ren[g2.start], stats)
            assert stats.max_abs_coeff <= 2 ** grammar_size(merged)
            for _, eqs, nvars in stats.reductions:
                assert eqs <= nvars


def test_vector_equality_examples():
    rules = {"a": Const(1), "b": Const(2), "c": Add("a", "a"), "u": Pair("a", "b"), "v": Pair("a", "c")}
    g = Grammar(rules, "u", Z, 1)
    assert equal_vals(g, "u", "v")
    rules["w"] = Pair("b", "a")
    g = Grammar(rules, "u", Z, 1)
    assert not equal_vals(g, "u", "w")


def test_modular_equalities():
    # 3 + 4 = 0 in Z/7, but not in Z
    rules = {"a": Const(3), "b": Const(4), "s": Add("a", "b"), "z": Const(0)}
    assert equal_vals(Grammar(rules, "s", Zmod(7)), "s", "z")
    assert not equal_vals(Grammar(rules, "s", Z), "s", "z")


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 5), st.sampled_from(RINGS))
def test_equality_property(seed, h, ring):
    rng = random.Random(seed)
    g1, g2 = random_pair(rng, h, ring, add_prob=0.6)
    assert equal_grammars(g1, None, g2, None) == dense_equal(g1, g2)
