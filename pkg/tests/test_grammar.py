import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtddplus.errors import MismatchError, ParseError, ValidationError
from mtddplus.generators import identity, zero
from mtddplus.grammar import (Add, Const, Grammar, Quad, compact, grammar_size,
                              is_plus_circuit, merge_disjoint, parse_grammar, rename_vars,
                              serialize)
from mtddplus.oracle import densify
from mtddplus.randgen import random_grammar
from mtddplus.semiring import Z, Zmod

IDENTITY_1 = """\
semiring Z
start A1
A0 -> 1
Z0 -> 0
A1 -> [A0 Z0 ; Z0 A0]
"""


def test_parse_single_constant():
    g = parse_grammar("semiring Z\nstart A\nA -> 5")
    assert len(g) == 1 and g.height == 0
    assert densify(g).tolist() == [[5]]


def test_parse_identity_text():
    g = parse_grammar(IDENTITY_1)
    assert densify(g).tolist() == [[1, 0], [0, 1]]
    assert g.heights == {"A0": 0, "Z0": 0, "A1": 1}


def test_parse_comments_dim_and_ring():
    g = parse_grammar("# a vector\nsemiring Zmod 3   # ring\ndim 1\nstart V\nV -> [a b]\na -> 4\nb -> -1\n")
    assert g.dimension == 1 and g.ring == Zmod(3)
    assert densify(g).tolist() == [1, 2]


def test_duplicate_rule():
    with pytest.raises(ParseError, match="duplicate"):
        parse_grammar("semiring Z\nstart A\nA -> 1\nA -> A + A\n")


@pytest.mark.parametrize("text, err", [
    ("semiring Z\nA -> 1\n", ParseError),  # missing start
    ("semiring Z\nstart B\nA -> 1\n", ValidationError),  # start without rule
    ("semiring Z\nstart A\nA -> B + B\n", ValidationError),  # unknown variable
    ("semiring Z\nstart A\nA -> [B B]\nB -> 1\n", ValidationError),  # pair in dim 2
    ("semiring Z\ndim 1\nstart A\nA -> [B B ; B B]\nB -> 1\n", ValidationError),
    ("semiring Z\nstart A\nA -> * 3\n", ParseError),
    ("semiring Q\nstart A\nA -> 1\n", ParseError),
    ("semiring Z\ndim 3\nstart A\nA -> 1\n", ParseError),
    ("semiring Z\nstart A\n1A -> 1\n", ParseError),
    ("semiring Z\nstart A\nA -> [B 2B ; B B]\nB -> 1\n", ParseError),
    ("bogus line\n", ParseError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_grammar(text)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as e:
        parse_grammar("semiring Z\nstart A\n  A -> * 3\n")
    assert e.value.line == 3 and e.value.col is not None
    assert str(e.value).startswith("line 3, col")


def test_validate_identity_heights():
    g = identity(3)
    for j in range(4):
        assert g.heights[f"I{j}"] == j and g.heights[f"Z{j}"] == j


def test_cycle_detected():
    with pytest.raises(ValidationError, match="cycle"):
        Grammar({"A": Add("A", "B"), "B": Const(1)}, "A")


def test_long_cycle_detected():
    rules = {f"X{i}": Add(f"X{i+1}", f"X{i+1}") for i in range(5000)}
    rules["X5000"] = Add("X0", "X0")
    with pytest.raises(ValidationError, match="cycle"):
        Grammar(rules, "X0")


def test_child_height_mismatch():
    rules = {"c": Const(1), "q": Quad("c", "c", "c", "c"), "r": Quad("q", "c", "q", "q")}
    with pytest.raises(ValidationError, match="different heights"):
        Grammar(rules, "r")


def test_add_height_mismatch():
    rules = {"c": Const(1), "q": Quad("c", "c", "c", "c"), "s": Add("q", "c")}
    with pytest.raises(ValidationError, match="height mismatch"):
        Grammar(rules, "s")


def test_start_must_be_top():
    rules = {"c": Const(1), "q": Quad("c", "c", "c", "c")}
    with pytest.raises(ValidationError, match="maximal height"):
        Grammar(rules, "c")


def test_extra_top_vars_reported():
    rules = {"c": Const(1), "q": Quad("c", "c", "c", "c"), "p": Quad("c", "c", "c", "c")}
    g = Grammar(rules, "q")
    assert g.extra_top_vars == ["p"]


def test_deep_grammar_has_no_recursion_limit():
    rules = {"C0": Const(1)}
    for i in range(1, 5001):
        rules[f"C{i}"] = Add(f"C{i-1}", f"C{i-1}")
    g = Grammar(rules, "C5000")
    assert g.height == 0 and len(g.reachable()) == 5001


def test_consts_canonicalized():
    g = Grammar({"a": Const(-1)}, "a", Zmod(5))
    assert g.rules["a"] == Const(4)


@pytest.mark.parametrize("rules, size", [
    ({"A": Const(0)}, 1),
    ({"A": Const(1000)}, 10),
    ({"A": Const(-1000)}, 10),
    ({"A": Const(1)}, 1),
])
def test_size_single_rule(rules, size):
    assert grammar_size(Grammar(rules, "A")) == size


def test_size_identity_4():
    # 10 variables (I0..I4, Z0..Z4): 2 constants of size 1, 8 block rules of ceil(log2 10) = 4
    g = identity(4)
    assert len(g) == 10
    assert grammar_size(g) == 34


def test_size_invariant_under_renaming(rng):
    for _ in range(20):
        g = random_grammar(rng, rng.randint(0, 4))
        m = {v: f"renamed_{i}" for i, v in enumerate(g.rules)}
        assert grammar_size(rename_vars(g, m)) == grammar_size(g)


def test_merge_identity_zero():
    merged, ren = merge_disjoint(identity(2), zero(2))
    assert ren["Z1"] != "Z1" and ren["Z1"] in merged.rules
    assert len(merged) == len(identity(2)) + len(zero(2))
    assert (densify(merged, ren["Z2"]) == 0).all()
    assert (densify(merged, "I2") == np.eye(4, dtype=int)).all()


def test_merge_ring_mismatch():
    with pytest.raises(MismatchError):
        merge_disjoint(identity(1), identity(1, Zmod(3)))
    with pytest.raises(MismatchError):
        merge_disjoint(identity(0), zero(0, dimension=1))


def test_merge_self_doubles(rng):
    for _ in range(20):
        g = random_grammar(rng, rng.randint(0, 4))
        merged, ren = merge_disjoint(g, g)
        assert len(merged) == 2 * len(g)
        assert (densify(merged, ren[g.start]) == densify(g)).all()


def test_plus_circuit_predicate():
    assert is_plus_circuit(Grammar({"a": Const(1), "b": Add("a", "a")}, "b"))
    assert not is_plus_circuit(identity(1))


def test_compact_preserves_value(rng):
    for ring in (Z, Zmod(7)):
        for _ in range(30):
            g = random_grammar(rng, rng.randint(0, 5), ring)
            c = compact(g)
            assert len(c) <= len(g)
            assert (densify(c) == densify(g)).all()


def test_compact_folds_added_zero_blocks():
    rules = dict(identity(2).rules)
    rules["S"] = Add("I2", "Z2")
    rules["T"] = Add("S", "I2")
    g = compact(Grammar(rules, "T"))
    assert g.rules[g.start] == Add("I2", "I2")
    assert (densify(g) == 2 * np.eye(4, dtype=int)).all()


def test_compact_merges_duplicates():
    rules = {"a": Const(2), "b": Const(2), "q": Quad("a", "b", "b", "a")}
    g = compact(Grammar(rules, "q"))
    assert len(g) == 2 and g.rules["q"] == Quad("a", "a", "a", "a")


def test_with_start_and_restrict():
    g = identity(3)
    sub = g.restrict("I1")
    assert set(sub.rules) == {"I1", "I0", "Z0"}
    assert g.with_start("I2").start == "I2"
    with pytest.raises(ValidationError):
        g.with_start("nope")
    with pytest.raises(ValidationError):
        g.height_of("nope")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 5), st.sampled_from([Z, Zmod(7)]), st.sampled_from([1, 2]))
def test_serialize_round_trip(seed, h, ring, dim):
    g = random_grammar(random.Random(seed), h, ring, dim)
    text = serialize(g, comments=["generated"])
    back = parse_grammar(text)
    assert back == g
    assert serialize(back, comments=["generated"]) == text
