import pytest
from hypothesis import given
from hypothesis import strategies as st

from mtddplus.errors import ParseError
from mtddplus.semiring import Ring, Z, Zmod, canonicalize, element_arith, parse_ring

rings = st.one_of(st.just(Z), st.integers(2, 30).map(Zmod))
ints = st.integers(-10**30, 10**30)


@pytest.mark.parametrize("ring, op, a, b, expected", [
    (Z, "mul", 0, 7, 0),
    (Zmod(5), "add", 3, 4, 2),
    (Z, "neg", 12, None, -12),
    (Zmod(5), "neg", 2, None, 3),
    (Zmod(6), "mul", 4, 3, 0),
])
def test_element_arith(ring, op, a, b, expected):
    assert element_arith(ring, op, a, b) == expected


@pytest.mark.parametrize("ring, v, expected", [(Z, -3, -3), (Zmod(4), 7, 3), (Zmod(4), -1, 3)])
def test_canonicalize(ring, v, expected):
    assert canonicalize(ring, v) == expected


def test_unknown_op():
    with pytest.raises(ValueError):
        element_arith(Z, "div", 1, 2)


def test_modulus_must_be_at_least_two():
    with pytest.raises(ValueError):
        Ring(1)


@pytest.mark.parametrize("text, ring", [("Z", Z), ("Zmod 7", Zmod(7)), ("Zmod7", Zmod(7)),
                                        ("Zmod:12", Zmod(12)), (" Z ", Z)])
def test_parse_ring(text, ring):
    assert parse_ring(text) == ring


@pytest.mark.parametrize("text", ["Q", "Zmod", "Zmod 1", "Zmod -3", "Z 5"])
def test_parse_ring_rejects(text):
    with pytest.raises(ParseError):
        parse_ring(text)


def test_str_and_generators():
    assert str(Z) == "Z" and str(Zmod(3)) == "Zmod 3"
    assert Z.generators() == (1, -1) and Zmod(3).generators() == (1,)
    assert parse_ring(str(Zmod(9))) == Zmod(9)


@given(rings, ints, ints, ints)
def test_ring_laws(ring, a, b, c):
    a, b, c = ring.canon(a), ring.canon(b), ring.canon(c)
    assert ring.add(a, b) == ring.add(b, a)
    assert ring.add(ring.add(a, b), c) == ring.add(a, ring.add(b, c))
    assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
    assert ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c))
    assert ring.is_zero(ring.add(a, ring.neg(a)))


@given(rings, ints)
def test_canonicalize_idempotent(ring, v):
    once = canonicalize(ring, v)
    assert canonicalize(ring, once) == once
    if ring.modulus:
        assert 0 <= once < ring.modulus
