"""Exact coefficient arithmetic over Z and Z/kZ.

Elements are plain Python ints.  Over ``Zmod(k)`` they are always kept as the
canonical residue in ``[0, k-1]``; over ``Z`` they are arbitrary precision.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class Ring:
    """Either the integers (``modulus is None``) or Z/kZ with k >= 2."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")

    @property
    def is_integers(self) -> bool:
        return self.modulus is None

    def canon(self, v: int) -> int:
        if self.modulus is None:
            return int(v)
        return int(v) % self.modulus

    def add(self, a: int, b: int) -> int:
        return self.canon(a + b)

    def mul(self, a: int, b: int) -> int:
        return self.canon(a * b)

    def neg(self, a: int) -> int:
        return self.canon(-a)

    def is_zero(self, a: int) -> bool:
        return self.canon(a) == 0

    def generators(self) -> tuple[int, ...]:
        """Fixed additive generating set: {1, -1} for Z, {1} for Z/kZ."""
        return (1, -1) if self.modulus is None else (1,)

    def __str__(self):
        return "Z" if self.modulus is None else f"Zmod {self.modulus}"


Z = Ring()


def Zmod(k: int) -> Ring:
    return Ring(k)


def element_arith(ring: Ring, op: str, a: int, b: int | None = None) -> int:
    if op == "add":
        return ring.add(a, b)
    if op == "mul":
        return ring.mul(a, b)
    if op == "neg":
        return ring.neg(a)
    raise ValueError(f"unknown op {op!r}")


def canonicalize(ring: Ring, v: int) -> int:
    return ring.canon(v)


_RING_RE = re.compile(r"^\s*(Z)\s*$|^\s*Zmod\s*[: ]?\s*(\d+)\s*$")


def parse_ring(text: str) -> Ring:
    """Parse ``Z``, ``Zmod 7``, ``Zmod7`` or ``Zmod:7``."""
    m = _RING_RE.match(text)
    if not m:
        raise ParseError(f"unknown semiring {text.strip()!r}")
    if m.group(1):
        return Z
    k = int(m.group(2))
    if k < 2:
        raise ParseError(f"Zmod modulus must be >= 2, got {k}")
    return Ring(k)
