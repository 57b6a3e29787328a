"""Succinct 2^h x 2^h matrices as decision-diagram grammars with addition."""

from .errors import LimitError, MismatchError, MtddError, ParseError, ValidationError
from .grammar import (Add, Const, Grammar, Pair, Quad, compact, grammar_size, merge_disjoint,
                      parse_grammar, serialize)
from .semiring import Ring, Z, Zmod, parse_ring
from .ops import add_top, aggregate, entry_of, hadamard, multiply, power, tensor, transpose
from .equality import equal_grammars, equal_vals, is_zero
from .oracle import dense_det, densify
from .generators import gen_basic, identity, scaled_identity, walsh

__version__ = "0.1.0"

__all__ = [
    "Add", "Const", "Grammar", "LimitError", "MismatchError", "MtddError", "Pair", "ParseError",
    "Quad", "Ring", "ValidationError", "Z", "Zmod", "add_top", "aggregate", "compact",
    "dense_det", "densify", "entry_of", "equal_grammars", "equal_vals", "gen_basic", "grammar_size",
    "hadamard", "identity", "is_zero", "merge_disjoint", "multiply", "parse_grammar", "parse_ring", "power",
    "scaled_identity", "serialize", "tensor", "transpose", "walsh",
]
