"""Symbolic mod-2 homology of QS^{-k}: Dyer-Lashof and Steenrod operations, primitives, desuspension."""
from .core import (
    Atom, Element, EngineInconsistency, LoopHomError, MalformedSequence, MissingData, Monomial,
    Pi0Class, Pi0Spec, Symbol, Tensor, UnsupportedPrime, admissible_sequences, excess, is_admissible,
)
from .expr import Context, ParseError, UnknownGenerator, parse_expression, parse_homogeneous

__version__ = "0.1.0"

__all__ = [
    "Atom", "Context", "Element", "EngineInconsistency", "LoopHomError", "MalformedSequence", "MissingData",
    "Monomial", "ParseError", "Pi0Class", "Pi0Spec", "Symbol", "Tensor", "UnknownGenerator", "UnsupportedPrime",
    "admissible_sequences", "excess", "is_admissible", "parse_expression", "parse_homogeneous",
]
