"""Trace monoids, concurrent systems and their probabilistic valuations."""

from .errors import (DeadNodeError, InputError, OrderError, PreconditionError, TheoremViolation,
                     ValidationError)
from .polynomial import Polynomial, RootBracket, compare_roots, smallest_root
from .traces import IndependenceAlphabet, OmegaTrace, Trace, normalize_word, parse_trace
from .system import ConcurrentSystem, validate_system

__all__ = [
    "ConcurrentSystem", "DeadNodeError", "IndependenceAlphabet", "InputError", "OmegaTrace",
    "OrderError", "Polynomial", "PreconditionError", "RootBracket", "TheoremViolation", "Trace",
    "ValidationError", "compare_roots", "normalize_word", "parse_trace", "smallest_root",
    "validate_system",
]
