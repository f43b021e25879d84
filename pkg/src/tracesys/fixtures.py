"""Small reference objects used by tests, scripts and the CLI data files."""

from __future__ import annotations

from .system import ConcurrentSystem, validate_system
from .traces import IndependenceAlphabet


def alphabet_m1() -> IndependenceAlphabet:
    """Four letters where ``d`` commutes with ``a`` and ``b``."""
    return IndependenceAlphabet.of("abcd", [("a", "d"), ("b", "d")])


def alphabet_path(n: int) -> IndependenceAlphabet:
    """Letters ``a0..a{n-1}``, two of them independent iff their indices differ by at least 2."""
    letters = [f"a{i}" for i in range(n)]
    return IndependenceAlphabet.of(
        letters, [(letters[i], letters[j]) for i in range(n) for j in range(i + 2, n)])


def alphabet_m2() -> IndependenceAlphabet:
    return alphabet_path(5)


def system_a() -> ConcurrentSystem:
    """Two markings of the four-transition net with a shared place ``C``."""
    return validate_system(alphabet_m1(), ["α0", "α1"], [
        ("α0", "a", "α0"), ("α0", "b", "α1"), ("α0", "d", "α0"),
        ("α1", "c", "α0"), ("α1", "d", "α1"),
    ])


SYSTEM_B_EDGES = [
    ("0", "a0", "1"), ("0", "a2", "2"), ("1", "a2", "3"), ("2", "a0", "3"),
    ("2", "a3", "5"), ("3", "a1", "4"), ("3", "a3", "6"), ("4", "a3", "7"),
    ("5", "a0", "6"), ("6", "a1", "7"), ("7", "a2", "8"), ("8", "a1", "0"),
]


def system_b() -> ConcurrentSystem:
    """Nine states over ``a0..a3``; irreducible and deterministic."""
    return validate_system(alphabet_path(4), [str(k) for k in range(9)], SYSTEM_B_EDGES)


def system_c() -> ConcurrentSystem:
    """Deterministic but reducible: ``c`` moves from the ``α`` pair to the ``β`` pair for good."""
    al = IndependenceAlphabet.of("abc", [("a", "c"), ("b", "c")])
    return validate_system(al, ["α0", "α1", "β0", "β1"], [
        ("α0", "a", "α1"), ("α1", "b", "α0"), ("α0", "c", "β0"), ("α1", "c", "β1"),
        ("β0", "a", "β1"), ("β1", "b", "β0"),
    ])


def system_c_weights(p) -> list:
    """Letter weights of the one-parameter family of valuations on :func:`system_c`."""
    return [("α0", "a", 1), ("α0", "c", p), ("α1", "b", 1), ("α1", "c", p),
            ("β0", "a", 1), ("β1", "b", 1)]


def system_a_weights(p, q, s, t) -> list:
    """Letter weights on :func:`system_a`; the weight of ``d`` at ``α1`` is forced to equal ``s``."""
    return [("α0", "a", p), ("α0", "b", q), ("α0", "d", s), ("α1", "c", t), ("α1", "d", s)]


def fig2_net_document() -> dict:
    return {
        "places": ["A", "B", "C"],
        "transitions": {
            "a": {"pre": ["A"], "post": ["A"]},
            "b": {"pre": ["A"], "post": ["B"]},
            "c": {"pre": ["B", "C"], "post": ["A", "C"]},
            "d": {"pre": ["C"], "post": ["C"]},
        },
        "marking": ["A", "C"],
    }


def trivial_system(n_states: int = 2, letters: str = "ab") -> ConcurrentSystem:
    return validate_system(IndependenceAlphabet.free(letters), [f"s{k}" for k in range(n_states)], [])
