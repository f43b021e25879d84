"""Cliques, normal pairs and Möbius inversion on the clique poset."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping

from .errors import InputError
from .polynomial import Polynomial, smallest_root  # noqa: F401  (re-exported)
from .traces import Clique, IndependenceAlphabet


def enumerate_cliques(alphabet: IndependenceAlphabet) -> list:
    """All cliques including the empty one, ordered by size then lexicographically."""
    return [alphabet.clique_of(m) for m in alphabet.clique_masks]


def is_normal_pair(alphabet: IndependenceAlphabet, c: Clique, d: Clique) -> bool:
    """``c -> d``: every letter of ``d`` depends on some letter of ``c``."""
    return alphabet.is_normal_pair_mask(alphabet.mask_of(c), alphabet.mask_of(d))


@lru_cache(maxsize=256)
def _supersets(alphabet: IndependenceAlphabet) -> dict:
    masks = alphabet.clique_masks
    return {c: [d for d in masks if d & c == c] for c in masks}


@dataclass(frozen=True)
class CliqueFunction:
    """A function from the cliques of an alphabet to exact rationals."""

    alphabet: IndependenceAlphabet
    values: Mapping  # clique bitmask -> Fraction

    def __post_init__(self):
        if set(self.values) != set(self.alphabet.clique_masks):
            raise InputError("a clique function must be defined on exactly the cliques of its alphabet")

    @classmethod
    def from_cliques(cls, alphabet: IndependenceAlphabet, values: Mapping) -> "CliqueFunction":
        """Build from a mapping keyed by letter sets; missing cliques default to 0."""
        table = {m: Fraction(0) for m in alphabet.clique_masks}
        for clique, v in values.items():
            mask = alphabet.mask_of(clique)
            if mask not in table:
                raise InputError(f"{sorted(clique)} is not a clique")
            table[mask] = Fraction(v)
        return cls(alphabet, table)

    @classmethod
    def from_rule(cls, alphabet: IndependenceAlphabet, rule: Callable) -> "CliqueFunction":
        """Build by calling ``rule(clique)`` on every clique (given as a frozenset)."""
        return cls(alphabet, {m: Fraction(rule(alphabet.clique_of(m))) for m in alphabet.clique_masks})

    def __getitem__(self, clique) -> Fraction:
        mask = clique if isinstance(clique, int) else self.alphabet.mask_of(clique)
        return self.values[mask]

    def items(self):
        for m in self.alphabet.clique_masks:
            yield self.alphabet.clique_of(m), self.values[m]

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))


def mobius_transform(f: CliqueFunction) -> CliqueFunction:
    """``h(c) = sum over cliques c' ⊇ c of (-1)^(|c'|-|c|) f(c')``."""
    sup = _supersets(f.alphabet)
    out = {}
    for c, above in sup.items():
        size = c.bit_count()
        acc = Fraction(0)
        for d in above:
            v = f.values[d]
            if v:
                acc += -v if (d.bit_count() - size) & 1 else v
        out[c] = acc
    return CliqueFunction(f.alphabet, out)


def mobius_inverse(h: CliqueFunction) -> CliqueFunction:
    """Inclusion-exclusion inverse: ``f(c) = sum over cliques c' ⊇ c of h(c')``."""
    sup = _supersets(h.alphabet)
    return CliqueFunction(
        h.alphabet, {c: sum((h.values[d] for d in above), Fraction(0)) for c, above in sup.items()})


def mobius_polynomial(alphabet: IndependenceAlphabet) -> Polynomial:
    coeffs = [0] * (len(alphabet.letters) + 1)
    for m in alphabet.clique_masks:
        k = m.bit_count()
        coeffs[k] += -1 if k & 1 else 1
    return Polynomial(coeffs)


def inverse_series(p: Polynomial, n_max: int) -> list:
    """First ``n_max + 1`` coefficients of the power series ``1/p``; needs ``p(0) != 0``."""
    if n_max < 0:
        raise InputError("n_max must be nonnegative")
    c0 = p[0]
    if c0 == 0:
        raise InputError("power series inverse needs a nonzero constant term")
    out = []
    for n in range(n_max + 1):
        acc = Fraction(1 if n == 0 else 0)
        for k in range(1, min(n, p.degree) + 1):
            acc -= p[k] * out[n - k]
        out.append(acc / c0)
    return out


def growth_coefficients(alphabet: IndependenceAlphabet, n_max: int) -> list:
    """Number of traces of each length ``0..n_max``, from ``G(z) μ(z) = 1``."""
    return [int(c) for c in inverse_series(mobius_polynomial(alphabet), n_max)]
