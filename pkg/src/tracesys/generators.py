"""Seeded random systems for property tests and experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .system import ConcurrentSystem, commutation_violations, validate_system
from .traces import IndependenceAlphabet, OmegaTrace, normalize_word


@dataclass(frozen=True)
class SystemConfig:
    max_states: int = 4
    max_letters: int = 4
    independence_prob: float = 0.5
    sink_prob: float = 0.4


def random_alphabet(rng: random.Random, n_letters: int, independence_prob: float) -> IndependenceAlphabet:
    letters = [chr(ord("a") + k) for k in range(n_letters)]
    pairs = [(a, b) for k, a in enumerate(letters) for b in letters[k + 1:] if rng.random() < independence_prob]
    return IndependenceAlphabet.of(letters, pairs)


def repair_table(alphabet: IndependenceAlphabet, table: list) -> list:
    """Send both letters of every commutation conflict to the sink until none remain.

    Entries only ever move to the sink, so this terminates.
    """
    while True:
        bad = commutation_violations(alphabet, table)
        if not bad:
            return table
        for s, i, j in bad:
            table[s][i] = -1
            table[s][j] = -1


def random_system(rng: random.Random, config: SystemConfig = SystemConfig()) -> ConcurrentSystem:
    n = rng.randint(1, config.max_states)
    k = rng.randint(1, config.max_letters)
    al = random_alphabet(rng, k, config.independence_prob)
    table = [[-1 if rng.random() < config.sink_prob else rng.randrange(n) for _ in range(k)]
             for _ in range(n)]
    table = repair_table(al, table)
    states = [f"s{q}" for q in range(n)]
    entries = [(states[s], al.letters[i], states[t]) for s, row in enumerate(table)
               for i, t in enumerate(row) if t >= 0]
    return validate_system(al, states, entries)


def random_systems(seed: int, count: int, config: SystemConfig = SystemConfig()) -> list:
    rng = random.Random(seed)
    return [random_system(rng, config) for _ in range(count)]


def random_omega(rng: random.Random, alphabet: IndependenceAlphabet, max_prefix: int = 2,
                 max_cycle: int = 3) -> OmegaTrace:
    """A random eventually periodic infinite trace: random words, normalised into cliques."""
    letters = alphabet.letters
    while True:
        pre = [rng.choice(letters) for _ in range(rng.randint(0, max_prefix * 2))]
        cyc = [rng.choice(letters) for _ in range(rng.randint(1, max_cycle * 2))]
        p = normalize_word(alphabet, pre).masks
        c = normalize_word(alphabet, cyc).masks
        # the cycle must chain onto itself and onto the prefix as a normal sequence
        seq = p + c + c
        if all(alphabet.is_normal_pair_mask(seq[k], seq[k + 1]) for k in range(len(seq) - 1)):
            return OmegaTrace(alphabet, p, c)
