"""Valuations on concurrent systems and the Markov chain of states and cliques."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import lcm
from typing import Iterable, Mapping, Optional

from .errors import DeadNodeError, InputError, PreconditionError, ValidationError
from .mobius import CliqueFunction, mobius_transform
from .polynomial import format_fraction, to_fraction
from .system import ConcurrentSystem
from .traces import Trace, _word, iter_bits


@dataclass(frozen=True, eq=False)
class Valuation:
    """Letter weights ``f_α(a)``; ``weights[s][i]`` follows the system's state and letter order."""

    system: ConcurrentSystem
    weights: tuple

    def weight(self, state, a: str) -> Fraction:
        return self.weights[self.system.index_of(state)][self.system.alphabet.letter_index(a)]

    def _eval(self, s: int, indices: Iterable[int]) -> Fraction:
        table, w = self.system.table, self.weights
        acc = Fraction(1)
        for i in indices:
            if s < 0:
                return Fraction(0)
            acc *= w[s][i]
            if not acc:
                return acc
            s = table[s][i]
        return acc if s >= 0 else Fraction(0)

    def entries(self) -> list:
        """Nonzero weights as ``(state, letter, weight)``."""
        al = self.system.alphabet
        return [(st, a, v) for st, row in zip(self.system.states, self.weights)
                for a, v in zip(al.letters, row) if v]

    def to_json(self) -> dict:
        return {"weights": [[s, a, format_fraction(v)] for s, a, v in self.entries()]}

    @cached_property
    def mobius(self) -> "StateMobius":
        return mobius_of_valuation(self.system, self)


def _consistency_violations(sys: ConcurrentSystem, w) -> list:
    al = sys.alphabet
    out = []
    n = len(al.letters)
    for s, row in enumerate(sys.table):
        for i in range(n):
            for j in range(i + 1, n):
                if al.dep_masks[i] >> j & 1:
                    continue
                si, sj = row[i], row[j]
                left = w[s][i] * (w[si][j] if si >= 0 else 0)
                right = w[s][j] * (w[sj][i] if sj >= 0 else 0)
                if left != right:
                    out.append((sys.states[s], al.letters[i], al.letters[j], left, right))
    return out


def build_valuation(sys: ConcurrentSystem, weights) -> Valuation:
    """Validate letter weights given as ``(state, letter, weight)`` triples or a mapping.

    Unlisted pairs get weight 0.
    """
    if isinstance(weights, Mapping):
        items = [(k[0], k[1], v) for k, v in weights.items()]
    else:
        items = [tuple(e) for e in weights]
    al = sys.alphabet
    w = [[Fraction(0)] * len(al.letters) for _ in sys.states]
    seen = set()
    for n, entry in enumerate(items):
        where = f"weights[{n}]"
        if len(entry) != 3:
            raise InputError("weights are [state, letter, value] triples", where)
        st, a, v = entry
        if st not in sys.state_index:
            raise InputError(f"unknown state {st!r}", where)
        if a not in al.index:
            raise InputError(f"unknown letter {a!r}", where)
        if (st, a) in seen:
            raise InputError(f"weight for ({st}, {a}) given twice", where)
        seen.add((st, a))
        try:
            v = to_fraction(v)
        except InputError as exc:
            raise InputError(str(exc), where) from None
        if v < 0:
            raise ValidationError(f"negative weight {v} on ({st}, {a})", where)
        s, i = sys.state_index[st], al.index[a]
        if v and sys.table[s][i] < 0:
            raise ValidationError(f"nonzero weight on disabled letter {a} at {st}", where)
        w[s][i] = v
    bad = _consistency_violations(sys, w)
    if bad:
        text = "; ".join(f"f_{s}({a})·f_{s}·{a}({b}) = {format_fraction(l)} but "
                         f"f_{s}({b})·f_{s}·{b}({a}) = {format_fraction(r)}" for s, a, b, l, r in bad)
        err = ValidationError(f"weights are not commutation consistent: {text}")
        err.violations = bad
        raise err
    return Valuation(sys, tuple(tuple(r) for r in w))


def dominant_weights(sys: ConcurrentSystem) -> list:
    return [(sys.states[s], a, 1) for s, row in enumerate(sys.table)
            for a, t in zip(sys.alphabet.letters, row) if t >= 0]


def dominant_valuation(sys: ConcurrentSystem) -> Valuation:
    """Weight 1 on every enabled letter: ``f_α(x)`` is the indicator of ``x`` being an execution."""
    return build_valuation(sys, dominant_weights(sys))


def evaluate(val: Valuation, state, x: Trace) -> Fraction:
    if x.alphabet != val.system.alphabet:
        raise InputError("trace and system use different alphabets")
    return val._eval(val.system.index_of(state), _word(x.masks))


@dataclass(frozen=True)
class StateMobius:
    """Per-state Möbius transforms ``h_α`` over all cliques of the alphabet."""

    system: ConcurrentSystem
    tables: tuple  # CliqueFunction per state index

    def h(self, state, clique) -> Fraction:
        return self.tables[self.system.index_of(state)][clique]

    def of(self, state) -> CliqueFunction:
        return self.tables[self.system.index_of(state)]


def mobius_of_valuation(sys: ConcurrentSystem, val: Valuation) -> StateMobius:
    al = sys.alphabet
    tables = []
    for s in range(len(sys.states)):
        f = CliqueFunction(al, {m: val._eval(s, iter_bits(m)) for m in al.clique_masks})
        tables.append(mobius_transform(f))
    return StateMobius(sys, tuple(tables))


@dataclass(frozen=True)
class ProbabilisticCheck:
    ok: bool
    violations: tuple  # (state, clique, value, reason)

    def __bool__(self):
        return self.ok


def is_probabilistic(sys: ConcurrentSystem, val: Valuation) -> ProbabilisticCheck:
    """Each ``h_α`` must vanish at the empty clique and be nonnegative elsewhere."""
    al = sys.alphabet
    bad = []
    for st, table in zip(sys.states, val.mobius.tables):
        if table[0]:
            bad.append((st, frozenset(), table[0], "nonzero at the empty clique"))
        for m in al.clique_masks[1:]:
            if table.values[m] < 0:
                bad.append((st, al.clique_of(m), table.values[m], "negative"))
    return ProbabilisticCheck(not bad, tuple(bad))


def _require_probabilistic(sys: ConcurrentSystem, val: Valuation):
    check = is_probabilistic(sys, val)
    if not check:
        st, c, v, why = check.violations[0]
        raise PreconditionError(
            f"valuation is not probabilistic: h at ({st}, {sys.alphabet.format_clique(sys.alphabet.mask_of(c))}) "
            f"= {format_fraction(v)} ({why})")


# -- Markov chain ---------------------------------------------------------------

@dataclass(frozen=True)
class ChainModel:
    """Exact chain on nodes ``(state index, clique mask)`` of the nonempty-clique digraph.

    ``initial[s]`` and ``transitions[node]`` are dicts node -> probability.
    A node listed in ``dead`` has an all-zero row and no transitions.
    """

    system: ConcurrentSystem
    nodes: tuple
    initial: tuple
    transitions: dict
    dead: frozenset

    def node_name(self, node) -> tuple:
        s, m = node
        return self.system.states[s], self.system.alphabet.clique_of(m)

    def format_node(self, node) -> str:
        s, m = node
        return f"({self.system.states[s]}, {self.system.alphabet.format_clique(m)})"


def chain_model(sys: ConcurrentSystem, val: Valuation) -> ChainModel:
    """Initial law ``h_α`` and rows proportional to ``h_{α·c}`` over normal successor cliques."""
    _require_probabilistic(sys, val)
    al = sys.alphabet
    h = val.mobius.tables
    nodes = tuple((s, m) for s, row in enumerate(sys.clique_targets) for m in al.clique_masks[1:] if m in row)
    initial = tuple({(s, m): h[s].values[m] for m in al.clique_masks[1:] if h[s].values[m]}
                    for s in range(len(sys.states)))
    transitions, dead = {}, set()
    for s, m in nodes:
        t = sys.clique_targets[s][m]
        weights = {(t, d): h[t].values[d] for d in al.clique_masks[1:]
                   if h[t].values[d] and al.is_normal_pair_mask(m, d)}
        total = sum(weights.values(), Fraction(0))
        if total:
            transitions[(s, m)] = {k: v / total for k, v in weights.items()}
        else:
            transitions[(s, m)] = {}
            dead.add((s, m))
    return ChainModel(sys, nodes, initial, transitions, frozenset(dead))


def cylinder_probability(sys: ConcurrentSystem, val: Valuation, state, x: Trace, check: bool = True) -> Fraction:
    """Probability that a random maximal execution from ``state`` starts with ``x``."""
    if check:
        _require_probabilistic(sys, val)
    return evaluate(val, state, x)


def two_step_probability(chain: ChainModel, val: Valuation, state, c: int, d: int) -> Fraction:
    """``P(C1 = c, C2 = d)`` from the chain: initial mass times the transition entry."""
    s = chain.system.index_of(state)
    first = chain.initial[s].get((s, c), Fraction(0))
    if not first:
        return Fraction(0)
    t = chain.system.clique_targets[s][c]
    return first * chain.transitions[(s, c)].get((t, d), Fraction(0))


def null_nodes(sys: ConcurrentSystem, val: Valuation) -> frozenset:
    """Nodes no state's chain can ever visit, as ``(state, clique)`` pairs."""
    chain = chain_model(sys, val)
    seen = set()
    stack = [n for init in chain.initial for n in init]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        stack.extend(chain.transitions[n])
    return frozenset(chain.node_name(n) for n in chain.nodes if n not in seen)


def _draw(rng: random.Random, dist: Mapping, order) -> object:
    keys = sorted(dist, key=order)
    denom = reduce(lcm, (dist[k].denominator for k in keys), 1)
    u = rng.randrange(denom)
    acc = 0
    for k in keys:
        acc += dist[k].numerator * (denom // dist[k].denominator)
        if u < acc:
            return k
    raise AssertionError("distribution does not sum to 1")


def sample_execution(sys: ConcurrentSystem, val: Valuation, state, steps: int, seed: int,
                     chain: Optional[ChainModel] = None) -> list:
    """Draw ``steps`` nodes ``(state, clique)`` of the chain, exactly, from a seeded generator.

    Each draw picks an integer uniformly below the common denominator of the
    distribution, so no floating point is involved.
    """
    if steps < 1:
        raise InputError("steps must be positive")
    if chain is None:
        chain = chain_model(sys, val)
    order = {m: k for k, m in enumerate(sys.alphabet.clique_masks)}
    key = lambda n: (n[0], order[n[1]])  # noqa: E731
    rng = random.Random(seed)
    s = sys.index_of(state)
    if not chain.initial[s]:
        raise DeadNodeError(f"no initial distribution at {state}: it enables nothing")
    node = _draw(rng, chain.initial[s], key)
    out = [chain.node_name(node)]
    for _ in range(steps - 1):
        if node in chain.dead:
            raise DeadNodeError(f"sampler entered dead node {chain.format_node(node)}")
        node = _draw(rng, chain.transitions[node], key)
        out.append(chain.node_name(node))
    return out


# -- feasibility search ---------------------------------------------------------

def search_probabilistic(sys: ConcurrentSystem, grid: int = 2, budget: int = 20000,
                         limit: Optional[int] = None) -> list:
    """Probabilistic valuations with every weight in ``{0, 1/grid, ..., 1}``.

    An exhaustive grid walk, capped at ``budget`` candidates; found valuations
    are returned in enumeration order, at most ``limit`` of them.
    """
    pairs = [(s, i) for s, row in enumerate(sys.table) for i, t in enumerate(row) if t >= 0]
    values = [Fraction(k, grid) for k in range(grid + 1)]
    al = sys.alphabet
    found = []
    for tried, combo in enumerate(itertools.product(values, repeat=len(pairs))):
        if tried >= budget:
            break
        w = [[Fraction(0)] * len(al.letters) for _ in sys.states]
        for (s, i), v in zip(pairs, combo):
            w[s][i] = v
        if _consistency_violations(sys, w):
            continue
        val = Valuation(sys, tuple(tuple(r) for r in w))
        if is_probabilistic(sys, val):
            found.append(val)
            if limit is not None and len(found) >= limit:
                break
    return found
