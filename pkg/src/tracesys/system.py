"""Concurrent systems: a trace monoid acting on a finite state set plus a sink.

The sink is never a member of ``states``. Internally the action table holds
state indices with ``-1`` for the sink; the public API speaks state names and
uses ``None`` for the sink.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InputError, ValidationError
from .polynomial import (DEFAULT_WIDTH, INFINITE_ROOT, Polynomial, RootBracket, compare_roots,
                         determinant, smallest_root)
from .traces import (IndependenceAlphabet, Trace, _append_letter, _letters_used, _word, iter_bits,
                     normalize_word, trace_sort_key)

SINK = None
_SINK = -1


@dataclass(frozen=True, eq=False)
class ConcurrentSystem:
    """A validated, immutable concurrent system.

    ``table[s][i]`` is the index of ``states[s] · letters[i]``, or ``-1``.
    Use :func:`validate_system` to build one.
    """

    alphabet: IndependenceAlphabet
    states: tuple
    table: tuple

    def __eq__(self, other):
        return (isinstance(other, ConcurrentSystem) and self.alphabet == other.alphabet
                and self.states == other.states and self.table == other.table)

    def __hash__(self):
        return hash((self.alphabet, self.states, self.table))

    @cached_property
    def state_index(self) -> dict:
        return {s: k for k, s in enumerate(self.states)}

    def index_of(self, state) -> int:
        try:
            return self.state_index[state]
        except KeyError:
            raise InputError(f"unknown state {state!r}") from None

    def _run(self, s: int, indices: Iterable[int]) -> int:
        table = self.table
        for i in indices:
            s = table[s][i]
            if s < 0:
                return _SINK
        return s

    def _run_mask(self, s: int, mask: int) -> int:
        return self._run(s, iter_bits(mask))

    def step(self, state, a: str):
        t = self.table[self.index_of(state)][self.alphabet.letter_index(a)]
        return None if t < 0 else self.states[t]

    @cached_property
    def enabled_masks(self) -> tuple:
        return tuple(sum(1 << i for i, t in enumerate(row) if t >= 0) for row in self.table)

    @cached_property
    def clique_targets(self) -> tuple:
        """Per state, a dict from every executable clique (bitmask) to its target state index."""
        out = []
        for s in range(len(self.states)):
            enabled = self.enabled_masks[s]
            row = {}
            for m in self.alphabet.clique_masks:
                if m & ~enabled:
                    continue
                t = self._run_mask(s, m)
                if t >= 0:
                    row[m] = t
            out.append(row)
        return tuple(out)

    def edges(self) -> list:
        """``(source, letter, target)`` triples of the labelled multigraph of states."""
        return [(self.states[s], a, self.states[t])
                for s, row in enumerate(self.table)
                for a, t in zip(self.alphabet.letters, row) if t >= 0]

    @cached_property
    def successors(self) -> tuple:
        return tuple(tuple(sorted({t for t in row if t >= 0})) for row in self.table)

    def is_trivial(self) -> bool:
        return not any(self.enabled_masks)


def _parse_entries(alphabet, states, action) -> list:
    if isinstance(action, Mapping):
        items = [(k[0], k[1], v) for k, v in action.items()]
    else:
        items = [tuple(e) for e in action]
    index = {s: k for k, s in enumerate(states)}
    table = [[_SINK] * len(alphabet.letters) for _ in states]
    for n, entry in enumerate(items):
        where = f"action[{n}]"
        if len(entry) != 3:
            raise InputError("action entries are [state, letter, target] triples", where)
        src, a, dst = entry
        if src not in index:
            raise InputError(f"unknown state {src!r}", where)
        if a not in alphabet.index:
            raise InputError(f"unknown letter {a!r}", where)
        if dst is None:
            continue
        if dst not in index:
            raise InputError(f"unknown target state {dst!r}", where)
        cell = table[index[src]][alphabet.index[a]]
        if cell != _SINK:
            raise InputError(f"two targets for ({src}, {a})", where)
        table[index[src]][alphabet.index[a]] = index[dst]
    return table


def commutation_violations(alphabet: IndependenceAlphabet, table: Sequence[Sequence[int]]) -> list:
    """``(state index, a, b)`` with ``(a, b)`` independent and ``s·ab != s·ba``."""
    out = []
    pairs = [(i, j) for i in range(len(alphabet.letters)) for j in range(i + 1, len(alphabet.letters))
             if not alphabet.dep_masks[i] >> j & 1]

    def run(s, i, j):
        t = table[s][i]
        return _SINK if t < 0 else table[t][j]

    for s in range(len(table)):
        for i, j in pairs:
            if run(s, i, j) != run(s, j, i):
                out.append((s, i, j))
    return out


def validate_system(alphabet: IndependenceAlphabet, states: Sequence[str], action) -> ConcurrentSystem:
    """Build a system from ``(state, letter, target)`` triples or a ``{(state, letter): target}`` map.

    Omitted pairs, and a ``None`` target, mean the sink.
    """
    states = tuple(states)
    if len(set(states)) != len(states):
        raise InputError("duplicate state name")
    for s in states:
        if not isinstance(s, str) or not s:
            raise InputError(f"state names must be nonempty strings, got {s!r}")
    table = _parse_entries(alphabet, states, action)
    bad = commutation_violations(alphabet, table)
    if bad:
        s, i, j = bad[0]
        a, b = alphabet.letters[i], alphabet.letters[j]
        described = "; ".join(
            f"{states[s]}·{alphabet.letters[i]}{alphabet.letters[j]} != "
            f"{states[s]}·{alphabet.letters[j]}{alphabet.letters[i]}" for s, i, j in bad)
        err = ValidationError(f"action does not respect commutation: {described}")
        err.witness = (states[s], a, b)
        err.violations = [(states[s], alphabet.letters[i], alphabet.letters[j]) for s, i, j in bad]
        raise err
    return ConcurrentSystem(alphabet, states, tuple(tuple(r) for r in table))


def act(sys: ConcurrentSystem, state, x: Trace):
    """``state · x``, or ``None`` for the sink."""
    if x.alphabet != sys.alphabet:
        raise InputError("trace and system use different alphabets")
    t = sys._run(sys.index_of(state), _word(x.masks))
    return None if t < 0 else sys.states[t]


def act_word(sys: ConcurrentSystem, state, word: Iterable[str]):
    t = sys._run(sys.index_of(state), (sys.alphabet.letter_index(a) for a in word))
    return None if t < 0 else sys.states[t]


@dataclass(frozen=True)
class Enabled:
    letters: frozenset
    cliques: list
    nonempty_cliques: list


def enabled(sys: ConcurrentSystem, state) -> Enabled:
    """Enabled letters, executable cliques and the nonempty ones among them."""
    s = sys.index_of(state)
    al = sys.alphabet
    cliques = [al.clique_of(m) for m in al.clique_masks if m in sys.clique_targets[s]]
    return Enabled(al.clique_of(sys.enabled_masks[s]), cliques, [c for c in cliques if c])


# -- executions ----------------------------------------------------------------

def execution_levels(sys: ConcurrentSystem, s: int, n_max: int) -> list:
    """Entry ``n`` maps each execution of length ``n`` from state index ``s`` (as masks) to its target."""
    levels = [{(): s}]
    table = sys.table
    al = sys.alphabet
    for _ in range(n_max):
        nxt: dict = {}
        for xm, t in levels[-1].items():
            row = table[t]
            for i in iter_bits(sys.enabled_masks[t]):
                nx = _append_letter(al, xm, i)
                if nx not in nxt:
                    nxt[nx] = row[i]
        levels.append(nxt)
    return levels


def enumerate_executions(sys: ConcurrentSystem, state, n: int) -> dict:
    """Executions of length ``n`` from ``state``, grouped by terminal state (each list sorted)."""
    if n < 0:
        raise InputError("length must be nonnegative")
    level = execution_levels(sys, sys.index_of(state), n)[n]
    out = {}
    for xm, t in level.items():
        out.setdefault(sys.states[t], []).append(Trace(sys.alphabet, xm))
    return {k: sorted(v, key=trace_sort_key) for k, v in sorted(out.items(), key=lambda kv: sys.state_index[kv[0]])}


def execution_counts(sys: ConcurrentSystem, n_max: int) -> list:
    """Brute-force growth matrices: entry ``n`` is the matrix ``#{x in M_{α,β}: |x| = n}``."""
    k = len(sys.states)
    out = [[[0] * k for _ in range(k)] for _ in range(n_max + 1)]
    for s in range(k):
        for n, level in enumerate(execution_levels(sys, s, n_max)):
            for t in level.values():
                out[n][s][t] += 1
    return out


def has_execution_of_length(sys: ConcurrentSystem, state, n: int) -> bool:
    """Whether some execution from ``state`` has length ``n``; a path search, no enumeration."""
    # any execution of length n linearises to a letter path of length n, and conversely
    frontier = {sys.index_of(state)}
    for _ in range(n):
        frontier = {t for s in frontier for t in sys.successors[s]}
        if not frontier:
            return False
    return True


# -- digraph of states and cliques ----------------------------------------------

@dataclass(frozen=True)
class StatesCliquesDigraph:
    """Nodes ``(state, clique)`` with the clique executable at the state."""

    system: ConcurrentSystem
    nodes: tuple
    edges: frozenset

    def nonempty(self) -> "StatesCliquesDigraph":
        keep = tuple(n for n in self.nodes if n[1])
        return StatesCliquesDigraph(self.system, keep,
                                    frozenset(e for e in self.edges if e[0][1] and e[1][1]))

    def successors(self, node) -> list:
        return [v for v in self.nodes if (node, v) in self.edges]


def _node_key(sys: ConcurrentSystem):
    order = {m: k for k, m in enumerate(sys.alphabet.clique_masks)}
    return lambda node: (sys.state_index[node[0]], order[sys.alphabet.mask_of(node[1])])


def states_cliques_digraph(sys: ConcurrentSystem, include_empty: bool = False) -> StatesCliquesDigraph:
    """The digraph of states and cliques; by default only nodes with nonempty cliques."""
    al = sys.alphabet
    raw = []
    for s, row in enumerate(sys.clique_targets):
        for m in al.clique_masks:
            if m in row and (m or include_empty):
                raw.append((s, m))
    nodes = tuple((sys.states[s], al.clique_of(m)) for s, m in raw)
    edges = set()
    for s, m in raw:
        t = sys.clique_targets[s][m]
        for s2, m2 in raw:
            if s2 == t and al.is_normal_pair_mask(m, m2):
                edges.add(((sys.states[s], al.clique_of(m)), (sys.states[s2], al.clique_of(m2))))
    return StatesCliquesDigraph(sys, nodes, frozenset(edges))


# -- Möbius matrix and characteristic root --------------------------------------

@dataclass(frozen=True)
class MobiusMatrix:
    states: tuple
    entries: tuple  # rows of Polynomial

    def __getitem__(self, pair) -> Polynomial:
        a, b = pair
        idx = {s: k for k, s in enumerate(self.states)}
        return self.entries[idx[a]][idx[b]]

    def coefficient_matrices(self) -> list:
        """Integer matrices ``M_k`` with ``μ(z) = Σ_k M_k z^k``."""
        deg = max((p.degree for row in self.entries for p in row if not p.is_zero()), default=0)
        n = len(self.states)
        return [[[int(self.entries[i][j][k]) for j in range(n)] for i in range(n)]
                for k in range(deg + 1)]


def mobius_matrix(sys: ConcurrentSystem) -> MobiusMatrix:
    n = len(sys.states)
    width = len(sys.alphabet.letters) + 1
    coeffs = [[[0] * width for _ in range(n)] for _ in range(n)]
    for s, row in enumerate(sys.clique_targets):
        for m, t in row.items():
            k = m.bit_count()
            coeffs[s][t][k] += -1 if k & 1 else 1
    return MobiusMatrix(sys.states, tuple(tuple(Polynomial(c) for c in r) for r in coeffs))


def theta(sys: ConcurrentSystem) -> Polynomial:
    """Determinant of the Möbius matrix."""
    return determinant(mobius_matrix(sys).entries)


def characteristic_root(sys: ConcurrentSystem, width: Fraction = DEFAULT_WIDTH) -> RootBracket:
    return smallest_root(theta(sys), width)


def growth_matrix_coefficients(sys: ConcurrentSystem, n_max: int) -> list:
    """Matrices ``G_0..G_{n_max}`` of the growth series, from ``G(z) μ(z) = Id``."""
    if n_max < 0:
        raise InputError("n_max must be nonnegative")
    mats = mobius_matrix(sys).coefficient_matrices()
    n = len(sys.states)
    out = [[[int(i == j) for j in range(n)] for i in range(n)]]
    for m in range(1, n_max + 1):
        acc = [[0] * n for _ in range(n)]
        for k in range(1, min(m, len(mats) - 1) + 1):
            g, mk = out[m - k], mats[k]
            for i in range(n):
                gi = g[i]
                for l in range(n):
                    if gi[l]:
                        v = gi[l]
                        ml = mk[l]
                        row = acc[i]
                        for j in range(n):
                            row[j] -= v * ml[j]
        out.append(acc)
    return out


# -- irreducibility and restriction ---------------------------------------------

def _reachable(sys: ConcurrentSystem, s: int) -> set:
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in sys.successors[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


@dataclass(frozen=True)
class IrreducibilityVerdict:
    dependence_connected: bool
    strongly_connected: bool
    letters_reachable: bool

    @property
    def irreducible(self) -> bool:
        return self.dependence_connected and self.strongly_connected and self.letters_reachable

    def __bool__(self):
        return self.irreducible

    def to_json(self) -> dict:
        return {"dependence_connected": self.dependence_connected,
                "strongly_connected": self.strongly_connected,
                "letters_reachable": self.letters_reachable,
                "irreducible": self.irreducible}


def is_irreducible(sys: ConcurrentSystem) -> IrreducibilityVerdict:
    n = len(sys.states)
    reach = [_reachable(sys, s) for s in range(n)]
    strongly = all(len(r) == n for r in reach)
    full = sys.alphabet.full_mask
    letters = all(_letters_used(sys.enabled_masks[t] for t in r) == full for r in reach)
    return IrreducibilityVerdict(sys.alphabet.is_connected(), strongly, letters)


def restrict(sys: ConcurrentSystem, remove: str) -> ConcurrentSystem:
    """The system induced on the alphabet without ``remove``."""
    i = sys.alphabet.letter_index(remove)
    al = sys.alphabet.without(remove)
    table = tuple(row[:i] + row[i + 1:] for row in sys.table)
    sub = ConcurrentSystem(al, sys.states, table)
    assert not commutation_violations(al, table)
    return sub


@dataclass(frozen=True)
class SpectralRow:
    letter: str
    root: RootBracket
    greater: bool


@dataclass(frozen=True)
class SpectralReport:
    root: RootBracket
    rows: tuple

    @property
    def holds(self) -> bool:
        return all(r.greater for r in self.rows)


def spectral_check(sys: ConcurrentSystem) -> SpectralReport:
    """Compare the characteristic root with that of each one-letter restriction."""
    r = characteristic_root(sys)
    rows = []
    for a in sys.alphabet.letters:
        ra = characteristic_root(restrict(sys, a))
        rows.append(SpectralRow(a, ra, compare_roots(ra, r) > 0))
    return SpectralReport(r, tuple(rows))


# -- finiteness -----------------------------------------------------------------

@dataclass(frozen=True)
class FinitenessVerdict:
    finite: bool
    prefix: Optional[Trace] = None
    loop: Optional[Trace] = None
    loop_state: Optional[str] = None


def _letter_path(sys: ConcurrentSystem, src: int, dst: int, nonempty: bool) -> Optional[list]:
    """Shortest letter word leading from ``src`` to ``dst`` (letters tried in alphabet order)."""
    start = [(sys.table[src][i], [i]) for i in range(len(sys.alphabet.letters)) if sys.table[src][i] >= 0] \
        if nonempty else [(src, [])]
    seen = set()
    queue = deque()
    for t, w in start:
        if t == dst:
            return w
        if t not in seen:
            seen.add(t)
            queue.append((t, w))
    while queue:
        u, w = queue.popleft()
        for i, v in enumerate(sys.table[u]):
            if v < 0 or v in seen:
                continue
            if v == dst:
                return w + [i]
            seen.add(v)
            queue.append((v, w + [i]))
    return None


def classify_finiteness(sys: ConcurrentSystem, state) -> FinitenessVerdict:
    """Finite iff no state lying on a cycle is reachable; otherwise return ``x`` and a loop ``y``."""
    s = sys.index_of(state)
    al = sys.alphabet
    order = sorted(_reachable(sys, s), key=lambda t: (len(_letter_path(sys, s, t, False)), t))
    for g in order:
        loop = _letter_path(sys, g, g, True)
        if loop is not None:
            prefix = _letter_path(sys, s, g, False)
            return FinitenessVerdict(
                False,
                normalize_word(al, [al.letters[i] for i in prefix]),
                normalize_word(al, [al.letters[i] for i in loop]),
                sys.states[g])
    return FinitenessVerdict(True)


def finiteness_cutoff(sys: ConcurrentSystem) -> int:
    """A length beyond which a finite execution set is certainly exhausted."""
    widest = max((m.bit_count() for m in sys.alphabet.clique_masks), default=0)
    return len(sys.states) * max(widest, 1) + 1


# -- convergence radii ----------------------------------------------------------

@dataclass(frozen=True)
class StateSeries:
    """``Σ_β G_{α,β}(z)`` as a reduced fraction ``numerator / denominator``."""

    state: str
    numerator: Polynomial
    denominator: Polynomial
    radius: RootBracket


def state_growth_series(sys: ConcurrentSystem, width: Fraction = DEFAULT_WIDTH) -> list:
    """Per-state growth series in closed form, with exact convergence radii.

    ``Σ_β G_{α,β}`` is the ``α`` entry of ``μ^{-1}·1``; Cramer's rule gives it as
    a ratio of determinants, which is reduced by its gcd. The coefficients are
    nonnegative, so the radius is the smallest positive pole.
    """
    mu = [list(row) for row in mobius_matrix(sys).entries]
    th = determinant(mu)
    ones = Polynomial([1])
    out = []
    for k, name in enumerate(sys.states):
        m = [row[:k] + [ones] + row[k + 1:] for row in mu]
        num = determinant(m)
        if num.is_zero():
            out.append(StateSeries(name, num, ones, INFINITE_ROOT))
            continue
        g = num.gcd(th)
        num_r, den_r = num.exact_div(g), th.exact_div(g)
        scale = den_r[0]
        num_r = num_r * Polynomial([1 / scale])
        den_r = den_r * Polynomial([1 / scale])
        radius = INFINITE_ROOT if den_r.is_constant() else smallest_root(den_r, width)
        out.append(StateSeries(name, num_r, den_r, radius))
    return out


@dataclass(frozen=True)
class RadiusReport:
    theta_root: RootBracket
    radii: dict  # state -> RootBracket
    minimum: RootBracket

    @property
    def agrees(self) -> bool:
        return compare_roots(self.theta_root, self.minimum) == 0


def convergence_radii(sys: ConcurrentSystem, width: Fraction = DEFAULT_WIDTH) -> RadiusReport:
    """Per-state radii of the growth series and their minimum, next to the root of θ."""
    series = state_growth_series(sys, width)
    radii = {s.state: s.radius for s in series}
    minimum = INFINITE_ROOT
    for s in series:
        if compare_roots(s.radius, minimum) < 0:
            minimum = s.radius
    return RadiusReport(characteristic_root(sys, width), radii, minimum)
