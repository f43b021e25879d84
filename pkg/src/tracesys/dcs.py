"""Determinism, maximal executions, boundary cardinality and the combined verdict report.

A state's executions form a lattice exactly when any two letters enabled
there are independent *and* can fire together. Independence alone is not
enough: a table may enable independent ``a`` and ``b`` at ``α`` while sending
``α·ab`` to the sink, and then ``a`` and ``b`` have no common upper bound.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import InputError, PreconditionError, TheoremViolation
from .polynomial import RootBracket, polynomial_to_json, root_equals
from .system import (ConcurrentSystem, IrreducibilityVerdict, classify_finiteness, convergence_radii,
                     execution_levels, finiteness_cutoff, has_execution_of_length, is_irreducible,
                     mobius_matrix, spectral_check, theta)
from .traces import OmegaTrace, Trace, _glb_masks, _letters_used, iter_bits, normalize_word
from .valuation import dominant_valuation, is_probabilistic


@dataclass(frozen=True)
class LubCheck:
    ok: bool
    counterexample: Optional[tuple] = None  # (x, y) without a common upper bound

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class DcsVerdict:
    is_dcs: bool
    witness: Optional[tuple]  # (state, a, b)
    powerset_check: bool
    bounded_lattice_check: Optional[bool]
    max_cliques: dict  # state -> frozenset, for states whose executable cliques have a maximum

    def __bool__(self):
        return self.is_dcs

    def to_json(self) -> dict:
        return {
            "is_dcs": self.is_dcs,
            "witness": list(self.witness) if self.witness else None,
            "powerset_check": self.powerset_check,
            "bounded_lattice_check": self.bounded_lattice_check,
            "max_cliques": {s: sorted(c) for s, c in self.max_cliques.items()},
        }


def dcs_witness(sys: ConcurrentSystem) -> Optional[tuple]:
    """First ``(state, a, b)`` with ``a, b`` enabled but not firable together, in table order."""
    al = sys.alphabet
    for s, row in enumerate(sys.table):
        en = list(iter_bits(sys.enabled_masks[s]))
        for x, i in enumerate(en):
            for j in en[x + 1:]:
                if al.dep_masks[i] >> j & 1 or sys.table[row[i]][j] < 0:
                    return sys.states[s], al.letters[i], al.letters[j]
    return None


def powerset_criterion(sys: ConcurrentSystem) -> bool:
    """Every subset of the enabled letters is an executable clique, at every state."""
    return all(len(row) == 1 << sys.enabled_masks[s].bit_count()
               for s, row in enumerate(sys.clique_targets))


def _lub_in(sys: ConcurrentSystem, s: int, xm: tuple, ym: tuple) -> bool:
    al = sys.alphabet
    g, xr, yr = _glb_masks(al, xm, ym)
    ux, uy = _letters_used(xr), _letters_used(yr)
    for i in iter_bits(ux):
        if al.dep_masks[i] & uy:
            return False
    t = sys._run(s, (i for m in g for i in iter_bits(m)))
    t = sys._run(t, (i for m in xr for i in iter_bits(m))) if t >= 0 else t
    t = sys._run(t, (i for m in yr for i in iter_bits(m))) if t >= 0 else t
    return t >= 0


def bounded_lub_check(sys: ConcurrentSystem, state, depth: int) -> LubCheck:
    """Brute force: do all executions of length at most ``depth`` pairwise have an upper bound?"""
    if depth < 1:
        raise InputError("depth must be positive")
    s = sys.index_of(state)
    seen: list = []
    for level in execution_levels(sys, s, depth)[1:]:
        new = list(level)
        for k, xm in enumerate(new):
            for ym in seen + new[:k]:
                if not _lub_in(sys, s, ym, xm):
                    al = sys.alphabet
                    return LubCheck(False, (Trace(al, ym), Trace(al, xm)))
        seen.extend(new)
    return LubCheck(True)


def is_deterministic(sys: ConcurrentSystem, lub_depth: Optional[int] = 3) -> DcsVerdict:
    """Decide determinism; ``lub_depth`` also runs the brute-force lattice check (``None`` skips it)."""
    witness = dcs_witness(sys)
    powerset = powerset_criterion(sys)
    lattice = None
    if lub_depth is not None:
        lattice = all(bounded_lub_check(sys, st, lub_depth) for st in sys.states)
    al = sys.alphabet
    max_cliques = {st: al.clique_of(sys.enabled_masks[s]) for s, st in enumerate(sys.states)
                   if sys.enabled_masks[s] in sys.clique_targets[s]}
    return DcsVerdict(witness is None, witness, powerset, lattice, max_cliques)


def _require_dcs(sys: ConcurrentSystem):
    w = dcs_witness(sys)
    if w is not None:
        raise PreconditionError(f"system is not deterministic: {w[1]} and {w[2]} cannot both fire at {w[0]}")


def maximal_execution(sys: ConcurrentSystem, state):
    """The largest generalised execution from ``state``: fire every enabled letter, repeat.

    The state orbit is eventually periodic, so the result is an
    :class:`OmegaTrace`, or a finite :class:`Trace` when the orbit stalls.
    """
    _require_dcs(sys)
    s = sys.index_of(state)
    first_visit = {}
    masks = []
    while s not in first_visit:
        m = sys.enabled_masks[s]
        if not m:
            return Trace(sys.alphabet, tuple(masks))
        first_visit[s] = len(masks)
        masks.append(m)
        s = sys.clique_targets[s][m]
    k = first_visit[s]
    al = sys.alphabet
    return OmegaTrace(al, tuple(masks[:k]), tuple(masks[k:]))


# -- boundary cardinality -------------------------------------------------------

@dataclass(frozen=True)
class FreeWitness:
    """Two loops at ``state`` with different first letters that cannot both fire; they generate a free monoid."""

    prefix: Trace
    state: str
    first: Trace
    second: Trace

    def to_json(self) -> dict:
        return {"prefix": str(self.prefix), "state": self.state,
                "loops": [str(self.first), str(self.second)]}


@dataclass(frozen=True)
class BoundaryVerdict:
    kind: str  # empty | countable | uncountable | unknown
    reason: str
    witness: Optional[FreeWitness] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _path(sys: ConcurrentSystem, src: int, dst: int) -> Optional[list]:
    if src == dst:
        return []
    prev = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for i, v in enumerate(sys.table[u]):
            if v >= 0 and v not in prev:
                prev[v] = (u, i)
                if v == dst:
                    out = []
                    while prev[v] is not None:
                        v, i = prev[v]
                        out.append(i)
                    return out[::-1]
                queue.append(v)
    return None


def free_submonoid_witness(sys: ConcurrentSystem, state) -> Optional[FreeWitness]:
    """Search reachable states for two loops whose first letters have no upper bound there.

    Neither loop word can then be a prefix of a product of the two, so the
    pair is a code and the boundary below them contains a Cantor set.
    """
    al = sys.alphabet
    s0 = sys.index_of(state)
    order = []
    seen = {s0}
    queue = deque([s0])
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in sys.successors[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    word = lambda idx: normalize_word(al, [al.letters[i] for i in idx])  # noqa: E731
    for g in order:
        row = sys.table[g]
        en = list(iter_bits(sys.enabled_masks[g]))
        for x, i in enumerate(en):
            back_i = _path(sys, row[i], g)
            if back_i is None:
                continue
            for j in en[x + 1:]:
                if not (al.dep_masks[i] >> j & 1 or sys.table[row[i]][j] < 0):
                    continue
                back_j = _path(sys, row[j], g)
                if back_j is None:
                    continue
                return FreeWitness(word(_path(sys, s0, g)), sys.states[g],
                                   word([i] + back_i), word([j] + back_j))
    return None


def boundary_cardinality(sys: ConcurrentSystem, state, dcs: Optional[bool] = None,
                         irreducible: Optional[bool] = None) -> BoundaryVerdict:
    """Cardinality class of the set of infinite executions from ``state``."""
    if classify_finiteness(sys, state).finite:
        return BoundaryVerdict("empty", "finitely many executions")
    if dcs is None:
        dcs = dcs_witness(sys) is None
    if dcs:
        return BoundaryVerdict("countable", "deterministic system")
    witness = free_submonoid_witness(sys, state)
    if witness is not None:
        return BoundaryVerdict("uncountable", "two loops generate a free submonoid", witness)
    if irreducible is None:
        irreducible = is_irreducible(sys).irreducible
    if irreducible:
        raise TheoremViolation(f"irreducible nondeterministic system without a free submonoid at {state}")
    return BoundaryVerdict("unknown", "nondeterministic and reducible; no free submonoid found")


def lemma2_check(sys: ConcurrentSystem, state, c, a: str, depth: int) -> bool:
    """No execution whose first clique is ``c`` contains the enabled letter ``a`` outside ``c``."""
    al = sys.alphabet
    if dcs_witness(sys) is not None:
        raise InputError("system must be deterministic")
    s = sys.index_of(state)
    cm = al.mask_of(c)
    if cm not in sys.clique_targets[s]:
        raise InputError(f"{sorted(c)} is not an executable clique at {state}")
    i = al.letter_index(a)
    if not sys.enabled_masks[s] >> i & 1:
        raise InputError(f"{a} is not enabled at {state}")
    if cm >> i & 1:
        raise InputError(f"{a} belongs to the clique")
    for level in execution_levels(sys, s, depth):
        for xm in level:
            if xm and xm[0] == cm and _letters_used(xm) >> i & 1:
                return False
    return True


# -- combined report ------------------------------------------------------------

@dataclass(frozen=True)
class TheoremCheck:
    claim: str
    applicable: bool
    holds: Optional[bool]

    def to_json(self) -> dict:
        return {"claim": self.claim, "applicable": self.applicable, "holds": self.holds}


@dataclass(frozen=True)
class AnalysisReport:
    system: ConcurrentSystem
    dcs: DcsVerdict
    irreducible: IrreducibilityVerdict
    dominant_probabilistic: bool
    characteristic_root: RootBracket
    boundary: dict  # state -> BoundaryVerdict
    theorem_consistency: tuple
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "states": list(self.system.states),
            "letters": list(self.system.alphabet.letters),
            "dcs": self.dcs.to_json(),
            "irreducible": self.irreducible.to_json(),
            "dominant_probabilistic": self.dominant_probabilistic,
            "characteristic_root": self.characteristic_root.to_json(),
            "boundary_cardinality": {s: v.to_json() for s, v in self.boundary.items()},
            "theorem_consistency": [c.to_json() for c in self.theorem_consistency],
        }
        out.update(self.extras)
        return out


def _iff(*flags) -> bool:
    return all(flags) or not any(flags)


def full_report(sys: ConcurrentSystem, lub_depth: int = 3, strict: bool = True) -> AnalysisReport:
    """Every verdict at once, cross-checked against the implications proven for them.

    With ``strict`` a failed applicable check raises :class:`TheoremViolation`.
    """
    dcs = is_deterministic(sys, lub_depth)
    irr = is_irreducible(sys)
    dom = bool(is_probabilistic(sys, dominant_valuation(sys)))
    th = theta(sys)
    radii = convergence_radii(sys)
    root = radii.theta_root
    boundary = {st: boundary_cardinality(sys, st, dcs.is_dcs, irr.irreducible) for st in sys.states}
    all_enabled = all(sys.enabled_masks)
    nontrivial = not sys.is_trivial()
    root_is_one = root_equals(root, 1)

    checks = [
        TheoremCheck("determinism criteria agree (pairwise, powerset, bounded lattice)", True,
                     _iff(dcs.is_dcs, dcs.powerset_check,
                          dcs.is_dcs if dcs.bounded_lattice_check is None else dcs.bounded_lattice_check)),
        TheoremCheck("every state enables a letter => (deterministic <=> dominant valuation probabilistic)",
                     all_enabled, _iff(dcs.is_dcs, dom) if all_enabled else None),
        TheoremCheck("deterministic => characteristic root is 1 or infinite", dcs.is_dcs,
                     (root_is_one or root.infinite) if dcs.is_dcs else None),
        TheoremCheck("deterministic => boundaries at most countable", dcs.is_dcs,
                     all(b.kind in ("empty", "countable") for b in boundary.values()) if dcs.is_dcs else None),
    ]
    thm2 = irr.irreducible and nontrivial
    checks.append(TheoremCheck(
        "irreducible, nontrivial => deterministic <=> dominant probabilistic <=> root 1 <=> boundaries countable",
        thm2, _iff(dcs.is_dcs, dom, root_is_one, all(b.kind == "countable" for b in boundary.values()))
        if thm2 else None))
    if irr.irreducible:
        spec = spectral_check(sys)
        checks.append(TheoremCheck("irreducible => removing any letter strictly increases the root",
                                   True, spec.holds))
    else:
        checks.append(TheoremCheck("irreducible => removing any letter strictly increases the root", False, None))
    cutoff = finiteness_cutoff(sys)
    finiteness_agrees = all(_iff(boundary[st].kind == "empty",
                      not has_execution_of_length(sys, st, cutoff),
                      radii.radii[st].infinite) for st in sys.states)
    checks.append(TheoremCheck("finite executions <=> none beyond cutoff <=> infinite radius", True, finiteness_agrees))
    checks = tuple(checks)

    failed = [c.claim for c in checks if c.applicable and c.holds is False]
    if strict and failed:
        raise TheoremViolation("inconsistent verdicts: " + "; ".join(failed))

    mu = mobius_matrix(sys)
    extras = {
        "mobius_matrix": [[p.to_strings() for p in row] for row in mu.entries],
        "theta": polynomial_to_json(th),
        "theta_text": str(th),
        "convergence_radii": {s: r.to_json() for s, r in radii.radii.items()},
        "radius_matches_theta_root": radii.agrees,
    }
    return AnalysisReport(sys, dcs, irr, dom, root, boundary, checks, extras)
