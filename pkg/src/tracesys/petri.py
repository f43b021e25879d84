"""1-safe Petri nets compiled into concurrent systems over their reachable markings."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import InputError
from .system import ConcurrentSystem, validate_system
from .traces import IndependenceAlphabet


@dataclass(frozen=True)
class Transition:
    pre: frozenset
    post: frozenset

    @property
    def resources(self) -> frozenset:
        return self.pre | self.post


@dataclass(frozen=True)
class PetriNet:
    places: tuple
    transitions: dict  # name -> Transition, iteration order sorted by name
    marking: frozenset


def _string_list(value, where: str) -> list:
    if not isinstance(value, list) or not all(isinstance(v, str) and v for v in value):
        raise InputError("expected a list of nonempty strings", where)
    if len(set(value)) != len(value):
        raise InputError("duplicate entry", where)
    return value


def parse_net(doc) -> PetriNet:
    """Validate a net document ``{"places", "transitions", "marking"}``."""
    if not isinstance(doc, dict):
        raise InputError("a net must be a JSON object")
    unknown = set(doc) - {"places", "transitions", "marking"}
    if unknown:
        raise InputError(f"unexpected fields {sorted(unknown)}")
    places = _string_list(doc.get("places", []), "places")
    known = set(places)
    trans_doc = doc.get("transitions", {})
    if isinstance(trans_doc, list):
        # a list form keeps duplicates visible, which a JSON object would silently merge
        names = [t.get("name") if isinstance(t, dict) else None for t in trans_doc]
        entries = list(zip(names, trans_doc))
    elif isinstance(trans_doc, dict):
        entries = list(trans_doc.items())
    else:
        raise InputError("transitions must be an object or a list", "transitions")
    transitions = {}
    for name, body in entries:
        where = f"transitions.{name}"
        if not isinstance(name, str) or not name:
            raise InputError("transition names must be nonempty strings", "transitions")
        if name in transitions:
            raise InputError(f"duplicate transition name {name!r}", where)
        if not isinstance(body, dict):
            raise InputError("a transition is an object with pre and post lists", where)
        pre = _string_list(body.get("pre", []), where + ".pre")
        post = _string_list(body.get("post", []), where + ".post")
        for p in pre + post:
            if p not in known:
                raise InputError(f"unknown place {p!r}", where)
        transitions[name] = Transition(frozenset(pre), frozenset(post))
    marking = _string_list(doc.get("marking", []), "marking")
    for p in marking:
        if p not in known:
            raise InputError(f"unknown place {p!r}", "marking")
    return PetriNet(tuple(places), dict(sorted(transitions.items())), frozenset(marking))


def marking_name(marking) -> str:
    return "{" + ",".join(sorted(marking)) + "}"


class SafetyError(InputError):
    """Firing a transition would put a second token on a place."""


def to_concurrent_system(net: PetriNet):
    """The system of reachable markings, plus a map from state names to markings.

    Two transitions are independent when their pre- and post-sets share no
    place. Markings are explored breadth first, transitions in name order.
    """
    names = list(net.transitions)
    independent = [(a, b) for k, a in enumerate(names) for b in names[k + 1:]
                   if not net.transitions[a].resources & net.transitions[b].resources]
    alphabet = IndependenceAlphabet.of(names, independent)
    order = [net.marking]
    seen = {net.marking}
    edges = []
    queue = deque([net.marking])
    while queue:
        m = queue.popleft()
        for t in names:
            tr = net.transitions[t]
            if not tr.pre <= m:
                continue
            rest = m - tr.pre
            if rest & tr.post:
                raise SafetyError(
                    f"firing {t} at marking {marking_name(m)} puts a second token on "
                    f"{', '.join(sorted(rest & tr.post))}")
            nxt = rest | tr.post
            edges.append((m, t, nxt))
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    state_names = [marking_name(m) for m in order]
    system = validate_system(alphabet, state_names,
                             [(marking_name(a), t, marking_name(b)) for a, t, b in edges])
    return system, {marking_name(m): sorted(m) for m in order}
