"""JSON documents for alphabets, systems and valuations.

Syntax errors carry the line and column reported by :mod:`json`; schema
errors carry a dotted field path.
"""

from __future__ import annotations

import json
import sys as _sys
from pathlib import Path

from .errors import InputError
from .system import ConcurrentSystem, validate_system
from .traces import IndependenceAlphabet
from .valuation import Valuation, build_valuation, dominant_valuation


def load_json(source: str, text: str | None = None):
    """Parse JSON from a path, or from stdin when ``source`` is ``-``."""
    if text is None:
        if source == "-":
            text = _sys.stdin.read()
        else:
            try:
                text = Path(source).read_text(encoding="utf-8")
            except OSError as exc:
                raise InputError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None


def _expect(cond: bool, message: str, where: str):
    if not cond:
        raise InputError(message, where)


def parse_alphabet(doc, where: str = "alphabet") -> IndependenceAlphabet:
    """``{"letters": [...], "independent": [[a, b], ...]}``."""
    _expect(isinstance(doc, dict), "alphabet must be an object", where)
    letters = doc.get("letters")
    _expect(isinstance(letters, list) and all(isinstance(a, str) for a in letters),
            "letters must be a list of strings", where + ".letters")
    pairs = doc.get("independent", [])
    _expect(isinstance(pairs, list), "independent must be a list of pairs", where + ".independent")
    for k, p in enumerate(pairs):
        _expect(isinstance(p, list) and len(p) == 2 and all(isinstance(a, str) for a in p),
                "each independent pair is a list of two letters", f"{where}.independent[{k}]")
    try:
        return IndependenceAlphabet.of(letters, pairs)
    except InputError as exc:
        raise InputError(str(exc), exc.location or where) from None


def alphabet_to_json(al: IndependenceAlphabet) -> dict:
    pairs = sorted((tuple(sorted(p, key=al.index.get)) for p in al.independent),
                   key=lambda p: (al.index[p[0]], al.index[p[1]]))
    return {"letters": list(al.letters), "independent": [list(p) for p in pairs]}


def parse_system(doc) -> ConcurrentSystem:
    """``{"alphabet": ..., "states": [...], "action": [[state, letter, target], ...]}``."""
    _expect(isinstance(doc, dict), "a system must be a JSON object", "$")
    for key in ("alphabet", "states", "action"):
        _expect(key in doc, f"missing field {key!r}", "$")
    al = parse_alphabet(doc["alphabet"])
    states = doc["states"]
    _expect(isinstance(states, list) and all(isinstance(s, str) for s in states),
            "states must be a list of strings", "states")
    action = doc["action"]
    _expect(isinstance(action, list), "action must be a list of triples", "action")
    for k, e in enumerate(action):
        _expect(isinstance(e, list) and len(e) == 3 and all(isinstance(v, str) for v in e),
                "each action entry is [state, letter, target]", f"action[{k}]")
    return validate_system(al, states, action)


def system_to_json(sys: ConcurrentSystem) -> dict:
    return {"alphabet": alphabet_to_json(sys.alphabet), "states": list(sys.states),
            "action": [list(e) for e in sys.edges()]}


def parse_valuation(sys: ConcurrentSystem, doc) -> Valuation:
    """``{"weights": [[state, letter, "p/q"], ...]}``; the string ``"dominant"`` is also accepted."""
    if doc == "dominant":
        return dominant_valuation(sys)
    _expect(isinstance(doc, dict) and isinstance(doc.get("weights"), list),
            'a valuation is an object with a "weights" list', "$")
    for k, e in enumerate(doc["weights"]):
        _expect(isinstance(e, list) and len(e) == 3, "each weight is [state, letter, value]", f"weights[{k}]")
    return build_valuation(sys, doc["weights"])


def load_system(source: str) -> ConcurrentSystem:
    return parse_system(load_json(source))


def load_valuation(sys: ConcurrentSystem, source: str) -> Valuation:
    if source == "dominant":
        return dominant_valuation(sys)
    return parse_valuation(sys, load_json(source))


def dumps(doc) -> str:
    """Stable JSON text; key order is insertion order, which every builder fixes."""
    return json.dumps(doc, ensure_ascii=False, indent=2)
