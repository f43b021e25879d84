"""Command-line entry point: ``python3 -m tracesys <command> ...``.

Exit status 0 on success, 1 when the input is well formed but violates the
command's premise (for example a non-probabilistic valuation given to
``chain``), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from .dcs import full_report, is_deterministic, maximal_execution
from .errors import DeadNodeError, InputError, PreconditionError
from .io import (dumps, load_json, load_system, load_valuation, parse_alphabet, parse_system,
                 system_to_json)
from .polynomial import (Polynomial, format_fraction, parse_polynomial, polynomial_to_json, smallest_root,
                         to_fraction)
from .petri import parse_net, to_concurrent_system
from .system import enumerate_executions, growth_matrix_coefficients, theta
from .traces import parse_trace, render_heap
from .valuation import chain_model, is_probabilistic, sample_execution, search_probabilistic

COMMANDS = ("analyze", "root", "check-dcs", "valuation-check", "chain", "sample", "enumerate",
            "petri-import", "heap")


@dataclass(frozen=True)
class RunConfiguration:
    command: str
    input: str
    format: str = "text"
    seed: int = 0
    steps: int = 8
    depth: int = 3
    valuation: Optional[str] = None
    state: Optional[str] = None
    trace: Optional[str] = None
    search: bool = False
    grid: int = 2

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.steps < 1 or self.depth < 1 or self.grid < 1:
            raise InputError("--steps, --depth and --grid must be positive")


def _clique(c) -> list:
    return sorted(c)


def _state(sys_, name):
    return sys_.states[0] if name is None else name


# -- commands -------------------------------------------------------------------

def cmd_analyze(cfg: RunConfiguration):
    report = full_report(load_system(cfg.input), lub_depth=cfg.depth)
    doc = {"command": "analyze", **report.to_json()}
    if cfg.format == "json":
        return doc
    lines = [f"states       {' '.join(doc['states'])}",
             f"letters      {' '.join(doc['letters'])}",
             "Möbius matrix"]
    sys_ = report.system
    mu = doc["mobius_matrix"]
    for i, a in enumerate(sys_.states):
        for j, b in enumerate(sys_.states):
            lines.append(f"  {a} -> {b}: {Polynomial([to_fraction(c) for c in mu[i][j]])}")
    lines.append(f"theta        {doc['theta_text']}")
    lines.append(f"root         {report.characteristic_root}")
    if not doc["radius_matches_theta_root"]:
        lines.append("  note: smallest convergence radius differs from the root of theta")
    d = report.dcs
    lines.append("deterministic " + ("yes" if d.is_dcs else f"no ({d.witness[1]} and {d.witness[2]} "
                                                          f"cannot both fire at {d.witness[0]})"))
    irr = doc["irreducible"]
    lines.append("irreducible  " + ("yes" if irr["irreducible"] else "no") +
                 f" (dependence connected: {_yn(irr['dependence_connected'])}, "
                 f"strongly connected: {_yn(irr['strongly_connected'])}, "
                 f"letters reachable: {_yn(irr['letters_reachable'])})")
    lines.append(f"dominant valuation probabilistic: {_yn(report.dominant_probabilistic)}")
    lines.append("boundary")
    for st, b in report.boundary.items():
        extra = ""
        if b.witness is not None:
            extra = f"  loops {b.witness.first} ; {b.witness.second} at {b.witness.state}"
        lines.append(f"  {st}: {b.kind}{extra}")
    lines.append("theorem consistency")
    for c in report.theorem_consistency:
        mark = "n/a" if not c.applicable else ("ok" if c.holds else "FAIL")
        lines.append(f"  [{mark}] {c.claim}")
    return "\n".join(lines)


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_root(cfg: RunConfiguration):
    doc = load_json(cfg.input)
    if isinstance(doc, dict) and "coeffs" in doc:
        poly = parse_polynomial(doc)
    else:
        poly = theta(parse_system(doc))
    r = smallest_root(poly)
    if cfg.format == "json":
        return {"command": "root", "polynomial": polynomial_to_json(poly), "root": r.to_json()}
    return f"{poly}\nsmallest positive root: {r}"


def cmd_check_dcs(cfg: RunConfiguration):
    sys_ = load_system(cfg.input)
    v = is_deterministic(sys_, cfg.depth)
    doc = {"command": "check-dcs", **v.to_json()}
    if v.is_dcs:
        doc["maximal_executions"] = {st: str(maximal_execution(sys_, st)) for st in sys_.states}
    if cfg.format == "json":
        return doc
    lines = [f"deterministic: {_yn(v.is_dcs)}"]
    if v.witness:
        lines.append(f"witness: {v.witness[1]} and {v.witness[2]} at {v.witness[0]}")
    lines.append(f"powerset criterion: {_yn(v.powerset_check)}")
    lines.append(f"bounded lattice check (depth {cfg.depth}): {_yn(v.bounded_lattice_check)}")
    for st, t in doc.get("maximal_executions", {}).items():
        lines.append(f"maximal execution from {st}: {t}")
    return "\n".join(lines)


def _h_tables(sys_, val) -> dict:
    al = sys_.alphabet
    return {st: {al.format_clique(m): format_fraction(v) for m, v in table.values.items()
                 if m in sys_.clique_targets[k]}
            for k, (st, table) in enumerate(zip(sys_.states, val.mobius.tables))}


def cmd_valuation_check(cfg: RunConfiguration):
    sys_ = load_system(cfg.input)
    if cfg.search:
        found = search_probabilistic(sys_, grid=cfg.grid)
        doc = {"command": "valuation-check", "search_grid": cfg.grid,
               "found": [v.to_json()["weights"] for v in found]}
        if cfg.format == "json":
            return doc
        lines = [f"probabilistic valuations with weights in multiples of 1/{cfg.grid}: {len(found)}"]
        lines += ["  " + ", ".join(f"f_{s}({a})={w}" for s, a, w in ws) for ws in doc["found"]]
        return "\n".join(lines)
    if cfg.valuation is None:
        raise InputError("valuation-check needs --valuation (a path or 'dominant') or --search")
    val = load_valuation(sys_, cfg.valuation)
    check = is_probabilistic(sys_, val)
    al = sys_.alphabet
    doc = {"command": "valuation-check", "weights": val.to_json()["weights"],
           "probabilistic": check.ok,
           "violations": [{"state": s, "clique": al.format_clique(al.mask_of(c)),
                           "value": format_fraction(v), "reason": why} for s, c, v, why in check.violations],
           "mobius": _h_tables(sys_, val)}
    if cfg.format == "json":
        return doc
    lines = [f"probabilistic: {_yn(check.ok)}"]
    for v in doc["violations"]:
        lines.append(f"  h at ({v['state']}, {v['clique']}) = {v['value']}: {v['reason']}")
    for st, table in doc["mobius"].items():
        lines.append(f"h_{st}: " + ", ".join(f"{c}={v}" for c, v in table.items()))
    return "\n".join(lines)


def _require_valuation(cfg):
    if cfg.valuation is None:
        raise InputError(f"{cfg.command} needs --valuation (a path or 'dominant')")


def cmd_chain(cfg: RunConfiguration):
    _require_valuation(cfg)
    sys_ = load_system(cfg.input)
    chain = chain_model(sys_, load_valuation(sys_, cfg.valuation))
    fmt = chain.format_node
    doc = {"command": "chain",
           "nodes": [fmt(n) for n in chain.nodes],
           "initial": {st: {fmt(n): format_fraction(p) for n, p in init.items()}
                       for st, init in zip(sys_.states, chain.initial)},
           "transitions": {fmt(n): {fmt(m): format_fraction(p) for m, p in chain.transitions[n].items()}
                           for n in chain.nodes},
           "dead": [fmt(n) for n in chain.nodes if n in chain.dead]}
    if cfg.format == "json":
        return doc
    lines = ["initial distributions"]
    lines += [f"  {st}: " + ", ".join(f"{n} {p}" for n, p in d.items()) for st, d in doc["initial"].items()]
    lines.append("transitions")
    for n, row in doc["transitions"].items():
        lines.append(f"  {n} -> " + (", ".join(f"{m} {p}" for m, p in row.items()) or "dead"))
    return "\n".join(lines)


def cmd_sample(cfg: RunConfiguration):
    _require_valuation(cfg)
    sys_ = load_system(cfg.input)
    val = load_valuation(sys_, cfg.valuation)
    path = sample_execution(sys_, val, _state(sys_, cfg.state), cfg.steps, cfg.seed)
    rows = [{"step": k + 1, "state": st, "clique": _clique(c)} for k, (st, c) in enumerate(path)]
    if cfg.format == "json":
        return "\n".join(json.dumps(r, ensure_ascii=False) for r in rows)
    return "\n".join(f"{r['step']:>4}  {r['state']}  {''.join(r['clique'])}" for r in rows)


def cmd_enumerate(cfg: RunConfiguration):
    sys_ = load_system(cfg.input)
    st = _state(sys_, cfg.state)
    k = sys_.index_of(st)
    growth = growth_matrix_coefficients(sys_, cfg.depth)
    levels = []
    for n in range(cfg.depth + 1):
        groups = enumerate_executions(sys_, st, n)
        levels.append({"length": n, "count": sum(len(v) for v in groups.values()),
                       "series_count": sum(growth[n][k]),
                       "executions": {b: [str(x) for x in xs] for b, xs in groups.items()}})
    doc = {"command": "enumerate", "state": st, "levels": levels}
    if cfg.format == "json":
        return doc
    lines = []
    for lv in levels:
        lines.append(f"length {lv['length']}: {lv['count']} executions (growth series: {lv['series_count']})")
        for b, xs in lv["executions"].items():
            lines.append(f"  -> {b}: " + "; ".join(xs))
    return "\n".join(lines)


def cmd_petri_import(cfg: RunConfiguration):
    sys_, markings = to_concurrent_system(parse_net(load_json(cfg.input)))
    doc = {**system_to_json(sys_), "markings": markings}
    if cfg.format == "json":
        return doc
    # the system document is the useful output even in text mode, so pipelines work either way
    return dumps(doc)


def cmd_heap(cfg: RunConfiguration):
    doc = load_json(cfg.input)
    al = parse_alphabet(doc["alphabet"]) if isinstance(doc, dict) and "alphabet" in doc else parse_alphabet(doc)
    if cfg.trace is None:
        raise InputError("heap needs --trace")
    x = parse_trace(al, cfg.trace)
    if cfg.format == "json":
        return {"command": "heap", "trace": str(x), "cliques": [_clique(c) for c in x.cliques]}
    return f"{x}\n{render_heap(x)}" if len(x) else "ε"


DISPATCH = {
    "analyze": cmd_analyze, "root": cmd_root, "check-dcs": cmd_check_dcs,
    "valuation-check": cmd_valuation_check, "chain": cmd_chain, "sample": cmd_sample,
    "enumerate": cmd_enumerate, "petri-import": cmd_petri_import, "heap": cmd_heap,
}


def run(cfg: RunConfiguration) -> tuple:
    """Execute one command; returns ``(exit status, output text)``."""
    try:
        out = DISPATCH[cfg.command](cfg)
    except InputError as exc:
        return 2, f"error: {exc}"
    except (PreconditionError, DeadNodeError) as exc:
        return 1, f"error: {exc}"
    return 0, out if isinstance(out, str) else dumps(out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tracesys", description="Analyse concurrent systems over trace monoids.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="input JSON file, or - for stdin")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--valuation", help="valuation JSON path, or 'dominant'")
    p.add_argument("--state")
    p.add_argument("--trace", help="trace as space-separated letters (heap command)")
    p.add_argument("--search", action="store_true", help="grid search for probabilistic valuations")
    p.add_argument("--grid", type=int, default=2)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfiguration(**vars(args))
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    status, out = run(cfg)
    print(out, file=sys.stderr if status else sys.stdout)
    return status
