"""Grid search for probabilistic valuations on a system file, with a short sample from each."""

import argparse
from dataclasses import dataclass

from tracesys.errors import DeadNodeError
from tracesys.io import load_system
from tracesys.valuation import null_nodes, sample_execution, search_probabilistic


@dataclass(frozen=True)
class SearchConfig:
    system: str
    grid: int = 4
    budget: int = 20000
    steps: int = 6
    seed: int = 0


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("system", help="system JSON file")
    p.add_argument("--grid", type=int, default=4)
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    cfg = SearchConfig(**vars(p.parse_args()))
    sys_ = load_system(cfg.system)
    found = search_probabilistic(sys_, cfg.grid, cfg.budget)
    print(f"{len(found)} probabilistic valuations with weights in multiples of 1/{cfg.grid}")
    for val in found:
        weights = ", ".join(f"{s}.{a}={w}" for s, a, w in val.to_json()["weights"])
        nulls = sorted(f"({s}, {''.join(sorted(c))})" for s, c in null_nodes(sys_, val))
        print(f"\n{weights}\n  null nodes: {', '.join(nulls) or 'none'}")
        try:
            path = sample_execution(sys_, val, sys_.states[0], cfg.steps, cfg.seed)
        except DeadNodeError as exc:
            print(f"  sample: {exc}")
            continue
        print("  sample: " + " ".join(f"({s}, {''.join(sorted(c))})" for s, c in path))


if __name__ == "__main__":
    main()
