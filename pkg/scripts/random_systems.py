"""Cross-check the determinism criteria and the dominant-valuation equivalence on random systems.

Also counts how often the weaker reading "enabled letters are pairwise
independent" (without requiring that they fire together) disagrees with the
lattice check, which is why the library uses the stronger criterion.
"""

import argparse
import time
from collections import Counter
from dataclasses import dataclass

from tracesys.dcs import bounded_lub_check, dcs_witness, full_report, powerset_criterion
from tracesys.generators import SystemConfig, random_systems
from tracesys.polynomial import root_equals
from tracesys.system import characteristic_root, is_irreducible
from tracesys.traces import iter_bits
from tracesys.valuation import dominant_valuation, is_probabilistic


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 2024
    count: int = 200
    depth: int = 6
    max_states: int = 4
    max_letters: int = 4


def independence_only(sys_) -> bool:
    al = sys_.alphabet
    for mask in sys_.enabled_masks:
        bits = list(iter_bits(mask))
        if any(al.dep_masks[i] >> j & 1 for k, i in enumerate(bits) for j in bits[k + 1:]):
            return False
    return True


def run(cfg: ExperimentConfig) -> Counter:
    tally = Counter()
    start = time.perf_counter()
    pool = random_systems(cfg.seed, cfg.count, SystemConfig(cfg.max_states, cfg.max_letters))
    for sys_ in pool:
        pairwise = dcs_witness(sys_) is None
        lattice = all(bounded_lub_check(sys_, s, cfg.depth) for s in sys_.states)
        tally["dcs"] += pairwise
        tally["irreducible"] += is_irreducible(sys_).irreducible
        tally["powerset disagrees"] += powerset_criterion(sys_) != pairwise
        tally["lattice disagrees"] += lattice != pairwise
        tally["independence-only disagrees"] += independence_only(sys_) != lattice
        if all(sys_.enabled_masks):
            tally["all states enable a letter"] += 1
            tally["dominant equivalence fails"] += pairwise != bool(is_probabilistic(sys_, dominant_valuation(sys_)))
        if pairwise:
            r = characteristic_root(sys_)
            tally["dcs root outside {1, inf}"] += not (r.infinite or root_equals(r, 1))
        full_report(sys_, lub_depth=None)  # raises on any inconsistent verdict
    tally["seconds"] = round(time.perf_counter() - start, 2)
    return tally


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f, default in vars(ExperimentConfig()).items():
        p.add_argument(f"--{f.replace('_', '-')}", type=int, default=default)
    cfg = ExperimentConfig(**vars(p.parse_args()))
    print(cfg)
    for key, value in sorted(run(cfg).items()):
        print(f"{key:32} {value}")


if __name__ == "__main__":
    main()
