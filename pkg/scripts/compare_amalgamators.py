"""Compare the size of D produced by each applicable strategy.

Over all pairs of rooted order-preserving epimorphisms between trees up to
--cap vertices, report per strategy how often it applies, how often it
returns a certified tree, and the mean and max size of D.
"""

import argparse
import statistics
from dataclasses import dataclass

from treefraisse.amalgamation import AmalgamationError, PreconditionError, amalgamate
from treefraisse.graph import rooted_trees_up_to
from treefraisse.morphisms import enumerate_epis


@dataclass
class CompareConfig:
    cap: int = 4
    strategies: tuple = ("tree", "monotone", "confluent", "unfolding", "endpreserving", "fan")


def pairs(cap):
    ts = rooted_trees_up_to(cap)
    for a, ra in ts:
        legs = [f for b, rb in ts if b.n >= a.n for f in enumerate_epis(b, a, ["order"], (rb, ra))]
        for i, f in enumerate(legs):
            for g in legs[i:]:
                yield f, g


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--cap", type=int, default=4)
    cfg = CompareConfig(p.parse_args().cap)
    sizes = {s: [] for s in cfg.strategies}
    refused = dict.fromkeys(cfg.strategies, 0)
    total = 0
    for f, g in pairs(cfg.cap):
        total += 1
        for s in cfg.strategies:
            try:
                res = amalgamate(f, g, s)
            except (AmalgamationError, PreconditionError):
                refused[s] += 1
                continue
            if res is not None and res.ok:
                sizes[s].append(res.d.n)
            else:
                refused[s] += 1
    print(f"{total} pairs, trees up to {cfg.cap} vertices")
    print(f"{'strategy':<14}{'ok':>7}{'refused':>9}{'mean |D|':>10}{'max |D|':>9}")
    for s in cfg.strategies:
        xs = sizes[s]
        mean = f"{statistics.mean(xs):.2f}" if xs else "-"
        print(f"{s:<14}{len(xs):>7}{refused[s]:>9}{mean:>10}{max(xs, default=0):>9}")


if __name__ == "__main__":
    main()
