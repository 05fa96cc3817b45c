#!/usr/bin/env python3
"""Time the exhaustive search under the pure and compiled kernels.

Runs oracle_optimal over the bundled scenarios plus a batch of seeded
random decay-dominant draws, once per backend, and prints the wall times
side by side.  Both backends must return identical rewards; the script
exits nonzero if they ever disagree.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction

from repairalloc import _kernel
from repairalloc.demos import DEMOS
from repairalloc.model import EntitySpec, NodeSpec, Scenario
from repairalloc.oracle import oracle_optimal

F = Fraction


def random_decay_scenario(rng: random.Random, max_nodes: int) -> Scenario:
    n = rng.randint(3, max_nodes)
    m = rng.randint(1, 2)
    dec = F(1, rng.choice((4, 5, 6)))
    node_ids = [chr(ord("a") + i) for i in range(n)]
    nodes = tuple(
        NodeSpec(nid, 1 - rng.randint(1, int(1 / dec) - 1) * dec, dec) for nid in node_ids
    )
    entities = tuple(
        EntitySpec(chr(ord("u") + j), F(1), {nid: dec for nid in node_ids})
        for j in range(m)
    )
    return Scenario(nodes=nodes, entities=entities, budget=None)


def run_suite(scenarios) -> tuple[float, list[int]]:
    started = time.perf_counter()
    rewards = [oracle_optimal(s).optimal_reward for s in scenarios]
    return time.perf_counter() - started, rewards


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--draws", type=int, default=40, help="random scenarios per backend")
    parser.add_argument("--max-nodes", type=int, default=5, help="node count ceiling for draws")
    parser.add_argument("--seed", type=int, default=13, help="draw seed")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    scenarios = [build() for build in DEMOS.values()]
    scenarios += [random_decay_scenario(rng, args.max_nodes) for _ in range(args.draws)]
    print(f"{len(scenarios)} scenarios ({len(DEMOS)} bundled + {args.draws} random draws)")

    backends = ["pure"]
    if _kernel._ckernel is not None:
        backends.append("compiled")
    else:
        print("compiled kernel not built; timing the pure kernel only")

    before = _kernel.BACKEND
    times: dict[str, float] = {}
    rewards: dict[str, list[int]] = {}
    try:
        for name in backends:
            _kernel.use_backend(name)
            times[name], rewards[name] = run_suite(scenarios)
            print(f"{name:>9}: {times[name]:8.3f}s")
    finally:
        _kernel.use_backend(before)

    if len(backends) == 2:
        if rewards["pure"] != rewards["compiled"]:
            print("backends disagree on optimal rewards", file=sys.stderr)
            return 1
        print(f"  speedup: {times['pure'] / times['compiled']:.1f}x, rewards identical")
    return 0


if __name__ == "__main__":
    sys.exit(main())
