#!/usr/bin/env python3
"""Exploratory sweep: how many relevant minimal siphons of the 5x5
adjacent-minors network stay relevant for a randomly sampled start?

Samples random positive initial conditions (exact rationals), computes the
per-start relevant subset of the globally relevant minimal siphons, and
reports which counts occur.  Not part of the test suite; run it directly:

    python scripts/chamber_relevance_sweep.py [num_samples] [seed]
"""

from __future__ import annotations

import random
import sys
from collections import Counter
from fractions import Fraction

from crnsiphon.network import parse_network
from crnsiphon.relevance import is_c0_relevant, is_relevant
from crnsiphon.siphons import minimal_siphons


def grid_minors_network(n: int):
    lines = [
        "species " + ", ".join(f"c{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1))
    ]
    for i in range(1, n):
        for j in range(1, n):
            lines.append(f"c{i}{j} + c{i+1}{j+1} <-> c{i}{j+1} + c{i+1}{j}")
    return parse_network("\n".join(lines))


def main() -> None:
    samples = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    rng = random.Random(seed)

    net = grid_minors_network(5)
    relevant = [z for z in minimal_siphons(net) if is_relevant(net, z).relevant]
    print(f"globally relevant minimal siphons: {len(relevant)}")

    counts: Counter[int] = Counter()
    for k in range(samples):
        c0 = [Fraction(rng.randint(1, 40), rng.randint(1, 40)) for _ in range(25)]
        hits = sum(1 for z in relevant if is_c0_relevant(net, c0, z).relevant)
        counts[hits] += 1
        if (k + 1) % 20 == 0:
            print(f"  {k + 1}/{samples} samples done")

    print("relevant-count distribution over sampled starts:")
    for count in sorted(counts):
        print(f"  {count:3d} relevant: {counts[count]} samples")
    print("counts seen:", sorted(counts))


if __name__ == "__main__":
    main()
