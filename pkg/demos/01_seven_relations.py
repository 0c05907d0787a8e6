#!/usr/bin/env python3
"""Tour of the seven-relation algebra.

Each relation is decided purely set-theoretically from a pair of
extensions inside a finite universe.
"""

import itertools
from collections import Counter

from sysnli import Relation, classify, converse

universe = {1, 2, 3}

examples = [
    ({1, 2}, {1, 2}, "identical sets"),
    ({1}, {1, 2}, "strict subset"),
    ({1, 2}, {1}, "strict superset"),
    ({1}, {2, 3}, "disjoint and exhaustive"),
    ({1}, {2}, "disjoint, not exhaustive"),
    ({1, 2}, {2, 3}, "overlapping and exhaustive"),
]

print("universe =", universe)
for x, y, note in examples:
    rel = classify(x, y, universe)
    print(f"  {sorted(x)!s:10} vs {sorted(y)!s:10} -> {rel.symbol}  {rel.canonical_name:12} ({note})")

print("\nconverse map (what reversing the pair does):")
for rel in Relation:
    print(f"  {rel.symbol}  {rel.canonical_name:12} -> {converse(rel).symbol}  {converse(rel).canonical_name}")

print("\nexhaustive sweep over all subset pairs of a 4-element universe:")
u4 = frozenset(range(4))
subsets = [frozenset(c) for r in range(5) for c in itertools.combinations(range(4), r)]
counts = Counter(classify(x, y, u4) for x in subsets for y in subsets)
for rel, n in sorted(counts.items()):
    print(f"  {rel.symbol}  {rel.canonical_name:12} {n:4d} of {16 * 16} pairs")
