#!/usr/bin/env python3
"""End-to-end: generate a mini condition, build all three probes, score.

Gold labels stand in for a model's predictions here, so every accuracy
is exactly 100; swap in a real predictions file to evaluate a model.
The same flow is available from the command line:

    sysnli generate --condition mini --seed 7 --out bundle/
    sysnli gold-predictions --items bundle/jabberwocky.jsonl --out preds.jsonl
    sysnli probe perturbation --bundle bundle/ --predictions preds.jsonl --out probe.jsonl
    sysnli score --probe probe.jsonl --predictions preds.jsonl
"""

from collections import Counter

from sysnli import (
    build_consistency_probe,
    build_identical_open_class_probe,
    build_perturbation_probe,
    config_for_condition,
    consistency_rate,
    format_aggregates,
    generate_condition,
    score,
    units_from_probe,
)

config = config_for_condition("mini", seed=7)
bundle = generate_condition(config)
print("split sizes:", bundle.counts())
print("closure additions:", {k: v for k, v in bundle.stats.items() if k.startswith("closure")})

jabberwocky = bundle.splits["jabberwocky"]
gold = {item.item_id: item.gold for item in bundle.all_items()}
print("\njabberwocky gold distribution:")
for name, count in Counter(i.gold.canonical_name for i in jabberwocky).most_common():
    print(f"  {name:13} {count}")

perturbation, stats = build_perturbation_probe(
    jabberwocky, gold, bundle.blocks_by_id(), bundle.table, bundle.inventory
)
print(f"\nperturbation probe: {len(perturbation)} items "
      f"({stats['edits_without_class_change']} class-preserving edits excluded)")
types = Counter(p.group_key for p in perturbation)
for key, count in types.most_common(5):
    print(f"  {count:4d}  {key}")
print(f"  ... {len(types)} perturbation types in total")

identical = build_identical_open_class_probe(jabberwocky)
print(f"\nidentical open-class probe: {len(identical)} items")

consistency, _ = build_consistency_probe(jabberwocky, gold)
report = consistency_rate(consistency, gold, gold)
print(f"\nconsistency probe: {len(consistency)} items; gold-as-predictions rates:")
print(format_aggregates(report.aggregates))

probe_report = score(units_from_probe(identical, grouping="by_relation"), gold, strict=False)
print("\nidentical open-class probe, gold-as-predictions, by relation:")
print(format_aggregates(probe_report.aggregates))
