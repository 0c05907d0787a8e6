"""Command-line entry point: generate, validate-oracle, probe, score.

Commands compose through files only.  Exit codes: 0 success, 1
validation or join failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import __version__
from . import io as bundle_io
from .errors import ConfigError, JoinError, MissingTargetError, SysnliError
from .language import DEFAULT_INVENTORY, SentencePair, build_block
from .probes import (
    PROBE_CONSISTENCY,
    PROBE_IDENTICAL,
    PROBE_PERTURBATION,
    build_consistency_probe,
    build_identical_open_class_probe,
    build_perturbation_probe,
)
from .relations import converse
from .sampler import (
    CONDITION_PRESETS,
    GenerationConfig,
    _random_sentence,
    config_for_condition,
    generate_condition,
    plan_condition,
)
from .scoring import (
    GROUPING_CHOICES,
    aggregates_csv,
    block_scores_csv,
    consistency_rate,
    format_aggregates,
    score,
    units_from_items,
    units_from_probe,
)
from .semantics import (
    RelationTable,
    build_table,
    label_pair,
    label_pair_oracle,
    project_relation,
    validate_table,
)

_PROBE_NAMES = {
    "perturbation": PROBE_PERTURBATION,
    "identical-open-class": PROBE_IDENTICAL,
    "consistency": PROBE_CONSISTENCY,
}


def _parse_domain_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"bad --domain-sizes value: {text!r}") from None
    if len(sizes) < 2:
        raise ConfigError("--domain-sizes needs at least two comma-separated sizes")
    return sizes


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sysnli", description=__doc__)
    parser.add_argument("--version", action="version", version=f"sysnli {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a labeled dataset bundle")
    gen.add_argument("--condition", default="mini",
                     choices=sorted(CONDITION_PRESETS) + ["custom"])
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output bundle directory")
    gen.add_argument("--training-blocks", type=int, default=None)
    gen.add_argument("--jabberwocky-blocks", type=int, default=None)
    gen.add_argument("--pairs-per-combo", type=int, default=None)
    gen.add_argument("--validation-fraction", type=float, default=None)
    gen.add_argument("--holdout-size", type=int, default=None)
    gen.add_argument("--domain-sizes", default="4,5")
    gen.add_argument("--table", default=None, help="reuse a relation table file")
    gen.add_argument("--plan", action="store_true",
                     help="write manifest and lexicon only, no items")

    val = sub.add_parser("validate-oracle", help="cross-check labelers and table")
    val.add_argument("--pairs", type=int, default=2000)
    val.add_argument("--seed", type=int, default=0)
    val.add_argument("--domain-sizes", default="4,5")
    val.add_argument("--table", default=None, help="check an existing table file")

    probe = sub.add_parser("probe", help="build a probe set from a bundle")
    probe.add_argument("name", choices=sorted(_PROBE_NAMES))
    probe.add_argument("--bundle", required=True)
    probe.add_argument("--predictions", default=None)
    probe.add_argument("--out", required=True)

    scr = sub.add_parser("score", help="score predictions against items or a probe set")
    scr.add_argument("--items", default=None, help="dataset JSONL to score")
    scr.add_argument("--probe", default=None, help="probe JSONL to score")
    scr.add_argument("--predictions", required=True)
    scr.add_argument("--second-predictions", default=None,
                     help="second-pass predictions for the consistency probe")
    scr.add_argument("--grouping", choices=GROUPING_CHOICES, default=None)
    scr.add_argument("--out-dir", default=None, help="write CSV reports here")
    scr.add_argument("--lenient-join", action="store_true",
                     help="ignore predictions for ids outside the item set")

    gold = sub.add_parser("gold-predictions", help="emit gold labels as a predictions file")
    gold.add_argument("--items", required=True)
    gold.add_argument("--out", required=True)
    gold.add_argument("--model-id", default="gold")
    return parser


def _cmd_generate(args) -> int:
    overrides = {}
    if args.training_blocks is not None:
        overrides["n_training_blocks"] = args.training_blocks
    if args.jabberwocky_blocks is not None:
        overrides["n_jabberwocky_blocks"] = args.jabberwocky_blocks
    if args.pairs_per_combo is not None:
        overrides["pairs_per_open_class_combo"] = args.pairs_per_combo
    if args.validation_fraction is not None:
        overrides["validation_fraction"] = args.validation_fraction
    if args.holdout_size is not None:
        overrides["holdout_size_per_block"] = args.holdout_size
    overrides["domain_sizes"] = _parse_domain_sizes(args.domain_sizes)
    if args.condition == "custom":
        config = GenerationConfig(condition="custom", seed=args.seed, **overrides)
    else:
        config = config_for_condition(args.condition, seed=args.seed, **overrides)
    config.validate()

    if args.plan:
        bundle = plan_condition(config)
    else:
        table = None
        if args.table:
            table = RelationTable.from_json(bundle_io.read_json(args.table))
        bundle = generate_condition(config, table=table)
    manifest = bundle_io.save_bundle(bundle, args.out)
    print(f"wrote bundle to {args.out}")
    print(f"  blocks: {len(manifest['blocks']['training'])} training, "
          f"{len(manifest['blocks']['jabberwocky'])} jabberwocky")
    for split, count in sorted(manifest["counts"].items()):
        print(f"  {split}: {count} items")
    return 0


def _random_pairs(inventory, n_pairs, seed):
    block = build_block(0, "training")
    rng = random.Random(seed)
    for _ in range(n_pairs):
        noun1, noun2 = rng.choice(block.nouns), rng.choice(block.nouns)
        verb1, verb2 = rng.choice(block.verbs), rng.choice(block.verbs)
        yield SentencePair(
            _random_sentence(noun1, verb1, inventory, rng),
            _random_sentence(noun2, verb2, inventory, rng),
        ), block


def _cmd_validate_oracle(args) -> int:
    inventory = DEFAULT_INVENTORY
    sizes = _parse_domain_sizes(args.domain_sizes)
    failures = 0

    table = build_table(inventory, sizes)
    print(f"table build: {len(table.entries)} skeletons stable across domain sizes {sizes}")

    if args.table:
        loaded = RelationTable.from_json(bundle_io.read_json(args.table))
        mismatches = validate_table(loaded, inventory)
        if mismatches:
            failures += len(mismatches)
            print(f"table file disagrees with the oracle on {len(mismatches)} skeleton(s):")
            for key in mismatches[:10]:
                print(f"  {key}")
        else:
            print(f"table file matches the oracle ({len(loaded.entries)} entries)")

    checked = converse_violations = projection_violations = oracle_mismatches = 0
    for pair, block in _random_pairs(inventory, args.pairs, args.seed):
        expected = label_pair(pair, block, table)
        for size in sizes:
            if label_pair_oracle(pair, block, size, inventory) != expected:
                oracle_mismatches += 1
                break
        if label_pair(pair.reversed(), block, table) != converse(expected):
            converse_violations += 1
        projected = project_relation(pair, block, inventory)
        if projected is not None and projected != expected:
            projection_violations += 1
        checked += 1
    print(f"sampled pairs checked: {checked}")
    print(f"  table vs oracle mismatches: {oracle_mismatches}")
    print(f"  converse-law violations: {converse_violations}")
    print(f"  projection disagreements: {projection_violations}")
    failures += oracle_mismatches + converse_violations + projection_violations
    if failures:
        print(f"FAIL: {failures} violation(s)")
        return 1
    print("OK: no violations")
    return 0


def _cmd_probe(args) -> int:
    bundle = bundle_io.load_bundle(args.bundle)
    items = bundle.splits.get("jabberwocky", [])
    name = _PROBE_NAMES[args.name]
    predictions = None
    if args.predictions:
        predictions, _ = bundle_io.read_predictions(args.predictions)
    if name in (PROBE_PERTURBATION, PROBE_CONSISTENCY) and predictions is None:
        raise ConfigError(f"probe {args.name!r} needs --predictions (first pass)")

    if name == PROBE_PERTURBATION:
        if bundle.table is None:
            raise ConfigError("bundle has no relation table; regenerate without --plan")
        probe_items, stats = build_perturbation_probe(
            items, predictions, bundle.blocks_by_id(), bundle.table, bundle.inventory
        )
    elif name == PROBE_CONSISTENCY:
        probe_items, stats = build_consistency_probe(items, predictions)
    else:
        probe_items = build_identical_open_class_probe(items)
        stats = {"sources": len(items), "emitted": len(probe_items)}

    bundle_io.write_jsonl(args.out, (bundle_io.probe_item_to_record(p) for p in probe_items))
    print(f"wrote {len(probe_items)} probe items to {args.out}")
    for key, value in sorted(stats.items()):
        print(f"  {key}: {value}")
    return 0


def _cmd_score(args) -> int:
    if bool(args.items) == bool(args.probe):
        raise ConfigError("pass exactly one of --items or --probe")
    predictions, _ = bundle_io.read_predictions(args.predictions)

    if args.items:
        records = bundle_io.read_jsonl(args.items)
        from .relations import Relation
        from .scoring import ScoreUnit

        grouping = args.grouping or "overall"
        if grouping == "by_perturbation_type":
            raise ConfigError("by_perturbation_type grouping needs --probe")
        units = [
            ScoreUnit(
                item_id=r["item_id"],
                block_id=int(r["block_id"]),
                group_key=(Relation.from_name(r["gold"]).canonical_name
                           if grouping == "by_relation" else "overall"),
                gold=Relation.from_name(r["gold"]),
            )
            for r in records
        ]
        report = score(units, predictions, strict=not args.lenient_join)
        title = f"items: {args.items} ({grouping})"
    else:
        probe_items = [bundle_io.probe_item_from_record(r) for r in bundle_io.read_jsonl(args.probe)]
        kinds = {p.probe for p in probe_items}
        if kinds == {PROBE_CONSISTENCY}:
            second = args.second_predictions or args.predictions
            second_pass, _ = bundle_io.read_predictions(second)
            report = consistency_rate(probe_items, predictions, second_pass)
            title = f"consistency probe: {args.probe}"
        else:
            units = units_from_probe(probe_items, grouping=args.grouping)
            report = score(units, predictions, strict=False)
            title = f"probe: {args.probe}"

    print(format_aggregates(report.aggregates, title=title))
    if report.coverage:
        print("coverage: " + ", ".join(f"{k}={v}" for k, v in sorted(report.coverage.items())))
    if args.out_dir:
        outdir = Path(args.out_dir)
        bundle_io.atomic_write_text(outdir / "block_scores.csv", block_scores_csv(report.block_scores))
        bundle_io.atomic_write_text(outdir / "aggregates.csv", aggregates_csv(report.aggregates))
        bundle_io.atomic_write_text(outdir / "aggregates.txt", format_aggregates(report.aggregates) + "\n")
        print(f"reports written to {outdir}")
    return 0


def _cmd_gold_predictions(args) -> int:
    records = bundle_io.read_jsonl(args.items)
    rows = [
        {"item_id": r["item_id"], "predicted": r["gold"], "model_id": args.model_id}
        for r in records
    ]
    bundle_io.write_jsonl(args.out, rows)
    print(f"wrote {len(rows)} gold predictions to {args.out}")
    return 0


_HANDLERS = {
    "generate": _cmd_generate,
    "validate-oracle": _cmd_validate_oracle,
    "probe": _cmd_probe,
    "score": _cmd_score,
    "gold-predictions": _cmd_gold_predictions,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except (JoinError, MissingTargetError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except SysnliError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
