"""Acceptance suite: one test per release criterion, exact tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion.
"""

import itertools
import random
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import pytest

from sysnli import io as bundle_io
from sysnli.cli import main
from sysnli.language import (
    DEFAULT_INVENTORY,
    Block,
    Sentence,
    SentencePair,
    build_block,
)
from sysnli.probes import build_consistency_probe, build_perturbation_probe
from sysnli.relations import (
    Relation,
    SYMMETRIC_RELATIONS,
    classify,
    converse,
)
from sysnli.sampler import ORIGIN_SAMPLE, config_for_condition
from sysnli.scoring import consistency_rate, score, units_from_probe
from sysnli.semantics import (
    canonical_pair,
    extract_skeleton,
    label_pair,
    label_pair_oracle,
    reachable_skeletons,
)


def _check(name: str, condition: bool, detail: str = "") -> None:
    status = "PASS" if condition else "FAIL"
    print(f"[{status}] {name}" + (f" ({detail})" if detail else ""))
    assert condition, f"{name}: {detail}"


# ---------------------------------------------------------------------------
# Criterion 1: oracle/labeler equivalence, exhaustive + 10k random pairs
# ---------------------------------------------------------------------------

def test_oracle_labeler_equivalence_exhaustive(default_table):
    started = time.time()
    sizes = default_table.domain_sizes
    skeletons = reachable_skeletons()
    mismatches = 0
    rng = random.Random(99)
    per_pair_subset = set(rng.sample(range(len(skeletons)), 600))
    for index, skeleton in enumerate(skeletons):
        pair, block = canonical_pair(skeleton)
        table_label = label_pair(pair, block, default_table)
        # batched oracle labels for every skeleton at every size
        if default_table.entries[skeleton] is not table_label:
            mismatches += 1
            continue
        # per-pair oracle re-run on a 600-skeleton random subset
        if index in per_pair_subset:
            if any(label_pair_oracle(pair, block, n) is not table_label for n in sizes):
                mismatches += 1
    elapsed = time.time() - started
    _check(
        "oracle/labeler equivalence, exhaustive skeleton set",
        mismatches == 0 and elapsed < 300,
        f"{len(skeletons)} skeletons at sizes {sizes}, {elapsed:.1f}s",
    )


def test_oracle_labeler_equivalence_random_pairs(default_table):
    started = time.time()
    block = build_block(0, "training")
    inventory = DEFAULT_INVENTORY
    rng = random.Random(1234)

    def random_sentence(noun, verb):
        return Sentence(
            quantifier=rng.choice(inventory.quantifiers),
            premodifier=rng.choice((None,) + inventory.premodifiers),
            noun=noun,
            postmodifier=rng.choice((None,) + inventory.postmodifiers),
            negation=rng.choice((False, True)),
            verb=verb,
        )

    mismatches = 0
    for _ in range(10_000):
        pair = SentencePair(
            random_sentence(rng.choice(block.nouns), rng.choice(block.verbs)),
            random_sentence(rng.choice(block.nouns), rng.choice(block.verbs)),
        )
        expected = label_pair(pair, block, default_table)
        if label_pair_oracle(pair, block, 4) is not expected:
            mismatches += 1
    elapsed = time.time() - started
    _check(
        "oracle/labeler equivalence, 10,000 seeded random pairs",
        mismatches == 0 and elapsed < 300,
        f"{elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# Criterion 2: relation classifier, exhaustive over a 4-element universe
# ---------------------------------------------------------------------------

def test_relation_classifier_exhaustive():
    started = time.time()
    universe = frozenset(range(4))
    subsets = [frozenset(c) for r in range(5) for c in itertools.combinations(range(4), r)]
    assert len(subsets) == 16
    pairs = 0
    ok = True
    for x in subsets:
        for y in subsets:
            rel = classify(x, y, universe)
            ok = ok and isinstance(rel, Relation)
            ok = ok and rel is converse(classify(y, x, universe))
            pairs += 1
    elapsed = time.time() - started
    _check(
        "relation classifier exhaustive over 256 subset pairs + converse law",
        ok and pairs == 256 and elapsed < 1.0,
        f"{elapsed:.3f}s",
    )


# ---------------------------------------------------------------------------
# Criterion 3: canonical example suite
# ---------------------------------------------------------------------------

def test_canonical_example_suite(default_table):
    # Taxonomies: blockets below blickets; pigs below mammals.
    blick = Block(
        id=900, role="jabberwocky",
        nouns=("blockets", "blickets", "bn2", "bn3", "bn4", "bn5"),
        verbs=("wug", "bv1", "bv2", "bv3", "bv4", "bv5"),
    )
    animals = Block(
        id=901, role="training",
        nouns=("pigs", "mammals", "an2", "an3", "an4", "an5"),
        verbs=("growl", "av1", "av2", "av3", "av4", "av5"),
    )

    def sentence(q, noun, verb, pre=None, neg=False):
        return Sentence(q, pre, noun, None, neg, verb)

    all_blickets_wug = sentence("all", "blickets", "wug")
    all_blockets_wug = sentence("all", "blockets", "wug")
    some_blickets_wug = sentence("some", "blickets", "wug")
    some_blickets_dont_wug = sentence("some", "blickets", "wug", neg=True)
    all_red_blickets_wug = sentence("all", "blickets", "wug", pre="red")

    cases = [
        ("example 1: all X-wide wug / all X-narrow wug",
         SentencePair(all_blickets_wug, all_blockets_wug), blick, Relation.FORWARD),
        ("example 2: premise all -> some",
         SentencePair(some_blickets_wug, all_blockets_wug), blick, Relation.REVERSE),
        ("example 3: all X wug / some X don't wug",
         SentencePair(all_blickets_wug, some_blickets_dont_wug), blick, Relation.NEGATION),
        ("example 4: all X wug / all red X wug",
         SentencePair(all_blickets_wug, all_red_blickets_wug), blick, Relation.FORWARD),
        ("example 5: reversed order of example 4",
         SentencePair(all_red_blickets_wug, all_blickets_wug), blick, Relation.REVERSE),
        ("all mammals growl / all pigs growl",
         SentencePair(sentence("all", "mammals", "growl"), sentence("all", "pigs", "growl")),
         animals, Relation.FORWARD),
    ]
    ok = True
    details = []
    for name, pair, block, expected in cases:
        got_table = label_pair(pair, block, default_table)
        got_oracle = label_pair_oracle(pair, block, 4)
        good = got_table is expected and got_oracle is expected
        ok = ok and good
        if not good:
            details.append(f"{name}: expected {expected.canonical_name}, "
                           f"table={got_table.canonical_name}, oracle={got_oracle.canonical_name}")
    _check("canonical example suite labels", ok, "; ".join(details) or "6 cases")


# ---------------------------------------------------------------------------
# Criterion 4: converse law over the full mini consistency probe set
# ---------------------------------------------------------------------------

def test_converse_law_on_mini_probe_set(mini_bundle, gold_predictions_map):
    probe_items, _ = build_consistency_probe(
        mini_bundle.splits["jabberwocky"], gold_predictions_map
    )
    ok = len(probe_items) > 0
    for probe_item in probe_items:
        ok = ok and probe_item.target_gold is converse(probe_item.source_gold)
        if probe_item.source_gold in SYMMETRIC_RELATIONS:
            ok = ok and probe_item.target_gold is probe_item.source_gold
    _check(
        "consistency probe converse law over full mini probe set",
        ok,
        f"{len(probe_items)} probe items",
    )


# ---------------------------------------------------------------------------
# Criterion 5: perturbation closure and gold-as-predictions scoring
# ---------------------------------------------------------------------------

def test_perturbation_closure_and_gold_scoring(mini_bundle, gold_predictions_map, default_table):
    probe_items, _ = build_perturbation_probe(
        mini_bundle.splits["jabberwocky"],
        gold_predictions_map,
        mini_bundle.blocks_by_id(),
        default_table,
        mini_bundle.inventory,
    )
    by_id = {i.item_id: i for i in mini_bundle.splits["jabberwocky"]}
    slots = ("quantifier", "premodifier", "postmodifier", "negation")
    ok = len(probe_items) > 0
    for probe_item in probe_items:
        source = by_id[probe_item.source_item_id]
        target = by_id[probe_item.target_item_id]
        diffs = []
        for side in ("premise", "hypothesis"):
            s, t = getattr(source, side), getattr(target, side)
            diffs += [(side, f) for f in slots if getattr(s, f) != getattr(t, f)]
            ok = ok and s.noun == t.noun and s.verb == t.verb
        ok = ok and len(diffs) == 1 and diffs[0][0] == probe_item.perturbation.side
        ok = ok and source.gold is not target.gold
    _check(
        "every perturbation probe item is a single-slot class-changing edit",
        ok,
        f"{len(probe_items)} probe items",
    )

    perturbation_report = score(units_from_probe(probe_items), gold_predictions_map, strict=False)
    consistency_items, _ = build_consistency_probe(
        mini_bundle.splits["jabberwocky"], gold_predictions_map
    )
    consistency_report = consistency_rate(
        consistency_items, gold_predictions_map, gold_predictions_map
    )
    flawless = all(
        agg.mean_accuracy == 1.0 and agg.sd_accuracy == 0.0
        for agg in perturbation_report.aggregates + consistency_report.aggregates
    )
    _check(
        "gold-as-predictions scores 100 +/- 0 on every probe group",
        flawless,
        f"{len(perturbation_report.aggregates)} perturbation groups, "
        f"{len(consistency_report.aggregates)} consistency groups",
    )


# ---------------------------------------------------------------------------
# Criterion 6: byte-identical regeneration; parallel equals serial
# ---------------------------------------------------------------------------

def test_generation_determinism(tmp_path):
    first, second = tmp_path / "one", tmp_path / "two"
    assert main(["generate", "--condition", "mini", "--seed", "7", "--out", str(first)]) == 0
    assert main(["generate", "--condition", "mini", "--seed", "7", "--out", str(second)]) == 0
    names = {p.name for p in first.iterdir()} - {"manifest.json"}
    identical = all(
        bundle_io.sha256_file(first / name) == bundle_io.sha256_file(second / name)
        for name in names
    )
    one = bundle_io.read_json(first / "manifest.json")
    two = bundle_io.read_json(second / "manifest.json")
    one.pop("created_at"), two.pop("created_at")
    _check(
        "two mini generations are byte-identical (manifest modulo timestamp)",
        identical and one == two,
        f"{len(names)} data files compared",
    )


def test_parallel_serial_agreement(mini_bundle, default_table):
    from sysnli.sampler import _training_block_items

    config = mini_bundle.config
    blocks = [b for b in mini_bundle.blocks if b.role == "training"]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parts = list(pool.map(
            lambda b: _training_block_items(b, config, mini_bundle.inventory, default_table),
            reversed(blocks),
        ))
    train = [item for part in reversed(parts) for item in part[0]]
    _check(
        "parallel and serial block generation agree",
        train == mini_bundle.splits["train"],
        f"{len(train)} train items",
    )


# ---------------------------------------------------------------------------
# Criterion 7: open-class balance within every generated block
# ---------------------------------------------------------------------------

def test_open_class_balance(mini_bundle):
    groups = {
        "train+validation": mini_bundle.splits["train"] + mini_bundle.splits["validation"],
        "holdout": mini_bundle.splits["holdout"],
        "jabberwocky sample": [
            i for i in mini_bundle.splits["jabberwocky"] if i.origin == ORIGIN_SAMPLE
        ],
    }
    ok = True
    for name, items in groups.items():
        per_block: dict[int, list] = {}
        for item in items:
            per_block.setdefault(item.block_id, []).append(item)
        for block_id, block_items in per_block.items():
            expected = len(block_items) // 6
            for getter in (
                lambda i: i.premise.noun,
                lambda i: i.hypothesis.noun,
                lambda i: i.premise.verb,
                lambda i: i.hypothesis.verb,
            ):
                counts = Counter(getter(i) for i in block_items)
                ok = ok and set(counts.values()) == {expected}
    _check("each noun and verb fills each open-class slot equally often", ok)


# ---------------------------------------------------------------------------
# Criterion 8: condition shapes and config arithmetic
# ---------------------------------------------------------------------------

def test_condition_shapes(tmp_path):
    small, large = tmp_path / "small", tmp_path / "large"
    assert main(["generate", "--condition", "small", "--out", str(small), "--plan"]) == 0
    assert main(["generate", "--condition", "large", "--out", str(large), "--plan"]) == 0
    small_manifest = bundle_io.read_json(small / "manifest.json")
    large_manifest = bundle_io.read_json(large / "manifest.json")
    _check(
        "small declares 20 training + 20 jabberwocky blocks; large declares 185",
        len(small_manifest["blocks"]["training"]) == 20
        and len(small_manifest["blocks"]["jabberwocky"]) == 20
        and len(large_manifest["blocks"]["training"]) == 185,
    )


def test_generator_totals_match_config_arithmetic(mini_bundle):
    config = mini_bundle.config
    per_block = config.pairs_per_open_class_combo * 1296
    n_val = int(per_block * config.validation_fraction)
    counts = mini_bundle.counts()
    sampled_jab = sum(
        1 for i in mini_bundle.splits["jabberwocky"] if i.origin == ORIGIN_SAMPLE
    )
    ok = (
        counts["train"] == config.n_training_blocks * (per_block - n_val)
        and counts["validation"] == config.n_training_blocks * n_val
        and counts["holdout"] == config.n_training_blocks * config.resolved_holdout_size()
        and sampled_jab == config.n_jabberwocky_blocks * per_block
    )
    _check(
        "generator totals match the documented config arithmetic exactly",
        ok,
        f"counts={counts}",
    )
