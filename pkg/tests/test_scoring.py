import math
import random

import pytest

from sysnli.errors import JoinError
from sysnli.probes import ProbeItem, PROBE_CONSISTENCY, build_consistency_probe
from sysnli.relations import Relation, SYMMETRIC_RELATIONS, converse
from sysnli.scoring import (
    ScoreUnit,
    aggregate,
    aggregates_csv,
    block_scores_csv,
    consistency_rate,
    format_aggregates,
    score,
    units_from_items,
    units_from_probe,
)


def unit(item_id, block_id=0, group="overall", gold=Relation.FORWARD):
    return ScoreUnit(item_id=item_id, block_id=block_id, group_key=group, gold=gold)


def test_gold_as_predictions_scores_perfectly(mini_bundle, gold_predictions_map):
    units = units_from_items(mini_bundle.splits["holdout"], "by_relation")
    report = score(units, gold_predictions_map, strict=False)
    assert report.block_scores
    for block_score in report.block_scores:
        assert block_score.accuracy == 1.0
    for agg in report.aggregates:
        assert agg.mean_accuracy == 1.0
        assert agg.sd_accuracy == 0.0


def test_fixed_prediction_on_balanced_set():
    # One block, seven relations, four items each; always predicting
    # FORWARD scores exactly 4/28.
    units, predictions = [], {}
    for rel in Relation:
        for j in range(4):
            item_id = f"{rel.canonical_name}-{j}"
            units.append(unit(item_id, gold=rel))
            predictions[item_id] = Relation.FORWARD
    report = score(units, predictions)
    assert len(report.block_scores) == 1
    assert report.block_scores[0].accuracy == pytest.approx(4 / 28)


def test_score_is_permutation_invariant(mini_bundle, gold_predictions_map):
    units = units_from_items(mini_bundle.splits["validation"], "by_relation")
    shuffled = list(units)
    random.Random(0).shuffle(shuffled)
    a = score(units, gold_predictions_map, strict=False)
    b = score(shuffled, gold_predictions_map, strict=False)
    assert a.block_scores == b.block_scores
    assert a.aggregates == b.aggregates


def test_aggregates_recompute_from_block_scores(mini_bundle, gold_predictions_map):
    units = units_from_items(mini_bundle.splits["jabberwocky"], "by_relation")
    report = score(units, gold_predictions_map, strict=False)
    assert aggregate(report.block_scores) == report.aggregates


def test_group_counts_partition_block_totals(mini_bundle, gold_predictions_map):
    units = units_from_items(mini_bundle.splits["jabberwocky"], "by_relation")
    report = score(units, gold_predictions_map, strict=False)
    per_block: dict[int, int] = {}
    for block_score in report.block_scores:
        per_block[block_score.block_id] = per_block.get(block_score.block_id, 0) + block_score.n_items
    expected: dict[int, int] = {}
    for item in mini_bundle.splits["jabberwocky"]:
        expected[item.block_id] = expected.get(item.block_id, 0) + 1
    assert per_block == expected


def test_sample_standard_deviation():
    blocks = [
        unit("a", block_id=0), unit("b", block_id=0),
        unit("c", block_id=1), unit("d", block_id=1),
    ]
    predictions = {"a": Relation.FORWARD, "b": Relation.FORWARD,
                   "c": Relation.FORWARD, "d": Relation.REVERSE}
    report = score(blocks, predictions)
    agg = report.aggregates[0]
    # block accuracies 1.0 and 0.5: mean 0.75, sample sd over two blocks
    assert agg.mean_accuracy == pytest.approx(0.75)
    assert agg.sd_accuracy == pytest.approx(math.sqrt(((0.25) ** 2 + (0.25) ** 2) / 1))
    assert agg.n_blocks == 2


def test_strict_join_rejects_stray_prediction_ids():
    units = [unit("a")]
    with pytest.raises(JoinError):
        score(units, {"a": Relation.FORWARD, "zzz": Relation.COVER})
    report = score(units, {"a": Relation.FORWARD, "zzz": Relation.COVER}, strict=False)
    assert report.block_scores[0].accuracy == 1.0


def test_missing_predictions_are_coverage_not_errors():
    units = [unit("a"), unit("b")]
    report = score(units, {"a": Relation.FORWARD})
    assert report.coverage["missing_predictions"] == 1
    assert report.block_scores[0].n_items == 1


def test_consistency_rate_perfect_predictor(mini_bundle, gold_predictions_map):
    probe_items, _ = build_consistency_probe(
        mini_bundle.splits["jabberwocky"], gold_predictions_map
    )
    report = consistency_rate(probe_items, gold_predictions_map, gold_predictions_map)
    for agg in report.aggregates:
        assert agg.mean_accuracy == 1.0
        assert agg.sd_accuracy == 0.0
    assert {a.group_key for a in report.aggregates} <= {r.canonical_name for r in Relation}


def test_consistency_rate_order_insensitive_predictor(mini_bundle, gold_predictions_map):
    # A predictor that answers identically for reversed input is right
    # on symmetric sources and always wrong on strict entailments.
    probe_items, _ = build_consistency_probe(
        mini_bundle.splits["jabberwocky"], gold_predictions_map
    )
    second_pass = {}
    for probe_item in probe_items:
        second_pass[probe_item.target_item_id] = probe_item.source_gold
    report = consistency_rate(probe_items, gold_predictions_map, second_pass)
    for agg in report.aggregates:
        rel = Relation.from_name(agg.group_key)
        if rel in SYMMETRIC_RELATIONS:
            assert agg.mean_accuracy == 1.0
        else:
            assert agg.mean_accuracy == 0.0


def test_consistency_rate_conditions_on_first_pass():
    items = [
        ProbeItem(PROBE_CONSISTENCY, "s1", "t1", 0, Relation.FORWARD, Relation.REVERSE),
        ProbeItem(PROBE_CONSISTENCY, "s2", "t2", 0, Relation.FORWARD, Relation.REVERSE),
    ]
    first = {"s1": Relation.FORWARD, "s2": Relation.COVER}
    second = {"t1": Relation.REVERSE, "t2": Relation.REVERSE}
    report = consistency_rate(items, first, second)
    assert report.coverage["sources_not_correct"] == 1
    assert report.block_scores[0].n_items == 1
    assert report.block_scores[0].accuracy == 1.0


def test_units_from_probe_group_keys(mini_bundle, gold_predictions_map):
    probe_items, _ = build_consistency_probe(
        mini_bundle.splits["jabberwocky"], gold_predictions_map
    )
    default_units = units_from_probe(probe_items)
    assert {u.group_key for u in default_units} <= {r.canonical_name for r in Relation}
    overall = units_from_probe(probe_items, grouping="overall")
    assert {u.group_key for u in overall} == {"overall"}


def test_report_formatting_round_trips():
    scores = [unit("a", block_id=0), unit("b", block_id=1)]
    predictions = {"a": Relation.FORWARD, "b": Relation.REVERSE}
    report = score(scores, predictions)
    text = format_aggregates(report.aggregates, title="demo")
    assert "demo" in text and "overall" in text and "50.00" in text
    csv_blocks = block_scores_csv(report.block_scores)
    assert csv_blocks.splitlines()[0] == "block_id,group_key,n_items,n_correct,accuracy"
    assert len(csv_blocks.splitlines()) == 3
    csv_aggs = aggregates_csv(report.aggregates)
    assert "overall,0.5" in csv_aggs
