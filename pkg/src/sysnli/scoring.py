"""Per-block accuracy scoring and cross-block aggregation.

Accuracies are computed per block per group and then aggregated with an
unweighted mean and a sample (n-1) standard deviation across blocks;
with a single block the deviation is reported as 0.  Items without a
prediction record are excluded from scoring and surface in the coverage
counts, while predictions for ids outside the scored item set are a
join error under strict joining.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import JoinError
from .probes import PROBE_CONSISTENCY, ProbeItem
from .relations import Relation
from .sampler import DatasetItem

log = logging.getLogger(__name__)

GROUP_OVERALL = "overall"
GROUPING_CHOICES = ("overall", "by_relation", "by_perturbation_type")


@dataclass(frozen=True)
class ScoreUnit:
    """One scoreable prediction target."""

    item_id: str
    block_id: int
    group_key: str
    gold: Relation


@dataclass(frozen=True)
class BlockScore:
    block_id: int
    group_key: str
    n_items: int
    n_correct: int

    @property
    def accuracy(self) -> float:
        return self.n_correct / self.n_items


@dataclass(frozen=True)
class AggregateScore:
    group_key: str
    mean_accuracy: float
    sd_accuracy: float
    n_blocks: int


@dataclass
class ScoreReport:
    block_scores: list[BlockScore]
    aggregates: list[AggregateScore]
    coverage: dict = field(default_factory=dict)


def units_from_items(items: Sequence[DatasetItem], grouping: str = GROUP_OVERALL) -> list[ScoreUnit]:
    if grouping == "by_relation":
        return [
            ScoreUnit(i.item_id, i.block_id, i.gold.canonical_name, i.gold) for i in items
        ]
    return [ScoreUnit(i.item_id, i.block_id, GROUP_OVERALL, i.gold) for i in items]


def units_from_probe(probe_items: Sequence[ProbeItem], grouping: str | None = None) -> list[ScoreUnit]:
    """Score the probe targets, grouped by the probe's natural key."""
    units = []
    for probe_item in probe_items:
        if grouping == "overall":
            key = GROUP_OVERALL
        elif grouping == "by_relation":
            key = probe_item.target_gold.canonical_name
        else:
            key = probe_item.group_key
        units.append(
            ScoreUnit(probe_item.target_item_id, probe_item.block_id, key, probe_item.target_gold)
        )
    return units


def score(
    units: Sequence[ScoreUnit],
    predictions: Mapping[str, Relation],
    strict: bool = True,
) -> ScoreReport:
    """Per-block per-group accuracies plus cross-block aggregates."""
    if strict:
        known = {u.item_id for u in units}
        stray = sorted(set(predictions) - known)
        if stray:
            shown = ", ".join(stray[:5])
            raise JoinError(
                f"{len(stray)} prediction id(s) not in the scored item set: {shown}"
                + ("..." if len(stray) > 5 else "")
            )
    counts: dict[tuple[int, str], list[int]] = {}
    covered = 0
    missing = 0
    for unit in units:
        predicted = predictions.get(unit.item_id)
        if predicted is None:
            missing += 1
            continue
        covered += 1
        cell = counts.setdefault((unit.block_id, unit.group_key), [0, 0])
        cell[0] += 1
        if predicted == unit.gold:
            cell[1] += 1
    if missing:
        log.warning("%d of %d items lack predictions; scoring the rest", missing, len(units))
    block_scores = [
        BlockScore(block_id=b, group_key=g, n_items=n, n_correct=c)
        for (b, g), (n, c) in sorted(counts.items())
    ]
    report = ScoreReport(
        block_scores=block_scores,
        aggregates=aggregate(block_scores),
        coverage={"units": len(units), "covered": covered, "missing_predictions": missing},
    )
    return report


def aggregate(block_scores: Sequence[BlockScore]) -> list[AggregateScore]:
    """Unweighted mean and sample sd of per-block accuracies, per group."""
    by_group: dict[str, list[float]] = {}
    for score_ in block_scores:
        by_group.setdefault(score_.group_key, []).append(score_.accuracy)
    out = []
    for group_key in sorted(by_group):
        values = by_group[group_key]
        n = len(values)
        mean = sum(values) / n
        if n > 1:
            sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1))
        else:
            sd = 0.0
        out.append(AggregateScore(group_key=group_key, mean_accuracy=mean, sd_accuracy=sd, n_blocks=n))
    return out


def consistency_rate(
    probe_items: Sequence[ProbeItem],
    first_pass: Mapping[str, Relation],
    second_pass: Mapping[str, Relation],
) -> ScoreReport:
    """P(reversed pair correct | original pair correct), by source relation.

    Sources are re-checked against the first pass rather than trusting
    probe construction, so the function composes with any probe file.
    """
    units = []
    sources_not_correct = 0
    sources_missing = 0
    for probe_item in probe_items:
        if probe_item.probe != PROBE_CONSISTENCY:
            continue
        first = first_pass.get(probe_item.source_item_id)
        if first is None:
            sources_missing += 1
            continue
        if first != probe_item.source_gold:
            sources_not_correct += 1
            continue
        units.append(
            ScoreUnit(
                item_id=probe_item.target_item_id,
                block_id=probe_item.block_id,
                group_key=probe_item.source_gold.canonical_name,
                gold=probe_item.target_gold,
            )
        )
    report = score(units, second_pass, strict=False)
    report.coverage.update(
        {
            "sources_missing_first_pass": sources_missing,
            "sources_not_correct": sources_not_correct,
        }
    )
    return report


# ---------------------------------------------------------------------------
# Report formatting
# ---------------------------------------------------------------------------

def format_aggregates(aggregates: Sequence[AggregateScore], title: str = "") -> str:
    """Aligned text table of mean (sd) percentages, 2 decimal places."""
    lines = []
    if title:
        lines.append(title)
    width = max([len("group")] + [len(a.group_key) for a in aggregates])
    lines.append(f"{'group':<{width}}  {'mean (sd)':>16}  blocks")
    for agg in aggregates:
        cell = f"{agg.mean_accuracy * 100:.2f} ({agg.sd_accuracy * 100:.2f})"
        lines.append(f"{agg.group_key:<{width}}  {cell:>16}  {agg.n_blocks:>6}")
    return "\n".join(lines)


def block_scores_csv(block_scores: Sequence[BlockScore]) -> str:
    lines = ["block_id,group_key,n_items,n_correct,accuracy"]
    for s in block_scores:
        lines.append(f"{s.block_id},{s.group_key},{s.n_items},{s.n_correct},{s.accuracy!r}")
    return "\n".join(lines) + "\n"


def aggregates_csv(aggregates: Sequence[AggregateScore]) -> str:
    lines = ["group_key,mean_accuracy,sd_accuracy,n_blocks"]
    for a in aggregates:
        lines.append(f"{a.group_key},{a.mean_accuracy!r},{a.sd_accuracy!r},{a.n_blocks}")
    return "\n".join(lines) + "\n"
