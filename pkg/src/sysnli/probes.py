"""The three systematicity probes over a labeled jabberwocky set.

Perturbation and consistency probes condition on first-pass model
behaviour: only correctly classified items spawn probe items.  Items
without a prediction record are excluded and counted, not treated as
incorrect.  Probe targets must exist in the dataset; a missing target
for a sampled item means closure was skipped and is an error, while
closure-origin items silently skip their own missing targets (closure
is a single pass, by design).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import MissingTargetError
from .language import Block, ClosedClassInventory, DEFAULT_INVENTORY, single_closed_class_edits
from .relations import Relation
from .sampler import ORIGIN_SAMPLE, SPLIT_JABBERWOCKY, DatasetItem
from .semantics import RelationTable, label_pair

PROBE_PERTURBATION = "perturbation"
PROBE_IDENTICAL = "identical_open_class"
PROBE_CONSISTENCY = "consistency"


@dataclass(frozen=True)
class PerturbationType:
    """Equivalence class of perturbed items: edit words, side, class change."""

    word_before: str
    word_after: str
    side: str
    relation_before: Relation
    relation_after: Relation

    def key(self) -> str:
        return "|".join(
            (
                f"{self.word_before}>{self.word_after}",
                self.side,
                f"{self.relation_before.canonical_name}>{self.relation_after.canonical_name}",
            )
        )


@dataclass(frozen=True)
class ProbeItem:
    probe: str
    source_item_id: str
    target_item_id: str
    block_id: int
    source_gold: Relation
    target_gold: Relation
    perturbation: PerturbationType | None = None

    @property
    def group_key(self) -> str:
        if self.probe == PROBE_PERTURBATION:
            return self.perturbation.key()
        if self.probe == PROBE_CONSISTENCY:
            return self.source_gold.canonical_name
        return self.target_gold.canonical_name


def _jabberwocky(items: Sequence[DatasetItem]) -> list[DatasetItem]:
    return [item for item in items if item.split == SPLIT_JABBERWOCKY]


def _index_by_pair(items: Sequence[DatasetItem]) -> dict:
    return {(item.premise, item.hypothesis): item for item in items}


def build_perturbation_probe(
    items: Sequence[DatasetItem],
    predictions: Mapping[str, Relation],
    blocks_by_id: Mapping[int, Block],
    table: RelationTable,
    inventory: ClosedClassInventory = DEFAULT_INVENTORY,
) -> tuple[list[ProbeItem], dict]:
    """Probe items for every class-changing single edit of a correct item."""
    jab = _jabberwocky(items)
    by_pair = _index_by_pair(jab)
    stats = {
        "sources": 0,
        "sources_correct": 0,
        "missing_predictions": 0,
        "edits_without_class_change": 0,
        "targets_skipped_closure_origin": 0,
        "emitted": 0,
    }
    out: list[ProbeItem] = []
    for item in jab:
        stats["sources"] += 1
        predicted = predictions.get(item.item_id)
        if predicted is None:
            stats["missing_predictions"] += 1
            continue
        if predicted != item.gold:
            continue
        stats["sources_correct"] += 1
        block = blocks_by_id[item.block_id]
        for new_pair, side, _slot, before, after in single_closed_class_edits(item.pair, inventory):
            new_gold = label_pair(new_pair, block, table)
            if new_gold == item.gold:
                stats["edits_without_class_change"] += 1
                continue
            target = by_pair.get((new_pair.premise, new_pair.hypothesis))
            if target is None:
                if item.origin == ORIGIN_SAMPLE:
                    raise MissingTargetError(
                        f"perturbed counterpart of item {item.item_id} is missing; "
                        "generate the dataset with probe closure (close_for_probes)"
                    )
                stats["targets_skipped_closure_origin"] += 1
                continue
            out.append(
                ProbeItem(
                    probe=PROBE_PERTURBATION,
                    source_item_id=item.item_id,
                    target_item_id=target.item_id,
                    block_id=item.block_id,
                    source_gold=item.gold,
                    target_gold=target.gold,
                    perturbation=PerturbationType(
                        word_before=before,
                        word_after=after,
                        side=side,
                        relation_before=item.gold,
                        relation_after=target.gold,
                    ),
                )
            )
            stats["emitted"] += 1
    return out, stats


def build_identical_open_class_probe(items: Sequence[DatasetItem]) -> list[ProbeItem]:
    """Items whose premise and hypothesis share noun and verb.

    These are classifiable from closed-class structure alone, so no
    prediction file is needed to build the probe.
    """
    out = []
    for item in _jabberwocky(items):
        if (
            item.premise.noun == item.hypothesis.noun
            and item.premise.verb == item.hypothesis.verb
        ):
            out.append(
                ProbeItem(
                    probe=PROBE_IDENTICAL,
                    source_item_id=item.item_id,
                    target_item_id=item.item_id,
                    block_id=item.block_id,
                    source_gold=item.gold,
                    target_gold=item.gold,
                )
            )
    return out


def build_consistency_probe(
    items: Sequence[DatasetItem],
    predictions: Mapping[str, Relation],
) -> tuple[list[ProbeItem], dict]:
    """For each correct item, target the same pair in reversed order."""
    jab = _jabberwocky(items)
    by_pair = _index_by_pair(jab)
    stats = {
        "sources": 0,
        "sources_correct": 0,
        "missing_predictions": 0,
        "targets_skipped_closure_origin": 0,
        "emitted": 0,
    }
    out: list[ProbeItem] = []
    for item in jab:
        stats["sources"] += 1
        predicted = predictions.get(item.item_id)
        if predicted is None:
            stats["missing_predictions"] += 1
            continue
        if predicted != item.gold:
            continue
        stats["sources_correct"] += 1
        target = by_pair.get((item.hypothesis, item.premise))
        if target is None:
            if item.origin == ORIGIN_SAMPLE:
                raise MissingTargetError(
                    f"reversed counterpart of item {item.item_id} is missing; "
                    "generate the dataset with probe closure (close_for_probes)"
                )
            stats["targets_skipped_closure_origin"] += 1
            continue
        out.append(
            ProbeItem(
                probe=PROBE_CONSISTENCY,
                source_item_id=item.item_id,
                target_item_id=target.item_id,
                block_id=item.block_id,
                source_gold=item.gold,
                target_gold=target.gold,
            )
        )
        stats["emitted"] += 1
    return out, stats
