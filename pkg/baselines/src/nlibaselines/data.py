"""Reading dataset bundles and writing prediction files.

The only coupling to the generator is its file contract: JSONL records
with ``premise_tokens``/``hypothesis_tokens``/``gold`` fields, relation
names with wire codes 0..6, and prediction rows of
``{item_id, predicted, model_id}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


RELATION_NAMES = (
    "equivalence",
    "forward",
    "reverse",
    "negation",
    "alternation",
    "cover",
    "independence",
)
RELATION_INDEX = {name: i for i, name in enumerate(RELATION_NAMES)}


@dataclass(frozen=True)
class Example:
    item_id: str
    block_id: int
    premise: tuple[str, ...]
    hypothesis: tuple[str, ...]
    label: int


def read_jsonl(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]


def load_split(path: str | Path) -> list[Example]:
    examples = []
    for record in read_jsonl(path):
        examples.append(
            Example(
                item_id=record["item_id"],
                block_id=int(record["block_id"]),
                premise=tuple(record["premise_tokens"]),
                hypothesis=tuple(record["hypothesis_tokens"]),
                label=RELATION_INDEX[record["gold"]],
            )
        )
    return examples


def bundle_splits(condition_dir: str | Path) -> dict[str, list[Example]]:
    condition_dir = Path(condition_dir)
    out = {}
    for split in ("train", "validation", "holdout", "jabberwocky"):
        path = condition_dir / f"{split}.jsonl"
        if path.exists():
            out[split] = load_split(path)
    return out


def training_vocabulary(examples: Iterable[Example]) -> list[str]:
    """Every token seen in training data, in first-occurrence order."""
    seen: dict[str, None] = {}
    for example in examples:
        for token in example.premise + example.hypothesis:
            seen.setdefault(token)
    return list(seen)


def write_predictions(
    path: str | Path,
    items: Sequence[Example],
    predicted: Sequence[int],
    model_id: str,
) -> None:
    assert len(items) == len(predicted)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        for example, label in zip(items, predicted):
            row = {
                "item_id": example.item_id,
                "predicted": RELATION_NAMES[label],
                "model_id": model_id,
            }
            handle.write(json.dumps(row, sort_keys=True) + "\n")
