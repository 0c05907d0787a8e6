"""File formats: JSONL datasets, predictions, probes, bundle manifests.

Every writer goes through an atomic temp-file rename.  Dataset records
store rendered token sequences; reading a bundle re-parses them against
the bundle's lexicon, so render/parse round-tripping is exercised on
every load.  Relations appear in files both as canonical names and as
wire codes 0..6.
"""

from __future__ import annotations

import datetime
import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import __version__
from .errors import ConfigError
from .language import Block, ClosedClassInventory, Lexicon, parse, render
from .probes import PerturbationType, ProbeItem
from .relations import Relation
from .sampler import DatasetBundle, DatasetItem, GenerationConfig, SPLITS
from .semantics import RelationTable

MANIFEST_NAME = "manifest.json"
CONFIG_NAME = "config.json"
LEXICON_NAME = "lexicon.json"
TABLE_NAME = "relation_table.json"


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_jsonl(path: str | Path, records: Iterable[Mapping]) -> None:
    text = "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in records)
    atomic_write_text(path, text)


def read_jsonl(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]


def write_json(path: str | Path, data: Mapping) -> None:
    atomic_write_text(path, json.dumps(data, indent=2, sort_keys=True) + "\n")


def read_json(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


# ---------------------------------------------------------------------------
# Record codecs
# ---------------------------------------------------------------------------

def item_to_record(item: DatasetItem, inventory: ClosedClassInventory) -> dict:
    return {
        "item_id": item.item_id,
        "block_id": item.block_id,
        "split": item.split,
        "origin": item.origin,
        "premise_tokens": render(item.premise, inventory),
        "hypothesis_tokens": render(item.hypothesis, inventory),
        "gold": item.gold.canonical_name,
        "gold_code": int(item.gold),
    }


def item_from_record(record: Mapping, lexicon: Lexicon) -> DatasetItem:
    return DatasetItem(
        item_id=record["item_id"],
        block_id=int(record["block_id"]),
        split=record["split"],
        origin=record.get("origin", "sample"),
        premise=parse(record["premise_tokens"], lexicon.inventory, lexicon),
        hypothesis=parse(record["hypothesis_tokens"], lexicon.inventory, lexicon),
        gold=Relation.from_name(record["gold"]),
    )


def probe_item_to_record(probe_item: ProbeItem) -> dict:
    record = {
        "probe": probe_item.probe,
        "source_item_id": probe_item.source_item_id,
        "target_item_id": probe_item.target_item_id,
        "block_id": probe_item.block_id,
        "source_gold": probe_item.source_gold.canonical_name,
        "target_gold": probe_item.target_gold.canonical_name,
        "group_key": probe_item.group_key,
    }
    if probe_item.perturbation is not None:
        record.update(
            {
                "word_before": probe_item.perturbation.word_before,
                "word_after": probe_item.perturbation.word_after,
                "side": probe_item.perturbation.side,
            }
        )
    return record


def probe_item_from_record(record: Mapping) -> ProbeItem:
    source_gold = Relation.from_name(record["source_gold"])
    target_gold = Relation.from_name(record["target_gold"])
    perturbation = None
    if "word_before" in record:
        perturbation = PerturbationType(
            word_before=record["word_before"],
            word_after=record["word_after"],
            side=record["side"],
            relation_before=source_gold,
            relation_after=target_gold,
        )
    return ProbeItem(
        probe=record["probe"],
        source_item_id=record["source_item_id"],
        target_item_id=record["target_item_id"],
        block_id=int(record["block_id"]),
        source_gold=source_gold,
        target_gold=target_gold,
        perturbation=perturbation,
    )


def gold_prediction_records(items: Iterable[DatasetItem], model_id: str = "gold") -> list[dict]:
    return [
        {"item_id": item.item_id, "predicted": item.gold.canonical_name, "model_id": model_id}
        for item in items
    ]


def read_predictions(path: str | Path) -> tuple[dict[str, Relation], dict]:
    """Load a predictions file into an item_id -> Relation map.

    Unknown extra fields are ignored; duplicate ids keep the last row.
    """
    predictions: dict[str, Relation] = {}
    model_ids: set[str] = set()
    for record in read_jsonl(path):
        predictions[record["item_id"]] = Relation.from_name(record["predicted"])
        if "model_id" in record:
            model_ids.add(record["model_id"])
    return predictions, {"rows": len(predictions), "model_ids": sorted(model_ids)}


# ---------------------------------------------------------------------------
# Bundle persistence
# ---------------------------------------------------------------------------

def _lexicon_json(inventory: ClosedClassInventory, blocks: Sequence[Block]) -> dict:
    return {
        "inventory": inventory.to_json(),
        "blocks": [block.to_json() for block in blocks],
    }


def save_bundle(bundle: DatasetBundle, outdir: str | Path) -> dict:
    """Write the bundle directory and return its manifest."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    files: list[str] = []

    write_json(outdir / CONFIG_NAME, bundle.config.to_json())
    files.append(CONFIG_NAME)
    write_json(outdir / LEXICON_NAME, _lexicon_json(bundle.inventory, bundle.blocks))
    files.append(LEXICON_NAME)
    if bundle.table is not None:
        write_json(outdir / TABLE_NAME, bundle.table.to_json())
        files.append(TABLE_NAME)
    for split, items in bundle.splits.items():
        name = f"{split}.jsonl"
        write_jsonl(outdir / name, (item_to_record(i, bundle.inventory) for i in items))
        files.append(name)

    manifest = {
        "format_version": 1,
        "tool_version": __version__,
        "created_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "plan": bool(bundle.stats.get("plan", False)),
        "condition": bundle.config.condition,
        "seed": bundle.config.seed,
        "config": bundle.config.to_json(),
        "blocks": {
            "training": [b.id for b in bundle.blocks if b.role == "training"],
            "jabberwocky": [b.id for b in bundle.blocks if b.role == "jabberwocky"],
        },
        "counts": bundle.counts(),
        "stats": {k: v for k, v in bundle.stats.items() if k != "plan"},
        "files": {name: sha256_file(outdir / name) for name in sorted(files)},
    }
    write_json(outdir / MANIFEST_NAME, manifest)
    return manifest


def load_bundle(directory: str | Path) -> DatasetBundle:
    directory = Path(directory)
    if not (directory / CONFIG_NAME).exists():
        raise ConfigError(f"not a bundle directory (no {CONFIG_NAME}): {directory}")
    config = GenerationConfig.from_json(read_json(directory / CONFIG_NAME))
    lexicon_data = read_json(directory / LEXICON_NAME)
    inventory = ClosedClassInventory.from_json(lexicon_data["inventory"])
    blocks = [Block.from_json(b) for b in lexicon_data["blocks"]]
    table = None
    if (directory / TABLE_NAME).exists():
        table = RelationTable.from_json(read_json(directory / TABLE_NAME))
    lexicon = Lexicon(inventory, blocks)
    splits = {}
    for split in SPLITS:
        path = directory / f"{split}.jsonl"
        if path.exists():
            splits[split] = [item_from_record(r, lexicon) for r in read_jsonl(path)]
    return DatasetBundle(
        config=config,
        inventory=inventory,
        blocks=blocks,
        table=table,
        splits=splits,
    )
