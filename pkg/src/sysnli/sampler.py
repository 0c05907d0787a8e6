"""Dataset generation: training blocks, holdout, jabberwocky, closure.

Every block contributes one sentence pair per ordered combination of
open-class words (6^4 = 1296 tuples) times a configured multiplier;
closed-class slots are filled uniformly at random, without replacement
at the full-pair level.  All randomness flows from the master seed
through named per-block child seeds, so blocks can be sampled in any
order (or in parallel) with identical results.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError, ExhaustionError
from .language import (
    DEFAULT_INVENTORY,
    ROLE_JABBERWOCKY,
    ROLE_TRAINING,
    Block,
    ClosedClassInventory,
    Lexicon,
    Sentence,
    SentencePair,
    build_block,
    render,
    single_closed_class_edits,
)
from .relations import Relation
from .semantics import DEFAULT_DOMAIN_SIZES, RelationTable, build_table, label_pair

SPLIT_TRAIN = "train"
SPLIT_VALIDATION = "validation"
SPLIT_HOLDOUT = "holdout"
SPLIT_JABBERWOCKY = "jabberwocky"
SPLITS = (SPLIT_TRAIN, SPLIT_VALIDATION, SPLIT_HOLDOUT, SPLIT_JABBERWOCKY)

ORIGIN_SAMPLE = "sample"
ORIGIN_REVERSAL = "closure-reversal"
ORIGIN_PERTURBATION = "closure-perturbation"

OPEN_CLASS_TUPLES = 6**4  # ordered (noun1, noun2, verb1, verb2) combinations


@dataclass(frozen=True)
class GenerationConfig:
    condition: str = "custom"
    n_training_blocks: int = 4
    n_jabberwocky_blocks: int = 2
    pairs_per_open_class_combo: int = 1
    validation_fraction: float = 0.20
    seed: int = 0
    holdout_size_per_block: int | None = None
    domain_sizes: tuple[int, ...] = DEFAULT_DOMAIN_SIZES
    dedup_retries: int = 64

    def validate(self) -> None:
        if self.n_training_blocks < 1 or self.n_jabberwocky_blocks < 0:
            raise ConfigError("block counts must be positive")
        if self.pairs_per_open_class_combo < 1:
            raise ConfigError("pairs_per_open_class_combo must be >= 1")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ConfigError("validation_fraction must be in (0, 1)")
        if self.holdout_size_per_block is not None and self.holdout_size_per_block < 1:
            raise ConfigError("holdout_size_per_block must be positive")
        if len(self.domain_sizes) < 2:
            raise ConfigError("need at least two domain sizes")

    def resolved_holdout_size(self) -> int:
        if self.holdout_size_per_block is not None:
            return self.holdout_size_per_block
        return self.pairs_per_open_class_combo * OPEN_CLASS_TUPLES

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "n_training_blocks": self.n_training_blocks,
            "n_jabberwocky_blocks": self.n_jabberwocky_blocks,
            "pairs_per_open_class_combo": self.pairs_per_open_class_combo,
            "validation_fraction": self.validation_fraction,
            "seed": self.seed,
            "holdout_size_per_block": self.holdout_size_per_block,
            "domain_sizes": list(self.domain_sizes),
            "dedup_retries": self.dedup_retries,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "GenerationConfig":
        known = {f for f in cls.__dataclass_fields__}
        kwargs = {k: v for k, v in data.items() if k in known}
        kwargs["domain_sizes"] = tuple(kwargs.get("domain_sizes", DEFAULT_DOMAIN_SIZES))
        return cls(**kwargs)


#: Built-in conditions.  ``mini`` is the desk-scale configuration used
#: by the test suite; ``small`` and ``large`` follow the 20- and
#: 185-training-block setups (20 jabberwocky blocks each).
CONDITION_PRESETS: dict[str, dict] = {
    "mini": dict(n_training_blocks=4, n_jabberwocky_blocks=2, pairs_per_open_class_combo=1),
    "small": dict(n_training_blocks=20, n_jabberwocky_blocks=20, pairs_per_open_class_combo=2),
    "large": dict(n_training_blocks=185, n_jabberwocky_blocks=20, pairs_per_open_class_combo=2),
}


def config_for_condition(name: str, seed: int = 0, **overrides) -> GenerationConfig:
    if name not in CONDITION_PRESETS:
        raise ConfigError(f"unknown condition {name!r}; use one of {sorted(CONDITION_PRESETS)}")
    params = dict(CONDITION_PRESETS[name])
    params.update(overrides)
    return GenerationConfig(condition=name, seed=seed, **params)


@dataclass(frozen=True)
class DatasetItem:
    item_id: str
    block_id: int
    split: str
    premise: Sentence
    hypothesis: Sentence
    gold: Relation
    origin: str = ORIGIN_SAMPLE

    @property
    def pair(self) -> SentencePair:
        return SentencePair(self.premise, self.hypothesis)


def child_seed(master: int, *labels) -> int:
    """Stable 64-bit child seed; independent of process hash salts."""
    message = ":".join([str(master), *map(str, labels)]).encode()
    return int.from_bytes(hashlib.sha256(message).digest()[:8], "big")


def make_item_id(block_id: int, premise_tokens: Sequence[str], hypothesis_tokens: Sequence[str]) -> str:
    payload = "\x1f".join([str(block_id), " ".join(premise_tokens), " ".join(hypothesis_tokens)])
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _item_from_pair(pair: SentencePair, block: Block, split: str, gold: Relation,
                    inventory: ClosedClassInventory, origin: str) -> DatasetItem:
    return DatasetItem(
        item_id=make_item_id(block.id, render(pair.premise, inventory), render(pair.hypothesis, inventory)),
        block_id=block.id,
        split=split,
        premise=pair.premise,
        hypothesis=pair.hypothesis,
        gold=gold,
        origin=origin,
    )


def _random_sentence(noun: str, verb: str, inventory: ClosedClassInventory, rng: random.Random) -> Sentence:
    # Every optional slot is filled by either the empty string or a word
    # (fair coin), with the word then chosen uniformly; the obligatory
    # quantifier is uniform over the inventory.
    def optional(words):
        return rng.choice(words) if words and rng.choice((False, True)) else None

    return Sentence(
        quantifier=rng.choice(inventory.quantifiers),
        premodifier=optional(inventory.premodifiers),
        noun=noun,
        postmodifier=optional(inventory.postmodifiers),
        negation=bool(rng.choice((False, True))) if inventory.negation is not None else False,
        verb=verb,
    )


def _closed_class_capacity(inventory: ClosedClassInventory) -> int:
    per_sentence = (
        len(inventory.quantifiers)
        * (1 + len(inventory.premodifiers))
        * (1 + len(inventory.postmodifiers))
        * (2 if inventory.negation is not None else 1)
    )
    return per_sentence**2


def sample_block_items(
    block: Block,
    config: GenerationConfig,
    rng: random.Random,
    table: RelationTable,
    inventory: ClosedClassInventory = DEFAULT_INVENTORY,
    split: str = SPLIT_TRAIN,
    total: int | None = None,
    taken: set | None = None,
) -> tuple[list[DatasetItem], dict]:
    """Sample labeled items for one block.

    One pass emits ``pairs_per_open_class_combo`` items for every
    ordered open-class tuple; passing ``total`` instead distributes that
    many items round-robin over the tuples.  ``taken`` seeds the
    without-replacement set (used to keep holdout disjoint from
    training).
    """
    per_combo = config.pairs_per_open_class_combo if total is None else total // OPEN_CLASS_TUPLES
    remainder = 0 if total is None else total % OPEN_CLASS_TUPLES
    capacity = _closed_class_capacity(inventory)
    if per_combo + (1 if remainder else 0) > capacity:
        raise ExhaustionError(
            f"requested {per_combo}+ pairs per combo but only {capacity} closed-class fillings exist"
        )
    taken = set() if taken is None else taken
    items: list[DatasetItem] = []
    skipped = 0
    combos = itertools.product(block.nouns, block.nouns, block.verbs, block.verbs)
    for index, (noun1, noun2, verb1, verb2) in enumerate(combos):
        count = per_combo + (1 if index < remainder else 0)
        for _ in range(count):
            for _attempt in range(config.dedup_retries):
                pair = SentencePair(
                    _random_sentence(noun1, verb1, inventory, rng),
                    _random_sentence(noun2, verb2, inventory, rng),
                )
                key = (pair.premise, pair.hypothesis)
                if key not in taken:
                    break
            else:
                skipped += 1
                continue
            taken.add(key)
            gold = label_pair(pair, block, table)
            items.append(_item_from_pair(pair, block, split, gold, inventory, ORIGIN_SAMPLE))
    return items, {"skipped_after_retries": skipped}


def close_for_probes(
    items: Sequence[DatasetItem],
    table: RelationTable,
    blocks_by_id: Mapping[int, Block],
    inventory: ClosedClassInventory = DEFAULT_INVENTORY,
) -> tuple[list[DatasetItem], dict]:
    """Extend jabberwocky items with the pairs the probes will need.

    For every sampled item this adds (when absent) the reversed-order
    pair and every single closed-class edit that changes the gold class.
    Closure items are flagged by origin and are not themselves closed
    over, which makes a second run a no-op.
    """
    existing = {(item.premise, item.hypothesis) for item in items}
    out = list(items)
    added_reversals = 0
    added_perturbations = 0
    for item in items:
        if item.origin != ORIGIN_SAMPLE:
            continue
        block = blocks_by_id[item.block_id]
        reversed_pair = item.pair.reversed()
        key = (reversed_pair.premise, reversed_pair.hypothesis)
        if key not in existing:
            existing.add(key)
            gold = label_pair(reversed_pair, block, table)
            out.append(_item_from_pair(reversed_pair, block, item.split, gold, inventory, ORIGIN_REVERSAL))
            added_reversals += 1
        for new_pair, _side, _slot, _before, _after in single_closed_class_edits(item.pair, inventory):
            gold2 = label_pair(new_pair, block, table)
            if gold2 == item.gold:
                continue
            key2 = (new_pair.premise, new_pair.hypothesis)
            if key2 in existing:
                continue
            existing.add(key2)
            out.append(_item_from_pair(new_pair, block, item.split, gold2, inventory, ORIGIN_PERTURBATION))
            added_perturbations += 1
    stats = {"closure_reversals": added_reversals, "closure_perturbations": added_perturbations}
    return out, stats


@dataclass
class DatasetBundle:
    config: GenerationConfig
    inventory: ClosedClassInventory
    blocks: list[Block]
    table: RelationTable | None
    splits: dict[str, list[DatasetItem]] = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def lexicon(self) -> Lexicon:
        return Lexicon(self.inventory, self.blocks)

    def blocks_by_id(self) -> dict[int, Block]:
        return {b.id: b for b in self.blocks}

    def all_items(self) -> Iterable[DatasetItem]:
        for split in SPLITS:
            yield from self.splits.get(split, ())

    def counts(self) -> dict[str, int]:
        return {split: len(items) for split, items in self.splits.items()}


def _training_block_items(block, config, inventory, table):
    """Train/validation/holdout items for one block; order-independent."""
    rng = random.Random(child_seed(config.seed, "train-items", block.id))
    sampled, stats = sample_block_items(
        block, config, rng, table, inventory, split=SPLIT_TRAIN
    )
    n_val = int(len(sampled) * config.validation_fraction)
    val_rng = random.Random(child_seed(config.seed, "validation", block.id))
    val_idx = frozenset(val_rng.sample(range(len(sampled)), n_val))
    train, validation = [], []
    for i, item in enumerate(sampled):
        if i in val_idx:
            validation.append(replace(item, split=SPLIT_VALIDATION))
        else:
            train.append(item)
    holdout_rng = random.Random(child_seed(config.seed, "holdout", block.id))
    taken = {(item.premise, item.hypothesis) for item in sampled}
    holdout, h_stats = sample_block_items(
        block, config, holdout_rng, table, inventory,
        split=SPLIT_HOLDOUT, total=config.resolved_holdout_size(), taken=taken,
    )
    stats = {k: stats[k] + h_stats[k] for k in stats}
    return train, validation, holdout, stats


def _jabberwocky_block_items(block, config, inventory, table):
    rng = random.Random(child_seed(config.seed, "jabberwocky-items", block.id))
    return sample_block_items(
        block, config, rng, table, inventory, split=SPLIT_JABBERWOCKY
    )


def build_blocks(config: GenerationConfig) -> list[Block]:
    training = [build_block(i, ROLE_TRAINING) for i in range(config.n_training_blocks)]
    jabberwocky = [
        build_block(config.n_training_blocks + i, ROLE_JABBERWOCKY)
        for i in range(config.n_jabberwocky_blocks)
    ]
    return training + jabberwocky


def generate_condition(
    config: GenerationConfig,
    inventory: ClosedClassInventory = DEFAULT_INVENTORY,
    table: RelationTable | None = None,
) -> DatasetBundle:
    """Produce the full labeled dataset bundle for a condition."""
    config.validate()
    if table is None:
        table = build_table(inventory, config.domain_sizes)
    blocks = build_blocks(config)
    training_blocks = [b for b in blocks if b.role == ROLE_TRAINING]
    jabberwocky_blocks = [b for b in blocks if b.role == ROLE_JABBERWOCKY]

    train: list[DatasetItem] = []
    validation: list[DatasetItem] = []
    holdout: list[DatasetItem] = []
    skipped = 0
    for block in training_blocks:
        b_train, b_val, b_holdout, stats = _training_block_items(block, config, inventory, table)
        train += b_train
        validation += b_val
        holdout += b_holdout
        skipped += stats["skipped_after_retries"]

    jabberwocky: list[DatasetItem] = []
    for block in jabberwocky_blocks:
        b_items, stats = _jabberwocky_block_items(block, config, inventory, table)
        jabberwocky += b_items
        skipped += stats["skipped_after_retries"]
    jabberwocky, closure_stats = close_for_probes(
        jabberwocky, table, {b.id: b for b in jabberwocky_blocks}, inventory
    )

    bundle = DatasetBundle(
        config=config,
        inventory=inventory,
        blocks=blocks,
        table=table,
        splits={
            SPLIT_TRAIN: train,
            SPLIT_VALIDATION: validation,
            SPLIT_HOLDOUT: holdout,
            SPLIT_JABBERWOCKY: jabberwocky,
        },
        stats={"skipped_after_retries": skipped, **closure_stats},
    )
    return bundle


def plan_condition(
    config: GenerationConfig, inventory: ClosedClassInventory = DEFAULT_INVENTORY
) -> DatasetBundle:
    """Blocks and manifest bookkeeping only; no items, no table."""
    config.validate()
    return DatasetBundle(
        config=config,
        inventory=inventory,
        blocks=build_blocks(config),
        table=None,
        splits={},
        stats={"plan": True},
    )
