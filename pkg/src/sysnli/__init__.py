"""Artificial NLI language with natural-logic gold labels and probes."""

__version__ = "0.1.0"

from .relations import Relation, classify, classify_counts, converse
from .language import (
    Block,
    ClosedClassInventory,
    DEFAULT_INVENTORY,
    Lexicon,
    Sentence,
    SentencePair,
    build_block,
    parse,
    readable_aliases,
    render,
    single_closed_class_edits,
)
from .semantics import (
    RelationTable,
    SemanticSkeleton,
    World,
    build_table,
    canonical_pair,
    evaluate,
    extract_skeleton,
    label_pair,
    label_pair_naive,
    label_pair_oracle,
    project_relation,
    reachable_skeletons,
)
from .sampler import (
    DatasetBundle,
    DatasetItem,
    GenerationConfig,
    close_for_probes,
    config_for_condition,
    generate_condition,
    sample_block_items,
)
from .probes import (
    PerturbationType,
    ProbeItem,
    build_consistency_probe,
    build_identical_open_class_probe,
    build_perturbation_probe,
)
from .scoring import (
    AggregateScore,
    BlockScore,
    ScoreReport,
    ScoreUnit,
    aggregate,
    consistency_rate,
    format_aggregates,
    score,
    units_from_items,
    units_from_probe,
)

__all__ = [name for name in dir() if not name.startswith("_")]
