"""Sentence-encoder baselines over the artificial NLI bundles.

Consumes the dataset JSONL files written by the generator and emits
prediction files in its schema; nothing here imports the generator.
"""

__version__ = "0.1.0"

RELATION_NAMES = (
    "equivalence",
    "forward",
    "reverse",
    "negation",
    "alternation",
    "cover",
    "independence",
)

from .data import Example, load_split, read_jsonl, write_predictions
from .embeddings import EmbeddingTable, novel_vector
from .encoders import ARCHITECTURES, build_encoder
from .model import EncoderConfig, PairClassifier
from .training import TrainResult, train_model
from .analysis import embedding_analysis
