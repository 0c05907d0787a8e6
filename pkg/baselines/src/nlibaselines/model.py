"""Pair classifier: encode both sentences, combine, classify.

The premise encoding u and hypothesis encoding v are combined with
their element-wise product and difference into [u, v, u*v, u-v] and fed
through a multilayer perceptron over the seven relation classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import torch
from torch import nn

from .data import RELATION_NAMES
from .embeddings import EmbeddingTable
from .encoders import build_encoder


@dataclass
class EncoderConfig:
    architecture: str = "BGRU"
    embedding_dim: int = 64
    hidden_dim: int = 128
    classifier_hidden_dims: tuple[int, ...] = (256,)
    attention_views: int = 4
    conv_layers: int = 4
    dropout: float = 0.1
    seed: int = 0

    def validate(self) -> None:
        if min(self.embedding_dim, self.hidden_dim) < 1:
            raise ValueError("dimensions must be positive")
        if self.conv_layers < 1:
            raise ValueError("CONV needs at least one layer")

    def encoder_kwargs(self) -> dict:
        arch = self.architecture.upper()
        if arch == "SATT":
            return {"views": self.attention_views}
        if arch == "CONV":
            return {"layers": self.conv_layers}
        return {}

    def to_json(self) -> dict:
        return {
            "architecture": self.architecture,
            "embedding_dim": self.embedding_dim,
            "hidden_dim": self.hidden_dim,
            "classifier_hidden_dims": list(self.classifier_hidden_dims),
            "attention_views": self.attention_views,
            "conv_layers": self.conv_layers,
            "dropout": self.dropout,
            "seed": self.seed,
        }


def combine_pair(u: torch.Tensor, v: torch.Tensor) -> torch.Tensor:
    return torch.cat([u, v, u * v, u - v], dim=-1)


class PairClassifier(nn.Module):
    def __init__(self, config: EncoderConfig, vocabulary: list[str]):
        super().__init__()
        config.validate()
        self.config = config
        self.embeddings = EmbeddingTable(vocabulary, config.embedding_dim)
        self.encoder = build_encoder(
            config.architecture, config.embedding_dim, config.hidden_dim,
            **config.encoder_kwargs(),
        )
        dims = [4 * self.encoder.output_dim, *config.classifier_hidden_dims]
        layers: list[nn.Module] = []
        for d_in, d_out in zip(dims, dims[1:]):
            layers += [nn.Linear(d_in, d_out), nn.ReLU()]
            if config.dropout > 0:
                layers.append(nn.Dropout(config.dropout))
        layers.append(nn.Linear(dims[-1], len(RELATION_NAMES)))
        self.classifier = nn.Sequential(*layers)

    def encode(self, batch: list[tuple[str, ...]]) -> torch.Tensor:
        embedded, lengths = self.embeddings(batch)
        return self.encoder(embedded, lengths)

    def forward(self, premises: list[tuple[str, ...]],
                hypotheses: list[tuple[str, ...]]) -> torch.Tensor:
        u = self.encode(premises)
        v = self.encode(hypotheses)
        return self.classifier(combine_pair(u, v))
