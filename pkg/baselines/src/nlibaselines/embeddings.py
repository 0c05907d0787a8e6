"""Word embeddings: a trained table plus frozen vectors for novel words.

Trained embeddings start from N(0, 1) and are updated by the optimizer.
Any token outside the training vocabulary gets a standard-normal vector
drawn from a seed derived from the token string itself, created on
first sight, never updated, and identical across processes and files.
"""

from __future__ import annotations

import hashlib

import torch
from torch import nn


def novel_vector(token: str, dim: int) -> torch.Tensor:
    seed = int.from_bytes(hashlib.sha256(token.encode()).digest()[:8], "big")
    generator = torch.Generator().manual_seed(seed & 0x7FFF_FFFF_FFFF_FFFF)
    return torch.randn(dim, generator=generator)


class EmbeddingTable(nn.Module):

    PAD = "<pad>"

    def __init__(self, vocabulary: list[str], dim: int):
        super().__init__()
        self.dim = dim
        self.token_to_id = {token: i + 1 for i, token in enumerate(vocabulary)}
        self.trained = nn.Embedding(len(vocabulary) + 1, dim, padding_idx=0)
        with torch.no_grad():
            nn.init.normal_(self.trained.weight, mean=0.0, std=1.0)
            self.trained.weight[0].zero_()
        self._novel: dict[str, torch.Tensor] = {}

    @property
    def novel_tokens(self) -> list[str]:
        return list(self._novel)

    def novel(self, token: str) -> torch.Tensor:
        vector = self._novel.get(token)
        if vector is None:
            vector = novel_vector(token, self.dim)
            vector.requires_grad_(False)
            self._novel[token] = vector
        return vector

    def forward(self, batch: list[tuple[str, ...]]) -> tuple[torch.Tensor, torch.Tensor]:
        """Embed a batch of token sequences.

        Returns (embeddings of shape (B, T, dim), lengths of shape (B,)).
        Novel tokens are spliced in functionally so gradients only reach
        the trained table.
        """
        lengths = torch.tensor([len(seq) for seq in batch], dtype=torch.long)
        max_len = int(lengths.max())
        ids = torch.zeros((len(batch), max_len), dtype=torch.long)
        novel_positions: list[tuple[int, int]] = []
        novel_vectors: list[torch.Tensor] = []
        for b, seq in enumerate(batch):
            for t, token in enumerate(seq):
                token_id = self.token_to_id.get(token)
                if token_id is not None:
                    ids[b, t] = token_id
                else:
                    novel_positions.append((b, t))
                    novel_vectors.append(self.novel(token))
        embedded = self.trained(ids)
        if novel_positions:
            rows = torch.tensor([p[0] for p in novel_positions])
            cols = torch.tensor([p[1] for p in novel_positions])
            embedded = embedded.index_put((rows, cols), torch.stack(novel_vectors))
        return embedded, lengths

    def novel_snapshot(self) -> dict[str, torch.Tensor]:
        return {token: vector.clone() for token, vector in self._novel.items()}
