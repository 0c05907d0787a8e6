"""The four sentence encoders.

* BGRU: bidirectional GRU; the sentence vector concatenates the final
  hidden state of each direction.
* INFS: bidirectional LSTM with max pooling; each word is the
  concatenation of its forward and backward states and the sentence
  vector takes the maximum over words on every dimension.
* SATT: self-attentive encoder; attention weights over BiLSTM states
  come from a learned context query against a tanh-transformed state,
  with several independent views concatenated.
* CONV: hierarchical convolutions; each of the four layers contributes
  a max-pooled intermediate vector and the sentence vector concatenates
  them.

All encoders consume padded (B, T, emb) batches with lengths and mask
padding out of every pooling or final-state computation.
"""

from __future__ import annotations

import torch
from torch import nn
from torch.nn import functional as F


def _length_mask(lengths: torch.Tensor, max_len: int) -> torch.Tensor:
    return torch.arange(max_len)[None, :] < lengths[:, None]


def _run_padded(rnn: nn.Module, embedded: torch.Tensor, lengths: torch.Tensor):
    """Run an RNN over padded input without letting pads touch any state."""
    packed = nn.utils.rnn.pack_padded_sequence(
        embedded, lengths, batch_first=True, enforce_sorted=False
    )
    output, final = rnn(packed)
    padded = nn.utils.rnn.pad_packed_sequence(
        output, batch_first=True, total_length=embedded.shape[1]
    )[0]
    return padded, final


class BGRUEncoder(nn.Module):
    def __init__(self, embedding_dim: int, hidden_dim: int):
        super().__init__()
        self.rnn = nn.GRU(embedding_dim, hidden_dim, batch_first=True, bidirectional=True)
        self.output_dim = 2 * hidden_dim

    def forward(self, embedded: torch.Tensor, lengths: torch.Tensor) -> torch.Tensor:
        final = _run_padded(self.rnn, embedded, lengths)[1]  # (2, B, h)
        return torch.cat([final[0], final[1]], dim=1)


class MaxPoolLSTMEncoder(nn.Module):
    def __init__(self, embedding_dim: int, hidden_dim: int):
        super().__init__()
        self.rnn = nn.LSTM(embedding_dim, hidden_dim, batch_first=True, bidirectional=True)
        self.output_dim = 2 * hidden_dim

    def forward(self, embedded: torch.Tensor, lengths: torch.Tensor) -> torch.Tensor:
        hidden = _run_padded(self.rnn, embedded, lengths)[0]
        mask = _length_mask(lengths, embedded.shape[1])
        hidden = hidden.masked_fill(~mask[:, :, None], float("-inf"))
        return hidden.max(dim=1).values


class SelfAttentiveEncoder(nn.Module):
    def __init__(self, embedding_dim: int, hidden_dim: int, views: int = 4,
                 attention_dim: int | None = None):
        super().__init__()
        self.rnn = nn.LSTM(embedding_dim, hidden_dim, batch_first=True, bidirectional=True)
        attention_dim = attention_dim or hidden_dim
        self.transform = nn.Linear(2 * hidden_dim, attention_dim)
        self.context = nn.Linear(attention_dim, views, bias=False)
        self.views = views
        self.output_dim = views * 2 * hidden_dim

    def attention(self, embedded: torch.Tensor, lengths: torch.Tensor):
        hidden = _run_padded(self.rnn, embedded, lengths)[0]        # (B, T, 2h)
        scores = self.context(torch.tanh(self.transform(hidden)))  # (B, T, views)
        mask = _length_mask(lengths, embedded.shape[1])
        scores = scores.masked_fill(~mask[:, :, None], float("-inf"))
        weights = F.softmax(scores, dim=1)
        return hidden, weights

    def forward(self, embedded: torch.Tensor, lengths: torch.Tensor) -> torch.Tensor:
        hidden, weights = self.attention(embedded, lengths)
        pooled = torch.einsum("btv,bth->bvh", weights, hidden)
        return pooled.reshape(embedded.shape[0], self.output_dim)


class HierarchicalConvEncoder(nn.Module):
    def __init__(self, embedding_dim: int, hidden_dim: int, layers: int = 4,
                 kernel_size: int = 3):
        super().__init__()
        if layers < 1:
            raise ValueError("need at least one convolution layer")
        channels = [embedding_dim] + [hidden_dim] * layers
        self.convs = nn.ModuleList(
            nn.Conv1d(channels[i], channels[i + 1], kernel_size, padding=kernel_size // 2)
            for i in range(layers)
        )
        self.output_dim = layers * hidden_dim

    def forward(self, embedded: torch.Tensor, lengths: torch.Tensor) -> torch.Tensor:
        mask = _length_mask(lengths, embedded.shape[1])[:, None, :]
        state = embedded.transpose(1, 2)                     # (B, emb, T)
        pooled = []
        for conv in self.convs:
            # zero pads before each layer so receptive fields see the
            # same zero boundary an unpadded sentence would
            state = torch.relu(conv(state * mask))
            pooled.append(state.masked_fill(~mask, float("-inf")).max(dim=2).values)
        return torch.cat(pooled, dim=1)


ARCHITECTURES = {
    "BGRU": BGRUEncoder,
    "INFS": MaxPoolLSTMEncoder,
    "SATT": SelfAttentiveEncoder,
    "CONV": HierarchicalConvEncoder,
}


def build_encoder(architecture: str, embedding_dim: int, hidden_dim: int, **kwargs) -> nn.Module:
    try:
        factory = ARCHITECTURES[architecture.upper()]
    except KeyError:
        raise ValueError(f"unknown architecture {architecture!r}; "
                         f"choose from {sorted(ARCHITECTURES)}") from None
    return factory(embedding_dim, hidden_dim, **kwargs)
