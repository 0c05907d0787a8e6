"""Embedding-distribution analysis: trained versus novel vectors.

Checks that never-updated novel vectors are statistically at home among
the trained ones: a resampling test on vector lengths and the mean and
standard deviation of pairwise cosine similarity between the two sets.
An optional 2-D projection (top two principal components) is emitted as
CSV rows for external plotting.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .model import PairClassifier


def _open_class_trained_vectors(model: PairClassifier, tokens: list[str] | None = None):
    table = model.embeddings
    names = tokens if tokens is not None else [
        t for t in table.token_to_id if t not in ("<pad>",)
    ]
    vectors = [table.trained.weight[table.token_to_id[t]].detach().numpy() for t in names]
    return names, np.array(vectors)


def length_resampling_pvalue(a: np.ndarray, b: np.ndarray, iterations: int = 10_000,
                             seed: int = 0) -> float:
    """Two-sided permutation test on mean vector length."""
    lengths_a = np.linalg.norm(a, axis=1)
    lengths_b = np.linalg.norm(b, axis=1)
    observed = abs(lengths_a.mean() - lengths_b.mean())
    pooled = np.concatenate([lengths_a, lengths_b])
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(iterations):
        rng.shuffle(pooled)
        diff = abs(pooled[: len(lengths_a)].mean() - pooled[len(lengths_a):].mean())
        if diff >= observed:
            hits += 1
    return (hits + 1) / (iterations + 1)


def pairwise_cosine_stats(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    a_unit = a / np.linalg.norm(a, axis=1, keepdims=True)
    b_unit = b / np.linalg.norm(b, axis=1, keepdims=True)
    cosines = a_unit @ b_unit.T
    return float(cosines.mean()), float(cosines.std())


def embedding_analysis(model: PairClassifier, trained_tokens: list[str] | None = None,
                       projection_csv: str | Path | None = None,
                       resampling_iterations: int = 10_000) -> dict:
    """Compare trained and novel embedding distributions.

    Requires at least one novel token (run prediction on a jabberwocky
    split first).  Returns the statistics dict; optionally writes the
    2-D projection CSV.
    """
    table = model.embeddings
    if not table.novel_tokens:
        raise ValueError("no novel embeddings yet; predict on novel-word items first")
    trained_names, trained = _open_class_trained_vectors(model, trained_tokens)
    novel_names = table.novel_tokens
    novel = np.array([table._novel[t].numpy() for t in novel_names])

    stats = {
        "n_trained": len(trained_names),
        "n_novel": len(novel_names),
        "trained_mean_length": float(np.linalg.norm(trained, axis=1).mean()),
        "novel_mean_length": float(np.linalg.norm(novel, axis=1).mean()),
        "length_resampling_pvalue": length_resampling_pvalue(
            trained, novel, iterations=resampling_iterations
        ),
    }
    stats["pairwise_cosine_mean"], stats["pairwise_cosine_sd"] = pairwise_cosine_stats(
        trained, novel
    )

    if projection_csv is not None:
        everything = np.vstack([trained, novel])
        centered = everything - everything.mean(axis=0)
        components = np.linalg.svd(centered, full_matrices=False)[2][:2]
        projected = centered @ components.T
        path = Path(projection_csv)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["token", "group", "x", "y"])
            groups = ["trained"] * len(trained_names) + ["novel"] * len(novel_names)
            for token, group, (x, y) in zip(trained_names + novel_names, groups, projected):
                writer.writerow([token, group, f"{x:.6f}", f"{y:.6f}"])
    return stats
