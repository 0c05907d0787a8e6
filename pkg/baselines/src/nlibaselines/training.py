"""Training loop with early stopping on validation accuracy."""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import torch
from torch import nn

from .data import Example
from .model import EncoderConfig, PairClassifier


@dataclass
class TrainSettings:
    epochs: int = 20
    patience: int = 3
    batch_size: int = 128
    learning_rate: float = 1e-3
    lr_decay_every: int = 3
    lr_decay: float = 0.7
    weight_decay: float = 1e-5
    # exponent on inverse class frequency for the loss weights; 0 means
    # unweighted. The relation distribution is heavily skewed, so some
    # counterweight is needed before minority relations train at all.
    class_weighting: float = 0.5

    def to_json(self) -> dict:
        return dict(self.__dict__)


def class_weights(labels: Sequence[int], n_classes: int, exponent: float,
                  cap: float = 20.0) -> torch.Tensor:
    counts = torch.bincount(torch.tensor(labels), minlength=n_classes).float()
    weights = (len(labels) / (n_classes * counts.clamp(min=1.0))) ** exponent
    weights = weights.clamp(max=cap)
    return weights * n_classes / weights.sum()


@dataclass
class TrainResult:
    model: PairClassifier
    history: list[dict] = field(default_factory=list)
    best_epoch: int = -1
    best_validation_accuracy: float = 0.0

    def write_log(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as handle:
            writer = csv.DictWriter(
                handle, fieldnames=["epoch", "train_loss", "train_accuracy",
                                    "validation_accuracy", "learning_rate"]
            )
            writer.writeheader()
            writer.writerows(self.history)


def _batches(examples: Sequence[Example], batch_size: int, rng: random.Random | None):
    order = list(range(len(examples)))
    if rng is not None:
        rng.shuffle(order)
    for start in range(0, len(order), batch_size):
        yield [examples[i] for i in order[start : start + batch_size]]


@torch.no_grad()
def predict_labels(model: PairClassifier, examples: Sequence[Example],
                   batch_size: int = 256) -> list[int]:
    model.eval()
    out: list[int] = []
    for batch in _batches(examples, batch_size, rng=None):
        logits = model([e.premise for e in batch], [e.hypothesis for e in batch])
        out.extend(logits.argmax(dim=1).tolist())
    return out


def accuracy(model: PairClassifier, examples: Sequence[Example]) -> float:
    predicted = predict_labels(model, examples)
    correct = sum(1 for e, p in zip(examples, predicted) if e.label == p)
    return correct / len(examples)


def train_model(
    train_examples: Sequence[Example],
    validation_examples: Sequence[Example],
    config: EncoderConfig,
    settings: TrainSettings | None = None,
    vocabulary: list[str] | None = None,
    model: PairClassifier | None = None,
    verbose: bool = False,
) -> TrainResult:
    """Cross-entropy training with step-decayed Adam and early stopping.

    The best validation state is restored before returning.  Novel-word
    embeddings live outside the optimizer entirely, so freezing is
    structural rather than masked.  Passing an existing ``model``
    continues training it (same architecture expected).
    """
    from .data import training_vocabulary

    settings = settings or TrainSettings()
    torch.manual_seed(config.seed)
    if model is None:
        vocabulary = vocabulary or training_vocabulary(
            list(train_examples) + list(validation_examples)
        )
        model = PairClassifier(config, vocabulary)
    optimizer = torch.optim.Adam(
        model.parameters(), lr=settings.learning_rate,
        weight_decay=settings.weight_decay,
    )
    scheduler = torch.optim.lr_scheduler.StepLR(
        optimizer, step_size=settings.lr_decay_every, gamma=settings.lr_decay
    )
    if settings.class_weighting > 0:
        from .data import RELATION_NAMES

        weights = class_weights(
            [e.label for e in train_examples], len(RELATION_NAMES),
            settings.class_weighting,
        )
        loss_fn = nn.CrossEntropyLoss(weight=weights)
    else:
        loss_fn = nn.CrossEntropyLoss()
    shuffle_rng = random.Random(config.seed)

    result = TrainResult(model=model)
    best_state = None
    epochs_since_best = 0
    for epoch in range(settings.epochs):
        model.train()
        total_loss = 0.0
        total_correct = 0
        for batch in _batches(train_examples, settings.batch_size, shuffle_rng):
            optimizer.zero_grad()
            logits = model([e.premise for e in batch], [e.hypothesis for e in batch])
            labels = torch.tensor([e.label for e in batch], dtype=torch.long)
            loss = loss_fn(logits, labels)
            if not math.isfinite(loss.item()):
                raise RuntimeError(f"training diverged at epoch {epoch}: loss={loss.item()}")
            loss.backward()
            optimizer.step()
            total_loss += loss.item() * len(batch)
            total_correct += (logits.argmax(dim=1) == labels).sum().item()
        scheduler.step()

        validation_accuracy = accuracy(model, validation_examples)
        result.history.append(
            {
                "epoch": epoch,
                "train_loss": total_loss / len(train_examples),
                "train_accuracy": total_correct / len(train_examples),
                "validation_accuracy": validation_accuracy,
                "learning_rate": scheduler.get_last_lr()[0],
            }
        )
        if verbose:
            print(
                f"epoch {epoch}: loss {result.history[-1]['train_loss']:.4f} "
                f"train {result.history[-1]['train_accuracy']:.4f} "
                f"val {validation_accuracy:.4f}",
                flush=True,
            )
        if validation_accuracy > result.best_validation_accuracy:
            result.best_validation_accuracy = validation_accuracy
            result.best_epoch = epoch
            best_state = {k: v.clone() for k, v in model.state_dict().items()}
            epochs_since_best = 0
        else:
            epochs_since_best += 1
            if epochs_since_best > settings.patience:
                break

    if best_state is not None:
        model.load_state_dict(best_state)
    model.eval()
    return result
