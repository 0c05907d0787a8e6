"""Command line: train a baseline on a bundle, predict, analyze.

    nli-baselines train   --arch BGRU --condition-dir bundle/ --out-dir runs/bgru
    nli-baselines predict --model runs/bgru/model.pt --items bundle/jabberwocky.jsonl --out preds.jsonl
    nli-baselines analyze --model runs/bgru/model.pt --items bundle/jabberwocky.jsonl
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import torch

from . import __version__
from .analysis import embedding_analysis
from .data import bundle_splits, load_split, training_vocabulary, write_predictions
from .encoders import ARCHITECTURES
from .model import EncoderConfig, PairClassifier
from .training import TrainSettings, accuracy, predict_labels, train_model


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nli-baselines", description=__doc__)
    parser.add_argument("--version", action="version", version=f"nli-baselines {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train one architecture on a bundle")
    train.add_argument("--arch", required=True, choices=sorted(ARCHITECTURES))
    train.add_argument("--condition-dir", required=True)
    train.add_argument("--out-dir", required=True)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--epochs", type=int, default=20)
    train.add_argument("--patience", type=int, default=3)
    train.add_argument("--batch-size", type=int, default=128)
    train.add_argument("--embedding-dim", type=int, default=64)
    train.add_argument("--hidden-dim", type=int, default=128)
    train.add_argument("--dropout", type=float, default=0.1)
    train.add_argument("--learning-rate", type=float, default=1e-3)
    train.add_argument("--weight-decay", type=float, default=1e-5)
    train.add_argument("--lr-decay-every", type=int, default=3)
    train.add_argument("--class-weighting", type=float, default=0.5)
    train.add_argument("--predict-splits", default="holdout,jabberwocky",
                       help="comma list of splits to predict after training")

    predict = sub.add_parser("predict", help="predict an items file with a saved model")
    predict.add_argument("--model", required=True)
    predict.add_argument("--items", required=True)
    predict.add_argument("--out", required=True)

    analyze = sub.add_parser("analyze", help="embedding-distribution analysis")
    analyze.add_argument("--model", required=True)
    analyze.add_argument("--items", required=True,
                         help="novel-word items file (populates novel embeddings)")
    analyze.add_argument("--projection-csv", default=None)
    return parser


def save_model(model: PairClassifier, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    torch.save(
        {
            "config": model.config.to_json(),
            "vocabulary": list(model.embeddings.token_to_id),
            "state_dict": model.state_dict(),
        },
        path,
    )


def load_model(path: str | Path) -> PairClassifier:
    payload = torch.load(path, weights_only=False)
    config_data = dict(payload["config"])
    config_data["classifier_hidden_dims"] = tuple(config_data["classifier_hidden_dims"])
    model = PairClassifier(EncoderConfig(**config_data), payload["vocabulary"])
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model


def _cmd_train(args) -> int:
    splits = bundle_splits(args.condition_dir)
    if "train" not in splits or "validation" not in splits:
        print("condition dir lacks train/validation files", file=sys.stderr)
        return 2
    config = EncoderConfig(
        architecture=args.arch,
        embedding_dim=args.embedding_dim,
        hidden_dim=args.hidden_dim,
        dropout=args.dropout,
        seed=args.seed,
    )
    settings = TrainSettings(epochs=args.epochs, patience=args.patience,
                             batch_size=args.batch_size,
                             learning_rate=args.learning_rate,
                             weight_decay=args.weight_decay,
                             lr_decay_every=args.lr_decay_every,
                             class_weighting=args.class_weighting)
    result = train_model(splits["train"], splits["validation"], config, settings,
                         verbose=True)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result.write_log(out_dir / "training_log.csv")
    save_model(result.model, out_dir / "model.pt")
    run_info = {
        "config": config.to_json(),
        "settings": settings.to_json(),
        "best_epoch": result.best_epoch,
        "best_validation_accuracy": result.best_validation_accuracy,
    }
    model_id = f"{args.arch.lower()}-s{args.seed}"
    for split in [s for s in args.predict_splits.split(",") if s]:
        if split not in splits:
            continue
        predicted = predict_labels(result.model, splits[split])
        write_predictions(out_dir / f"predictions_{split}.jsonl",
                          splits[split], predicted, model_id)
        run_info[f"{split}_accuracy"] = sum(
            1 for e, p in zip(splits[split], predicted) if e.label == p
        ) / len(splits[split])
    (out_dir / "run.json").write_text(json.dumps(run_info, indent=2, sort_keys=True) + "\n")

    print(f"{args.arch}: best validation accuracy "
          f"{result.best_validation_accuracy:.4f} (epoch {result.best_epoch})")
    for key, value in sorted(run_info.items()):
        if key.endswith("_accuracy") and isinstance(value, float):
            print(f"  {key}: {value:.4f}")
    return 0


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    items = load_split(args.items)
    predicted = predict_labels(model, items)
    model_id = f"{model.config.architecture.lower()}-s{model.config.seed}"
    write_predictions(args.out, items, predicted, model_id)
    print(f"wrote {len(items)} predictions to {args.out}")
    return 0


def _cmd_analyze(args) -> int:
    model = load_model(args.model)
    items = load_split(args.items)
    predict_labels(model, items)  # populates novel embeddings on first sight
    stats = embedding_analysis(model, projection_csv=args.projection_csv)
    for key, value in sorted(stats.items()):
        print(f"{key}: {value}")
    return 0


_HANDLERS = {"train": _cmd_train, "predict": _cmd_predict, "analyze": _cmd_analyze}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    return _HANDLERS[args.command](args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
