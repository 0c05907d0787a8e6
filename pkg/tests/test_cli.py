import json
from pathlib import Path

import pytest

from sysnli.cli import main
from sysnli import io as bundle_io


@pytest.fixture(scope="module")
def bundle_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bundles") / "mini7"
    code = main(["generate", "--condition", "mini", "--seed", "7", "--out", str(out)])
    assert code == 0
    return out


@pytest.fixture(scope="module")
def gold_file(bundle_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("preds") / "gold.jsonl"
    code = main([
        "gold-predictions",
        "--items", str(bundle_dir / "jabberwocky.jsonl"),
        "--out", str(out),
    ])
    assert code == 0
    return out


def _file_hashes(directory: Path) -> dict:
    out = {}
    for path in sorted(directory.iterdir()):
        if path.name == "manifest.json":
            continue
        out[path.name] = bundle_io.sha256_file(path)
    return out


def test_generate_writes_expected_files(bundle_dir):
    names = {p.name for p in bundle_dir.iterdir()}
    assert names == {
        "manifest.json", "config.json", "lexicon.json", "relation_table.json",
        "train.jsonl", "validation.jsonl", "holdout.jsonl", "jabberwocky.jsonl",
    }


def test_generate_is_deterministic(bundle_dir, tmp_path):
    again = tmp_path / "again"
    assert main(["generate", "--condition", "mini", "--seed", "7", "--out", str(again)]) == 0
    assert _file_hashes(bundle_dir) == _file_hashes(again)
    one = bundle_io.read_json(bundle_dir / "manifest.json")
    two = bundle_io.read_json(again / "manifest.json")
    one.pop("created_at"), two.pop("created_at")
    assert one == two


def test_manifest_lists_files_with_content_hashes(bundle_dir):
    manifest = bundle_io.read_json(bundle_dir / "manifest.json")
    for name, digest in manifest["files"].items():
        assert bundle_io.sha256_file(bundle_dir / name) == digest
    assert manifest["seed"] == 7
    assert manifest["counts"]["train"] > 0


def test_bundle_round_trips_through_load(bundle_dir):
    bundle = bundle_io.load_bundle(bundle_dir)
    assert bundle.config.condition == "mini"
    assert set(bundle.splits) == {"train", "validation", "holdout", "jabberwocky"}
    assert bundle.table is not None
    item = bundle.splits["train"][0]
    assert item.gold is not None


def test_plan_mode_declares_condition_shapes(tmp_path):
    small = tmp_path / "small"
    assert main(["generate", "--condition", "small", "--seed", "1",
                 "--out", str(small), "--plan"]) == 0
    manifest = bundle_io.read_json(small / "manifest.json")
    assert manifest["plan"] is True
    assert len(manifest["blocks"]["training"]) == 20
    assert len(manifest["blocks"]["jabberwocky"]) == 20

    large = tmp_path / "large"
    assert main(["generate", "--condition", "large", "--seed", "1",
                 "--out", str(large), "--plan"]) == 0
    manifest = bundle_io.read_json(large / "manifest.json")
    assert len(manifest["blocks"]["training"]) == 185
    assert len(manifest["blocks"]["jabberwocky"]) == 20


def test_generate_rejects_bad_config(tmp_path):
    code = main(["generate", "--condition", "mini", "--validation-fraction", "1.5",
                 "--out", str(tmp_path / "x")])
    assert code == 2


def test_validate_oracle_passes(tmp_path):
    assert main(["validate-oracle", "--pairs", "300", "--seed", "1"]) == 0


def test_validate_oracle_detects_corrupted_table(bundle_dir, tmp_path, capsys):
    data = bundle_io.read_json(bundle_dir / "relation_table.json")
    key = sorted(data["entries"])[17]
    data["entries"][key] = "cover" if data["entries"][key] != "cover" else "negation"
    corrupted = tmp_path / "bad_table.json"
    corrupted.write_text(json.dumps(data))
    code = main(["validate-oracle", "--pairs", "10", "--table", str(corrupted)])
    captured = capsys.readouterr()
    assert code == 1
    assert key in captured.out


def test_probe_identical_needs_no_predictions(bundle_dir, tmp_path):
    out = tmp_path / "identical.jsonl"
    assert main(["probe", "identical-open-class", "--bundle", str(bundle_dir),
                 "--out", str(out)]) == 0
    records = bundle_io.read_jsonl(out)
    assert records
    assert {r["probe"] for r in records} == {"identical_open_class"}


def test_probe_perturbation_requires_predictions(bundle_dir, tmp_path):
    code = main(["probe", "perturbation", "--bundle", str(bundle_dir),
                 "--out", str(tmp_path / "x.jsonl")])
    assert code == 2


def test_probe_and_score_workflow(bundle_dir, gold_file, tmp_path):
    perturbation = tmp_path / "perturbation.jsonl"
    assert main(["probe", "perturbation", "--bundle", str(bundle_dir),
                 "--predictions", str(gold_file), "--out", str(perturbation)]) == 0
    reports = tmp_path / "reports"
    assert main(["score", "--probe", str(perturbation),
                 "--predictions", str(gold_file), "--out-dir", str(reports)]) == 0
    aggregates = (reports / "aggregates.csv").read_text().splitlines()
    assert aggregates[0] == "group_key,mean_accuracy,sd_accuracy,n_blocks"
    # gold as predictions: every perturbation type row scores 1.0 exactly
    for line in aggregates[1:]:
        group, mean, sd, _ = line.split(",")
        assert float(mean) == 1.0 and float(sd) == 0.0
        assert ">" in group
    # one aggregate row per distinct perturbation type in the probe file
    distinct_types = {r["group_key"] for r in bundle_io.read_jsonl(perturbation)}
    assert len(aggregates) - 1 == len(distinct_types)


def test_probe_consistency_and_rate(bundle_dir, gold_file, tmp_path, capsys):
    consistency = tmp_path / "consistency.jsonl"
    assert main(["probe", "consistency", "--bundle", str(bundle_dir),
                 "--predictions", str(gold_file), "--out", str(consistency)]) == 0
    assert main(["score", "--probe", str(consistency),
                 "--predictions", str(gold_file)]) == 0
    out = capsys.readouterr().out
    assert "100.00 (0.00)" in out


def test_score_items_with_gold(bundle_dir, tmp_path, capsys):
    holdout_preds = tmp_path / "holdout_gold.jsonl"
    assert main(["gold-predictions", "--items", str(bundle_dir / "holdout.jsonl"),
                 "--out", str(holdout_preds)]) == 0
    assert main(["score", "--items", str(bundle_dir / "holdout.jsonl"),
                 "--predictions", str(holdout_preds), "--grouping", "by_relation"]) == 0
    out = capsys.readouterr().out
    assert "100.00 (0.00)" in out


def test_score_strict_join_failure(bundle_dir, gold_file):
    # jabberwocky gold predictions scored against the holdout items:
    # every id is unknown, which is a join error without --lenient-join
    code = main(["score", "--items", str(bundle_dir / "holdout.jsonl"),
                 "--predictions", str(gold_file)])
    assert code == 1


def test_cli_usage_error_exit_code():
    assert main(["score"]) == 2
    assert main(["not-a-command"]) == 2
