"""
Reproduction checks on UCR datasets.

Set SHAPELET_UCR_DIR to a directory holding <Name>_TRAIN/<Name>_TEST files
(.tsv tab-separated or .txt comma-separated) and run ``pytest -m benchmark``.
"""

import os
from pathlib import Path

import pytest

from clustering import evaluate_pipeline
from dataset import load_ucr, merge
from training import TrainConfig, train

pytestmark = pytest.mark.benchmark

UCR_DIR = os.environ.get("SHAPELET_UCR_DIR")
SEEDS = (0, 1, 2, 3, 4)


def load_split(name, split):
    root = Path(UCR_DIR)
    for suffix, delimiter in ((".tsv", "tab"), (".txt", ",")):
        for path in (root / f"{name}_{split}{suffix}", root / name / f"{name}_{split}{suffix}"):
            if path.exists():
                return load_ucr(path, delimiter)
    pytest.skip(f"{name}_{split} not found under {UCR_DIR}")


@pytest.fixture(scope="module", params=[("CBF", 48, 0.85, 0.74), ("ECG200", 24, 0.63, 0.6)], ids=["CBF", "ECG200"])
def reproduction(request):
    if not UCR_DIR:
        pytest.skip("SHAPELET_UCR_DIR is not set")
    name, length, target, raw_reference = request.param
    train_split = load_split(name, "TRAIN")
    dataset = merge(train_split, load_split(name, "TEST"))

    raw = evaluate_pipeline(dataset, None, "raw", seed=SEEDS[0]).rand_index
    best = max(
        evaluate_pipeline(
            dataset,
            train(dataset, TrainConfig(shapelet_length=length, seed=seed), n_train=train_split.n_samples),
            "F",
            seed=seed,
        ).rand_index
        for seed in SEEDS
    )
    return {"raw": raw, "best": best, "target": target, "raw_reference": raw_reference}


def test_learned_features_reach_target(reproduction):
    assert reproduction["best"] >= reproduction["target"]


def test_raw_baseline_is_close_to_reference(reproduction):
    assert abs(reproduction["raw"] - reproduction["raw_reference"]) <= 0.08


def test_learned_features_beat_raw_series(reproduction):
    assert reproduction["best"] > reproduction["raw"]
