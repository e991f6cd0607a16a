from pathlib import Path

import pytest
from streamlit.testing.v1 import AppTest

from artifacts import write_json
from clustering import EvalReport, save_report
from config import MANIFEST_VERSION
from similarity import ShapeletBank
from training import TrainConfig, TrainedModel, save_model

APP = str(Path(__file__).resolve().parent.parent / "app.py")


@pytest.fixture
def runs_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("SHAPELET_RUNS_DIR", str(tmp_path))
    return tmp_path


def start():
    return AppTest.from_file(APP, default_timeout=30).run()


def test_empty_directory(runs_dir):
    at = start()
    assert not at.exception
    assert "No run manifests" in at.info[0].value


def test_missing_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("SHAPELET_RUNS_DIR", str(tmp_path / "nowhere"))
    at = start()
    assert "is not a directory" in at.error[0].value


def test_runs_and_model_pages(runs_dir):
    bank = ShapeletBank.from_shapelets([[0.5, -0.5, 1.0], [2.0, 1.0]], nominal_length=3)
    save_model(TrainedModel(bank=bank, config=TrainConfig(shapelet_length=3), stop_reason="max-iters"), runs_dir / "model.json")
    write_json(
        runs_dir / "model.manifest.json",
        {"version": MANIFEST_VERSION, "command": "train", "created_at": "2024-01-01T00:00:00+00:00", "outputs": ["model.json"]},
    )

    at = start()
    assert not at.exception
    assert at.metric[0].value == "1"

    at.selectbox[0].select_index(1).run()
    assert not at.exception
    assert at.metric[0].value == "2"
    assert at.metric[1].value == "3"


def test_evaluation_page(runs_dir):
    for seed, score in enumerate((0.5, 0.875)):
        report = EvalReport(rand_index=score, n_samples=8, n_clusters=2, feature_kind="F", seed=seed)
        save_report(report, runs_dir / f"report_{seed}.json")

    at = start()
    at.selectbox[0].select_index(2).run()
    assert not at.exception
    assert at.metric[0].value == "0.8750"
