import numpy as np
import pytest

from dataset import TimeSeriesDataset


def sinusoid_dataset(n_per_class=3, length=32, noise=0.05, seed=0):
    """Two classes: a slow sine and a fast sine, randomly phased"""
    rng = np.random.default_rng(seed)
    t = np.arange(length)
    rows, labels = [], []
    for label, period in enumerate((16.0, 6.0)):
        for _ in range(n_per_class):
            phase = rng.uniform(0, 2 * np.pi)
            rows.append(np.sin(2 * np.pi * t / period + phase) + noise * rng.standard_normal(length))
            labels.append(label)
    return TimeSeriesDataset(values=np.array(rows), labels=np.array(labels), name="toy")


@pytest.fixture
def toy_dataset():
    return sinusoid_dataset()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def write_ucr_text(tmp_path):
    """Write raw text to a file under tmp_path and return its path"""

    def write(text, name="data.txt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


@pytest.fixture
def toy_ucr_files(tmp_path):
    """Train and test UCR files of the toy sinusoid problem"""
    from dataset import write_ucr

    train_path = tmp_path / "Toy_TRAIN.txt"
    test_path = tmp_path / "Toy_TEST.txt"
    write_ucr(sinusoid_dataset(n_per_class=3, seed=1), train_path)
    write_ucr(sinusoid_dataset(n_per_class=3, seed=2), test_path)
    return train_path, test_path
