"""
Dataset module for ShapeletBoard
Handles UCR-format files and the per-series preprocessing
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view

from config import PREPROCESS_MODES, ZNORM_EPS
from errors import ConfigError, DataError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TimeSeriesDataset:
    """N univariate series of equal length, with optional integer labels"""

    values: np.ndarray
    labels: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise DataError(f"expected an N x Q matrix, got shape {values.shape}")
        if values.shape[0] > 0 and values.shape[1] < 2:
            raise DataError(f"series length must be at least 2, got {values.shape[1]}")
        if not np.all(np.isfinite(values)):
            raise DataError("series contain non-finite values")
        object.__setattr__(self, "values", values)

        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (values.shape[0],):
                raise DataError(
                    f"label vector has length {labels.size}, expected {values.shape[0]}"
                )
            object.__setattr__(self, "labels", labels)

    @property
    def n_samples(self):
        return self.values.shape[0]

    @property
    def series_length(self):
        return self.values.shape[1]

    @property
    def n_classes(self):
        if self.labels is None:
            return 0
        return int(np.unique(self.labels).size)

    @property
    def has_labels(self):
        return self.labels is not None


@dataclass(frozen=True)
class WindowSet:
    """
    All length-M sliding windows of every series, shaped N x J x M.

    ``spectrum`` optionally caches the FFT of the unit-normalized windows;
    see similarity.with_spectrum.
    """

    windows: np.ndarray
    spectrum: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    @property
    def window_length(self):
        return self.windows.shape[2]

    @property
    def windows_per_series(self):
        return self.windows.shape[1]

    @property
    def n_samples(self):
        return self.windows.shape[0]


@dataclass(frozen=True)
class DatasetSummary:
    """Size, length and class statistics of a train/test pair"""

    name: str
    n_train: int
    n_test: int
    series_length: int
    n_classes: int
    class_counts: dict = field(default_factory=dict)

    @property
    def n_total(self):
        return self.n_train + self.n_test

    def counts_text(self):
        """Per-class sizes as "label:count" pairs, "-" without labels"""
        return " ".join(f"{label}:{size}" for label, size in sorted(self.class_counts.items())) or "-"

    def to_dict(self):
        return {**asdict(self), "n_total": self.n_total}


def _separator(delimiter):
    if delimiter in (None, "", "whitespace"):
        return r"\s+"
    if delimiter in ("\\t", "tab"):
        return "\t"
    return delimiter


def _parse_labels(column, path):
    """Labels may be stored as floats ("1.0"); they must still be integral"""
    try:
        labels = pd.to_numeric(column, errors="raise").to_numpy(dtype=float)
    except (ValueError, TypeError) as e:
        raise DataError(f"{path}: non-numeric label: {e}") from e
    if not np.all(np.isfinite(labels)) or not np.all(labels == np.round(labels)):
        raise DataError(f"{path}: labels must be integers")
    return labels.astype(np.int64)


def load_ucr(path, delimiter=","):
    """Load a UCR file: one series per line, class label first"""
    sep = _separator(delimiter)
    try:
        frame = pd.read_csv(
            path,
            sep=sep,
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError as e:
        raise DataError(f"{path}: empty file") from e
    except pd.errors.ParserError as e:
        raise DataError(f"{path}: ragged rows: {e}") from e
    except OSError as e:
        raise DataError(f"{path}: {e}") from e

    if frame.empty:
        raise DataError(f"{path}: empty file")
    if frame.shape[1] < 3:
        raise DataError(f"{path}: each row needs a label and at least 2 values")
    # Shorter rows are padded with NaN by the parser
    if frame.isna().to_numpy().any() or (frame == "").to_numpy().any():
        raise DataError(f"{path}: ragged rows or missing values")

    labels = _parse_labels(frame.iloc[:, 0], path)
    try:
        values = frame.iloc[:, 1:].apply(pd.to_numeric, errors="raise").to_numpy(dtype=float)
    except (ValueError, TypeError) as e:
        raise DataError(f"{path}: non-numeric value: {e}") from e

    dataset = TimeSeriesDataset(values=values, labels=labels, name=str(path))
    logger.info(
        "Loaded %s: N=%d Q=%d C=%d",
        path,
        dataset.n_samples,
        dataset.series_length,
        dataset.n_classes,
    )
    return dataset


def write_ucr(dataset, path, delimiter=","):
    """Write a labelled dataset in UCR format"""
    if not dataset.has_labels:
        raise DataError("cannot write UCR format without labels")
    frame = pd.DataFrame(dataset.values)
    frame.insert(0, "label", dataset.labels)
    frame.to_csv(path, sep=_separator(delimiter).replace(r"\s+", " "), header=False, index=False)


def merge(train, test):
    """Row-concatenate a train and a test split"""
    if test.n_samples == 0:
        return train
    if train.n_samples == 0:
        return test
    if train.series_length != test.series_length:
        raise DataError(
            f"series lengths differ: {train.series_length} vs {test.series_length}"
        )
    if train.has_labels != test.has_labels:
        raise DataError("cannot merge a labelled split with an unlabelled one")

    labels = None
    if train.has_labels:
        unseen = np.setdiff1d(np.unique(test.labels), np.unique(train.labels))
        if unseen.size:
            logger.warning("Test split has labels absent from train: %s", unseen.tolist())
        labels = np.concatenate([train.labels, test.labels])

    return TimeSeriesDataset(
        values=np.vstack([train.values, test.values]),
        labels=labels,
        name=train.name,
    )


def znormalize(series):
    """Zero mean, unit population std along the last axis; flat input maps to zeros"""
    x = np.asarray(series, dtype=float)
    mean = x.mean(axis=-1, keepdims=True)
    std = x.std(axis=-1, keepdims=True)
    flat = std < ZNORM_EPS
    return np.where(flat, 0.0, (x - mean) / np.where(flat, 1.0, std))


def minmax_normalize(series):
    """Affine map onto [0, 1] along the last axis; flat input maps to zeros"""
    x = np.asarray(series, dtype=float)
    low = x.min(axis=-1, keepdims=True)
    span = x.max(axis=-1, keepdims=True) - low
    flat = span <= 0
    return np.where(flat, 0.0, (x - low) / np.where(flat, 1.0, span))


def preprocess(dataset, mode):
    """Apply a per-series preprocessing mode"""
    if mode not in PREPROCESS_MODES:
        raise ConfigError(f"unknown preprocessing mode {mode!r}")
    if mode == "none" or dataset.n_samples == 0:
        return dataset
    normalize = znormalize if mode == "zscore" else minmax_normalize
    return TimeSeriesDataset(
        values=normalize(dataset.values), labels=dataset.labels, name=dataset.name
    )


def slide_windows(dataset, window_length):
    """Every contiguous length-M slice of every series"""
    q = dataset.series_length
    if not 2 <= window_length <= q:
        raise ConfigError(f"window length must be in [2, {q}], got {window_length}")
    windows = sliding_window_view(dataset.values, window_length, axis=1)
    return WindowSet(windows=np.ascontiguousarray(windows))


def describe(train, test=None, name=""):
    """Dataset statistics for a train split and an optional test split"""
    test = test if test is not None else TimeSeriesDataset(np.empty((0, 0)))
    combined = merge(train, test)
    counts = {}
    if combined.has_labels:
        classes, sizes = np.unique(combined.labels, return_counts=True)
        counts = {int(c): int(s) for c, s in zip(classes, sizes)}
    return DatasetSummary(
        name=name or train.name,
        n_train=train.n_samples,
        n_test=test.n_samples,
        series_length=combined.series_length,
        n_classes=combined.n_classes,
        class_counts=counts,
    )
