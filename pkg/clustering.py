"""
Clustering module for ShapeletBoard
Feature transform, K-means clustering and Rand Index evaluation
"""

import logging
from dataclasses import asdict, dataclass

import numpy as np
from sklearn.cluster import KMeans

from artifacts import read_json, write_json
from config import DEFAULT_RESTARTS, DEFAULT_SEED, FEATURE_KINDS, REPORT_VERSION
from dataset import preprocess, slide_windows
from embedding import t_membership
from errors import ConfigError, DataError
from similarity import FeatureMatrix, ShapeletBank, distance_tensor, min_pool

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Partition:
    assignments: np.ndarray
    n_clusters: int

    def __post_init__(self):
        assignments = np.asarray(self.assignments, dtype=np.int64)
        if assignments.ndim != 1:
            raise ValueError("assignments must be a vector")
        if assignments.size and (assignments.min() < 0 or assignments.max() >= self.n_clusters):
            raise ValueError(f"assignments must lie in [0, {self.n_clusters})")
        object.__setattr__(self, "assignments", assignments)

    @classmethod
    def from_labels(cls, labels):
        """Partition from arbitrary integer labels, renumbered 0..C-1"""
        _, assignments = np.unique(np.asarray(labels), return_inverse=True)
        return cls(assignments=assignments, n_clusters=int(assignments.max(initial=-1)) + 1)

    @property
    def n_samples(self):
        return self.assignments.size


@dataclass(frozen=True)
class EvalReport:
    rand_index: float
    n_samples: int
    n_clusters: int
    feature_kind: str
    seed: int
    restarts: int = DEFAULT_RESTARTS

    def to_dict(self):
        return {"version": REPORT_VERSION, **asdict(self)}

    @classmethod
    def from_dict(cls, data):
        if data.get("version") != REPORT_VERSION:
            raise DataError(f"unsupported report version {data.get('version')!r}")
        fields = {k: v for k, v in data.items() if k != "version"}
        try:
            return cls(**fields)
        except TypeError as e:
            raise DataError(f"malformed report document: {e}") from e


def save_report(report, path):
    write_json(path, report.to_dict())


def load_report(path):
    return EvalReport.from_dict(read_json(path, version=REPORT_VERSION))


def transform(model, dataset, n_threads=1):
    """Min-pooled NCC distances of every series to every (trimmed) shapelet"""
    bank = model.bank
    data = preprocess(dataset, model.config.preprocess)
    longest = int(bank.lengths.max())
    if data.series_length < longest:
        raise DataError(
            f"series of length {data.series_length} are shorter than a shapelet ({longest})"
        )

    f = np.empty((data.n_samples, bank.count))
    argmin = np.empty((data.n_samples, bank.count), dtype=np.int64)
    for length, index, shapelets in bank.groups_by_length():
        windows = slide_windows(data, length)
        pooled = min_pool(distance_tensor(ShapeletBank(shapelets), windows, n_threads=n_threads))
        f[:, index] = pooled.f
        argmin[:, index] = pooled.argmin_window
    return FeatureMatrix(f=f, argmin_window=argmin)


def kmeans_cluster(features, n_clusters, seed=DEFAULT_SEED, restarts=DEFAULT_RESTARTS):
    """Lloyd's K-means with k-means++ seeding, best inertia over restarts"""
    x = np.asarray(features.f if hasattr(features, "f") else features, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"expected an N x P feature matrix, got shape {x.shape}")
    if restarts < 1:
        raise ConfigError(f"restarts must be >= 1, got {restarts}")
    if not 1 <= n_clusters <= x.shape[0]:
        raise ConfigError(f"cannot form {n_clusters} clusters from {x.shape[0]} samples")
    kmeans = KMeans(
        n_clusters=n_clusters,
        init="k-means++",
        n_init=restarts,
        random_state=seed,
        algorithm="lloyd",
    )
    assignments = kmeans.fit_predict(x)
    logger.debug("K-means C=%d inertia=%.6g", n_clusters, kmeans.inertia_)
    return Partition(assignments=assignments, n_clusters=n_clusters)


def _assignments(partition):
    if isinstance(partition, Partition):
        return partition.assignments
    return np.asarray(partition)


def rand_index(pred, truth):
    """Fraction of sample pairs on which the two partitions agree"""
    a = _assignments(pred)
    b = _assignments(truth)
    if a.shape != b.shape:
        raise ValueError(f"partitions cover {a.size} and {b.size} samples")
    n = a.size
    if n < 2:
        raise ValueError("Rand Index needs at least 2 samples")
    upper = np.triu_indices(n, k=1)
    same_a = (a[:, None] == a[None, :])[upper]
    same_b = (b[:, None] == b[None, :])[upper]
    agreements = int(np.count_nonzero(same_a == same_b))
    return agreements / (n * (n - 1) // 2)


def select_features(dataset, model, feature_kind, n_threads=1):
    """N x P features for a feature kind: raw series, distances F, memberships q"""
    if feature_kind not in FEATURE_KINDS:
        raise ConfigError(f"feature kind must be one of {FEATURE_KINDS}, got {feature_kind!r}")
    if feature_kind == "raw":
        return dataset.values
    if model is None:
        raise ConfigError(f"a trained model is required for {feature_kind!r} features")
    features = transform(model, dataset, n_threads=n_threads)
    if feature_kind == "F":
        return features.f
    return t_membership(features, model.config.alpha).q


def evaluate_pipeline(
    dataset,
    model=None,
    feature_kind="F",
    seed=DEFAULT_SEED,
    restarts=DEFAULT_RESTARTS,
    n_threads=1,
):
    """Cluster one feature kind with C = number of classes and score it"""
    if not dataset.has_labels:
        raise DataError("evaluation needs labelled data")
    features = select_features(dataset, model, feature_kind, n_threads=n_threads)
    truth = Partition.from_labels(dataset.labels)
    pred = kmeans_cluster(features, truth.n_clusters, seed=seed, restarts=restarts)
    score = rand_index(pred, truth)
    logger.info("Rand Index %.4f on %s features (seed %d)", score, feature_kind, seed)
    return EvalReport(
        rand_index=score,
        n_samples=dataset.n_samples,
        n_clusters=truth.n_clusters,
        feature_kind=feature_kind,
        seed=seed,
        restarts=restarts,
    )
