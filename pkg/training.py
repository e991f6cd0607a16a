"""
Training module for ShapeletBoard
K-means shapelet initialization, gradient descent on the graph loss, and trimming
"""

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import List

import numpy as np
from sklearn.cluster import KMeans

from artifacts import read_json, write_json
from config import (
    DEFAULT_ALPHA,
    DEFAULT_BETA,
    DEFAULT_LAMBDA,
    DEFAULT_LEARNING_RATE,
    DEFAULT_MAX_ITERS,
    DEFAULT_PREPROCESS,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    DEFAULT_TRIM_EPSILON,
    KMEANS_INIT_MAX_ITER,
    KMEANS_INIT_TOL,
    MAX_BACKOFFS,
    MODEL_VERSION,
    PREPROCESS_MODES,
)
from dataset import preprocess, slide_windows, znormalize
from errors import ConfigError, DataError, DivergenceError
from objective import (
    LossBreakdown,
    gaussian_affinity,
    loss_and_gradient,
    median_pairwise,
    median_sigma,
)
from similarity import ShapeletBank, with_spectrum

logger = logging.getLogger(__name__)

COUNT_BASES = ("train", "all")


@dataclass(frozen=True)
class TrainConfig:
    """
    Training knobs. Zero means "resolve automatically" for shapelet_count,
    sigma_sq and sigma_shapelet_sq.
    """

    shapelet_length: int
    shapelet_count: int = 0
    alpha: float = DEFAULT_ALPHA
    lambda_: float = DEFAULT_LAMBDA
    beta: float = DEFAULT_BETA
    sigma_sq: float = 0.0
    sigma_shapelet_sq: float = 0.0
    learning_rate: float = DEFAULT_LEARNING_RATE
    max_iters: int = DEFAULT_MAX_ITERS
    tolerance: float = DEFAULT_TOLERANCE
    seed: int = DEFAULT_SEED
    preprocess: str = DEFAULT_PREPROCESS
    trim_epsilon: float = DEFAULT_TRIM_EPSILON
    backoff: bool = True
    count_basis: str = "train"

    def __post_init__(self):
        if self.shapelet_length < 2:
            raise ConfigError(f"shapelet length must be >= 2, got {self.shapelet_length}")
        if self.shapelet_count < 0:
            raise ConfigError(f"shapelet count must be >= 0, got {self.shapelet_count}")
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if self.lambda_ < 0 or self.beta < 0:
            raise ConfigError("lambda and beta must be non-negative")
        if self.sigma_sq < 0 or self.sigma_shapelet_sq < 0:
            raise ConfigError("kernel variances must be non-negative (0 = auto)")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning rate must be positive, got {self.learning_rate}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tolerance < 0:
            raise ConfigError(f"tolerance must be >= 0, got {self.tolerance}")
        if self.trim_epsilon < 0:
            raise ConfigError(f"trim epsilon must be >= 0, got {self.trim_epsilon}")
        if self.preprocess not in PREPROCESS_MODES:
            raise ConfigError(f"preprocess must be one of {PREPROCESS_MODES}, got {self.preprocess!r}")
        if self.count_basis not in COUNT_BASES:
            raise ConfigError(f"count basis must be one of {COUNT_BASES}, got {self.count_basis!r}")

    @property
    def is_resolved(self):
        return self.shapelet_count > 0 and self.sigma_sq > 0 and self.sigma_shapelet_sq > 0

    def to_dict(self):
        data = asdict(self)
        data["lambda"] = data.pop("lambda_")
        return data

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        if "lambda" in data:
            data["lambda_"] = data.pop("lambda")
        try:
            return cls(**data)
        except TypeError as e:
            raise DataError(f"invalid training config: {e}") from e


@dataclass(frozen=True)
class TrainedModel:
    bank: ShapeletBank
    config: TrainConfig
    loss_history: List[LossBreakdown] = field(default_factory=list)
    stop_reason: str = ""

    @property
    def n_iterations(self):
        return len(self.loss_history)

    def to_dict(self):
        return {
            "version": MODEL_VERSION,
            "config": self.config.to_dict(),
            "nominal_length": self.bank.nominal_length,
            "shapelets": [
                {"length": int(s.size), "values": s.tolist()} for s in self.bank.shapelets
            ],
            "loss_history": [entry.to_dict() for entry in self.loss_history],
            "stop_reason": self.stop_reason,
        }

    @classmethod
    def from_dict(cls, data):
        if data.get("version") != MODEL_VERSION:
            raise DataError(f"unsupported model version {data.get('version')!r}")
        try:
            config = TrainConfig.from_dict(data["config"])
            shapelets = [entry["values"] for entry in data["shapelets"]]
            if any(len(s) != entry["length"] for s, entry in zip(shapelets, data["shapelets"])):
                raise DataError("shapelet length field does not match its values")
            bank = ShapeletBank.from_shapelets(shapelets, nominal_length=data["nominal_length"])
            history = [
                LossBreakdown(
                    **entry,
                    lambda_=config.lambda_,
                    beta=config.beta,
                    sigma_shapelet_sq=config.sigma_shapelet_sq,
                )
                for entry in data["loss_history"]
            ]
        except DataError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"malformed model document: {e}") from e
        return cls(bank=bank, config=config, loss_history=history, stop_reason=data.get("stop_reason", ""))


def save_model(model, path):
    write_json(path, model.to_dict())


def load_model(path):
    return TrainedModel.from_dict(read_json(path, version=MODEL_VERSION))


def shapelet_count(n, q, m, c):
    """K = ceil(log2(N * (Q - M) * C)), at least 1"""
    if n < 1 or c < 1:
        raise ConfigError(f"need N >= 1 and C >= 1, got N={n}, C={c}")
    if m >= q:
        raise ConfigError(f"shapelet length {m} must be shorter than the series ({q})")
    return max(1, math.ceil(math.log2(n * (q - m) * c)))


def init_shapelets_kmeans(windows, k, seed=DEFAULT_SEED):
    """Centroids of the z-normalized windows as initial shapelets"""
    points = znormalize(windows.windows.reshape(-1, windows.window_length))
    if k < 1 or k > points.shape[0]:
        raise ConfigError(f"cannot pick {k} shapelets from {points.shape[0]} windows")
    kmeans = KMeans(
        n_clusters=k,
        init="k-means++",
        n_init=1,
        max_iter=KMEANS_INIT_MAX_ITER,
        tol=KMEANS_INIT_TOL,
        random_state=seed,
        algorithm="lloyd",
    )
    kmeans.fit(points)
    return ShapeletBank(values=kmeans.cluster_centers_)


def trim_shapelets(bank, trim_epsilon):
    """Strip near-zero leading and trailing entries from every shapelet"""
    if trim_epsilon < 0:
        raise ConfigError(f"trim epsilon must be >= 0, got {trim_epsilon}")
    trimmed = []
    for s in bank.shapelets:
        magnitude = np.abs(s)
        threshold = trim_epsilon * max(1.0, magnitude.max())
        kept = np.flatnonzero(magnitude >= threshold)
        if kept.size and kept[-1] - kept[0] + 1 >= 2:
            trimmed.append(s[kept[0] : kept[-1] + 1])
            continue
        start = int(np.argmax(magnitude[:-1] + magnitude[1:]))
        trimmed.append(s[start : start + 2])
    return ShapeletBank.from_shapelets(trimmed, nominal_length=bank.nominal_length)


def resolve_config(dataset, config, n_train=None):
    """Materialize the automatic shapelet count"""
    if config.shapelet_count:
        return config
    n = n_train if (config.count_basis == "train" and n_train) else dataset.n_samples
    count = shapelet_count(
        n, dataset.series_length, config.shapelet_length, max(dataset.n_classes, 1)
    )
    return replace(config, shapelet_count=count)


def _finite(breakdown):
    return math.isfinite(breakdown.total)


def train(dataset, config, n_train=None, n_threads=1):
    """
    Learn a shapelet bank by gradient descent on the graph-Laplacian loss.

    n_train is the size of the training split when the dataset is a merged
    train/test set; it drives the automatic shapelet count.
    """
    data = preprocess(dataset, config.preprocess)
    windows = with_spectrum(slide_windows(data, config.shapelet_length))
    config = resolve_config(data, config, n_train=n_train)

    bank = init_shapelets_kmeans(windows, config.shapelet_count, config.seed)
    sigma_sq = config.sigma_sq or median_sigma(data)
    graph = gaussian_affinity(data, sigma_sq)
    sigma_shapelet_sq = config.sigma_shapelet_sq or median_pairwise(bank.values)
    config = replace(config, sigma_sq=sigma_sq, sigma_shapelet_sq=sigma_shapelet_sq)
    logger.info(
        "Training K=%d M=%d on N=%d series (sigma^2=%.6g, shapelet sigma^2=%.6g)",
        config.shapelet_count,
        config.shapelet_length,
        data.n_samples,
        sigma_sq,
        sigma_shapelet_sq,
    )

    def evaluate(candidate):
        return loss_and_gradient(
            candidate,
            windows,
            graph,
            alpha=config.alpha,
            lambda_=config.lambda_,
            beta=config.beta,
            sigma_shapelet_sq=sigma_shapelet_sq,
            n_threads=n_threads,
        )

    eta = config.learning_rate
    loss, grad = evaluate(bank)
    if not _finite(loss):
        raise DivergenceError(0, eta)

    history = []
    stop_reason = "max-iters"
    for iteration in range(1, config.max_iters + 1):
        accepted = None
        for _ in range(MAX_BACKOFFS + 1):
            values = bank.values - eta * grad
            if not np.all(np.isfinite(values)):
                raise DivergenceError(iteration, eta)
            candidate = ShapeletBank(values=values)
            new_loss, new_grad = evaluate(candidate)
            if not _finite(new_loss):
                raise DivergenceError(iteration, eta)
            if not config.backoff or new_loss.total <= loss.total:
                accepted = (candidate, new_loss, new_grad)
                break
            eta /= 2.0
            logger.debug("Iteration %d: loss rose to %.10g, learning rate -> %g", iteration, new_loss.total, eta)

        if accepted is None:
            stop_reason = "no-descent"
            logger.info("Stopping at iteration %d: no descent after %d backoffs", iteration, MAX_BACKOFFS)
            break

        previous = loss.total
        bank, loss, grad = accepted
        history.append(loss)
        logger.debug(
            "Iteration %d: total=%.10g spectral=%.6g diversity=%.6g l1=%.6g",
            iteration,
            loss.total,
            loss.spectral,
            loss.diversity,
            loss.l1,
        )
        change = abs(previous - loss.total) / max(abs(previous), np.finfo(float).tiny)
        if change < config.tolerance:
            stop_reason = "converged"
            break

    logger.info("Finished after %d iterations (%s), loss %.10g", len(history), stop_reason, loss.total)
    return TrainedModel(
        bank=trim_shapelets(bank, config.trim_epsilon),
        config=config,
        loss_history=history,
        stop_reason=stop_reason,
    )
