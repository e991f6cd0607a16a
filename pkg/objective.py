"""
Objective module for ShapeletBoard
Graph-Laplacian loss over shapelet memberships, and its gradient
"""

from dataclasses import asdict, dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from config import DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_LAMBDA
from dataset import znormalize
from embedding import t_membership, t_membership_backward
from errors import DataError
from similarity import distance_tensor, min_pool, unit_normalize


@dataclass(frozen=True)
class AffinityGraph:
    """Gaussian affinities between input series and their graph Laplacian"""

    g: np.ndarray
    sigma_sq: float
    laplacian: np.ndarray

    @property
    def n_samples(self):
        return self.g.shape[0]


@dataclass(frozen=True)
class LossBreakdown:
    spectral: float
    diversity: float
    l1: float
    total: float
    lambda_: float
    beta: float
    sigma_shapelet_sq: float

    def to_dict(self):
        """Loss terms only, as stored in loss histories"""
        return {
            "spectral": self.spectral,
            "diversity": self.diversity,
            "l1": self.l1,
            "total": self.total,
        }

    def to_full_dict(self):
        return asdict(self)


def _series(data):
    return data.values if hasattr(data, "values") else np.asarray(data, dtype=float)


def _shapelet_matrix(bank):
    return bank.values if hasattr(bank, "values") else np.asarray(bank, dtype=float)


def pairwise_sq_distances(x):
    """Condensed vector of squared Euclidean distances between rows"""
    return pdist(np.asarray(x, dtype=float), "sqeuclidean")


def median_pairwise(x):
    """Median squared distance between rows; 1 when every pair coincides"""
    distances = pairwise_sq_distances(x)
    positive = distances[distances > 0]
    if positive.size == 0:
        return 1.0
    median = float(np.median(distances))
    if median > 0:
        return median
    # Mostly duplicates: fall back to the median of the distinct pairs
    return float(np.median(positive))


def median_sigma(dataset):
    """Median heuristic for the affinity kernel variance"""
    x = _series(dataset)
    if x.shape[0] < 2:
        raise DataError("median heuristic needs at least 2 series")
    return median_pairwise(x)


def gaussian_affinity(dataset, sigma_sq):
    """G[i, j] = exp(-||t_i - t_j||^2 / sigma^2) and L = D_G - G"""
    x = _series(dataset)
    if x.shape[0] < 2:
        raise DataError("affinity graph needs at least 2 series")
    if not sigma_sq > 0:
        raise ValueError(f"sigma_sq must be positive, got {sigma_sq}")
    distances = squareform(pairwise_sq_distances(x))
    if not np.all(np.isfinite(distances)):
        raise DataError("non-finite distance between series")
    g = np.exp(-distances / sigma_sq)
    laplacian = np.diag(g.sum(axis=1)) - g
    return AffinityGraph(g=g, sigma_sq=float(sigma_sq), laplacian=laplacian)


def _memberships(q):
    return q.q if hasattr(q, "q") else np.asarray(q, dtype=float)


def spectral_term(q, graph):
    """1/2 sum_ij G[i, j] ||q_i - q_j||^2"""
    q = _memberships(q)
    if q.shape[0] != graph.n_samples:
        raise ValueError(f"{q.shape[0]} membership rows for a graph over {graph.n_samples} series")
    return float(0.5 * np.sum(graph.g * squareform(pairwise_sq_distances(q))))


def spectral_term_trace(q, graph):
    """tr(q^T L_G q), equal to spectral_term"""
    q = _memberships(q)
    if q.shape[0] != graph.n_samples:
        raise ValueError(f"{q.shape[0]} membership rows for a graph over {graph.n_samples} series")
    return float(np.sum(q * (graph.laplacian @ q)))


def diversity_term(bank, sigma_shapelet_sq):
    """Squared Frobenius norm of the Gaussian similarity between shapelets"""
    h = np.exp(-squareform(pairwise_sq_distances(_shapelet_matrix(bank))) / sigma_shapelet_sq)
    return float(np.sum(h**2))


def diversity_gradient(bank, sigma_shapelet_sq):
    s = _shapelet_matrix(bank)
    e = np.exp(-2.0 * squareform(pairwise_sq_distances(s)) / sigma_shapelet_sq)
    return -(8.0 / sigma_shapelet_sq) * (e.sum(axis=1)[:, None] * s - e @ s)


def l1_term(bank):
    return float(np.abs(_shapelet_matrix(bank)).sum())


def _forward(bank, windows, graph, alpha, lambda_, beta, sigma_shapelet_sq, n_threads):
    distances = distance_tensor(bank, windows, n_threads=n_threads)
    features = min_pool(distances)
    membership = t_membership(features, alpha)
    spectral = spectral_term(membership, graph)
    diversity = diversity_term(bank, sigma_shapelet_sq)
    l1 = l1_term(bank)
    breakdown = LossBreakdown(
        spectral=spectral,
        diversity=diversity,
        l1=l1,
        total=spectral + lambda_ * diversity + beta * l1,
        lambda_=lambda_,
        beta=beta,
        sigma_shapelet_sq=sigma_shapelet_sq,
    )
    return breakdown, distances, features, membership


def total_loss(
    bank,
    windows,
    graph,
    alpha=DEFAULT_ALPHA,
    lambda_=DEFAULT_LAMBDA,
    beta=DEFAULT_BETA,
    sigma_shapelet_sq=1.0,
    n_threads=1,
):
    """Spectral term plus weighted diversity and L1 penalties"""
    breakdown, _, _, _ = _forward(
        bank, windows, graph, alpha, lambda_, beta, sigma_shapelet_sq, n_threads
    )
    return breakdown


def _spectral_gradient(bank, windows, graph, distances, features, membership):
    """
    Gradient of the spectral term with respect to the shapelets.

    The best window j* and best shift w* are held at their current values.
    """
    s = bank.matrix()
    m = s.shape[1]
    n_series = windows.n_samples

    grad_q = 2.0 * (graph.laplacian @ membership.q)
    grad_ncc = -t_membership_backward(features, membership, grad_q)  # dL/dNCC = -dL/dF

    rows = np.arange(n_series)[:, None]
    best_windows = windows.windows[rows, features.argmin_window]  # N x K x M
    shift = np.take_along_axis(
        distances.argmax_shift, features.argmin_window[:, None, :], axis=1
    )[:, 0, :]

    # Window aligned against the shapelet at shift w: b[m] = w_unit[m - w]
    source = np.arange(m)[None, None, :] - shift[:, :, None]
    valid = (source >= 0) & (source < m)
    aligned = np.take_along_axis(unit_normalize(best_windows), np.clip(source, 0, m - 1), axis=2)
    aligned = np.where(valid, aligned, 0.0)

    centered = s - s.mean(axis=1, keepdims=True)
    norm = np.linalg.norm(centered, axis=1)
    flat = np.all(znormalize(s) == 0.0, axis=1)
    unit = unit_normalize(s)

    correlation = np.einsum("km,nkm->nk", unit, aligned)
    local = (
        aligned
        - aligned.mean(axis=2, keepdims=True)
        - unit[None, :, :] * correlation[:, :, None]
    )
    grad = np.einsum("nk,nkm->km", grad_ncc, local)
    scale = np.where(flat, 0.0, 1.0 / np.where(flat, 1.0, norm))
    return grad * scale[:, None]


def loss_and_gradient(
    bank,
    windows,
    graph,
    alpha=DEFAULT_ALPHA,
    lambda_=DEFAULT_LAMBDA,
    beta=DEFAULT_BETA,
    sigma_shapelet_sq=1.0,
    n_threads=1,
):
    """LossBreakdown and K x M gradient from a single forward pass"""
    if windows.n_samples != graph.n_samples:
        raise ValueError(
            f"{windows.n_samples} windowed series for a graph over {graph.n_samples} series"
        )
    breakdown, distances, features, membership = _forward(
        bank, windows, graph, alpha, lambda_, beta, sigma_shapelet_sq, n_threads
    )
    grad = _spectral_gradient(bank, windows, graph, distances, features, membership)
    if lambda_:
        grad = grad + lambda_ * diversity_gradient(bank, sigma_shapelet_sq)
    if beta:
        grad = grad + beta * np.sign(bank.matrix())
    return breakdown, grad


def loss_gradient(
    bank,
    windows,
    graph,
    alpha=DEFAULT_ALPHA,
    lambda_=DEFAULT_LAMBDA,
    beta=DEFAULT_BETA,
    sigma_shapelet_sq=1.0,
    n_threads=1,
):
    """Analytic gradient of total_loss with respect to every shapelet entry"""
    _, grad = loss_and_gradient(
        bank, windows, graph, alpha, lambda_, beta, sigma_shapelet_sq, n_threads
    )
    return grad
