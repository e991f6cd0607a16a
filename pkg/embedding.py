"""
Embedding module for ShapeletBoard
Student-t membership probabilities over min-pooled shapelet distances
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import softmax

from config import DEFAULT_ALPHA


@dataclass(frozen=True)
class MembershipMatrix:
    """Row-stochastic N x K matrix of shapelet membership probabilities"""

    q: np.ndarray
    alpha: float = DEFAULT_ALPHA


def _features(f):
    return f.f if hasattr(f, "f") else np.asarray(f, dtype=float)


def _log_kernel(f, alpha):
    return -0.5 * (alpha + 1.0) * np.log1p(f / alpha)


def t_membership(f, alpha=DEFAULT_ALPHA):
    """q[i, k] proportional to (1 + F[i, k] / alpha) ** (-(alpha + 1) / 2)"""
    f = _features(f)
    if f.ndim != 2 or f.shape[1] == 0:
        raise ValueError(f"need an N x K feature matrix with K >= 1, got shape {f.shape}")
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if np.any(f < 0):
        raise ValueError("distances must be non-negative")
    return MembershipMatrix(q=softmax(_log_kernel(f, alpha), axis=1), alpha=alpha)


def t_membership_backward(f, membership, grad_q):
    """Pull dL/dq back to dL/dF through the kernel and the row normalization"""
    f = _features(f)
    q = membership.q
    alpha = membership.alpha
    grad_log_kernel = q * (grad_q - np.sum(grad_q * q, axis=1, keepdims=True))
    return grad_log_kernel * (-0.5 * (alpha + 1.0) / (alpha + f))
