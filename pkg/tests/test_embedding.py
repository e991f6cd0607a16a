import numpy as np
import pytest
from scipy.special import softmax

from embedding import t_membership, t_membership_backward
from similarity import FeatureMatrix


def test_two_shapelet_example():
    np.testing.assert_allclose(t_membership(np.array([[0.0, 1.0]]), alpha=1).q, [[2 / 3, 1 / 3]])


def test_equal_distances_are_uniform():
    np.testing.assert_allclose(t_membership(np.full((2, 4), 0.7)).q, 0.25)


def test_single_shapelet():
    np.testing.assert_array_equal(t_membership(np.array([[0.3], [1.9]])).q, [[1.0], [1.0]])


def test_accepts_feature_matrix():
    features = FeatureMatrix(f=np.array([[0.0, 1.0]]), argmin_window=np.zeros((1, 2), dtype=np.int64))
    membership = t_membership(features, alpha=2.0)
    assert membership.alpha == 2.0
    assert membership.q.shape == (1, 2)


def test_rows_sum_to_one(rng):
    for _ in range(100):
        f = rng.uniform(0, 2, size=(rng.integers(1, 8), rng.integers(1, 6)))
        q = t_membership(f, alpha=rng.uniform(0.1, 10)).q
        np.testing.assert_allclose(q.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(q > 0)


def test_closer_shapelet_gets_more_mass(rng):
    f = rng.uniform(0, 2, size=(20, 5))
    q = t_membership(f).q
    for i in range(f.shape[0]):
        order = np.argsort(f[i], kind="stable")
        assert np.all(np.diff(q[i, order]) <= 1e-15)


def test_large_alpha_approaches_gaussian(rng):
    f = rng.uniform(0, 2, size=(10, 4))
    np.testing.assert_allclose(t_membership(f, alpha=1e6).q, softmax(-f / 2, axis=1), atol=1e-3)


@pytest.mark.parametrize(
    "f, alpha",
    [
        (np.empty((3, 0)), 1.0),
        (np.array([[0.1, 0.2]]), 0.0),
        (np.array([[0.1, -0.2]]), 1.0),
    ],
)
def test_invalid_input(f, alpha):
    with pytest.raises(ValueError):
        t_membership(f, alpha)


def test_backward_matches_finite_differences(rng):
    h = 1e-6
    for alpha in (0.5, 1.0, 4.0):
        f = rng.uniform(0.05, 1.9, size=(4, 3))
        weights = rng.standard_normal((4, 3))
        membership = t_membership(f, alpha)
        analytic = t_membership_backward(f, membership, weights)
        numeric = np.zeros_like(f)
        for index in np.ndindex(*f.shape):
            plus, minus = f.copy(), f.copy()
            plus[index] += h
            minus[index] -= h
            numeric[index] = (
                np.sum(weights * t_membership(plus, alpha).q) - np.sum(weights * t_membership(minus, alpha).q)
            ) / (2 * h)
        np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-8)
