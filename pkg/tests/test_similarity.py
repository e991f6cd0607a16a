import numpy as np
import pytest

from dataset import TimeSeriesDataset, WindowSet, slide_windows
from similarity import (
    DistanceTensor,
    ShapeletBank,
    cross_correlation_all_shifts,
    cross_correlation_naive,
    distance_tensor,
    fft_length,
    min_pool,
    ncc,
    ncc_naive,
    shift_preference,
    with_spectrum,
)


class TestCrossCorrelation:
    def test_ones(self):
        np.testing.assert_allclose(cross_correlation_all_shifts([1, 1], [1, 1]), [1, 2, 1], atol=1e-12)

    def test_zero_input(self):
        np.testing.assert_allclose(cross_correlation_all_shifts([0, 0, 0], [1, 2, 3]), np.zeros(5), atol=1e-12)

    def test_impulses(self):
        expected = [1, 0, 0]
        np.testing.assert_allclose(cross_correlation_naive([1, 0], [0, 1]), expected)
        np.testing.assert_allclose(cross_correlation_all_shifts([1, 0], [0, 1]), expected, atol=1e-12)

    def test_fft_matches_naive(self, rng):
        for _ in range(1000):
            m = int(rng.integers(2, 65))
            x, y = rng.standard_normal((2, m))
            np.testing.assert_allclose(
                cross_correlation_all_shifts(x, y), cross_correlation_naive(x, y), rtol=0, atol=1e-9
            )

    @pytest.mark.parametrize("m, n", [(2, 4), (3, 8), (5, 16), (48, 128), (64, 128), (65, 256)])
    def test_fft_length(self, m, n):
        assert fft_length(m) == n

    def test_mismatched_lengths(self):
        with pytest.raises(ValueError):
            cross_correlation_all_shifts([1, 2, 3], [1, 2])


class TestNcc:
    def test_self_similarity(self, rng):
        x = rng.standard_normal(20)
        result = ncc(x, x)
        assert result.value == pytest.approx(1.0, abs=1e-12)
        assert result.shift == 0

    def test_tie_prefers_negative_shift(self):
        result = ncc([1, -1], [-1, 1])
        assert result.value == pytest.approx(0.5, abs=1e-12)
        assert result.shift == -1

    def test_flat_input_is_uncorrelated(self):
        assert ncc([3, 3, 3], [1, 2, 3]).value == 0.0
        assert ncc([1, 2, 3], [3, 3, 3]).value == 0.0

    def test_range(self, rng):
        for _ in range(200):
            m = int(rng.integers(2, 30))
            value = ncc(rng.standard_normal(m), rng.standard_normal(m)).value
            assert -1 - 1e-12 <= value <= 1 + 1e-12

    def test_symmetric_under_joint_negation(self, rng):
        x, y = rng.standard_normal((2, 16))
        assert ncc(-x, -y).value == pytest.approx(ncc(x, y).value, abs=1e-12)

    def test_invariant_to_affine_maps(self, rng):
        x, y = rng.standard_normal((2, 16))
        assert ncc(3.5 * x + 2, 0.2 * y - 7).value == pytest.approx(ncc(x, y).value, abs=1e-9)

    def test_shift_is_recovered(self):
        x = np.array([0.0, 0, 1, 2, 1, 0, 0, 0])
        y = np.roll(x, 2)
        result = ncc(x, y)
        assert result.shift == -2

    def test_matches_naive(self, rng):
        for _ in range(100):
            m = int(rng.integers(2, 20))
            x, y = rng.standard_normal((2, m))
            fast, slow = ncc(x, y), ncc_naive(x, y)
            assert fast.value == pytest.approx(slow.value, abs=1e-9)
            assert fast.shift == slow.shift


def test_shift_preference():
    np.testing.assert_array_equal(shift_preference(3), [0, -1, 1, -2, 2])


class TestShapeletBank:
    def test_from_shapelets_pads(self):
        bank = ShapeletBank.from_shapelets([[1.0, 2, 3], [4.0, 5]], nominal_length=4)
        assert bank.count == 2
        assert bank.nominal_length == 4
        assert bank.is_trimmed
        np.testing.assert_array_equal(bank.lengths, [3, 2])
        np.testing.assert_array_equal(bank.shapelets[1], [4, 5])
        with pytest.raises(ValueError):
            bank.matrix()

    def test_groups_by_length(self):
        bank = ShapeletBank.from_shapelets([[1.0, 2, 3], [4.0, 5], [6.0, 7, 8]])
        groups = {length: index.tolist() for length, index, _ in bank.groups_by_length()}
        assert groups == {2: [1], 3: [0, 2]}

    def test_rejects_short_shapelets(self):
        with pytest.raises(ValueError):
            ShapeletBank(values=np.ones((2, 1)))


class TestDistanceTensor:
    def test_shape(self, rng):
        data = TimeSeriesDataset(rng.standard_normal((2, 10)))
        windows = slide_windows(data, 4)
        tensor = distance_tensor(ShapeletBank(rng.standard_normal((3, 4))), windows)
        assert tensor.d.shape == (2, 7, 3)
        assert tensor.argmax_shift.shape == (2, 7, 3)

    def test_range(self, rng):
        windows = slide_windows(TimeSeriesDataset(rng.standard_normal((5, 30))), 6)
        tensor = distance_tensor(ShapeletBank(rng.standard_normal((4, 6))), windows)
        assert np.all(tensor.d >= 0) and np.all(tensor.d <= 2)

    def test_exact_match_is_zero(self, rng):
        series = rng.standard_normal(20)
        windows = slide_windows(TimeSeriesDataset(series[None, :]), 5)
        tensor = distance_tensor(ShapeletBank(series[None, 7:12]), windows)
        assert tensor.d[0, 7, 0] == pytest.approx(0.0, abs=1e-12)
        assert tensor.argmax_shift[0, 7, 0] == 0

    def test_flat_shapelet_is_one(self, rng):
        windows = slide_windows(TimeSeriesDataset(rng.standard_normal((3, 12))), 4)
        tensor = distance_tensor(ShapeletBank(np.full((1, 4), 2.5)), windows)
        np.testing.assert_array_equal(tensor.d, 1.0)

    def test_entries_match_pairwise_ncc(self, rng):
        windows = slide_windows(TimeSeriesDataset(rng.standard_normal((3, 15))), 5)
        bank = ShapeletBank(rng.standard_normal((2, 5)))
        tensor = distance_tensor(bank, windows)
        for i, j, k in [(0, 0, 0), (1, 4, 1), (2, 10, 0)]:
            expected = ncc(bank.values[k], windows.windows[i, j])
            assert tensor.d[i, j, k] == pytest.approx(1 - expected.value, abs=1e-12)
            assert tensor.argmax_shift[i, j, k] == expected.shift

    def test_threads_give_identical_results(self, rng):
        windows = slide_windows(TimeSeriesDataset(rng.standard_normal((40, 64))), 16)
        bank = ShapeletBank(rng.standard_normal((5, 16)))
        single = distance_tensor(bank, windows, n_threads=1)
        pooled = distance_tensor(bank, windows, n_threads=4)
        np.testing.assert_array_equal(single.d, pooled.d)
        np.testing.assert_array_equal(single.argmax_shift, pooled.argmax_shift)

    def test_cached_spectrum_gives_same_distances(self, rng):
        windows = slide_windows(TimeSeriesDataset(rng.standard_normal((7, 40))), 12)
        cached = with_spectrum(windows)
        assert cached.spectrum.shape == (7, 29, fft_length(12) // 2 + 1)
        bank = ShapeletBank(rng.standard_normal((3, 12)))
        plain, reused = distance_tensor(bank, windows), distance_tensor(bank, cached, n_threads=2)
        np.testing.assert_allclose(reused.d, plain.d, atol=1e-12)
        np.testing.assert_array_equal(reused.argmax_shift, plain.argmax_shift)

    def test_length_mismatch(self, rng):
        windows = WindowSet(windows=rng.standard_normal((2, 3, 5)))
        with pytest.raises(ValueError):
            distance_tensor(ShapeletBank(rng.standard_normal((1, 4))), windows)


class TestMinPool:
    def test_picks_smallest(self):
        d = np.array([[[0.3, 0.9], [0.1, 0.5]]])
        pooled = min_pool(DistanceTensor(d=d, argmax_shift=np.zeros_like(d, dtype=np.int64)))
        np.testing.assert_array_equal(pooled.f, [[0.1, 0.5]])
        np.testing.assert_array_equal(pooled.argmin_window, [[1, 1]])

    def test_ties_go_to_first_window(self):
        d = np.array([[[0.2], [0.2], [0.7]]])
        pooled = min_pool(DistanceTensor(d=d, argmax_shift=np.zeros_like(d, dtype=np.int64)))
        assert pooled.argmin_window[0, 0] == 0

    def test_empty(self):
        d = np.empty((1, 0, 2))
        with pytest.raises(ValueError):
            min_pool(DistanceTensor(d=d, argmax_shift=np.zeros_like(d, dtype=np.int64)))
