"""
Similarity module for ShapeletBoard
Shift-maximized normalized cross-correlation between shapelets and windows
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np
from scipy import fft

from config import CHUNK_BUDGET, SHIFT_TIE_TOL
from dataset import znormalize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShapeletBank:
    """
    K shapelets of nominal length M.

    Trimmed shapelets are stored left-aligned in ``values`` and padded with
    zeros; ``lengths`` holds each shapelet's effective length.
    """

    values: np.ndarray
    lengths: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 2:
            raise ValueError(f"shapelet bank must be K x M with K >= 1, M >= 2, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("shapelet bank contains non-finite values")
        lengths = self.lengths
        if lengths is None:
            lengths = np.full(values.shape[0], values.shape[1])
        lengths = np.asarray(lengths, dtype=np.int64)
        if lengths.shape != (values.shape[0],) or lengths.min() < 2 or lengths.max() > values.shape[1]:
            raise ValueError(f"invalid shapelet lengths {lengths.tolist()}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "lengths", lengths)

    @classmethod
    def from_shapelets(cls, shapelets, nominal_length=None):
        """Build a bank from a list of possibly different-length shapelets"""
        shapelets = [np.asarray(s, dtype=float) for s in shapelets]
        lengths = [s.size for s in shapelets]
        width = nominal_length or max(lengths)
        values = np.zeros((len(shapelets), width))
        for k, s in enumerate(shapelets):
            values[k, : s.size] = s
        return cls(values=values, lengths=np.array(lengths))

    @property
    def count(self):
        return self.values.shape[0]

    @property
    def nominal_length(self):
        return self.values.shape[1]

    @property
    def is_trimmed(self):
        return bool(np.any(self.lengths != self.nominal_length))

    @property
    def shapelets(self):
        return [self.values[k, :length].copy() for k, length in enumerate(self.lengths)]

    def matrix(self):
        """The K x M matrix; only defined when every shapelet has the nominal length"""
        if self.is_trimmed:
            raise ValueError("bank holds shapelets of different lengths")
        return self.values

    def groups_by_length(self):
        """Yield (length, shapelet indices, K_l x length matrix) per distinct length"""
        for length in np.unique(self.lengths):
            index = np.flatnonzero(self.lengths == length)
            yield int(length), index, self.values[index, :length]


@dataclass(frozen=True)
class DistanceTensor:
    """D[i, j, k] = 1 - NCC(shapelet k, window j of series i), with the maximizing shift"""

    d: np.ndarray
    argmax_shift: np.ndarray


@dataclass(frozen=True)
class FeatureMatrix:
    """F[i, k] = min_j D[i, j, k], with the minimizing window index"""

    f: np.ndarray
    argmin_window: np.ndarray


class Correlation(NamedTuple):
    value: float
    shift: int


def fft_length(m):
    """Smallest power of two >= 2M - 1"""
    return 1 << (2 * m - 2).bit_length()


def _check_pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or x.size < 1:
        raise ValueError(f"expected two vectors of equal length, got {x.shape} and {y.shape}")
    return x, y


def _lag_slice(cc, m):
    """Reorder circular lags into shifts -(M-1) .. M-1"""
    n = cc.shape[-1]
    return np.concatenate([cc[..., n - (m - 1):], cc[..., :m]], axis=-1)


def cross_correlation_all_shifts(x, y):
    """
    Linear cross-correlation for every shift.

    Entry ``w + M - 1`` holds sum_m x[m] * y[m - w] for w in [-(M-1), M-1],
    computed with a zero-padded FFT.
    """
    x, y = _check_pair(x, y)
    m = x.size
    n = fft_length(m)
    cc = fft.irfft(fft.rfft(x, n) * np.conj(fft.rfft(y, n)), n)
    return _lag_slice(cc, m)


def cross_correlation_naive(x, y):
    """O(M^2) reference for cross_correlation_all_shifts"""
    x, y = _check_pair(x, y)
    m = x.size
    out = np.zeros(2 * m - 1)
    for w in range(-(m - 1), m):
        for i in range(m):
            if 0 <= i - w < m:
                out[w + m - 1] += x[i] * y[i - w]
    return out


def shift_preference(m):
    """Shifts in tie-break order: 0, -1, 1, -2, 2, ..."""
    order = [0]
    for step in range(1, m):
        order.extend([-step, step])
    return np.array(order)


def unit_normalize(x):
    """z-normalize along the last axis and scale to unit norm; flat input stays zero"""
    z = znormalize(x)
    norm = np.linalg.norm(z, axis=-1, keepdims=True)
    return np.where(norm > 0, z / np.where(norm > 0, norm, 1.0), 0.0)


def best_shift(cc, m):
    """Max over the last axis with the deterministic tie rule; returns (values, shifts)"""
    preference = shift_preference(m)
    ranked = cc[..., preference + m - 1]
    top = ranked.max(axis=-1, keepdims=True)
    first = np.argmax(ranked >= top - SHIFT_TIE_TOL, axis=-1)
    values = np.take_along_axis(ranked, first[..., None], axis=-1)[..., 0]
    return values, preference[first]


def ncc(s, w):
    """Normalized cross-correlation, maximized over shifts; 0 for flat input"""
    s, w = _check_pair(s, w)
    cc = cross_correlation_all_shifts(unit_normalize(s), unit_normalize(w))
    value, shift = best_shift(cc, s.size)
    return Correlation(float(value), int(shift))


def ncc_naive(s, w):
    """Reference NCC built on the naive cross-correlation"""
    s, w = _check_pair(s, w)
    cc = cross_correlation_naive(unit_normalize(s), unit_normalize(w))
    value, shift = best_shift(cc, s.size)
    return Correlation(float(value), int(shift))


def window_spectrum(windows, n):
    """rfft of the unit-normalized windows along the last axis"""
    return fft.rfft(unit_normalize(windows), n, axis=-1)


def with_spectrum(windows):
    """The same WindowSet with its window spectra cached for repeated distance_tensor calls"""
    n = fft_length(windows.window_length)
    return replace(windows, spectrum=window_spectrum(windows.windows, n))


def _correlate_chunk(shapelet_spectrum, window_spectra, m, n):
    """B x J x K best correlations and shifts for a chunk of series"""
    cc = fft.irfft(
        shapelet_spectrum[None, None, :, :] * np.conj(window_spectra)[:, :, None, :],
        n,
        axis=-1,
    )
    return best_shift(_lag_slice(cc, m), m)


def distance_tensor(bank, windows, n_threads=1):
    """D = 1 - NCC for every (series, window, shapelet) triple"""
    shapelets = bank.matrix()
    m = windows.window_length
    if bank.nominal_length != m:
        raise ValueError(f"shapelet length {bank.nominal_length} != window length {m}")

    n = fft_length(m)
    n_series, n_windows = windows.n_samples, windows.windows_per_series
    shapelet_spectrum = fft.rfft(unit_normalize(shapelets), n, axis=-1)

    d = np.empty((n_series, n_windows, bank.count))
    shifts = np.empty((n_series, n_windows, bank.count), dtype=np.int64)

    chunk = max(1, CHUNK_BUDGET // (n_windows * bank.count * n))
    starts = range(0, n_series, chunk)

    def fill(start):
        stop = min(start + chunk, n_series)
        if windows.spectrum is not None:
            spectra = windows.spectrum[start:stop]
        else:
            spectra = window_spectrum(windows.windows[start:stop], n)
        values, best = _correlate_chunk(shapelet_spectrum, spectra, m, n)
        d[start:stop] = np.clip(1.0 - values, 0.0, 2.0)
        shifts[start:stop] = best

    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            list(pool.map(fill, starts))
    else:
        for start in starts:
            fill(start)

    return DistanceTensor(d=d, argmax_shift=shifts)


def min_pool(distances):
    """Best-matching window per (series, shapelet); ties go to the smallest j"""
    d = distances.d
    if d.size == 0:
        raise ValueError("cannot min-pool an empty distance tensor")
    argmin = np.argmin(d, axis=1)
    f = np.take_along_axis(d, argmin[:, None, :], axis=1)[:, 0, :]
    return FeatureMatrix(f=f, argmin_window=argmin)
