"""Fringe period, visibility and envelope width from sampled 1D density profiles."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import argrelextrema

__all__ = [
    "Profile1D",
    "FringeReport",
    "NoFringes",
    "FringeError",
    "extract_fringe_width",
    "visibility",
    "fit_gaussian_envelope",
]

MIN_SAMPLES = 64
# peak must stand this far above the median spectral magnitude
PEAK_PROMINENCE = 3.0
# relative modulation below this is indistinguishable from rounding in the envelope division
MODULATION_FLOOR = 1e-9
ZERO_PAD = 16
DETREND_DEGREE = 4


class FringeError(ValueError):
    """The profile cannot support a fringe measurement (too short, too few periods...)."""


@dataclass(frozen=True)
class Profile1D:
    positions: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.positions, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "positions", z)
        object.__setattr__(self, "values", v)
        if z.ndim != 1 or z.shape != v.shape:
            raise ValueError("positions and values must be 1D arrays of equal length")
        if z.size < MIN_SAMPLES:
            raise ValueError(f"profile needs at least {MIN_SAMPLES} samples, got {z.size}")
        steps = np.diff(z)
        if not (steps > 0).all() or np.ptp(steps) > 1e-6 * steps.mean():
            raise ValueError("profile positions must be increasing with uniform spacing")
        if not np.isfinite(v).all() or (v < 0).any():
            raise ValueError("profile values must be finite and non-negative")

    @property
    def spacing(self) -> float:
        return float(self.positions[1] - self.positions[0])

    @property
    def centroid(self) -> float:
        return float(np.sum(self.positions * self.values) / np.sum(self.values))

    def __len__(self):
        return self.positions.size


@dataclass(frozen=True)
class FringeReport:
    """Measured fringes. ``fringe_width`` is the cosine period (peak-to-peak spacing)."""

    fringe_width: float
    visibility: float
    envelope_width: float
    n_fringes_resolved: int
    has_fringes: bool = True


@dataclass(frozen=True)
class NoFringes:
    """No resolvable spectral peak: the profile shows no interference."""

    envelope_width: float
    peak_ratio: float
    visibility: float = 0.0
    has_fringes: bool = False
    fringe_width: float = math.nan


def fit_gaussian_envelope(z, y, weights=None):
    """Weighted least-squares quadratic fit to log(y).

    Returns ``(log_envelope, center, std)``; ``std`` is inf when the fit is not concave.
    """
    mask = y > 1e-3 * y.max()
    w = y[mask] / y.max() if weights is None else weights[mask]
    zs = z[mask]
    # centre and scale z for a well-conditioned polynomial fit
    z_mid, z_scale = zs.mean(), max(np.ptp(zs), 1e-300) / 2
    c2, c1, c0 = np.polyfit((zs - z_mid) / z_scale, np.log(y[mask]), 2, w=w)
    log_env = np.polyval([c2, c1, c0], (z - z_mid) / z_scale)
    if c2 < 0:
        a = -c2 / z_scale**2
        center = z_mid + c1 / z_scale / (2 * a)
        std = math.sqrt(1 / (2 * a))
    else:
        center, std = z_mid, math.inf
    return log_env, center, std


def _interp_peak(spec: np.ndarray, i: int) -> float:
    """Sub-bin peak offset from a three-point parabola through spec[i-1:i+2]."""
    a, b, c = spec[i - 1], spec[i], spec[i + 1]
    den = a - 2 * b + c
    return 0.0 if den == 0 else 0.5 * (a - c) / den


def extract_fringe_width(p: Profile1D, expected_width: float | None = None):
    """Measure the dominant fringe period of a coincidence or marginal profile.

    The profile is lightly smoothed, a Gaussian envelope is fitted to its log and
    divided out, the remainder is detrended and Fourier transformed (zero padded,
    Hann windowed) and the strongest non-DC peak is located by parabolic
    interpolation.

    Returns a :class:`FringeReport`, or :class:`NoFringes` when no spectral peak
    rises above ``PEAK_PROMINENCE`` times the median spectral magnitude.
    Raises :class:`FringeError` if fewer than three periods fit in the envelope.
    """
    z, y = p.positions, p.values
    dz = p.spacing
    if not y.max() > 0:
        raise FringeError("profile is identically zero")
    k = max(1, int(round(expected_width / 8 / dz))) if expected_width else 5
    ys = uniform_filter1d(y, size=k, mode="nearest") if k > 1 else y
    log_env, center, std = fit_gaussian_envelope(z, ys)

    # analysis window: where the envelope carries signal
    win = log_env > log_env.max() + math.log(1e-3)
    idx = np.flatnonzero(win)
    lo, hi = idx[0], idx[-1] + 1
    zw = z[lo:hi]
    r = y[lo:hi] / np.exp(log_env[lo:hi])
    mean_level = r.mean()
    # quartic detrend: a sum of two shifted Gaussians is not Gaussian to O(z^4)
    r = r - np.polyval(np.polyfit(zw - zw.mean(), r, DETREND_DEGREE), zw - zw.mean())
    n = r.size
    if n < 16:
        raise FringeError("envelope window too narrow for a spectral estimate")
    tapered = r * np.hanning(n)
    nfft = ZERO_PAD * (1 << (n - 1).bit_length())
    spec = np.abs(np.fft.rfft(tapered, nfft))
    freqs = np.fft.rfftfreq(nfft, dz)
    span = n * dz
    # skip the DC lobe: at least one period across the window
    first = int(np.searchsorted(freqs, 1.0 / span))
    if spec.size - first < 3:
        raise FringeError("no usable spectral band")
    # a fringe is a local spectral maximum; the falling edge of the DC lobe is not
    band = spec[first - 1 if first > 0 else 0:]
    peaks = np.flatnonzero((band[1:-1] > band[:-2]) & (band[1:-1] >= band[2:])) + 1
    peaks = peaks + (first - 1 if first > 0 else 0)
    peaks = peaks[peaks >= max(first, 1)]
    floor = np.median(spec[::ZERO_PAD][1:]) if spec[::ZERO_PAD].size > 2 else 0.0
    if peaks.size == 0:
        return NoFringes(envelope_width=std, peak_ratio=0.0)
    i = int(peaks[np.argmax(spec[peaks])])
    ratio = spec[i] / floor if floor > 0 else math.inf
    # cosine amplitude relative to the mean level; Hann coherent gain is 1/2
    depth = 2 * spec[i] / (0.5 * n) / abs(mean_level) if mean_level else 0.0
    if ratio < PEAK_PROMINENCE or depth < MODULATION_FLOOR:
        return NoFringes(envelope_width=std, peak_ratio=float(ratio))
    f_peak = freqs[i] + _interp_peak(spec, i) * (freqs[1] - freqs[0])
    width = 1.0 / f_peak
    n_periods = span / width
    if n_periods < 3:
        raise FringeError(f"only {n_periods:.2f} fringe periods inside the envelope; need >= 3")
    if width <= 2 * dz:
        raise FringeError("fringe period not resolved by the sampling")
    vis = _central_visibility(zw, y[lo:hi] / np.exp(log_env[lo:hi]), center)
    return FringeReport(float(width), vis, float(std), int(n_periods))


def _central_visibility(z, r, center) -> float:
    """(max - min)/(max + min) of the envelope-normalized fringe nearest ``center``."""
    maxima = argrelextrema(r, np.greater_equal, order=1)[0]
    minima = argrelextrema(r, np.less_equal, order=1)[0]
    maxima = maxima[(maxima > 0) & (maxima < r.size - 1)]
    minima = minima[(minima > 0) & (minima < r.size - 1)]
    if maxima.size == 0 or minima.size == 0:
        return 0.0
    m = maxima[np.argmin(np.abs(z[maxima] - center))]
    near = minima[np.argsort(np.abs(minima - m))[:2]]
    lo = r[near].min()
    hi = r[m]
    return float(np.clip((hi - lo) / (hi + lo), 0.0, 1.0)) if hi + lo > 0 else 0.0


def visibility(p: Profile1D, window: float) -> float:
    """(max - min)/(max + min) over ``window`` centred on the profile centroid.

    A window holding fewer than two local extrema is fringeless and has visibility 0.
    """
    if not window > 0:
        raise ValueError("window must be positive")
    c = p.centroid
    sel = np.abs(p.positions - c) <= window / 2
    v = p.values[sel]
    if v.size == 0:
        raise ValueError("empty visibility window")
    if v.size < 3:
        return 0.0
    inner = v[1:-1]
    is_max = (inner > v[:-2]) & (inner >= v[2:])
    is_min = (inner < v[:-2]) & (inner <= v[2:])
    if int(is_max.sum() + is_min.sum()) < 2:
        return 0.0
    hi, lo = v.max(), v.min()
    return float((hi - lo) / (hi + lo)) if hi + lo > 0 else 0.0
