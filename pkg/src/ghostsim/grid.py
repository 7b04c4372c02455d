"""Brute-force two-photon wavefunction on a z1 x z2 grid.

Independent of the closed-form Gaussian algebra: the source state is sampled
directly, free flight is an FFT with the quadratic-dispersion kernel, the slit
projection is done by quadrature and the lens is a sampled quadratic phase.
Used to check :mod:`ghostsim.core` end to end.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .analysis import FringeError, Profile1D, extract_fringe_width
from .config import ExperimentConfig, ScanAxis

__all__ = [
    "GridSpec",
    "WavefunctionGrid",
    "GridResolutionError",
    "fresnel_propagate",
    "lens_phase",
    "grid_initial_state",
    "source_norm_audit",
    "grid_propagate",
    "grid_slit_projection",
    "grid_lens",
    "grid_coincidence",
    "grid_slice",
    "fit_complex_gaussian",
    "scaled_config",
    "ComparisonReport",
    "compare_oracle",
]

# spectral power below this fraction of the peak is ignored by the aliasing checks
NEGLIGIBLE_POWER = 1e-10
# fraction of the analytic norm allowed outside the grid
CLIP_TOLERANCE = 1e-6


class GridResolutionError(ValueError):
    """Grid too small or too coarse for the requested operation."""


def _is_pow2(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@dataclass(frozen=True)
class GridSpec:
    """Periodic sample grid; z = z_min + j*(z_max - z_min)/n, j = 0..n-1."""

    z1_min: float
    z1_max: float
    z2_min: float
    z2_max: float
    n1: int
    n2: int

    def __post_init__(self):
        for n in (self.n1, self.n2):
            if not (_is_pow2(n) and n >= 64):
                raise ValueError(f"sample counts must be powers of two >= 64, got {n}")
        if not (self.z1_max > self.z1_min and self.z2_max > self.z2_min):
            raise ValueError("grid ranges must be non-empty")

    @classmethod
    def symmetric(cls, half_width: float, n: int, half_width2: float | None = None,
                  n2: int | None = None) -> "GridSpec":
        """Square grid on [-a, a) with z = 0 as a sample."""
        b = half_width if half_width2 is None else half_width2
        return cls(-half_width, half_width, -b, b, n, n if n2 is None else n2)

    @property
    def dz1(self) -> float:
        return (self.z1_max - self.z1_min) / self.n1

    @property
    def dz2(self) -> float:
        return (self.z2_max - self.z2_min) / self.n2

    @property
    def z1(self) -> np.ndarray:
        return self.z1_min + self.dz1 * np.arange(self.n1)

    @property
    def z2(self) -> np.ndarray:
        return self.z2_min + self.dz2 * np.arange(self.n2)

    def axis(self, axis: int) -> np.ndarray:
        return self.z1 if axis == 1 else self.z2

    def spacing(self, axis: int) -> float:
        return self.dz1 if axis == 1 else self.dz2


@dataclass(frozen=True)
class WavefunctionGrid:
    spec: GridSpec
    values: np.ndarray
    norm_log: tuple[tuple[str, float], ...] = field(default=())

    def norm(self) -> float:
        return _norm(self.values, self.spec)

    def logged(self, stage: str, values: np.ndarray) -> "WavefunctionGrid":
        if not np.isfinite(values).all():
            raise GridResolutionError(f"non-finite amplitudes after {stage}")
        return replace(self, values=values,
                       norm_log=self.norm_log + ((stage, _norm(values, self.spec)),))

    def normalized(self, stage: str = "normalize") -> "WavefunctionGrid":
        return self.logged(stage, self.values / self.norm())


def _trapz2(a: np.ndarray, spec: GridSpec) -> float:
    return float(np.trapezoid(np.trapezoid(a, dx=spec.dz2, axis=1), dx=spec.dz1))


def _norm(values: np.ndarray, spec: GridSpec) -> float:
    return math.sqrt(_trapz2(np.abs(values) ** 2, spec))


# --- 1D kernels along an axis ------------------------------------------------

def fresnel_propagate(values: np.ndarray, dz: float, lam: float, dist: float,
                      axis: int = -1, check: bool = True) -> np.ndarray:
    """Paraxial free flight along ``axis``: multiply the spectrum by exp(-i lam dist k^2/(4 pi))."""
    if dist < 0:
        raise ValueError("propagation distance must be non-negative")
    if dist == 0:
        return values.copy()
    n = values.shape[axis]
    k = 2 * np.pi * np.fft.fftfreq(n, dz)
    spec = np.fft.fft(values, axis=axis)
    if check:
        power = np.abs(spec) ** 2
        other = tuple(i for i in range(values.ndim) if i != axis % values.ndim)
        if other:
            power = power.sum(axis=other)
        live = power > NEGLIGIBLE_POWER * power.max()
        k_edge = np.abs(k[live]).max()
        # kernel phase step between neighbouring k samples at the highest live k
        step = lam * dist * k_edge / (n * dz)
        if step > np.pi:
            raise GridResolutionError(
                f"propagation over {dist:g} m aliases: kernel phase step {step:.2f} rad > pi "
                f"at |k| = {k_edge:.3g} 1/m; enlarge the grid window")
    shape = [1] * values.ndim
    shape[axis] = n
    kernel = np.exp(-1j * lam * dist * k**2 / (4 * np.pi)).reshape(shape)
    return np.fft.ifft(spec * kernel, axis=axis)


def lens_phase(values: np.ndarray, z: np.ndarray, lam: float, f: float,
               axis: int = -1, check: bool = True) -> np.ndarray:
    """Thin converging lens: multiply by exp(-i pi z^2/(lam f)) along ``axis``."""
    if f <= 0:
        raise ValueError("focal length must be positive")
    shape = [1] * values.ndim
    shape[axis] = z.size
    if check and np.isfinite(f):
        power = np.abs(values) ** 2
        other = tuple(i for i in range(values.ndim) if i != axis % values.ndim)
        if other:
            power = power.sum(axis=other)
        live = power > NEGLIGIBLE_POWER * power.max()
        z_edge = np.abs(z[live]).max()
        dz = z[1] - z[0]
        step = 2 * np.pi * z_edge * dz / (lam * f)
        if step > np.pi:
            raise GridResolutionError(
                f"lens phase step {step:.2f} rad > pi at |z| = {z_edge:.3g} m; refine the grid")
    if not np.isfinite(f):
        return values.copy()
    return values * np.exp(-1j * np.pi * z**2 / (lam * f)).reshape(shape)


# --- grid operations ---------------------------------------------------------

def _source(sigma: float, omega_cap: float, spec: GridSpec) -> np.ndarray:
    z1 = spec.z1[:, None]
    z2 = spec.z2[None, :]
    return np.exp(-((z1 - z2) ** 2) * sigma**2 - (z1 + z2) ** 2 / (4 * omega_cap**2))


def _source_analytic_norm_sq(sigma: float, omega_cap: float) -> float:
    # integral of exp(-2 sigma^2 u^2 - v^2/(2 Omega^2)) du dv / 2 with u = z1 - z2, v = z1 + z2
    return math.pi * omega_cap / (2 * sigma)


def grid_initial_state(sigma: float, omega_cap: float, spec: GridSpec) -> WavefunctionGrid:
    """Sampled source state exp(-(z1-z2)^2 sigma^2) exp(-(z1+z2)^2/(4 Omega^2)), unit norm."""
    psi = _source(sigma, omega_cap, spec)
    captured = _trapz2(np.abs(psi) ** 2, spec) / _source_analytic_norm_sq(sigma, omega_cap)
    if abs(1 - captured) > CLIP_TOLERANCE:
        raise GridResolutionError(
            f"source state clipped or under-resolved by the grid: sampled/analytic norm "
            f"{captured:.9f}")
    g = WavefunctionGrid(spec, psi, (("sampled", math.sqrt(_trapz2(np.abs(psi) ** 2, spec))),))
    return g.normalized("initial")


def source_norm_audit(sigma: float, omega_cap: float, spec: GridSpec) -> float:
    """Grid norm integral of the source state with prefactor sqrt(sigma/(pi Omega))."""
    psi = math.sqrt(sigma / (math.pi * omega_cap)) * _source(sigma, omega_cap, spec)
    return _trapz2(np.abs(psi) ** 2, spec)


def grid_propagate(grid: WavefunctionGrid, axis: int, lam: float, dist: float) -> WavefunctionGrid:
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    out = fresnel_propagate(grid.values, grid.spec.spacing(axis), lam, dist, axis=axis - 1)
    return grid.logged(f"propagate z{axis} {dist:g} m", out)


def _slit_mode(z: np.ndarray, center: float, epsilon: float) -> np.ndarray:
    return (2 / np.pi) ** 0.25 / math.sqrt(epsilon) * np.exp(-((z - center) ** 2) / epsilon**2)


def grid_slit_projection(grid: WavefunctionGrid, slit_sep: float, epsilon: float,
                         renormalize: bool = True):
    """Keep only the slit-mode components of photon 1.

    Returns ``(grid, discarded_fraction, (psi_a, psi_b))`` where psi_a, psi_b are the
    photon-2 amplitudes <phi_A|Psi>, <phi_B|Psi> on the z2 samples.
    """
    spec = grid.spec
    if epsilon / spec.dz1 < 4:
        raise GridResolutionError(
            f"slit width {epsilon:g} m spans only {epsilon / spec.dz1:.1f} samples; need >= 4")
    z1 = spec.z1
    z0 = slit_sep / 2
    phi_a = _slit_mode(z1, z0, epsilon)
    phi_b = _slit_mode(z1, -z0, epsilon)
    psi_a = np.trapezoid(phi_a[:, None] * grid.values, dx=spec.dz1, axis=0)
    psi_b = np.trapezoid(phi_b[:, None] * grid.values, dx=spec.dz1, axis=0)
    kept = np.outer(phi_a, psi_a) + np.outer(phi_b, psi_b)
    before = grid.norm()
    after = _norm(kept, spec)
    discarded = 1 - (after / before) ** 2
    if discarded > 0.999999:
        raise GridResolutionError("slit projection removes essentially the whole state")
    out = grid.logged("slit projection", kept)
    if renormalize:
        out = out.normalized("renormalize after slits")
    return out, float(discarded), (psi_a, psi_b)


def grid_lens(grid: WavefunctionGrid, axis: int, f: float, lam: float) -> WavefunctionGrid:
    out = lens_phase(grid.values, grid.spec.axis(axis), lam, f, axis=axis - 1)
    return grid.logged(f"lens z{axis} f={f:g} m", out)


def grid_coincidence(grid: WavefunctionGrid) -> np.ndarray:
    return np.abs(grid.values) ** 2


def grid_slice(grid: WavefunctionGrid, fixed_axis: int, position: float) -> Profile1D:
    """Coincidence profile along the free axis with the other detector at ``position``."""
    zf = grid.spec.axis(fixed_axis)
    dz = grid.spec.spacing(fixed_axis)
    if not (zf[0] - dz / 2 <= position <= zf[-1] + dz / 2):
        raise ValueError(f"fixed position {position:g} m outside the grid")
    j = int(np.argmin(np.abs(zf - position)))
    dens = grid_coincidence(grid)
    if fixed_axis == 1:
        return Profile1D(grid.spec.z2, dens[j, :])
    return Profile1D(grid.spec.z1, dens[:, j])


def fit_complex_gaussian(z: np.ndarray, psi: np.ndarray, floor: float = 1e-3):
    """Fit psi ~ A exp(-(z - c)^2/B) by least squares on log psi. Returns (c, B)."""
    mag = np.abs(psi)
    sel = mag > floor * mag.max()
    zs = z[sel]
    logpsi = np.log(mag[sel]) + 1j * np.unwrap(np.angle(psi[sel]))
    mid, scale = zs.mean(), np.ptp(zs) / 2
    c2, c1, _ = np.polyfit((zs - mid) / scale, logpsi, 2)
    inv_b = -c2 / scale**2
    b = 1 / inv_b
    # -(z-c)^2/B linear coefficient in (z - mid): 2 (c - mid)/B
    c = mid + c1 / scale * b / 2
    return complex(c), complex(b)


# --- end-to-end comparison ---------------------------------------------------

def scaled_config(cfg: ExperimentConfig, epsilon: float = 20e-6,
                  omega_cap: float = 1e-3) -> ExperimentConfig:
    """Desk-scale copy of ``cfg`` that a 4096^2 grid can hold.

    Transverse sizes shrink to ``epsilon`` keeping d/epsilon and gamma/epsilon,
    and flight distances shrink so that (lambda2 L + lambda1 L2)/(pi gamma^2),
    the far-field ratio that sets fringe count and visibility, is unchanged.
    """
    shrink = epsilon / cfg.epsilon
    gamma_sq = cfg.gamma_sq * shrink**2
    sigma = 1 / math.sqrt(gamma_sq - epsilon**2)
    dist = shrink**2
    lens = None if cfg.lens_focal is None else cfg.lens_focal * dist
    return replace(cfg, epsilon=epsilon, slit_sep=cfg.slit_sep * shrink, sigma=sigma,
                   omega_cap=omega_cap, l1=cfg.l1 * dist, l2=cfg.l2 * dist,
                   lens_focal=lens, fixed_pos=cfg.fixed_pos * shrink,
                   scan=ScanAxis(cfg.scan.detector, cfg.scan.z_min * shrink,
                                 cfg.scan.z_max * shrink, cfg.scan.samples))


@dataclass
class ComparisonReport:
    config: ExperimentConfig
    n: int
    linf_rel: float
    l2_rel: float
    fringe_width_closed: float
    fringe_width_grid: float
    fringe_width_predicted: float
    discarded_fraction: float
    norm_log: tuple[tuple[str, float], ...]
    seconds: float
    linf_rel_other: dict = field(default_factory=dict)
    z: np.ndarray = field(repr=False, default=None)
    closed: np.ndarray = field(repr=False, default=None)
    grid: np.ndarray = field(repr=False, default=None)

    @property
    def fringe_ratio(self) -> float:
        return self.fringe_width_closed / self.fringe_width_grid

    def lines(self) -> list[str]:
        c = self.config
        out = [
            f"grid_samples: {self.n}x{self.n}",
            f"epsilon_m: {c.epsilon:.6g}",
            f"slit_sep_m: {c.slit_sep:.6g}",
            f"L1_m: {c.l1:.6g}",
            f"L2_m: {c.l2:.6g}",
            f"omega_m: {c.omega_cap:.6g}",
            f"profile_linf_rel_error: {self.linf_rel:.3e}",
            f"profile_l2_rel_error: {self.l2_rel:.3e}",
            f"fringe_width_closed_form_m: {self.fringe_width_closed:.6e}",
            f"fringe_width_grid_m: {self.fringe_width_grid:.6e}",
            f"fringe_width_predicted_m: {self.fringe_width_predicted:.6e}",
            f"fringe_width_ratio: {self.fringe_ratio:.6f}",
            f"discarded_norm_fraction: {self.discarded_fraction:.6f}",
        ]
        out += [f"profile_linf_rel_error[{k}]: {v:.3e}" for k, v in self.linf_rel_other.items()]
        out += [f"norm[{stage}]: {value:.12f}" for stage, value in self.norm_log]
        out.append(f"runtime_s: {self.seconds:.2f}")
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def compare_oracle(cfg: ExperimentConfig, scaled: bool = True, n: int = 4096,
                   half_width: float | None = None) -> ComparisonReport:
    """Run the grid pipeline and the closed form on the same geometry; compare P(0, z2).

    With ``scaled`` the geometry is first shrunk by :func:`scaled_config`.
    """
    from .core import analytic_fringe_width, detector_state

    t0 = time.perf_counter()
    c = scaled_config(cfg) if scaled else cfg
    if half_width is None:
        half_width = 250 * c.epsilon
    spec = GridSpec.symmetric(half_width, n)
    g = grid_initial_state(c.sigma, c.omega_cap, spec)
    g = grid_propagate(g, 1, c.lambda1, c.l2)
    g = grid_propagate(g, 2, c.lambda2, c.l2)
    g, discarded, _ = grid_slit_projection(g, c.slit_sep, c.epsilon)
    g = grid_propagate(g, 1, c.lambda1, c.l1)
    if c.lens_focal is None:
        g = grid_propagate(g, 2, c.lambda2, c.l1)
    else:
        g = grid_propagate(g, 2, c.lambda2, c.l1 - c.lens_focal)
        g = grid_lens(g, 2, c.lens_focal, c.lambda2)
        g = grid_propagate(g, 2, c.lambda2, c.lens_focal)
    prof = grid_slice(g, 1, c.fixed_pos)

    state = detector_state(c, method="exact", lens_model="thin_lens")
    closed = np.abs(state.amplitude(spec.z1[np.argmin(np.abs(spec.z1 - c.fixed_pos))], spec.z2)) ** 2
    diff = prof.values - closed
    linf = float(np.abs(diff).max() / np.abs(closed).max())
    l2 = float(np.linalg.norm(diff) / np.linalg.norm(closed))

    z1_fixed = spec.z1[np.argmin(np.abs(spec.z1 - c.fixed_pos))]
    other = {}
    for method in ("expanded", "approx"):
        alt = np.abs(detector_state(c, method=method, lens_model="thin_lens").amplitude(z1_fixed, spec.z2)) ** 2
        other[method] = float(np.abs(prof.values - alt).max() / np.abs(closed).max())

    try:
        predicted = analytic_fringe_width(c, "two_color") if c.lens_focal is None else math.nan
    except ValueError:
        predicted = math.nan
    hint = None if math.isnan(predicted) else predicted
    try:
        w_closed = extract_fringe_width(Profile1D(spec.z2, closed), hint).fringe_width
        w_grid = extract_fringe_width(prof, hint).fringe_width
    except FringeError:
        w_closed = w_grid = math.nan
    return ComparisonReport(c, n, linf, l2, w_closed, w_grid, predicted, discarded,
                            g.norm_log, time.perf_counter() - t0, other, spec.z2, closed, prof.values)
