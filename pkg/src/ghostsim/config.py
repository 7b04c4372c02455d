"""Experiment configuration: physical parameters, validation and JSON ingest.

All lengths are stored in metres. Config files quote each quantity in the
unit it is usually written in (nm for wavelengths, um for 1/sigma, mm for
transverse sizes, m for flight distances) and are converted once here.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

__all__ = [
    "ConfigError",
    "RegimeWarning",
    "ScanAxis",
    "ExperimentConfig",
    "load_config",
    "config_from_dict",
    "fig2_config",
]

# Good-correlation regime: Omega must exceed this multiple of max(eps, 1/sigma).
GOOD_CORRELATION_FACTOR = 100.0


class ConfigError(ValueError):
    """Invalid configuration. ``key`` names the offending config-file key."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class RegimeWarning(UserWarning):
    """A physical approximation is being used outside its regime of validity."""


@dataclass(frozen=True)
class ScanAxis:
    """Which detector is scanned, over what range and how finely."""

    detector: str = "d2"
    z_min: float = -10e-3
    z_max: float = 10e-3
    samples: int = 2048

    def __post_init__(self):
        if self.detector not in ("d1", "d2"):
            raise ConfigError(f"scan detector must be 'd1' or 'd2', got {self.detector!r}",
                              "scan_detector")
        if not self.z_max > self.z_min:
            raise ConfigError("scan range must satisfy scan_min_mm < scan_max_mm", "scan_max_mm")
        if int(self.samples) != self.samples or self.samples < 2:
            raise ConfigError("scan_samples must be an integer >= 2", "scan_samples")

    def positions(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, int(self.samples))


@dataclass(frozen=True)
class ExperimentConfig:
    """Physical parameters of one ghost-interference run (SI units).

    Parameters
    ----------
    lambda1, lambda2 : float
        Wavelengths of photon 1 (goes through the slits) and photon 2 [m].
    sigma : float
        Relative-coordinate (momentum-spread) parameter of the source state [1/m].
    omega_cap : float
        Centre-of-mass (position-spread) parameter of the source state [m].
    epsilon : float
        Width of the Gaussian slit modes, exp(-(z -+ z0)^2/epsilon^2) [m].
    slit_sep : float
        Slit separation d = 2 z0 [m].
    l1 : float
        Slit to D1 distance; also photon 2's flight after photon 1 crosses the slits [m].
    l2 : float
        Source to slit distance; also photon 2's flight before that [m].
    lens_focal : float, optional
        Focal length of the converging lens placed f before D2 [m].
    scan : ScanAxis
        Scanned detector and sampling.
    fixed_pos : float
        Position of the detector that is held fixed [m].
    """

    lambda1: float
    lambda2: float
    sigma: float
    omega_cap: float
    epsilon: float
    slit_sep: float
    l1: float
    l2: float
    lens_focal: Optional[float] = None
    scan: ScanAxis = field(default_factory=ScanAxis)
    fixed_pos: float = 0.0

    def __post_init__(self):
        for name, key in _FIELD_KEYS.items():
            value = getattr(self, name)
            if name == "lens_focal" and value is None:
                continue
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
                raise ConfigError(f"{key} must be a finite positive number, got {value!r}", key)
        if not math.isfinite(self.fixed_pos):
            raise ConfigError("fixed detector position must be finite", "fixed_mm")
        if self.lens_focal is not None:
            if self.lens_focal >= self.l1:
                raise ConfigError("lens must sit between source and D2: need f_m < L1_m", "f_m")
            if abs(self.alpha * self.l2 + self.l1 - 2 * self.lens_focal) < 1e-12 * self.l1:
                raise ConfigError("lens geometry degenerate: alpha*L2 + L1 - 2f = 0", "f_m")

    # derived quantities
    @property
    def z0(self) -> float:
        return self.slit_sep / 2

    @property
    def big_d(self) -> float:
        """Slit to D2 distance measured back through the source, D = L1 + 2 L2."""
        return self.l1 + 2 * self.l2

    @property
    def gamma_sq(self) -> float:
        """gamma^2 = epsilon^2 + 1/sigma^2, real width parameter of the virtual slits."""
        return self.epsilon**2 + 1 / self.sigma**2

    @property
    def alpha(self) -> float:
        return 1 + self.lambda1 / self.lambda2

    @property
    def good_correlation(self) -> bool:
        return self.omega_cap >= GOOD_CORRELATION_FACTOR * max(self.epsilon, 1 / self.sigma)

    def regime_warnings(self) -> list[str]:
        """Human-readable list of approximations this config strains."""
        out = []
        if not self.good_correlation:
            out.append(
                f"Omega = {self.omega_cap:.3g} m is below {GOOD_CORRELATION_FACTOR:g} x "
                f"max(epsilon, 1/sigma) = {max(self.epsilon, 1 / self.sigma):.3g} m; "
                "good-correlation approximation is poor"
            )
        far = (self.lambda2 * (self.l1 + self.l2) + self.lambda1 * self.l2) / math.pi
        if self.gamma_sq > 0.1 * far:
            out.append(
                f"gamma^2 = {self.gamma_sq:.3g} m^2 is not << (lambda2 L + lambda1 L2)/pi = "
                f"{far:.3g} m^2; Young-type fringe widths are inaccurate"
            )
        return out

    def warn_regime(self) -> list[str]:
        msgs = self.regime_warnings()
        for m in msgs:
            warnings.warn(m, RegimeWarning, stacklevel=2)
        return msgs

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


_FIELD_KEYS = {
    "lambda1": "lambda1_nm",
    "lambda2": "lambda2_nm",
    "sigma": "sigma_inv_um",
    "omega_cap": "omega_mm",
    "epsilon": "epsilon_mm",
    "slit_sep": "d_mm",
    "l1": "L1_m",
    "l2": "L2_m",
    "lens_focal": "f_m",
}

_REQUIRED = ("lambda1_nm", "lambda2_nm", "sigma_inv_um", "omega_mm",
             "epsilon_mm", "d_mm", "L1_m", "L2_m")
_OPTIONAL = ("f_m", "scan_detector", "scan_min_mm", "scan_max_mm",
             "scan_samples", "fixed_mm")


def _number(raw: dict, key: str, positive: bool = True) -> float:
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}", key)
    value = float(value)
    if not math.isfinite(value) or (positive and value <= 0):
        raise ConfigError(f"{key} must be a finite positive number, got {value!r}", key)
    return value


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build a validated config from the flat JSON key set."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a flat JSON object")
    unknown = sorted(set(raw) - set(_REQUIRED) - set(_OPTIONAL))
    if unknown:
        raise ConfigError(f"unknown config key {unknown[0]!r}", unknown[0])
    for key in _REQUIRED:
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}", key)

    scan_kw = {}
    if "scan_detector" in raw:
        scan_kw["detector"] = str(raw["scan_detector"]).lower()
    if "scan_min_mm" in raw:
        scan_kw["z_min"] = _number(raw, "scan_min_mm", positive=False) * 1e-3
    if "scan_max_mm" in raw:
        scan_kw["z_max"] = _number(raw, "scan_max_mm", positive=False) * 1e-3
    if "scan_samples" in raw:
        n = raw["scan_samples"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise ConfigError("scan_samples must be an integer >= 2", "scan_samples")
        scan_kw["samples"] = n

    return ExperimentConfig(
        lambda1=_number(raw, "lambda1_nm") * 1e-9,
        lambda2=_number(raw, "lambda2_nm") * 1e-9,
        sigma=1 / (_number(raw, "sigma_inv_um") * 1e-6),
        omega_cap=_number(raw, "omega_mm") * 1e-3,
        epsilon=_number(raw, "epsilon_mm") * 1e-3,
        slit_sep=_number(raw, "d_mm") * 1e-3,
        l1=_number(raw, "L1_m"),
        l2=_number(raw, "L2_m"),
        lens_focal=_number(raw, "f_m") if "f_m" in raw else None,
        scan=ScanAxis(**scan_kw),
        fixed_pos=_number(raw, "fixed_mm", positive=False) * 1e-3 if "fixed_mm" in raw else 0.0,
    )


def load_config(path) -> ExperimentConfig:
    """Read a JSON config file.

    A bare name of a bundled config (``fig2``, ``fig2.json``, ``fig2_lens.json``)
    resolves to the packaged copy when no such file exists on disk.
    """
    p = Path(path)
    bundled = resources.files("ghostsim.data").joinpath(
        p.name if p.suffix == ".json" else p.name + ".json")
    if not p.exists() and p.parent == Path(".") and bundled.is_file():
        text = bundled.read_text(encoding="utf-8")
    else:
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(raw)


def fig2_config(**changes) -> ExperimentConfig:
    """Bundled two-colour configuration (lambda1=1530 nm, lambda2=780 nm, gamma=0.11 mm)."""
    cfg = load_config("fig2.json")
    return replace(cfg, **changes) if changes else cfg
