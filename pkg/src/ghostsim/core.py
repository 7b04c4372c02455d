"""Closed-form ghost-interference pipeline.

source state -> both photons fly L2 -> photon 1 projected on two Gaussian slit
modes -> photon 1 flies L1 to D1 while photon 2 flies L1 to D2 (optionally
through a converging lens placed f before D2).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .config import ConfigError, ExperimentConfig, RegimeWarning
from .modes import (
    GaussianMode,
    Term,
    TwoPhotonState,
    lens_transform_mode,
    mode_overlap,
    normalize_state,
    propagate_mode,
    propagate_state,
    thin_lens_mode,
)

__all__ = [
    "SlitParams",
    "SLIT_METHODS",
    "LENS_MODELS",
    "uncertainties",
    "source_covariance",
    "conditional_slit_params",
    "post_slit_state",
    "detector_state",
    "apply_lens_scenario",
    "theta_coefficients",
    "analytic_fringe_width",
    "SCENARIOS",
    "scan_profile",
    "pattern_density",
    "lens_pattern_density",
    "cross_term_visibility",
]

SLIT_METHODS = ("exact", "expanded", "approx")
LENS_MODELS = ("width_map", "thin_lens")
SCENARIOS = ("same_color", "two_color", "lens", "scan_d1")


def uncertainties(cfg: ExperimentConfig) -> tuple[float, float]:
    """Position and wave-vector spreads of either photon in the source state.

    Returns ``(sqrt(Omega^2 + 1/(4 sigma^2)), sqrt(sigma^2 + 1/(4 Omega^2)) / 2)``.
    The position value is the amplitude width w of the single-photon marginal,
    |psi|^2 ~ exp(-2 z^2/w^2), i.e. twice the standard deviation.
    """
    om, s = cfg.omega_cap, cfg.sigma
    return math.sqrt(om**2 + 1 / (4 * s**2)), 0.5 * math.sqrt(s**2 + 1 / (4 * om**2))


def source_covariance(cfg: ExperimentConfig, l2: float | None = None) -> np.ndarray:
    """Inverse-quadratic-form matrix N of the source state after both photons fly ``l2``.

    The source amplitude is exp(-z^T M z) with z = (z1, z2); free flight adds
    i*lambda_j*L/pi to the diagonal of N = M^-1.
    """
    l2 = cfg.l2 if l2 is None else l2
    s, om = cfg.sigma, cfg.omega_cap
    p = om**2 + 1 / (4 * s**2)
    q = om**2 - 1 / (4 * s**2)
    return np.array([
        [p + 1j * cfg.lambda1 * l2 / math.pi, q],
        [q, p + 1j * cfg.lambda2 * l2 / math.pi],
    ])


@dataclass(frozen=True)
class SlitParams:
    """Centre and width parameter of the photon-2 packet conditioned on slit A (+z0)."""

    z0_prime: complex
    gamma_cap: complex

    @property
    def gamma_r(self) -> float:
        return complex(self.gamma_cap).real

    @property
    def gamma_i(self) -> float:
        return complex(self.gamma_cap).imag


def conditional_slit_params(cfg: ExperimentConfig, method: str = "exact") -> SlitParams:
    """z0' and Gamma of the conditional photon-2 packets.

    method
        ``"exact"``: Gaussian integration of the propagated source state against
        the slit mode. z0' is complex when L2 > 0 (the packet is tilted).
        ``"expanded"``: closed forms expanded about strong correlation; z0' is
        real and independent of L2, Gamma carries first-order flight terms.
        ``"approx"``: good-correlation limit, z0' = z0 and
        Gamma = gamma^2 + i (lambda1 + lambda2) L2 / pi.
    """
    if method not in SLIT_METHODS:
        raise ValueError(f"method must be one of {SLIT_METHODS}, got {method!r}")
    eps2 = cfg.epsilon**2
    z0 = cfg.z0
    s, om = cfg.sigma, cfg.omega_cap
    l1_sum = cfg.lambda1 + cfg.lambda2
    if method == "approx":
        return SlitParams(complex(z0), cfg.gamma_sq + 1j * l1_sum * cfg.l2 / math.pi)

    if math.isclose(4 * om**2 * s**2, 1.0, rel_tol=1e-12):
        raise ConfigError("4 Omega^2 sigma^2 = 1: source state carries no correlation, "
                          "conditional slit packets undefined", "omega_mm")

    if method == "exact":
        n = source_covariance(cfg)
        den = eps2 + n[0, 0]
        a1 = cfg.lambda1 * cfg.l2 / math.pi
        a2 = cfg.lambda2 * cfg.l2 / math.pi
        # det N written out: P^2 - Q^2 = Omega^2/sigma^2 cancels badly when formed numerically
        det = om**2 / s**2 + 1j * n[0, 0].real * (a1 + a2) - a1 * a2
        return SlitParams(n[0, 1] * z0 / den, (n[1, 1] * eps2 + det) / den)

    # expanded forms; ct0 is the pre-slit flight L2
    ct = cfg.l2
    l1, l2 = cfg.lambda1, cfg.lambda2
    oms = 4 * om**2 * s**2
    z0p = z0 / ((oms + 1) / (oms - 1) + 4 * eps2 / (4 * om**2 - 1 / s**2))
    num = (eps2 + (1 + eps2 / (4 * om**2)) / s**2
           + 1j * ct / (2 * math.pi * s**2 * om**2) * l1 * l2 / l1_sum
           + 1j * ct / math.pi * l1_sum * (1 + 1 / oms))
    den = (1 + eps2 / om**2
           + 1j * ct / (4 * math.pi * om**2) * (l1_sum + l1 * l2 / l1_sum)
           + 1 / oms)
    return SlitParams(complex(z0p), num / den)


def post_slit_state(cfg: ExperimentConfig, method: str = "exact") -> TwoPhotonState:
    """Normalized two-term state just after photon 1 crosses the double slit.

    The blocked part of photon 1 is discarded.
    """
    sp = conditional_slit_params(cfg, method)
    eps2 = cfg.epsilon**2
    terms = (
        Term(1.0, GaussianMode(1.0, cfg.z0, eps2), GaussianMode(1.0, sp.z0_prime, sp.gamma_cap)),
        Term(1.0, GaussianMode(1.0, -cfg.z0, eps2), GaussianMode(1.0, -sp.z0_prime, sp.gamma_cap)),
    )
    return normalize_state(TwoPhotonState(terms, cfg.lambda1, cfg.lambda2))


def detector_state(cfg: ExperimentConfig, method: str = "exact",
                   lens_model: str = "width_map") -> TwoPhotonState:
    """State with both photons at their detector planes.

    Dispatches to :func:`apply_lens_scenario` when the config has a lens.
    """
    if cfg.lens_focal is not None:
        return apply_lens_scenario(cfg, method=method, lens_model=lens_model)
    return propagate_state(post_slit_state(cfg, method), cfg.l1, cfg.l1)


def apply_lens_scenario(cfg: ExperimentConfig, method: str = "exact",
                        lens_model: str = "width_map") -> TwoPhotonState:
    """Photon 2 flies L1 - f, crosses a lens of focal length f, then flies f to D2.

    lens_model
        ``"width_map"``: :func:`~ghostsim.modes.lens_transform_mode`, the lens map acting on
        the width parameter only, with the flight from the virtual-slit waist read
        off the width parameter (= (1 + lambda1/lambda2) L2 + L1 - f in the
        good-correlation limit).
        ``"thin_lens"``: quadratic phase, :func:`~ghostsim.modes.thin_lens_mode`.
    """
    f = cfg.lens_focal
    if f is None:
        raise ConfigError("lens focal length required", "f_m")
    if lens_model not in LENS_MODELS:
        raise ValueError(f"lens_model must be one of {LENS_MODELS}, got {lens_model!r}")
    state = propagate_state(post_slit_state(cfg, method), cfg.l1, cfg.l1 - f)
    terms = []
    for t in state.terms:
        if lens_model == "width_map":
            m2 = lens_transform_mode(t.mode2, f, cfg.lambda2)
        else:
            m2 = thin_lens_mode(t.mode2, f, cfg.lambda2)
        terms.append(Term(t.coeff, t.mode1, propagate_mode(m2, cfg.lambda2, f)))
    out = TwoPhotonState(tuple(terms), cfg.lambda1, cfg.lambda2)
    # the width-parameter map is norm preserving per mode but shifts the cross overlap
    return normalize_state(out) if lens_model == "width_map" else out


def theta_coefficients(cfg: ExperimentConfig) -> tuple[float, float]:
    """Phase gradients (theta1, theta2) of the coincidence cross term, no-lens geometry.

    theta1 = 2 d (lambda1 L1/pi) / (eps^4 + (lambda1 L1/pi)^2)
    theta2 = 2 pi d X / (gamma^4 pi^2 + X^2), X = lambda2 (L1 + L2) + lambda1 L2
    """
    d = cfg.slit_sep
    a = cfg.lambda1 * cfg.l1 / math.pi
    theta1 = 2 * d * a / (cfg.epsilon**4 + a**2)
    x = cfg.lambda2 * (cfg.l1 + cfg.l2) + cfg.lambda1 * cfg.l2
    theta2 = 2 * math.pi * d * x / (cfg.gamma_sq**2 * math.pi**2 + x**2)
    return theta1, theta2


def analytic_fringe_width(cfg: ExperimentConfig, scenario: str) -> float:
    """Young-type fringe width predicted for ``scenario``.

    same_color  lambda D / d with D = L1 + 2 L2 (needs lambda1 == lambda2)
    two_color   (lambda2 (L1 + L2) + lambda1 L2) / d
    lens        lambda2 f (1 + (a L2 + L1 - f)/(a L2 + L1 - 2f)) / d, a = 1 + lambda1/lambda2
    scan_d1     lambda1 L1 / d (D1 scanned, D2 fixed)
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    d = cfg.slit_sep
    if scenario == "scan_d1":
        far = cfg.lambda1 * cfg.l1 / math.pi
        if cfg.epsilon**2 > 0.1 * far:
            warnings.warn("epsilon^2 not << lambda1 L1/pi; D1 fringe width inaccurate",
                          RegimeWarning, stacklevel=2)
        return cfg.lambda1 * cfg.l1 / d

    x = cfg.lambda2 * (cfg.l1 + cfg.l2) + cfg.lambda1 * cfg.l2
    if cfg.gamma_sq > 0.1 * x / math.pi:
        warnings.warn("gamma^2 not << lambda D/pi; Young-type fringe width inaccurate",
                      RegimeWarning, stacklevel=2)
    if scenario == "same_color":
        if not math.isclose(cfg.lambda1, cfg.lambda2, rel_tol=1e-12):
            raise ValueError("same_color scenario needs lambda1 == lambda2")
        return cfg.lambda2 * cfg.big_d / d
    if scenario == "two_color":
        return x / d
    f = cfg.lens_focal
    if f is None:
        raise ConfigError("lens focal length required", "f_m")
    a = cfg.alpha
    return cfg.lambda2 * f * (1 + (a * cfg.l2 + cfg.l1 - f) / (a * cfg.l2 + cfg.l1 - 2 * f)) / d


def scan_profile(cfg: ExperimentConfig, z=None, method: str = "exact",
                 lens_model: str = "width_map"):
    """Coincidence density along the scanned detector with the other one fixed.

    Returns ``(z, density)``; ``z`` defaults to ``cfg.scan.positions()``.
    """
    z = cfg.scan.positions() if z is None else np.asarray(z, dtype=float)
    state = detector_state(cfg, method, lens_model)
    if cfg.scan.detector == "d2":
        return z, np.abs(state.amplitude(cfg.fixed_pos, z)) ** 2
    return z, np.abs(state.amplitude(z, cfg.fixed_pos)) ** 2


def pattern_density(cfg: ExperimentConfig, z1, z2):
    """Unnormalized three-exponential-plus-cosine coincidence pattern, no lens.

    Written out term by term in the good-correlation limit; proportional to
    ``coincidence_density(detector_state(cfg, "approx"), z1, z2)``.
    """
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    z0 = cfg.z0
    a1 = cfg.lambda1 * cfg.l1 / math.pi
    x = (cfg.lambda2 * (cfg.l1 + cfg.l2) + cfg.lambda1 * cfg.l2) / math.pi
    e2, g2 = cfg.epsilon**2, cfg.gamma_sq
    w1 = e2 + a1**2 / e2
    w2 = g2 + x**2 / g2
    th1, th2 = theta_coefficients(cfg)
    return (np.exp(-2 * (z1 - z0) ** 2 / w1 - 2 * (z2 - z0) ** 2 / w2)
            + np.exp(-2 * (z1 + z0) ** 2 / w1 - 2 * (z2 + z0) ** 2 / w2)
            + np.exp(-2 * (z1**2 + z0**2) / w1 - 2 * (z2**2 + z0**2) / w2)
            * 2 * np.cos(th1 * z1 + th2 * z2))


def lens_pattern_density(cfg: ExperimentConfig, z2):
    """Closed-form lens-scenario coincidence profile P(0, z2), unnormalized.

    Far-field form with two exponentials and a cosine of period
    lambda2 f (1 + (a L2 + L1 - f)/(a L2 + L1 - 2f))/d. The first term of delta2
    uses (1 + a) L2 where the width algebra gives a L2; it shapes the envelope
    only, not the period.
    """
    f = cfg.lens_focal
    if f is None:
        raise ConfigError("lens focal length required", "f_m")
    z2 = np.asarray(z2, dtype=float)
    a, l1, l2, lam2 = cfg.alpha, cfg.l1, cfg.l2, cfg.lambda2
    z0, d, g = cfg.z0, cfg.slit_sep, math.sqrt(cfg.gamma_sq)
    delta1 = cfg.epsilon**2 + (cfg.lambda1 * l1) ** 2 / (math.pi**2 * cfg.epsilon**2)
    delta2 = ((g * f / ((1 + a) * l2 + l1 - 2 * f)) ** 2
              + lam2**2 * ((2 * a * l2 + 2 * l1 - 3 * f) / (g * math.pi)) ** 2)
    period = lam2 * f * (1 + (a * l2 + l1 - f) / (a * l2 + l1 - 2 * f)) / d
    return (np.exp(-2 * z0**2 / delta1 - 2 * (z2**2 + z0**2) / delta2)
            * (np.cosh(4 * z2 * z0 / delta2) + np.cos(2 * math.pi * z2 / period)))


def cross_term_visibility(state: TwoPhotonState, which_photon: int, z) -> np.ndarray:
    """Pointwise interference visibility of a two-term state's single-photon marginal.

    2 |c_A c_B <other_A|other_B>| |m_A(z) m_B(z)| / (|c_A m_A(z)|^2 + |c_B m_B(z)|^2),
    the largest fringe contrast the marginal could show at z.
    """
    if len(state) != 2:
        raise ValueError("cross_term_visibility needs a two-term state")
    a, b = state.terms
    if which_photon == 1:
        ma, mb, oa, ob = a.mode1, b.mode1, a.mode2, b.mode2
    else:
        ma, mb, oa, ob = a.mode2, b.mode2, a.mode1, b.mode1
    z = np.asarray(z, dtype=float)
    va = np.abs(a.coeff * ma(z)) * math.sqrt(mode_overlap(oa, oa).real)
    vb = np.abs(b.coeff * mb(z)) * math.sqrt(mode_overlap(ob, ob).real)
    ov = abs(mode_overlap(oa, ob)) / math.sqrt(mode_overlap(oa, oa).real * mode_overlap(ob, ob).real)
    return 2 * ov * va * vb / (va**2 + vb**2)
