"""Closed-form algebra of 1D complex Gaussian wave packets and sums of their products.

A mode is ``amp * exp(-(z - center)**2 / width_param)`` with complex ``width_param``
whose real part is positive. Under paraxial free flight over a distance L at
wavelength lambda only the width parameter changes, B -> B + i*lambda*L/pi, so a
two-photon state built from finitely many product terms stays closed under
propagation, slit projection and lens action.

``center`` is allowed to be complex. A complex centre is an ordinary Gaussian
whose intensity peak sits at a shifted real position and which carries a linear
phase (a tilt); it arises when conditional packets are computed without the
good-correlation approximation, and from an exact thin lens acting on an
off-axis packet.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

__all__ = [
    "GaussianMode",
    "Term",
    "TwoPhotonState",
    "mode_overlap",
    "mode_norm",
    "propagate_mode",
    "lens_transform_mode",
    "thin_lens_mode",
    "normalize_state",
    "propagate_state",
    "coincidence_density",
    "marginal_density",
    "state_norm",
    "LensCollimationError",
]


class LensCollimationError(ValueError):
    """Packet starts in the front focal plane; its image is at infinity."""


@dataclass(frozen=True)
class GaussianMode:
    amp: complex
    center: complex
    width_param: complex

    def __post_init__(self):
        b = complex(self.width_param)
        if not (b.real > 0 and math.isfinite(b.real) and math.isfinite(b.imag)):
            raise ValueError(f"width parameter must have positive real part, got {b!r}")

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        return self.amp * np.exp(-((z - self.center) ** 2) / self.width_param)

    @property
    def intensity_center(self) -> float:
        """Real position of the |psi|^2 peak."""
        inv = 1 / complex(self.width_param)
        c = complex(self.center)
        # |psi|^2 ~ exp(-2 Re[(z-c)^2/B]); stationary point of the real quadratic
        return (inv.real * c.real - inv.imag * c.imag) / inv.real if c.imag else c.real

    @property
    def intensity_width(self) -> float:
        """w such that |psi|^2 ~ exp(-2 (z - z_peak)^2 / w^2)."""
        return 1 / math.sqrt((1 / complex(self.width_param)).real)

    def norm(self) -> float:
        return mode_norm(self)

    def normalized(self) -> "GaussianMode":
        return replace(self, amp=self.amp / mode_norm(self))

    def scaled(self, factor: complex) -> "GaussianMode":
        return replace(self, amp=self.amp * factor)


def mode_overlap(a: GaussianMode, b: GaussianMode) -> complex:
    """<a|b> = integral of conj(a(z)) b(z) dz, exactly."""
    p = 1 / complex(a.width_param).conjugate()
    q = 1 / complex(b.width_param)
    s = p + q
    dc = complex(a.center).conjugate() - complex(b.center)
    # integral of exp(-p(z-ca*)^2 - q(z-cb)^2) = sqrt(pi/(p+q)) exp(-pq (ca*-cb)^2/(p+q))
    return complex(a.amp).conjugate() * b.amp * cmath.sqrt(math.pi / s) * cmath.exp(-p * q * dc * dc / s)


def mode_norm(m: GaussianMode) -> float:
    return math.sqrt(mode_overlap(m, m).real)


def propagate_mode(mode: GaussianMode, lam: float, dist: float) -> GaussianMode:
    """Free paraxial flight over ``dist`` at wavelength ``lam``; the carrier phase is dropped."""
    if dist < 0:
        raise ValueError(f"propagation distance must be non-negative, got {dist}")
    if dist == 0:
        return mode
    b0 = complex(mode.width_param)
    b1 = b0 + 1j * lam * dist / math.pi
    # amp * sqrt(B0/B1) is the exact Fresnel-propagated prefactor; principal roots are
    # continuous along the path because both B0 and B1 lie in the right half plane
    return GaussianMode(mode.amp * cmath.sqrt(b0) / cmath.sqrt(b1), mode.center, b1)


def lens_transform_mode(mode: GaussianMode, f: float, lam: float,
                        dist_before: float | None = None) -> GaussianMode:
    """Converging-lens map for a packet that has flown ``dist_before`` from its waist.

    Writes the incoming width parameter as s^2 + i*Lam*L (Lam = lam/pi, s^2 = Re B,
    L = dist_before) and returns width (s f/(L-f))^2 - i*Lam*f*L/(L-f): the packet
    then narrows and reaches a real waist of width s f/(L-f) after a further
    u = f L/(L-f), i.e. 1/u = 1/f - 1/L. This is the far-field form of the lens;
    see :func:`thin_lens_mode` for the exact quadratic-phase action. The centre is
    left in place and the amplitude is rescaled so the norm is unchanged.

    ``dist_before`` defaults to Im(B)/Lam; when given it must agree with it.
    """
    if f <= 0:
        raise ValueError(f"focal length must be positive, got {f}")
    lam_r = lam / math.pi
    b = complex(mode.width_param)
    inferred = b.imag / lam_r
    if dist_before is None:
        dist_before = inferred
    elif not math.isclose(dist_before, inferred, rel_tol=1e-9, abs_tol=1e-12 * f):
        raise ValueError(
            f"width parameter implies {inferred:.12g} m of flight from the waist, "
            f"not dist_before={dist_before:.12g} m")
    if math.isclose(dist_before, f, rel_tol=1e-12):
        raise LensCollimationError("packet waist in the front focal plane: image at infinity")
    if dist_before <= f:
        raise ValueError("lens map needs dist_before > f (real image)")
    s = math.sqrt(b.real)
    s_img = s * f / (dist_before - f)
    b_new = s_img**2 - 1j * lam_r * f * dist_before / (dist_before - f)
    # prefactor of a waist-s packet: 1/sqrt(s + i Lam L/s) ~ 1/sqrt(B/s)
    phase = cmath.sqrt(b / s) / cmath.sqrt(b_new / s_img)
    out = GaussianMode(mode.amp * phase, mode.center, b_new)
    return out.scaled(mode_norm(mode) / mode_norm(out))


def thin_lens_mode(mode: GaussianMode, f: float, lam: float) -> GaussianMode:
    """Exact thin lens: multiply by exp(-i pi z^2 / (lam f)). Centre and width both change."""
    if f <= 0:
        raise ValueError(f"focal length must be positive, got {f}")
    b = complex(mode.width_param)
    c = complex(mode.center)
    b_new = 1 / (1 / b + 1j * math.pi / (lam * f))
    c_new = c * b_new / b
    amp = mode.amp * cmath.exp(c_new * c_new / b_new - c * c / b)
    return GaussianMode(amp, c_new, b_new)


# --- two-photon states -------------------------------------------------------

@dataclass(frozen=True)
class Term:
    coeff: complex
    mode1: GaussianMode
    mode2: GaussianMode


@dataclass(frozen=True)
class TwoPhotonState:
    """Psi(z1, z2) = sum_t coeff_t * mode1_t(z1) * mode2_t(z2)."""

    terms: tuple[Term, ...]
    lambda1: float
    lambda2: float

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("a two-photon state needs at least one term")

    def __len__(self):
        return len(self.terms)

    def amplitude(self, z1, z2):
        z1 = np.asarray(z1, dtype=float)
        z2 = np.asarray(z2, dtype=float)
        out = 0j
        for t in self.terms:
            out = out + t.coeff * t.mode1(z1) * t.mode2(z2)
        return out

    def amplitude_grid(self, z1, z2) -> np.ndarray:
        """Psi on the outer product z1 x z2, shape (len(z1), len(z2))."""
        z1 = np.atleast_1d(np.asarray(z1, dtype=float))
        z2 = np.atleast_1d(np.asarray(z2, dtype=float))
        g1 = np.array([t.coeff * t.mode1(z1) for t in self.terms])
        g2 = np.array([t.mode2(z2) for t in self.terms])
        return g1.T @ g2

    def norm(self) -> float:
        return state_norm(self)


def _gram(modes: Sequence[GaussianMode]) -> np.ndarray:
    n = len(modes)
    g = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            g[i, j] = mode_overlap(modes[i], modes[j])
    return g


def state_norm(state: TwoPhotonState) -> float:
    c = np.array([t.coeff for t in state.terms])
    g = _gram([t.mode1 for t in state.terms]) * _gram([t.mode2 for t in state.terms])
    return math.sqrt(max((c.conj() @ g @ c).real, 0.0))


def normalize_state(state: TwoPhotonState) -> TwoPhotonState:
    n = state_norm(state)
    if not n > 0:
        raise ValueError("cannot normalize a zero-norm state")
    terms = tuple(Term(t.coeff / n, t.mode1, t.mode2) for t in state.terms)
    return replace(state, terms=terms)


def propagate_state(state: TwoPhotonState, dist1: float, dist2: float) -> TwoPhotonState:
    terms = tuple(
        Term(t.coeff,
             propagate_mode(t.mode1, state.lambda1, dist1),
             propagate_mode(t.mode2, state.lambda2, dist2))
        for t in state.terms
    )
    return replace(state, terms=terms)


def coincidence_density(state: TwoPhotonState, z1, z2):
    """|Psi(z1, z2)|^2 with broadcasting over ``z1`` and ``z2``."""
    return np.abs(state.amplitude(z1, z2)) ** 2


def marginal_density(state: TwoPhotonState, which_photon: int, z):
    """Single-photon density, the other coordinate integrated out in closed form."""
    if which_photon not in (1, 2):
        raise ValueError("which_photon must be 1 or 2")
    z = np.asarray(z, dtype=float)
    here = [t.mode1 if which_photon == 1 else t.mode2 for t in state.terms]
    other = [t.mode2 if which_photon == 1 else t.mode1 for t in state.terms]
    g = _gram(other)
    vals = [t.coeff * m(z) for t, m in zip(state.terms, here)]
    out = np.zeros(z.shape)
    n = len(vals)
    for i in range(n):
        out = out + np.abs(vals[i]) ** 2 * g[i, i].real
        for j in range(i + 1, n):
            out = out + 2 * np.real(np.conj(vals[i]) * vals[j] * g[i, j])
    return np.clip(out, 0.0, None)
