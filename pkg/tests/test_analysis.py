import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghostsim import core
from ghostsim.analysis import (
    FringeError,
    FringeReport,
    NoFringes,
    Profile1D,
    extract_fringe_width,
    fit_gaussian_envelope,
    visibility,
)
from ghostsim.config import fig2_config
from ghostsim.modes import marginal_density

Z = np.linspace(-15e-3, 15e-3, 4096)


def _fringes(z, w=1e-3, s=5e-3, v=1.0, shift=0.0):
    return (1 + v * np.cos(2 * np.pi * (z - shift) / w)) * np.exp(-z**2 / (2 * s**2))


def _bin(z):
    return 1 / (z[-1] - z[0])


def test_profile_validation():
    with pytest.raises(ValueError, match="at least"):
        Profile1D(np.linspace(0, 1, 10), np.ones(10))
    with pytest.raises(ValueError, match="uniform"):
        Profile1D(np.r_[np.linspace(0, 1, 100), 3.0], np.ones(101))
    with pytest.raises(ValueError, match="non-negative"):
        Profile1D(np.linspace(0, 1, 100), -np.ones(100))
    with pytest.raises(ValueError):
        Profile1D(np.linspace(0, 1, 100), np.ones(99))


def test_synthetic_fringe():
    rep = extract_fringe_width(Profile1D(Z, _fringes(Z)))
    assert isinstance(rep, FringeReport)
    # within one spectral bin of the 1 mm period
    assert abs(1 / rep.fringe_width - 1e3) <= _bin(Z)
    assert rep.fringe_width == pytest.approx(1e-3, rel=1e-3)
    assert rep.visibility == pytest.approx(1.0, abs=1e-3)
    assert rep.envelope_width == pytest.approx(5e-3, rel=0.05)


def test_flat_gaussian_has_no_fringes():
    rep = extract_fringe_width(Profile1D(Z, np.exp(-Z**2 / (2 * (3e-3) ** 2))))
    assert isinstance(rep, NoFringes)
    assert not rep.has_fringes
    assert rep.visibility == 0.0
    assert math.isnan(rep.fringe_width)


def test_too_few_periods():
    with pytest.raises(FringeError, match="periods"):
        extract_fringe_width(Profile1D(Z, _fringes(Z, w=8e-3, s=3e-3)))


def test_zero_profile():
    with pytest.raises(FringeError):
        extract_fringe_width(Profile1D(Z, np.zeros_like(Z)))


def test_fig2_two_color_profile(fig2):
    z, p = core.scan_profile(fig2)
    rep = extract_fringe_width(Profile1D(z, p), core.analytic_fringe_width(fig2, "two_color"))
    assert rep.fringe_width == pytest.approx(3.2955e-3, rel=0.02)
    assert 0.9 < rep.visibility <= 1.0


@settings(max_examples=25, deadline=None)
@given(scale=st.floats(1e-3, 1e3), gain=st.floats(1e-6, 1e6))
def test_scale_equivariance(scale, gain):
    base = extract_fringe_width(Profile1D(Z, _fringes(Z, w=1.3e-3, v=0.6)))
    rep = extract_fringe_width(Profile1D(Z * scale, gain * _fringes(Z, w=1.3e-3, v=0.6)))
    assert rep.fringe_width == pytest.approx(base.fringe_width * scale, rel=1e-9)
    assert rep.envelope_width == pytest.approx(base.envelope_width * scale, rel=1e-9)
    assert rep.visibility == pytest.approx(base.visibility, rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(l2=st.floats(0.1, 0.6), d=st.floats(4.5e-4, 8e-4))
def test_round_trip_ghost_pattern(l2, d):
    cfg = fig2_config(lambda1=780e-9, l2=l2, slit_sep=d)
    z = cfg.scan.positions()
    p = core.pattern_density(cfg, 0.0, z)
    _, theta_d = core.theta_coefficients(cfg)
    rep = extract_fringe_width(Profile1D(z, p), 2 * math.pi / theta_d)
    assert abs(1 / rep.fringe_width - theta_d / (2 * math.pi)) <= _bin(z)


@settings(max_examples=50, deadline=None)
@given(v=st.floats(0.0, 1.0), w=st.floats(0.5e-3, 3e-3), shift=st.floats(-1e-3, 1e-3),
       noise=st.floats(0.0, 0.2))
def test_visibility_bounds(v, w, shift, noise):
    rng = np.random.default_rng(1)
    y = _fringes(Z, w=w, v=v, shift=shift) * (1 + noise * rng.random(Z.size))
    vis = visibility(Profile1D(Z, y), 10e-3)
    assert 0.0 <= vis <= 1.0
    rep = extract_fringe_width(Profile1D(Z, y))
    assert 0.0 <= rep.visibility <= 1.0


def test_pure_cosine_visibility():
    y = 1 + np.cos(2 * np.pi * Z / 1e-3)
    assert visibility(Profile1D(Z, y), 10e-3) == pytest.approx(1.0, abs=1e-3)


def test_single_gaussian_visibility_zero():
    y = np.exp(-Z**2 / (2 * (2e-3) ** 2))
    assert visibility(Profile1D(Z, y), 20e-3) == 0.0


def test_visibility_window_errors():
    p = Profile1D(Z, np.ones_like(Z))
    with pytest.raises(ValueError):
        visibility(p, 0.0)


def test_fig2_marginal_visibility(fig2):
    z = fig2.scan.positions()
    st_ = core.detector_state(fig2)
    p = Profile1D(z, marginal_density(st_, 1, z))
    assert visibility(p, 20e-3) < 1e-3
    rep = extract_fringe_width(p)
    assert rep.visibility < 1e-3


def test_gaussian_envelope_fit():
    y = 3.0 * np.exp(-(Z - 1e-3) ** 2 / (2 * (2e-3) ** 2))
    log_env, c, s = fit_gaussian_envelope(Z, y)
    assert c == pytest.approx(1e-3, rel=1e-9)
    assert s == pytest.approx(2e-3, rel=1e-9)
    _, _, s_flat = fit_gaussian_envelope(Z, np.exp(Z**2 / 1e-4))
    assert s_flat == math.inf
