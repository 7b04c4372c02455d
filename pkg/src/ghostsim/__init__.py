"""Simulation of two-photon ghost interference with Gaussian wave packets.

Closed-form Gaussian-mode algebra (:mod:`ghostsim.modes`, :mod:`ghostsim.core`),
a brute-force grid propagator used as an oracle (:mod:`ghostsim.grid`), fringe
analysis (:mod:`ghostsim.analysis`) and a command line (:mod:`ghostsim.cli`).
"""
from .config import (
    ConfigError,
    ExperimentConfig,
    RegimeWarning,
    ScanAxis,
    config_from_dict,
    fig2_config,
    load_config,
)
from .core import (
    analytic_fringe_width,
    conditional_slit_params,
    detector_state,
    post_slit_state,
    scan_profile,
    theta_coefficients,
    uncertainties,
)
from .analysis import FringeReport, NoFringes, Profile1D, extract_fringe_width, visibility

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ExperimentConfig", "RegimeWarning", "ScanAxis", "config_from_dict",
    "fig2_config", "load_config", "analytic_fringe_width", "conditional_slit_params",
    "detector_state", "post_slit_state", "scan_profile", "theta_coefficients",
    "uncertainties", "FringeReport", "NoFringes", "Profile1D", "extract_fringe_width",
    "visibility",
]
