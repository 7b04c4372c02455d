"""Command line: ``ghostsim <scenario> <config.json> [--out DIR] [--svg] [--scaled] [--strict]``.

Exit codes: 0 success, 1 physics-regime warnings under ``--strict``, 2 config or
input errors. Errors are reported as ``error [stage]: message`` on stderr.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis, core, grid, modes, svg
from .config import ConfigError, ExperimentConfig, RegimeWarning, load_config

SCENARIOS = ("predict", "scan", "map", "marginal", "validate")
EXIT_OK, EXIT_REGIME, EXIT_CONFIG = 0, 1, 2


@dataclass(frozen=True)
class RunManifest:
    config_path: str
    scenario: str
    out_dir: Path
    emit_svg: bool = False
    scaled: bool = True
    strict: bool = False
    method: str = "exact"
    lens_model: str = "width_map"
    map_samples: int = 256
    grid_samples: int = 4096

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario must be one of {', '.join(SCENARIOS)}")


class StageError(Exception):
    def __init__(self, stage: str, exc: Exception, code: int):
        super().__init__(f"error [{stage}]: {exc}")
        self.code = code


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigError as exc:
        key = f" ({exc.key})" if exc.key and exc.key not in str(exc) else ""
        raise StageError(name, f"{exc}{key}", EXIT_CONFIG) from exc
    except (ValueError, OSError) as exc:
        raise StageError(name, exc, EXIT_CONFIG) from exc


def _fmt(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.10e}{x.imag:+.10e}j"
    if isinstance(x, float):
        return f"{x:.10e}"
    return str(x)


def _write_csv(path: Path, header: str, columns) -> None:
    data = np.column_stack(columns)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in data:
            fh.write(",".join(f"{v:.12e}" for v in row) + "\n")


def _report(path: Path | None, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if path is not None:
        path.write_text(text, encoding="utf-8")


def _fringe_lines(prefix: str, rep) -> list[str]:
    if not rep.has_fringes:
        return [f"{prefix}fringes: none", f"{prefix}visibility: 0",
                f"{prefix}envelope_width_m: {_fmt(rep.envelope_width)}"]
    return [f"{prefix}fringes: yes",
            f"{prefix}fringe_width_m: {_fmt(rep.fringe_width)}",
            f"{prefix}visibility: {_fmt(rep.visibility)}",
            f"{prefix}envelope_width_m: {_fmt(rep.envelope_width)}",
            f"{prefix}n_fringes_resolved: {rep.n_fringes_resolved}"]


def predicted_widths(cfg: ExperimentConfig) -> dict[str, float]:
    out = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        if math.isclose(cfg.lambda1, cfg.lambda2, rel_tol=1e-12):
            out["same_color"] = core.analytic_fringe_width(cfg, "same_color")
        out["two_color"] = core.analytic_fringe_width(cfg, "two_color")
        out["scan_d1"] = core.analytic_fringe_width(cfg, "scan_d1")
        if cfg.lens_focal is not None:
            out["lens"] = core.analytic_fringe_width(cfg, "lens")
    return out


def _expected_scan_width(cfg: ExperimentConfig) -> float:
    w = predicted_widths(cfg)
    if cfg.scan.detector == "d1":
        return w["scan_d1"]
    return w["lens"] if cfg.lens_focal is not None else w["two_color"]


def _predict(cfg: ExperimentConfig, m: RunManifest) -> list[str]:
    lines = [f"scenario: predict", f"slit_method: {m.method}"]
    dz, dk = core.uncertainties(cfg)
    lines += [f"delta_z_m: {_fmt(dz)}", f"delta_k_per_m: {_fmt(dk)}"]
    for method in core.SLIT_METHODS:
        sp = core.conditional_slit_params(cfg, method)
        lines += [f"z0_prime_m[{method}]: {_fmt(complex(sp.z0_prime))}",
                  f"gamma_cap_m2[{method}]: {_fmt(complex(sp.gamma_cap))}"]
    th1, th2 = core.theta_coefficients(cfg)
    lines.append(f"theta1_per_m: {_fmt(th1)}")
    label = "theta_d_per_m" if math.isclose(cfg.lambda1, cfg.lambda2, rel_tol=1e-12) else "theta_l_per_m"
    lines.append(f"{label}: {_fmt(th2)}")
    for k, v in predicted_widths(cfg).items():
        lines.append(f"fringe_width_m[{k}]: {_fmt(v)}")
        lines.append(f"fringe_width_mm[{k}]: {v * 1e3:.4f}")
    return lines


def _scan(cfg, m: RunManifest) -> list[str]:
    z, dens = core.scan_profile(cfg, method=m.method, lens_model=m.lens_model)
    _write_csv(m.out_dir / "scan.csv", "z_m,density_per_m", [z, dens])
    expected = _expected_scan_width(cfg)
    lines = [f"scenario: scan", f"scanned_detector: {cfg.scan.detector}",
             f"fixed_position_m: {_fmt(cfg.fixed_pos)}",
             f"lens_model: {m.lens_model if cfg.lens_focal is not None else 'none'}",
             f"predicted_fringe_width_m: {_fmt(expected)}"]
    rep = analysis.extract_fringe_width(analysis.Profile1D(z, dens), expected)
    lines += _fringe_lines("", rep)
    if rep.has_fringes:
        lines.append(f"width_ratio_measured_over_predicted: {rep.fringe_width / expected:.6f}")
    if m.emit_svg:
        (m.out_dir / "scan.svg").write_text(svg.line_plot(
            {"P": (z * 1e3, dens / dens.max())}, title=f"coincidence scan ({cfg.scan.detector})",
            xlabel="z (mm)", ylabel="P / max"))
    return lines


def _map(cfg, m: RunManifest) -> list[str]:
    z = np.linspace(cfg.scan.z_min, cfg.scan.z_max, m.map_samples)
    state = core.detector_state(cfg, m.method, m.lens_model)
    dens = np.abs(state.amplitude_grid(z, z)) ** 2
    z1, z2 = np.meshgrid(z, z, indexing="ij")
    _write_csv(m.out_dir / "map.csv", "z1_m,z2_m,density_per_m2",
               [z1.ravel(), z2.ravel(), dens.ravel()])
    return ["scenario: map", f"samples_per_axis: {m.map_samples}",
            f"max_density_per_m2: {_fmt(float(dens.max()))}"]


def _marginal(cfg, m: RunManifest) -> list[str]:
    z = cfg.scan.positions()
    state = core.detector_state(cfg, m.method, m.lens_model)
    lines = ["scenario: marginal"]
    plots = {}
    for photon in (1, 2):
        dens = modes.marginal_density(state, photon, z)
        _write_csv(m.out_dir / f"marginal_photon{photon}.csv", "z_m,density_per_m", [z, dens])
        prof = analysis.Profile1D(z, dens)
        window = cfg.scan.z_max - cfg.scan.z_min
        lines.append(f"photon{photon}_visibility: {_fmt(analysis.visibility(prof, window))}")
        bound = float(core.cross_term_visibility(state, photon, z).max())
        lines.append(f"photon{photon}_cross_term_visibility_bound: {_fmt(bound)}")
        try:
            rep = analysis.extract_fringe_width(prof)
            lines += _fringe_lines(f"photon{photon}_residual_", rep)
        except analysis.FringeError as exc:
            lines.append(f"photon{photon}_residual_fringes: unmeasurable ({exc})")
        plots[f"photon {photon}"] = (z * 1e3, dens / dens.max())
    if m.emit_svg:
        (m.out_dir / "marginal.svg").write_text(svg.line_plot(
            plots, title="single-photon marginals", xlabel="z (mm)", ylabel="density / max"))
    return lines


def _validate(cfg, m: RunManifest) -> list[str]:
    rep = grid.compare_oracle(cfg, scaled=m.scaled, n=m.grid_samples)
    _write_csv(m.out_dir / "validate_profiles.csv", "z_m,closed_form_per_m2,grid_per_m2",
               [rep.z, rep.closed, rep.grid])
    if m.emit_svg:
        (m.out_dir / "validate.svg").write_text(svg.line_plot(
            {"closed form": (rep.z * 1e3, rep.closed), "grid": (rep.z * 1e3, rep.grid)},
            title="P(z1 fixed, z2): closed form vs grid", xlabel="z2 (mm)", ylabel="P"))
    return ["scenario: validate", f"scaled: {str(m.scaled).lower()}"] + rep.lines()


_RUNNERS = {"predict": _predict, "scan": _scan, "map": _map,
            "marginal": _marginal, "validate": _validate}


def run(m: RunManifest) -> int:
    """Execute one manifest; returns the process exit code."""
    try:
        cfg = _stage("load_config", load_config, m.config_path)
        if m.scenario != "predict":
            _stage("prepare_output", m.out_dir.mkdir, parents=True, exist_ok=True)
        regime = cfg.regime_warnings()
        for msg in regime:
            print(f"warning [regime]: {msg}", file=sys.stderr)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            lines = _stage(m.scenario, _RUNNERS[m.scenario], cfg, m)
    except StageError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    path = None if m.scenario == "predict" else m.out_dir / f"{m.scenario}_report.txt"
    _report(path, lines)
    if regime and m.strict:
        return EXIT_REGIME
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ghostsim", description="Two-photon ghost interference simulator.")
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("config", help="JSON config file ('fig2.json' resolves to the bundled example)")
    p.add_argument("--out", default="ghostsim-out", help="output directory (default: %(default)s)")
    p.add_argument("--svg", action="store_true", help="also write SVG plots")
    p.add_argument("--scaled", dest="scaled", action="store_true", default=True,
                   help="validate on the desk-scale copy of the geometry (default)")
    p.add_argument("--unscaled", dest="scaled", action="store_false",
                   help="validate on the literal geometry")
    p.add_argument("--strict", action="store_true", help="exit 1 on physics-regime warnings")
    p.add_argument("--method", choices=core.SLIT_METHODS, default="exact",
                   help="conditional slit-packet formulas (default: %(default)s)")
    p.add_argument("--lens-model", choices=core.LENS_MODELS, default="width_map",
                   help="lens action on photon 2 (default: %(default)s)")
    p.add_argument("--map-samples", type=int, default=256)
    p.add_argument("--grid-samples", type=int, default=4096)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    manifest = RunManifest(
        config_path=args.config, scenario=args.scenario, out_dir=Path(args.out),
        emit_svg=args.svg, scaled=args.scaled, strict=args.strict, method=args.method,
        lens_model=args.lens_model, map_samples=args.map_samples,
        grid_samples=args.grid_samples,
    )
    return run(manifest)


if __name__ == "__main__":
    sys.exit(main())
