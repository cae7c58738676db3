"""Config-driven command line: ``zml <subcommand> --config cfg.json``.

Subcommands: flux, potential, modes, scan, spectrum, count, verify, modes2d.
One JSON config describes one run; unknown keys are rejected with the
offending field named.  Reports are written into the output directory (and
the JSON one echoed to stdout) with fixed number formatting and sorted keys,
so identical configs produce byte-identical outputs.

Exit codes: 0 success; 2 config/input error (parse failure, bad field,
insufficient grid or cap); 3 numerical failure (quadrature or eigensolver
non-convergence, unresolved level clusters).
"""

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .errors import (CapExceededError, ClusterResolutionError,
                     EigenSolveError, GridError, PaddingError, ProfileError,
                     QuadratureError)
from .profiles import DEFAULT_RTOL, DIM_LINE, Grid1D, make_profile, total_flux
from .potential import lambda_1d, lambda_2d_radial
from .reduction import ReductionConfig, admissible_channels, verify_degeneracy
from .reports import csv_text, json_report, line_plot_svg
from .spectral import (DENSE_CAP, build_operator, default_zero_tolerance,
                       eigen_spectrum)
from .zeromodes import (SECTOR_A, SECTOR_B, build_mode_1d, build_mode_2d,
                        count_2d_zero_modes, scan_k)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

COMMANDS = ("flux", "potential", "modes", "scan", "spectrum", "count",
            "verify", "modes2d")


class ConfigError(ValueError):
    """Config file problem; the message names the offending field."""


_TOP_KEYS = {
    "profile": "profile",
    "grid": "grid",
    "k": "num",
    "sector": "str",
    "k_list": "numlist",
    "k_y": "num",
    "Ly": "num",
    "n_range": "intpair",
    "k_gauge": "num",
    "B_const": "num",
    "L_x": "num",
    "level": "int",
    "j_list": "intlist",
    "tolerances": "tolerances",
    "dense_cap": "int",
    "out_dir": "str",
    "emit_plots": "bool",
}
_PROFILE_KEYS = {
    "kind": "str",
    "dimension": "str",
    "B0": "num",
    "a": "num",
    "sigma": "num",
    "cutoff": "num",
    "points": "pointlist",
}
_GRID_KEYS = {"x_lo": "num", "x_hi": "num", "n": "int"}
_TOL_KEYS = {"quadrature_tol": "num", "zero_tol": "num", "cluster_tol": "num"}

_REQUIRED = {
    "flux": ("profile",),
    "potential": ("profile", "grid"),
    "modes": ("profile", "grid", "sector"),
    "scan": ("profile", "grid", "sector", "k_list"),
    "spectrum": ("profile", "grid", "k_y"),
    "count": ("profile",),   # Ly additionally required for line profiles
    "verify": ("profile", "grid", "Ly"),
    "modes2d": ("profile", "grid", "j_list"),
}


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _check(value, kind, path):
    if kind == "num":
        if not _is_num(value):
            raise ConfigError(f"{path} must be a number")
    elif kind == "int":
        if not (isinstance(value, int) and not isinstance(value, bool)):
            raise ConfigError(f"{path} must be an integer")
    elif kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{path} must be a string")
    elif kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{path} must be a boolean")
    elif kind == "numlist":
        if not (isinstance(value, list) and value
                and all(_is_num(v) for v in value)):
            raise ConfigError(f"{path} must be a non-empty list of numbers")
    elif kind == "intlist":
        if not (isinstance(value, list) and value
                and all(isinstance(v, int) and not isinstance(v, bool)
                        for v in value)):
            raise ConfigError(f"{path} must be a non-empty list of integers")
    elif kind == "intpair":
        if not (isinstance(value, list) and len(value) == 2
                and all(isinstance(v, int) and not isinstance(v, bool)
                        for v in value)):
            raise ConfigError(f"{path} must be a pair [n_lo, n_hi] of integers")
    elif kind == "pointlist":
        ok = (isinstance(value, list) and value
              and all(isinstance(p, list) and len(p) == 2
                      and all(_is_num(c) for c in p) for p in value))
        if not ok:
            raise ConfigError(f"{path} must be a non-empty list of [x, B] pairs")
    elif kind in ("profile", "grid", "tolerances"):
        schema = {"profile": _PROFILE_KEYS, "grid": _GRID_KEYS,
                  "tolerances": _TOL_KEYS}[kind]
        if not isinstance(value, dict):
            raise ConfigError(f"{path} must be an object")
        for key, sub in value.items():
            if key not in schema:
                raise ConfigError(f"unknown config key {path}.{key}")
            _check(sub, schema[key], f"{path}.{key}")
    else:  # pragma: no cover - schema typo guard
        raise AssertionError(kind)


def load_config(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse error at line {exc.lineno} "
                          f"column {exc.colno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    for key, value in cfg.items():
        if key not in _TOP_KEYS:
            raise ConfigError(f"unknown config key {key}")
        _check(value, _TOP_KEYS[key], key)
    return cfg


def _require(cfg, command):
    for key in _REQUIRED[command]:
        if key not in cfg:
            raise ConfigError(f"'{command}' requires config key {key}")


def _build_profile(cfg):
    spec = dict(cfg["profile"])
    if "kind" not in spec:
        raise ConfigError("profile.kind is required")
    kind = spec.pop("kind")
    dimension = spec.pop("dimension", DIM_LINE)
    if "points" in spec:
        spec["points"] = [tuple(p) for p in spec["points"]]
    try:
        return make_profile(kind, dimension, **spec)
    except (ProfileError, KeyError) as exc:
        raise ConfigError(f"profile: {exc}") from exc


def _build_grid(cfg):
    g = cfg["grid"]
    for key in _GRID_KEYS:
        if key not in g:
            raise ConfigError(f"grid.{key} is required")
    try:
        return Grid1D(x_lo=g["x_lo"], x_hi=g["x_hi"], n=g["n"])
    except GridError as exc:
        raise ConfigError(f"grid: {exc}") from exc


def _tol(cfg, name, default=None):
    return cfg.get("tolerances", {}).get(name, default)


def _sector(cfg):
    label = cfg["sector"]
    if label == "a":
        return SECTOR_A
    if label == "b":
        return SECTOR_B
    raise ConfigError(f"sector must be 'a' or 'b', got {label!r}")


def _flux_key(profile):
    return "Phi" if profile.is_radial else "Q"


def _reduction_config(cfg):
    n_range = cfg.get("n_range")
    try:
        return ReductionConfig(L_y=cfg["Ly"], k_gauge=cfg.get("k_gauge", 0.0),
                               n_range=tuple(n_range) if n_range else None,
                               B_const=cfg.get("B_const"), L_x=cfg.get("L_x"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _degeneracy_json(rep):
    return {
        "Q": rep.Q,
        "Ly": rep.L_y,
        "g_analytic_real": rep.g_analytic_real,
        "g_analytic": rep.g_analytic,
        "channels": [
            {"n": ch.n, "ky": ch.k_y, "admissible": ch.admissible,
             "near_zero_count": ch.near_zero_count,
             **({"level_weight": ch.level_weight}
                if ch.level_weight is not None else {})}
            for ch in rep.channels
        ],
        "g_numeric": rep.g_numeric,
        "discrepancy": rep.discrepancy,
    }


class _Out:
    """Collects the report files of one run and writes them at the end."""

    def __init__(self, out_dir, plots):
        self.dir = Path(out_dir)
        self.plots = plots
        self.files = {}
        self.report_text = ""

    def json(self, name, obj):
        self.report_text = json_report(obj)
        self.files[name] = self.report_text

    def csv(self, name, header, rows):
        self.files[name] = csv_text(header, rows)

    def svg(self, name, xs, ys, xlabel, ylabel):
        if self.plots:
            self.files[name] = line_plot_svg(xs, ys, xlabel, ylabel)

    def flush(self):
        self.dir.mkdir(parents=True, exist_ok=True)
        for name, text in self.files.items():
            (self.dir / name).write_text(text)
        sys.stdout.write(self.report_text)


def cmd_flux(cfg, out):
    profile = _build_profile(cfg)
    flux = total_flux(profile, rtol=_tol(cfg, "quadrature_tol", DEFAULT_RTOL))
    out.json("flux.json", {_flux_key(profile): flux.value, "method": flux.method})


def cmd_potential(cfg, out):
    profile = _build_profile(cfg)
    grid = _build_grid(cfg)
    rtol = _tol(cfg, "quadrature_tol", DEFAULT_RTOL)
    if profile.is_radial:
        if cfg.get("k", 0.0) != 0.0:
            raise ConfigError("k must be 0 (or absent) for radial potentials: "
                              "linear terms destroy plane normalizability")
        pot = lambda_2d_radial(profile, grid, rtol=rtol)
        out.json("potential.json", {
            "Phi": pot.flux.value, "flux_method": pot.flux.method,
            "log_coefficient": pot.log_coefficient,
        })
        axis = "r"
    else:
        pot = lambda_1d(profile, cfg.get("k", 0.0), grid, rtol=rtol)
        out.json("potential.json", {
            "Q": pot.flux.value, "flux_method": pot.flux.method,
            "k": pot.k, "slope_left": pot.slope_left,
            "slope_right": pot.slope_right,
        })
        axis = "x"
    x = grid.points()
    out.csv("potential.csv", (axis, "lambda"),
            [(float(xi), float(v)) for xi, v in zip(x, pot.values)])
    out.svg("potential.svg", x, pot.values, axis, "lambda")


def cmd_modes(cfg, out):
    profile = _build_profile(cfg)
    if profile.is_radial:
        raise ConfigError("'modes' needs a line profile; use modes2d")
    grid = _build_grid(cfg)
    sector = _sector(cfg)
    k = cfg.get("k", 0.0)
    mode = build_mode_1d(profile, k, sector, grid,
                         rtol=_tol(cfg, "quadrature_tol", DEFAULT_RTOL))
    q = total_flux(profile).value
    out.json("modes.json", {
        "Q": q, "sector": sector.label, "k": mode.k,
        "normalizable": mode.normalizable,
        "l2_norm": mode.l2_norm if math.isfinite(mode.l2_norm) else None,
    })
    x = grid.points()
    rows = []
    for xi, lv, v in zip(x, mode.log_values, mode.values):
        rows.append((float(xi), float(lv), float(v) if math.isfinite(v) else None))
    out.csv("modes.csv", ("x", "log_psi", "psi"), rows)
    out.svg("modes.svg", x, mode.log_values, "x", "log_psi")


def cmd_scan(cfg, out):
    profile = _build_profile(cfg)
    if profile.is_radial:
        raise ConfigError("'scan' needs a line profile")
    grid = _build_grid(cfg)
    sector = _sector(cfg)
    entries = scan_k(profile, sector, cfg["k_list"], grid,
                     rtol=_tol(cfg, "quadrature_tol", DEFAULT_RTOL))
    q = total_flux(profile).value
    out.json("scan.json", {
        "Q": q, "sector": sector.label,
        "entries": [{"k": e.k, "normalizable": e.normalizable,
                     "l2_norm": e.l2_norm if math.isfinite(e.l2_norm) else None}
                    for e in entries],
    })
    out.csv("scan.csv", ("k", "normalizable", "l2_norm"),
            [(e.k, e.normalizable,
              e.l2_norm if math.isfinite(e.l2_norm) else None)
             for e in entries])


def cmd_spectrum(cfg, out):
    profile = _build_profile(cfg)
    if profile.is_radial:
        raise ConfigError("'spectrum' needs a line profile")
    grid = _build_grid(cfg)
    op = build_operator(profile, cfg["k_y"], grid,
                        rtol=_tol(cfg, "quadrature_tol", DEFAULT_RTOL),
                        cap=cfg.get("dense_cap", DENSE_CAP))
    tau = _tol(cfg, "zero_tol")
    if tau is None:
        try:
            tau = default_zero_tolerance(op)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    spec = eigen_spectrum(op, tau=tau)
    out.json("spectrum.json", {
        "ky": op.k_y, "tau": spec.zero_tolerance,
        "near_zero_count": spec.near_zero_count,
        "n_interior": op.size,
    })
    out.csv("spectrum.csv", ("channel_ky", "index", "eigenvalue"),
            [(op.k_y, i, float(e)) for i, e in enumerate(spec.eigenvalues)])


def cmd_count(cfg, out):
    profile = _build_profile(cfg)
    rtol = _tol(cfg, "quadrature_tol", DEFAULT_RTOL)
    if profile.is_radial:
        # plane counting: N = integer part of |Phi|/2pi, one spin sector
        flux = total_flux(profile, rtol=rtol)
        count = count_2d_zero_modes(flux)
        out.json("count.json", {
            "Phi": flux.value, "N": count.n_modes,
            "sector": count.sector.label,
            "flux_over_2pi": count.flux_over_2pi,
            "integer_flux": count.integer_flux,
        })
        return
    if "Ly" not in cfg:
        raise ConfigError("'count' on a line profile requires config key Ly")
    rep = admissible_channels(profile, _reduction_config(cfg), rtol=rtol)
    out.json("count.json", _degeneracy_json(rep))


def cmd_verify(cfg, out):
    profile = _build_profile(cfg)
    if profile.is_radial:
        raise ConfigError("'verify' needs a line profile")
    grid = _build_grid(cfg)
    rep = verify_degeneracy(profile, _reduction_config(cfg),
                            cfg.get("level", 0), grid,
                            zero_tol=_tol(cfg, "zero_tol"),
                            cluster_tol=_tol(cfg, "cluster_tol"),
                            cap=cfg.get("dense_cap", DENSE_CAP),
                            rtol=_tol(cfg, "quadrature_tol", DEFAULT_RTOL))
    doc = _degeneracy_json(rep)
    doc["level"] = rep.level
    doc["tau"] = rep.tau
    if rep.cluster_center is not None:
        doc["cluster_center"] = rep.cluster_center
    out.json("verify.json", doc)


def cmd_modes2d(cfg, out):
    profile = _build_profile(cfg)
    if not profile.is_radial:
        raise ConfigError("'modes2d' needs a radial-plane profile")
    grid = _build_grid(cfg)
    rtol = _tol(cfg, "quadrature_tol", DEFAULT_RTOL)
    for j in cfg["j_list"]:
        if j < 0:
            raise ConfigError(f"j_list entries must be >= 0, got {j}")
    flux = total_flux(profile, rtol=rtol)
    count = count_2d_zero_modes(flux)
    modes = [build_mode_2d(profile, j, grid, rtol=rtol) for j in cfg["j_list"]]
    out.json("modes2d.json", {
        "Phi": flux.value,
        "N": count.n_modes, "sector": count.sector.label,
        "flux_over_2pi": count.flux_over_2pi,
        "integer_flux": count.integer_flux,
        "modes": [{"j": m.j, "tail_exponent": m.tail_exponent,
                   "normalizable": m.normalizable} for m in modes],
    })
    rows = []
    r = grid.points()
    for m in modes:
        for ri, lv, v in zip(r, m.log_values, m.values):
            rows.append((m.j, float(ri), float(lv),
                         float(v) if math.isfinite(v) else None))
    out.csv("modes2d.csv", ("j", "r", "log_psi", "psi"), rows)


_HANDLERS = {
    "flux": cmd_flux,
    "potential": cmd_potential,
    "modes": cmd_modes,
    "scan": cmd_scan,
    "spectrum": cmd_spectrum,
    "count": cmd_count,
    "verify": cmd_verify,
    "modes2d": cmd_modes2d,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="zml",
        description="Zero modes of the two-component operator in compactly "
                    "supported fields: potentials, admissibility, spectra, "
                    "degeneracy counts.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} stage")
        p.add_argument("--config", required=True, help="JSON run config")
        p.add_argument("--out", default=None,
                       help="output directory (default: config out_dir or '.')")
        p.add_argument("--plots", action="store_true",
                       help="also write SVG line plots")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        _require(cfg, args.command)
        out_dir = args.out or cfg.get("out_dir", ".")
        plots = args.plots or cfg.get("emit_plots", False)
        out = _Out(out_dir, plots)
        _HANDLERS[args.command](cfg, out)
        out.flush()
    except (ConfigError, ProfileError, GridError, PaddingError,
            CapExceededError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, EigenSolveError, ClusterResolutionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
