"""Batch command line: scenario configs in, weight files and reports out.

Subcommands
    design      solve for one weight vector, write it with solver diagnostics
    pattern     evaluate a stored weight vector across the angle grid (CSV)
    montecarlo  averaged SINR per method (JSON report)
    sweep-b     mean SINR against mainlobe half-width (CSV)

Exit codes: 0 success, 1 input error, 2 solver non-convergence. Outputs use
17 significant digits so every file round-trips to the exact float values.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .arrays import AngleGrid, ArrayGeometry, build_steering_matrix, partition_lobes
from .evaluation import METHODS, beam_pattern, monte_carlo, sweep_b
from .simulate import Scenario, SourceSpec, generate_snapshots, sample_covariance
from .solvers import (
    PenaltySpec,
    SolveDiagnostics,
    SolverOptions,
    WeightVector,
    mixed_norm_beamformer,
    mvdr_closed_form,
    sparse_beamformer,
)

__all__ = ["main", "entry", "parse_config", "ConfigError"]


class ConfigError(Exception):
    """Malformed run configuration; message carries line/field context."""


def _parse_bool(text: str) -> bool:
    if text.lower() in ("true", "yes", "1"):
        return True
    if text.lower() in ("false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    if not text.strip():
        return ()
    return tuple(float(part) for part in text.split(","))


def _parse_methods(text: str) -> tuple[str, ...]:
    methods = tuple(part.strip() for part in text.split(","))
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {METHODS}")
    return methods


# key -> (parser, default); defaults follow the benchmark experiment setup
_CONFIG_SCHEMA = {
    "num_antennas": (int, 8),
    "spacing_over_wavelength": (float, 0.5),
    "soi_doa_deg": (float, 0.0),
    "soi_snr_db": (float, 10.0),
    "interferer_doas_deg": (_parse_float_list, (-30.0, 30.0, 70.0)),
    "interferer_inrs_db": (_parse_float_list, (20.0, 20.0, 40.0)),
    "noise_power": (float, 1.0),
    "num_snapshots": (int, 100),
    "seed": (int, 0),
    "gamma": (float, 10.0),
    "b": (int, 23),
    "grid_step_deg": (float, 1.0),
    "trials": (int, 200),
    "mismatch_deg": (float, 0.0),
    "method": (str, "mixed"),
    "methods": (_parse_methods, METHODS),
    "b_min": (int, 1),
    "b_max": (int, 35),
    "diagonal_loading": (float, 0.0),
    "max_iterations": (int, 5000),
    "abs_tol": (float, 1e-7),
    "rel_tol": (float, 1e-5),
    "rho": (float, 1.0),
    "over_relaxation": (float, 1.0),
    "adaptive_rho": (_parse_bool, False),
}


def parse_config(path: str) -> dict:
    """Strict flat key-value parser; every problem names its line and field."""
    cfg = {key: default for key, (_, default) in _CONFIG_SCHEMA.items()}
    seen = set()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_SCHEMA:
            raise ConfigError(f"{path}:{lineno}: unknown field {key!r}")
        if key in seen:
            raise ConfigError(f"{path}:{lineno}: duplicate field {key!r}")
        seen.add(key)
        parser, _ = _CONFIG_SCHEMA[key]
        try:
            cfg[key] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: field {key!r}: {exc}") from exc
    return cfg


def build_scenario(cfg: dict) -> Scenario:
    doas = cfg["interferer_doas_deg"]
    inrs = cfg["interferer_inrs_db"]
    if len(doas) != len(inrs):
        raise ConfigError(
            f"interferer_doas_deg has {len(doas)} entries but interferer_inrs_db has {len(inrs)}")
    try:
        return Scenario(
            geometry=ArrayGeometry(num_antennas=cfg["num_antennas"],
                                   spacing_over_wavelength=cfg["spacing_over_wavelength"]),
            soi=SourceSpec(doa_deg=cfg["soi_doa_deg"], power_db=cfg["soi_snr_db"]),
            interferers=tuple(SourceSpec(doa_deg=d, power_db=p) for d, p in zip(doas, inrs)),
            noise_power=cfg["noise_power"],
            num_snapshots=cfg["num_snapshots"],
            rng_seed=cfg["seed"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_options(cfg: dict) -> SolverOptions:
    try:
        return SolverOptions(
            max_iterations=cfg["max_iterations"],
            abs_tol=cfg["abs_tol"],
            rel_tol=cfg["rel_tol"],
            penalty_parameter_rho=cfg["rho"],
            over_relaxation=cfg["over_relaxation"],
            adaptive_rho=cfg["adaptive_rho"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_weight_file(path: str, method: str, wv: WeightVector, diag) -> None:
    lines = [
        f"method = {method}",
        f"steering_angle_deg = {_fmt(wv.steering_angle_deg)}",
        f"num_antennas = {wv.w.size}",
        f"converged = {'true' if diag.converged else 'false'}",
        f"iterations_used = {diag.iterations_used}",
        f"final_primal_residual = {_fmt(diag.final_primal_residual)}",
        f"final_dual_residual = {_fmt(diag.final_dual_residual)}",
        f"objective_value = {_fmt(diag.objective_value)}",
    ]
    for i, wi in enumerate(wv.w):
        lines.append(f"w{i}_re = {_fmt(wi.real)}")
        lines.append(f"w{i}_im = {_fmt(wi.imag)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_weight_file(path: str) -> tuple[str, WeightVector, bool]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read weight file {path}: {exc}") from exc
    fields = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    try:
        m = int(fields["num_antennas"])
        w = np.array([float(fields[f"w{i}_re"]) + 1j * float(fields[f"w{i}_im"])
                      for i in range(m)])
        wv = WeightVector(w=w, steering_angle_deg=float(fields["steering_angle_deg"]))
        return fields["method"], wv, fields["converged"] == "true"
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"{path}: malformed weight file: {exc}") from exc


def cmd_design(cfg: dict, out: str) -> int:
    scenario = build_scenario(cfg)
    options = build_options(cfg)
    method = cfg["method"]
    if method not in METHODS:
        raise ConfigError(f"field 'method': unknown method {method!r}")
    steer_deg = scenario.soi.doa_deg + cfg["mismatch_deg"]
    try:
        grid = AngleGrid.regular(step_deg=cfg["grid_step_deg"], soi_deg=steer_deg)
        steering = build_steering_matrix(scenario.geometry, grid)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    cov = sample_covariance(generate_snapshots(scenario),
                            diagonal_loading=cfg["diagonal_loading"])

    if method == "mvdr":
        wv = mvdr_closed_form(cov, steering.soi_column, grid.soi_angle_deg)
        quad = float(np.real(wv.w.conj() @ cov.entries @ wv.w))
        diag = SolveDiagnostics(iterations_used=0, final_primal_residual=0.0,
                                final_dual_residual=0.0, objective_value=quad,
                                converged=True)
    elif method == "sparse":
        penalty = PenaltySpec(gamma=cfg["gamma"], mode="sparse_only")
        wv, diag = sparse_beamformer(cov, steering, penalty, options)
    else:
        try:
            partition = partition_lobes(grid, cfg["b"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        penalty = PenaltySpec(gamma=cfg["gamma"], mode="mixed", partition=partition)
        wv, diag = mixed_norm_beamformer(cov, steering, penalty, options)

    write_weight_file(out, method, wv, diag)
    if not diag.converged:
        print(f"solver did not converge in {diag.iterations_used} iterations; "
              f"diagnostics written to {out}", file=sys.stderr)
        return 2
    return 0


def cmd_pattern(cfg: dict, weights_path: str, out: str) -> int:
    _, wv, _ = read_weight_file(weights_path)
    geometry = ArrayGeometry(num_antennas=wv.w.size,
                             spacing_over_wavelength=cfg["spacing_over_wavelength"])
    try:
        grid = AngleGrid.regular(step_deg=cfg["grid_step_deg"], soi_deg=wv.steering_angle_deg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    pattern = beam_pattern(wv, build_steering_matrix(geometry, grid))
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("angle_deg,gain_db\n")
        for angle, gain in zip(pattern.angles_deg, pattern.gains_db):
            fh.write(f"{_fmt(angle)},{_fmt(gain)}\n")
    return 0


def cmd_montecarlo(cfg: dict, out: str, per_trial: bool) -> int:
    scenario = build_scenario(cfg)
    options = build_options(cfg)
    try:
        reports = monte_carlo(
            scenario, methods=cfg["methods"], trials=cfg["trials"],
            mismatch_deg=cfg["mismatch_deg"], gamma=cfg["gamma"], b=cfg["b"],
            grid_step_deg=cfg["grid_step_deg"], options=options,
            diagonal_loading=cfg["diagonal_loading"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    payload = {
        "seed": scenario.rng_seed,
        "trials": cfg["trials"],
        "mismatch_deg": cfg["mismatch_deg"],
        "gamma": cfg["gamma"],
        "b": cfg["b"],
        "methods": [],
    }
    for rep in reports:
        entry = {
            "method": rep.method,
            "mean_sinr_db": rep.mean_sinr_db,
            "nonconverged_trials": rep.nonconverged_trials,
        }
        if per_trial:
            entry["per_trial_sinr_db"] = rep.per_trial_sinr_db.tolist()
        payload["methods"].append(entry)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if any(rep.nonconverged_trials for rep in reports):
        print("some trials did not converge; counts recorded in the report",
              file=sys.stderr)
        return 2
    return 0


def cmd_sweep_b(cfg: dict, out: str) -> int:
    scenario = build_scenario(cfg)
    options = build_options(cfg)
    if cfg["b_min"] > cfg["b_max"]:
        raise ConfigError(f"b_min {cfg['b_min']} exceeds b_max {cfg['b_max']}")
    try:
        result = sweep_b(
            scenario, range(cfg["b_min"], cfg["b_max"] + 1), trials=cfg["trials"],
            gamma=cfg["gamma"], mismatch_deg=cfg["mismatch_deg"],
            grid_step_deg=cfg["grid_step_deg"], options=options)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("b,mean_sinr_db\n")
        for b, val in zip(result.b_values, result.mean_sinr_db):
            fh.write(f"{b},{_fmt(val)}\n")
    if result.nonconverged_total:
        print(f"{result.nonconverged_total} solves did not converge", file=sys.stderr)
        return 2
    return 0


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; this tool reserves 2 for
    # solver non-convergence, so remap usage problems to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mnbeam", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("design", "pattern", "montecarlo", "sweep-b"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key = value run configuration")
        p.add_argument("--out", required=True, help="output file path")
        p.add_argument("--trials", type=int)
        p.add_argument("--mismatch", type=float, help="steering offset in degrees")
        p.add_argument("--seed", type=int)
        p.add_argument("--gamma", type=float)
        p.add_argument("--b", type=int, help="mainlobe half-width in grid steps")
        p.add_argument("--grid-step", type=float, help="grid spacing in degrees")
        if name == "pattern":
            p.add_argument("--weights", required=True, help="weight file from design")
        if name == "montecarlo":
            p.add_argument("--per-trial", action="store_true",
                           help="include per-trial SINR arrays in the report")
    return parser


_FLAG_TO_KEY = {
    "trials": "trials",
    "mismatch": "mismatch_deg",
    "seed": "seed",
    "gamma": "gamma",
    "b": "b",
    "grid_step": "grid_step_deg",
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = (parse_config(args.config) if args.config
               else {key: default for key, (_, default) in _CONFIG_SCHEMA.items()})
        for flag, key in _FLAG_TO_KEY.items():
            value = getattr(args, flag)
            if value is not None:
                cfg[key] = value
        if args.command == "sweep-b" and args.b is not None:
            cfg["b_min"] = cfg["b_max"] = args.b  # --b pins a one-point sweep
        if args.command == "design":
            return cmd_design(cfg, args.out)
        if args.command == "pattern":
            return cmd_pattern(cfg, args.weights, args.out)
        if args.command == "montecarlo":
            return cmd_montecarlo(cfg, args.out, args.per_trial)
        return cmd_sweep_b(cfg, args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
