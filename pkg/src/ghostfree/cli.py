"""
Command-line front end.

    ghostfree verify --suite all --out results/
    ghostfree spectrum --omega1 2 --omega2 1
    ghostfree propagator --epsilon 0.3
    ghostfree classical --omega1 2 --omega2 1
    ghostfree field --m1 2 --m2 1 --k 2

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from ghostfree import classical as cl
from ghostfree import complex_oscillator as co
from ghostfree import field as fd
from ghostfree import pais_uhlenbeck as pu
from ghostfree.errors import ConfigError, GhostfreeError
from ghostfree.report import dumps_reports, summary_line, write_csv, write_json, write_report_csv
from ghostfree.suites import SUITE_CHOICES, RunConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

# flag name -> parameter name
PARAM_FLAGS = {
    "epsilon": "epsilon",
    "omega1": "omega1",
    "omega2": "omega2",
    "t": "t",
    "m1": "m1",
    "m2": "m2",
    "k": "k",
    "seed": "seed",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _parse_tolerance(text: str):
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise ConfigError(f"tolerance must be name=value, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError as exc:
        raise ConfigError(f"tolerance value for {name!r} is not a number") from exc


def _common(sub):
    sub.add_argument("--config", type=Path, help="JSON file mirroring the run configuration")
    sub.add_argument("--out", type=Path, help="output directory")
    sub.add_argument("--format", choices=("json", "csv"))
    sub.add_argument("--seed", type=int)
    for flag in ("epsilon", "omega1", "omega2", "t", "m1", "m2", "k"):
        sub.add_argument(f"--{flag}", type=float)
    sub.add_argument("--basis", type=int, help="basis size (complex oscillator and per PU mode)")
    sub.add_argument("--tolerance", action="append", default=[], metavar="NAME=VALUE")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ghostfree", description="Numerical checks for the complexified Pais-Uhlenbeck oscillator.")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    verify = subs.add_parser("verify", help="run verification suites")
    verify.add_argument("--suite", choices=SUITE_CHOICES)
    _common(verify)
    for name, text in (
        ("spectrum", "PU spectrum table"),
        ("propagator", "propagator coefficient tables"),
        ("classical", "classical trajectory table"),
        ("field", "field mode reduction summary"),
    ):
        _common(subs.add_parser(name, help=text))
    prop = subs.choices["propagator"]
    prop.add_argument("--t-max", type=float, default=3.0)
    prop.add_argument("--samples", type=int, default=301)
    subs.choices["classical"].add_argument("--stride", type=int, default=10)
    subs.choices["field"].add_argument("--k-values", type=str, default="0,0.5,1,2")
    return parser


def make_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    if getattr(args, "suite", None):
        cfg.suite = args.suite
    for flag, name in PARAM_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            cfg.parameters[name] = value
    if args.basis is not None:
        if args.command == "verify" and cfg.suite in ("pu-quantum", "field"):
            cfg.parameters["pu_basis"] = args.basis
        elif args.command == "spectrum":
            cfg.parameters["pu_basis"] = args.basis
        else:
            cfg.parameters["basis"] = args.basis
    for text in args.tolerance:
        name, value = _parse_tolerance(text)
        cfg.tolerances[name] = value
    if args.out is not None:
        cfg.output_dir = args.out
    if args.format is not None:
        cfg.format = args.format
    return cfg


def _prepare_out(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def emit(reports, cfg: RunConfig, timings=None) -> list[Path]:
    """Write report.json or report.csv (and timings.json when given) into the output directory."""
    out = _prepare_out(cfg)
    if cfg.format == "json":
        paths = [write_json(out / "report.json", dumps_reports(reports))]
    else:
        paths = [write_report_csv(out / "report.csv", reports)]
    if timings is not None:
        paths.append(write_json(out / "timings.json", timings))
    return paths


def cmd_verify(cfg: RunConfig) -> int:
    cfg.validate()
    reports, timings = run_suite(cfg)
    emit(reports, cfg, timings)
    for r in reports:
        print(summary_line(r))
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_spectrum(cfg: RunConfig) -> int:
    p = cfg.parameters
    if not p["omega1"] > p["omega2"] > 0:
        raise ConfigError("frequencies must satisfy omega1 > omega2 > 0")
    params = pu.PUParams(p["omega1"], p["omega2"])
    n = int(p["pu_basis"])
    if n < 8:
        raise ConfigError("basis must be >= 8")
    basis = pu.TwoModeBasis(n, n)
    count = basis.dim // 4
    evs, _ = pu.pu_spectrum(params, basis, count)
    n1, n2 = basis.quantum_numbers()
    levels = np.sort(params.omega1 * (n1 + 0.5) + params.omega2 * (n2 + 0.5))[:count]
    out = _prepare_out(cfg)
    write_csv(out / "spectrum.csv", ("index", "energy", "hpu_eigenvalue"), [(i, levels[i], evs[i]) for i in range(count)])
    print(f"wrote {out / 'spectrum.csv'} ({count} levels)")
    return EXIT_OK


def cmd_propagator(cfg: RunConfig, t_max: float, samples: int) -> int:
    p = cfg.parameters
    if not 0 < p["epsilon"] < 1:
        raise ConfigError(f"epsilon out of range: {p['epsilon']:g} not in (0, 1)")
    if not p["omega1"] > p["omega2"] > 0:
        raise ConfigError("frequencies must satisfy omega1 > omega2 > 0")
    if samples < 2 or t_max <= 0:
        raise ConfigError("need samples >= 2 and t_max > 0")
    params = pu.PUParams(p["omega1"], p["omega2"])
    times = np.linspace(0.0, t_max, samples)
    rows = []
    for t in times:
        k = co.propagator_abc(p["epsilon"], t)
        rows.append((t, k.A.real, k.A.imag, k.B.real, k.B.imag, k.C.real, k.C.imag))
    out = _prepare_out(cfg)
    write_csv(out / "propagator_complex_ho.csv", ("t", "re_A", "im_A", "re_B", "im_B", "re_C", "im_C"), rows)
    cols = ("t", "D", "F", "G", "J", "K", "M", "N")
    pu_rows = [tuple(pu.pu_propagator_coeffs(params, t).as_dict()[c] for c in cols) for t in times]
    write_csv(out / "propagator_pu.csv", cols, pu_rows)
    print(f"wrote propagator tables to {out}")
    return EXIT_OK


def cmd_classical(cfg: RunConfig, stride: int) -> int:
    p = cfg.parameters
    if not p["omega1"] > p["omega2"] > 0:
        raise ConfigError("frequencies must satisfy omega1 > omega2 > 0")
    if stride < 1:
        raise ConfigError("stride must be positive")
    params = pu.PUParams(p["omega1"], p["omega2"])
    coeffs = pu.solve_coefficients(params)
    rng = np.random.default_rng(int(p["seed"]))
    try:
        spec = cl.real_sector_spec(coeffs, rng.uniform(-1, 1, 4), p["duration"], p["step"])
    except GhostfreeError as exc:
        raise ConfigError(str(exc)) from exc
    traj = cl.map_to_xi(coeffs, cl.integrate_pu(params, spec))
    out = _prepare_out(cfg)
    cl.export_csv(out / "trajectory.csv", params, coeffs, traj, stride=stride)
    drift, equality = cl.energy_check(params, coeffs, traj)
    print(f"wrote {out / 'trajectory.csv'}; H_xi drift {drift:.3e}, |H_PU - H_xi| {equality:.3e}")
    return EXIT_OK


def cmd_field(cfg: RunConfig, k_values: str) -> int:
    p = cfg.parameters
    try:
        ks = [float(v) for v in k_values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError("k-values must be comma-separated numbers") from exc
    if not p["m1"] > p["m2"] >= 0:
        raise ConfigError("masses must satisfy m1 > m2 >= 0")
    fparams = fd.FieldParams(p["m1"], p["m2"])
    coeffs = fd.field_coefficients(fparams)
    rng = np.random.default_rng(int(p["seed"]))
    plus, minus = fd.quartic_identity_check(coeffs, fd.real_sector_samples(coeffs, rng, 200))
    summary = {
        "coefficients": {"a": coeffs.a, "b": coeffs.b, "c": coeffs.c},
        "modes": [{"k": k, "omega1": m.omega1, "omega2": m.omega2} for k in ks for m in [fd.mode_reduce(fparams, k)]],
        "quartic_residual_plus": plus,
        "quartic_residual_minus": minus,
    }
    out = _prepare_out(cfg)
    if cfg.format == "csv":
        write_csv(out / "field_modes.csv", ("k", "omega1", "omega2"), [(m["k"], m["omega1"], m["omega2"]) for m in summary["modes"]])
    else:
        write_json(out / "field.json", summary)
    print(f"quartic identity residuals: sigma=+1 {plus:.3e}, sigma=-1 {minus:.3e}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = make_config(args)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "propagator":
            return cmd_propagator(cfg, args.t_max, args.samples)
        if args.command == "classical":
            return cmd_classical(cfg, args.stride)
        return cmd_field(cfg, args.k_values)
    except GhostfreeError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
