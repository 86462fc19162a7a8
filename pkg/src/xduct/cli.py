"""Command-line interface.

Subcommands:

* ``solve``  - one transfer-matrix solve plus its noise report, as JSON.
* ``sweep``  - mechanical-linewidth or drive-amplitude sweep, as CSV.
* ``tune``   - find the drive amplitude giving unity efficiency, as JSON.
* ``verify`` - run the structural/identity property suite, one line each.
* ``oracle`` - compare the recursive solver against the dense reference solve.

Exit codes: 0 success, 1 validation/configuration (or failed verification),
2 solver failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .errors import ConfigError, NoCrossingError, ParameterError, SolverError, XductError
from .matrices import build_drift_constant, build_drift_fourier, build_port_layout
from .metrics import NoiseReport, added_noise
from .params import (
    DriveMode,
    DriveProtocol,
    hz_to_rad,
    rad_to_hz,
    steady_amplitudes,
    validate,
)
from .experiments import SweepResult, sweep_kappa_m, sweep_omega, tune_unity_efficiency
from .solver import TransferSolution, dense_oracle, solve_parametric, solve_point, stability_margin

#: default sweep grids (value/2pi in Hz): mechanical linewidth is swept
#: logarithmically over six decades, the drive amplitude linearly
KAPPA_M_GRID_HZ = (1e-3, 1e3, 121, "log")
OMEGA_GRID_HZ = (100e6, 1000e6, 181, "linear")

CSV_COLUMNS = ("eta_const", "S_const", "eta_pd1", "S_pd1", "eta_pd2", "S_pd2",
               "lb_pd2", "comm_resid")


def _fmt(x: float) -> str:
    """Full-double-precision, locale-independent number formatting."""
    return format(x, ".17g")


def _matrix_json(m: np.ndarray) -> dict:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _solution_json(sol: TransferSolution) -> dict:
    ports = [c.name for c in sol.layout.columns]
    sidebands = {
        f"{'+' if sign > 0 else '-'}{k}": _matrix_json(mat)
        for (sign, k), mat in sorted(sol.t_sideband.items())
    }
    return {
        "ports": ports,
        "probe_hz": rad_to_hz(sol.probe_omega),
        "protocol": sol.protocol,
        "n_sidebands": sol.n_sidebands,
        "method": sol.method,
        "condition_estimate": sol.condition,
        "central": _matrix_json(sol.t_central),
        "sidebands": sidebands,
    }


def _report_json(report: NoiseReport) -> dict:
    return {
        "eta": report.eta,
        "s_added": report.s_added,
        "s_lower_bound": report.s_lower_bound,
        "r_squared": report.r_squared,
        "commutator_residual": report.commutator_residual,
        "eta_zero": report.eta_zero,
        "term_breakdown": [
            {"source": t.source, "weight": t.weight, "mag_sq": t.mag_sq,
             "contribution": t.contribution}
            for t in report.term_breakdown
        ],
    }


def _write_output(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


def _json_dump(obj: dict, path: str | None):
    _write_output(json.dumps(obj, indent=2, allow_nan=True, sort_keys=False) + "\n", path)


def cmd_solve(cfg: RunConfig, args) -> int:
    probe = cfg.probe_omega
    if args.probe_at == "omega-m":
        probe = cfg.params.omega_m
    if args.probe_hz is not None:
        probe = hz_to_rad(args.probe_hz)
    sol = solve_point(cfg.params, cfg.drive, probe)
    report = added_noise(sol)
    if cfg.drive.mode is DriveMode.PARAMETRIC:
        mats = build_drift_fourier(cfg.params, steady_amplitudes(cfg.params, cfg.drive))
        margin = stability_margin(mats, cfg.drive.n_sidebands)
    else:
        margin = stability_margin(
            build_drift_constant(cfg.params, steady_amplitudes(cfg.params, cfg.drive)))
    out = {
        "params_hz": cfg.params.to_hz(),
        "drive": {"mode": cfg.drive.mode.value,
                  "omega_hz": rad_to_hz(cfg.drive.omega_drive),
                  "n_sidebands": cfg.drive.n_sidebands},
        "noise_report": _report_json(report),
        "stability_margin_advisory": margin,
        "transfer": _solution_json(sol),
    }
    _json_dump(out, args.output)
    return 0


def _sweep_csv(result: SweepResult, axis_column: str) -> str:
    lines = [axis_column + "," + ",".join(CSV_COLUMNS)]
    for i, x_hz in enumerate(result.grid_hz):
        s = result.series
        resid = max(s[name]["commutator_residual"][i] for name in ("const", "pd1", "pd2"))
        row = [
            x_hz,
            s["const"]["eta"][i], s["const"]["s_added"][i],
            s["pd1"]["eta"][i], s["pd1"]["s_added"][i],
            s["pd2"]["eta"][i], s["pd2"]["s_added"][i],
            s["pd2"]["s_lower_bound"][i],
            resid,
        ]
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _grid_from_settings(cfg: RunConfig, args, defaults) -> np.ndarray:
    lo_hz = args.sweep_from if args.sweep_from is not None else \
        (cfg.sweep.from_hz if cfg.sweep.from_hz is not None else defaults[0])
    hi_hz = args.sweep_to if args.sweep_to is not None else \
        (cfg.sweep.to_hz if cfg.sweep.to_hz is not None else defaults[1])
    points = args.points if args.points is not None else \
        (cfg.sweep.points if cfg.sweep.points is not None else defaults[2])
    scale = args.scale if args.scale is not None else \
        (cfg.sweep.scale if cfg.sweep.scale is not None else defaults[3])
    if not (0 < lo_hz < hi_hz):
        raise ConfigError("sweep range must satisfy 0 < from < to")
    if scale == "log":
        grid_hz = np.logspace(math.log10(lo_hz), math.log10(hi_hz), points)
    else:
        grid_hz = np.linspace(lo_hz, hi_hz, points)
    return hz_to_rad(1.0) * grid_hz


def cmd_sweep(cfg: RunConfig, args) -> int:
    if args.axis == "kappa-m":
        grid = _grid_from_settings(cfg, args, KAPPA_M_GRID_HZ)
        result = sweep_kappa_m(cfg.params, cfg.drive.omega_drive, grid,
                               probe_omega=cfg.probe_omega)
        csv_text = _sweep_csv(result, "kappa_m_hz")
    else:
        grid = _grid_from_settings(cfg, args, OMEGA_GRID_HZ)
        result = sweep_omega(cfg.params, grid, probe_omega=cfg.probe_omega)
        csv_text = _sweep_csv(result, "omega_hz")
    _write_output(csv_text, args.output)
    for label, x in result.crossings:
        print(f"# crossing: {label} at {rad_to_hz(x):.6g} Hz", file=sys.stderr)
    return 0


def cmd_tune(cfg: RunConfig, args) -> int:
    bracket = (hz_to_rad(args.bracket_lo), hz_to_rad(args.bracket_hi))
    omega_star = tune_unity_efficiency(cfg.params, args.n, bracket,
                                       probe_omega=cfg.probe_omega)
    drive = DriveProtocol.parametric(omega_star, args.n)
    report = added_noise(solve_point(cfg.params, drive, cfg.probe_omega))
    out = {
        "omega_star_hz": rad_to_hz(omega_star),
        "n_sidebands": args.n,
        "eta": report.eta,
        "abs_eta_minus_one": abs(report.eta - 1.0),
        "s_added": report.s_added,
        "s_lower_bound": report.s_lower_bound,
    }
    _json_dump(out, args.output)
    return 0


def cmd_oracle(cfg: RunConfig, args) -> int:
    if cfg.drive.mode is not DriveMode.PARAMETRIC:
        raise ConfigError("oracle comparison requires a parametric drive")
    probe = cfg.probe_omega if args.probe_hz is None else hz_to_rad(args.probe_hz)
    params = validate(cfg.params)
    layout = build_port_layout(params)
    mats = build_drift_fourier(params, steady_amplitudes(params, cfg.drive))
    n = cfg.drive.n_sidebands
    rec = solve_parametric(mats, layout, probe, n)
    den = dense_oracle(mats, layout, probe, n)
    scale = max(np.abs(den.t_central).max(), 1.0)
    diffs = {"central": float(np.abs(rec.t_central - den.t_central).max() / scale)}
    for key in sorted(rec.t_sideband):
        tag = f"{'+' if key[0] > 0 else '-'}{key[1]}"
        diffs[tag] = float(np.abs(rec.t_sideband[key] - den.t_sideband[key]).max() / scale)
    worst = max(diffs.values())
    out = {
        "probe_hz": rad_to_hz(probe),
        "n_sidebands": n,
        "max_relative_difference": worst,
        "per_matrix": diffs,
        "tolerance": 1e-10,
        "pass": bool(worst <= 1e-10),
    }
    _json_dump(out, args.output)
    return 0 if worst <= 1e-10 else 2


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------

def _off_block_scaled(matrix: np.ndarray, layout) -> float:
    scale = max(np.abs(matrix).max(), 1.0)
    n = layout.n_ports
    mask = np.ones((n, n), dtype=bool)
    for block in range(3):
        idx = [j for j in range(n) if layout.block_of_column(j) == block]
        mask[np.ix_(idx, idx)] = False
    return float(np.abs(matrix[mask]).max() / scale) if mask.any() else 0.0


def _state_off_block(matrix: np.ndarray) -> float:
    scale = max(np.abs(matrix).max(), 1.0)
    mask = np.ones((6, 6), dtype=bool)
    for sl in (slice(0, 2), slice(2, 4), slice(4, 6)):
        mask[sl, sl] = False
    return float(np.abs(matrix[mask]).max() / scale)


def _verify_properties(cfg: RunConfig):
    """Yield (name, passed, detail) for every checked property."""
    params = validate(cfg.params)
    layout = build_port_layout(params)
    omega = cfg.probe_omega
    omega_drive = cfg.drive.omega_drive

    # coupling-matrix normalization: per cavity the squared entries sum to kappa
    b = layout.b_matrix
    worst = 0.0
    for rows, kappa in ((0, params.kappa_o), (1, params.kappa_e), (4, params.kappa_m)):
        worst = max(worst, abs((b[rows] ** 2).sum() - kappa) / kappa if kappa else 0.0)
    yield "b-matrix-normalization", worst <= 1e-14, f"max rel err {worst:.2e} (tol 1e-14)"

    # steady amplitudes solve the classical pump equation; residual scaled by
    # the largest term of the equation (the drive dominates |alpha| here)
    worst = 0.0
    for mode in (DriveMode.CONSTANT, DriveMode.PARAMETRIC):
        amps = steady_amplitudes(params, replace(cfg.drive, mode=mode))
        for cav, alpha in (("o", amps.alpha_o), ("e", amps.alpha_e)):
            delta = getattr(params, f"delta_{cav}")
            kappa = getattr(params, f"kappa_{cav}")
            rotate = -2j * params.omega_m if mode is DriveMode.PARAMETRIC else 0.0
            coeff = rotate + 1j * delta + 0.5 * kappa
            resid = abs(coeff * alpha + 1j * omega_drive)
            scale = max(abs(coeff * alpha), omega_drive, 1e-300)
            worst = max(worst, resid / scale)
    yield "steady-amplitude-fixed-point", worst <= 1e-12, f"max scaled resid {worst:.2e} (tol 1e-12)"

    pd_drive = DriveProtocol.parametric(omega_drive, max(cfg.drive.n_sidebands, 2))
    mats = build_drift_fourier(params, steady_amplitudes(params, pd_drive))

    sols = {n: solve_parametric(mats, layout, omega, n) for n in (1, 2, 5)}
    dense = {n: dense_oracle(mats, layout, omega, n) for n in (2, 5)}

    worst = 0.0
    for n, rec in ((2, sols[2]), (5, sols[5])):
        den = dense[n]
        scale = max(np.abs(den.t_central).max(), 1.0)
        worst = max(worst, float(np.abs(rec.t_central - den.t_central).max() / scale))
        for key in rec.t_sideband:
            worst = max(worst, float(
                np.abs(rec.t_sideband[key] - den.t_sideband[key]).max() / scale))
    yield "oracle-equivalence", worst <= 1e-10, f"max rel diff {worst:.2e} (tol 1e-10)"

    from .solver import build_recursion
    chain = build_recursion(mats, omega, 5)
    worst = 0.0
    for group in (chain.x_plus, chain.x_minus, chain.xi_plus, chain.xi_minus):
        for m in group.values():
            worst = max(worst, _state_off_block(m))
    worst = max(worst, _state_off_block(dense[5].x_central))
    yield "block-diagonal-chain", worst <= 1e-14, f"max scaled off-block {worst:.2e} (tol 1e-14)"

    worst = max(_off_block_scaled(sols[2].t_central, layout),
                _off_block_scaled(dense[2].t_central, layout))
    yield "central-block-structure", worst <= 1e-13, f"max scaled off-block {worst:.2e} (tol 1e-13)"

    tails = [np.abs(dense[5].t_sideband[(s, k)]).max() for s in (1, -1) for k in (3, 4, 5)]
    scale = max(np.abs(dense[5].t_central).max(), 1.0)
    worst = max(tails) / scale
    yield "sideband-tail-vanishing", worst <= 1e-13, f"max scaled k>2 entry {worst:.2e} (tol 1e-13)"

    worst = 0.0
    scale = max(np.abs(sols[2].t_central).max(), 1.0)
    worst = max(worst, float(np.abs(sols[2].t_central - sols[5].t_central).max() / scale))
    for key in sols[2].t_sideband:
        worst = max(worst, float(
            np.abs(sols[2].t_sideband[key] - sols[5].t_sideband[key]).max() / scale))
    yield "truncation-invariance", worst <= 1e-12, f"max rel change N=2 vs 5 {worst:.2e} (tol 1e-12)"

    # sideband coupling pattern: first-order couples EM<->mechanical only,
    # second-order EM<->EM only
    worst = 0.0
    l = layout.em_block_size
    for key, mat in sols[2].t_sideband.items():
        scale = max(np.abs(sols[2].t_central).max(), 1.0)
        allowed = np.zeros((layout.n_ports, layout.n_ports), dtype=bool)
        em = list(range(2 * l))
        mech = list(range(2 * l, layout.n_ports))
        if key[1] == 1:
            allowed[np.ix_(em, mech)] = True
            allowed[np.ix_(mech, em)] = True
        else:
            allowed[np.ix_(em, em)] = True
        worst = max(worst, float(np.abs(mat[~allowed]).max() / scale))
    yield "sideband-coupling-pattern", worst <= 1e-13, f"max scaled forbidden entry {worst:.2e} (tol 1e-13)"

    checks = []
    const_drive = DriveProtocol.constant(omega_drive)
    for drive in (const_drive, DriveProtocol.parametric(omega_drive, 1), pd_drive):
        sol = solve_point(params, drive, omega)
        report = added_noise(sol)
        checks.append(report)
    worst = max(r.commutator_residual for r in checks)
    yield "commutator-preservation", worst <= 1e-10, f"max residual {worst:.2e} (tol 1e-10)"

    gaps = [r.s_added - r.s_lower_bound for r in checks if not r.eta_zero]
    worst = min(gaps) if gaps else 0.0
    yield "noise-above-lower-bound", worst >= -1e-10, f"min S - bound {worst:.2e} (tol -1e-10)"


def cmd_verify(cfg: RunConfig, args) -> int:
    mats = build_drift_fourier(
        cfg.params,
        steady_amplitudes(cfg.params,
                          DriveProtocol.parametric(cfg.drive.omega_drive,
                                                   max(cfg.drive.n_sidebands, 2))))
    print(f"advisory stability margin (max Re eigenvalue): "
          f"{stability_margin(mats, 2):.6g} 1/s")
    failures = 0
    for name, passed, detail in _verify_properties(cfg):
        print(f"{'PASS' if passed else 'FAIL'}  {name:28s} {detail}")
        failures += 0 if passed else 1
    if failures:
        print(f"{failures} propert{'y' if failures == 1 else 'ies'} failed")
        return 1
    print("all properties passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xduct",
        description="Transfer matrices, transduction efficiency and added noise "
                    "of a three-mode electro-optomechanical transducer under "
                    "constant or parametric pump driving.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--output", default=None, help="output path ('-' = stdout)")

    p = sub.add_parser("solve", help="single-point solve, JSON output")
    add_common(p)
    p.add_argument("--probe-at", choices=["omega-m"], default=None,
                   help="probe at the mechanical frequency (default)")
    p.add_argument("--probe-hz", type=float, default=None,
                   help="probe frequency as value/2pi in Hz")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="parameter sweep, CSV output")
    p.add_argument("axis", choices=["kappa-m", "omega"],
                   help="swept quantity: mechanical linewidth or drive amplitude")
    add_common(p)
    p.add_argument("--from", dest="sweep_from", type=float, default=None,
                   help="grid start (value/2pi in Hz)")
    p.add_argument("--to", dest="sweep_to", type=float, default=None,
                   help="grid end (value/2pi in Hz)")
    p.add_argument("--points", type=int, default=None, help="number of grid points")
    p.add_argument("--scale", choices=["linear", "log"], default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tune", help="drive amplitude for unity efficiency, JSON output")
    add_common(p)
    p.add_argument("--n", type=int, default=2, help="sideband truncation order")
    p.add_argument("--bracket-lo", type=float, default=200e6,
                   help="bracket start (value/2pi in Hz)")
    p.add_argument("--bracket-hi", type=float, default=800e6,
                   help="bracket end (value/2pi in Hz)")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("verify", help="run the property suite, pass/fail per line")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="recursive-vs-dense solver comparison, JSON output")
    add_common(p)
    p.add_argument("--probe-hz", type=float, default=None)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(cfg, args)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SolverError, NoCrossingError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2
    except XductError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
