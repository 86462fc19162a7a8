"""Figure-level studies: parameter sweeps, crossing extraction, drive tuning and
truncation-order convergence.

Sweeps evaluate the constant protocol and the parametric protocol at truncation
orders 1 and 2, probed at the mechanical frequency, and annotate the abscissae
where the series cross the relevant thresholds.  Grid points are independent
solves; the ``XDUCT_THREADS`` environment variable caps how many run
concurrently (0 or unset picks a sensible default), and results are always
emitted in grid order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import NoCrossingError, ParameterError
from .metrics import added_noise
from .params import DriveMode, DriveProtocol, SystemParams, validate
from .solver import solve_point

CLASSICAL_NOISE_LIMIT = 0.5
CROSSING_REL_TOL = 1e-4

#: the three series every sweep evaluates: (name, drive mode, truncation order)
SWEEP_SERIES = (
    ("const", DriveMode.CONSTANT, None),
    ("pd1", DriveMode.PARAMETRIC, 1),
    ("pd2", DriveMode.PARAMETRIC, 2),
)


def worker_count() -> int:
    """Sweep parallelism from XDUCT_THREADS (0 or unset = automatic)."""
    raw = os.environ.get("XDUCT_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ParameterError(f"XDUCT_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ParameterError("XDUCT_THREADS must be >= 0")
    if n == 0:
        return min(8, os.cpu_count() or 1)
    return n


@dataclass(frozen=True)
class SweepPoint:
    """Metrics of one series at one grid point."""

    eta: float
    s_added: float
    s_lower_bound: float
    commutator_residual: float


@dataclass(frozen=True)
class SweepResult:
    """One sweep: the grid, per-series metric arrays, and annotated crossings.

    ``axis`` names the swept quantity; the grid is stored in rad/s (like every
    internal frequency) and mirrored in ``grid_hz`` under the value/2pi
    convention used for emission.
    """

    axis: str
    grid: np.ndarray
    series: dict[str, dict[str, np.ndarray]]
    crossings: tuple[tuple[str, float], ...]

    @property
    def grid_hz(self) -> np.ndarray:
        return self.grid / (2.0 * math.pi)


def _metrics_at(params: SystemParams, mode: DriveMode, n: int | None,
                omega_drive: float, omega: float) -> SweepPoint:
    if mode is DriveMode.CONSTANT:
        drive = DriveProtocol.constant(omega_drive)
    else:
        drive = DriveProtocol.parametric(omega_drive, n)
    report = added_noise(solve_point(params, drive, omega))
    return SweepPoint(
        eta=report.eta,
        s_added=report.s_added,
        s_lower_bound=report.s_lower_bound,
        commutator_residual=report.commutator_residual,
    )


def _run_grid(evaluate: Callable[[float], dict[str, SweepPoint]],
              grid: np.ndarray) -> list[dict[str, SweepPoint]]:
    workers = worker_count()
    if workers <= 1:
        return [evaluate(x) for x in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, grid))


def _check_grid(grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ParameterError("sweep grid must be a nonempty 1-d array")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ParameterError("sweep grid must be strictly increasing")
    return grid


def _collect(axis: str, grid: np.ndarray,
             rows: list[dict[str, SweepPoint]]) -> SweepResult:
    series = {}
    for name, _, _ in SWEEP_SERIES:
        series[name] = {
            "eta": np.array([r[name].eta for r in rows]),
            "s_added": np.array([r[name].s_added for r in rows]),
            "s_lower_bound": np.array([r[name].s_lower_bound for r in rows]),
            "commutator_residual": np.array([r[name].commutator_residual for r in rows]),
        }
    return SweepResult(axis=axis, grid=grid, series=series, crossings=())


def find_crossing(grid: Sequence[float], series_a: Sequence[float],
                  series_b: Sequence[float] | float,
                  refine: Callable[[float], float] | None = None,
                  rel_tol: float = CROSSING_REL_TOL) -> float:
    """Abscissa of the first sign change of ``series_a - series_b`` on ``grid``.

    ``series_b`` may be a second series or a scalar threshold.  The first
    bracketing interval is located on the tabulated values and the crossing is
    linearly interpolated; when ``refine`` is given (a callable returning the
    fresh difference at an arbitrary abscissa) the bracket is bisected on fresh
    evaluations down to relative width ``rel_tol``.

    Raises :class:`NoCrossingError` when the difference never changes sign.
    """
    grid = np.asarray(grid, dtype=float)
    diff = np.asarray(series_a, dtype=float) - np.asarray(series_b, dtype=float)
    sign = np.sign(diff)
    # bracket between consecutive nonzero signs so that tabulated exact zeros
    # flanked by equal signs (touch points) do not count as crossings
    nonzero = np.flatnonzero(sign)
    bracket = None
    for i0, i1 in zip(nonzero[:-1], nonzero[1:]):
        if sign[i0] != sign[i1]:
            bracket = (int(i0), int(i1))
            break
    if bracket is None:
        raise NoCrossingError("no crossing in range")
    i, j = bracket
    lo, hi = float(grid[i]), float(grid[j])
    f_lo, f_hi = float(diff[i]), float(diff[j])
    estimate = lo - f_lo * (hi - lo) / (f_hi - f_lo)
    if refine is None:
        return estimate
    while (hi - lo) > rel_tol * max(abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        f_mid = refine(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo - f_lo * (hi - lo) / (f_hi - f_lo)


def sweep_kappa_m(base: SystemParams, omega_drive: float,
                  grid: np.ndarray, probe_omega: float | None = None) -> SweepResult:
    """Sweep the mechanical linewidth at fixed drive amplitude.

    ``base`` supplies every other parameter (the study of the symmetric
    transducer uses the lossless symmetric configuration); ``grid`` is the
    kappa_m grid in rad/s.  Crossing annotations: where each series' added
    noise reaches the classical limit 0.5, and where each parametric efficiency
    overtakes the constant one.  Crossings are refined on fresh solves.
    """
    validate(base)
    grid = _check_grid(grid)
    omega = base.omega_m if probe_omega is None else probe_omega

    def evaluate(kappa_m: float) -> dict[str, SweepPoint]:
        p = base.with_kappa_m(kappa_m)
        return {name: _metrics_at(p, mode, n, omega_drive, omega)
                for name, mode, n in SWEEP_SERIES}

    result = _collect("kappa_m", grid, _run_grid(evaluate, grid))

    crossings: list[tuple[str, float]] = []
    for name, mode, n in SWEEP_SERIES:
        def s_diff(x: float, mode=mode, n=n) -> float:
            pt = _metrics_at(base.with_kappa_m(x), mode, n, omega_drive, omega)
            return pt.s_added - CLASSICAL_NOISE_LIMIT
        try:
            x = find_crossing(grid, result.series[name]["s_added"],
                              CLASSICAL_NOISE_LIMIT, refine=s_diff)
            crossings.append((f"S[{name}] crosses classical limit 0.5", x))
        except NoCrossingError:
            pass
    for name in ("pd1", "pd2"):
        mode = DriveMode.PARAMETRIC
        n = 1 if name == "pd1" else 2
        def eta_gap(x: float, mode=mode, n=n) -> float:
            pd = _metrics_at(base.with_kappa_m(x), mode, n, omega_drive, omega)
            const = _metrics_at(base.with_kappa_m(x), DriveMode.CONSTANT, None,
                                omega_drive, omega)
            return pd.eta - const.eta
        try:
            x = find_crossing(grid, result.series[name]["eta"],
                              result.series["const"]["eta"], refine=eta_gap)
            crossings.append((f"eta[{name}] overtakes eta[const]", x))
        except NoCrossingError:
            pass
    return replace(result, crossings=tuple(crossings))


def sweep_omega(base: SystemParams, grid: np.ndarray,
                probe_omega: float | None = None) -> SweepResult:
    """Sweep the drive amplitude at fixed device parameters.

    ``grid`` is the amplitude grid in rad/s.  Each protocol uses its own
    steady-state pump formula at every point.  Crossing annotations: onset of
    the parametric efficiency advantage, the added-noise crossovers, and where
    each parametric efficiency passes unity.
    """
    validate(base)
    grid = _check_grid(grid)
    omega = base.omega_m if probe_omega is None else probe_omega

    def evaluate(omega_drive: float) -> dict[str, SweepPoint]:
        return {name: _metrics_at(base, mode, n, omega_drive, omega)
                for name, mode, n in SWEEP_SERIES}

    result = _collect("omega_drive", grid, _run_grid(evaluate, grid))

    crossings: list[tuple[str, float]] = []
    for name in ("pd1", "pd2"):
        n = 1 if name == "pd1" else 2
        def eta_gap(x: float, n=n) -> float:
            pd = _metrics_at(base, DriveMode.PARAMETRIC, n, x, omega)
            const = _metrics_at(base, DriveMode.CONSTANT, None, x, omega)
            return pd.eta - const.eta
        def s_gap(x: float, n=n) -> float:
            pd = _metrics_at(base, DriveMode.PARAMETRIC, n, x, omega)
            const = _metrics_at(base, DriveMode.CONSTANT, None, x, omega)
            return pd.s_added - const.s_added
        def eta_unity(x: float, n=n) -> float:
            return _metrics_at(base, DriveMode.PARAMETRIC, n, x, omega).eta - 1.0
        for label, series_a, series_b, refine in (
            (f"eta[{name}] overtakes eta[const]",
             result.series[name]["eta"], result.series["const"]["eta"], eta_gap),
            (f"S[{name}] falls below S[const]",
             result.series[name]["s_added"], result.series["const"]["s_added"], s_gap),
            (f"eta[{name}] crosses unity",
             result.series[name]["eta"], 1.0, eta_unity),
        ):
            try:
                crossings.append((label, find_crossing(grid, series_a, series_b,
                                                       refine=refine)))
            except NoCrossingError:
                pass
    return replace(result, crossings=tuple(crossings))


def tune_unity_efficiency(base: SystemParams, protocol_n: int,
                          bracket: tuple[float, float],
                          probe_omega: float | None = None,
                          tol: float = 1e-8, max_iter: int = 200) -> float:
    """Drive amplitude (rad/s) at which the parametric efficiency equals one.

    Bisection/secant hybrid on eta(drive) - 1 over ``bracket`` (order
    irrelevant); converges to |eta - 1| <= ``tol``.  Raises
    :class:`NoCrossingError` when the bracket does not straddle a crossing.
    """
    validate(base)
    omega = base.omega_m if probe_omega is None else probe_omega
    lo, hi = sorted(float(x) for x in bracket)

    def gap(x: float) -> float:
        return _metrics_at(base, DriveMode.PARAMETRIC, protocol_n, x, omega).eta - 1.0

    f_lo, f_hi = gap(lo), gap(hi)
    for x, f in ((lo, f_lo), (hi, f_hi)):
        if abs(f) <= tol:
            return x
    if (f_lo > 0) == (f_hi > 0):
        raise NoCrossingError(
            f"eta - 1 does not change sign on bracket [{lo:g}, {hi:g}] rad/s"
        )
    for _ in range(max_iter):
        # secant proposal, kept only if it lands safely inside the bracket
        x_sec = hi - f_hi * (hi - lo) / (f_hi - f_lo)
        width = hi - lo
        if not (lo + 0.01 * width < x_sec < hi - 0.01 * width):
            x_sec = 0.5 * (lo + hi)
        f_sec = gap(x_sec)
        if abs(f_sec) <= tol:
            return x_sec
        if (f_sec > 0) == (f_lo > 0):
            lo, f_lo = x_sec, f_sec
        else:
            hi, f_hi = x_sec, f_sec
    raise NoCrossingError(f"unity-efficiency tuning did not converge to {tol:g}")


@dataclass(frozen=True)
class ConvergenceRow:
    n_sidebands: int
    eta: float
    s_added: float


@dataclass(frozen=True)
class ConvergenceTable:
    """Efficiency and added noise versus truncation order, with the largest
    deviation of any order > 2 from the order-2 values."""

    rows: tuple[ConvergenceRow, ...]
    max_deviation_beyond_2: float


def convergence_study(base: SystemParams, omega_drive: float, omega: float,
                      n_max: int) -> ConvergenceTable:
    """Tabulate eta and S for truncation orders 1..n_max at one probe point."""
    if n_max < 3:
        raise ParameterError("convergence study needs n_max >= 3")
    validate(base)
    rows = []
    for n in range(1, n_max + 1):
        pt = _metrics_at(base, DriveMode.PARAMETRIC, n, omega_drive, omega)
        rows.append(ConvergenceRow(n_sidebands=n, eta=pt.eta, s_added=pt.s_added))
    ref = rows[1]  # order 2
    dev = 0.0
    for row in rows[2:]:
        dev = max(dev,
                  abs(row.eta - ref.eta) / max(abs(ref.eta), 1.0),
                  abs(row.s_added - ref.s_added) / max(abs(ref.s_added), 1.0))
    return ConvergenceTable(rows=tuple(rows), max_deviation_beyond_2=dev)
