"""Physical parameters of the three-mode transducer and the classical pump amplitudes.

All quantities are angular (rad/s) internally.  Configuration files and every
user-facing number follow the "value/2pi in Hz" convention instead, because that
is how such parameters are quoted in practice; convert at the boundary with
:func:`hz_to_rad` / :func:`rad_to_hz`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ParameterError, SingularAmplitudeError, StepSizeError

TWO_PI = 2.0 * math.pi


def hz_to_rad(value_hz: float) -> float:
    """Convert a frequency quoted as value/2pi in Hz to rad/s."""
    return TWO_PI * value_hz


def rad_to_hz(value_rad: float) -> float:
    """Convert an angular frequency in rad/s back to the Hz convention."""
    return value_rad / TWO_PI


class DriveMode(enum.Enum):
    """Pump drive protocol: constant amplitude, or amplitude oscillating at twice
    the mechanical frequency (parametric driving)."""

    CONSTANT = "constant"
    PARAMETRIC = "parametric"


@dataclass(frozen=True)
class SystemParams:
    """Rates, detunings and couplings of the optical (o), electrical (e) and
    mechanical (m) cavities, all in rad/s.

    ``kappa_*`` are total energy decay rates, ``kappa_*_ex`` the couplings to the
    external (signal) port of each EM cavity.  The mechanical cavity has a single
    port, so ``kappa_m_ex == kappa_m`` always; omit it and the constructor fills
    it in.
    """

    omega_m: float
    delta_o: float
    delta_e: float
    kappa_o: float
    kappa_e: float
    kappa_m: float
    kappa_o_ex: float
    kappa_e_ex: float
    g_o: float
    g_e: float
    kappa_m_ex: float | None = None

    def __post_init__(self):
        if self.kappa_m_ex is None:
            object.__setattr__(self, "kappa_m_ex", self.kappa_m)

    @classmethod
    def from_hz(cls, **kwargs_hz: float) -> "SystemParams":
        """Build from values quoted as value/2pi in Hz (same field names)."""
        return cls(**{k: hz_to_rad(v) for k, v in kwargs_hz.items()})

    def to_hz(self) -> dict[str, float]:
        """Field values converted back to the Hz convention."""
        return {
            name: rad_to_hz(getattr(self, name))
            for name in (
                "omega_m", "delta_o", "delta_e", "kappa_o", "kappa_e", "kappa_m",
                "kappa_o_ex", "kappa_e_ex", "kappa_m_ex", "g_o", "g_e",
            )
        }

    def with_kappa_m(self, kappa_m: float) -> "SystemParams":
        """Copy with a different mechanical linewidth (single port follows it)."""
        return replace(self, kappa_m=kappa_m, kappa_m_ex=kappa_m)


@dataclass(frozen=True)
class DriveProtocol:
    """Pump specification: protocol, real amplitude (rad/s) and, for the
    parametric protocol, the sideband truncation order."""

    mode: DriveMode
    omega_drive: float
    n_sidebands: int = 1

    def __post_init__(self):
        if self.omega_drive < 0:
            raise ParameterError("drive amplitude must be >= 0")
        if self.n_sidebands < 1:
            raise ParameterError("sideband truncation order must be >= 1")

    @classmethod
    def constant(cls, omega_drive: float) -> "DriveProtocol":
        return cls(DriveMode.CONSTANT, omega_drive)

    @classmethod
    def parametric(cls, omega_drive: float, n_sidebands: int = 2) -> "DriveProtocol":
        return cls(DriveMode.PARAMETRIC, omega_drive, n_sidebands)


@dataclass(frozen=True)
class SteadyAmplitudes:
    """Long-time classical pump amplitudes and the effective couplings they set.

    For the constant protocol these are the constant amplitudes themselves; for
    the parametric protocol they are the envelopes of the single-frequency
    steady state (the full amplitude carries an extra phase factor oscillating
    at twice the mechanical frequency).
    """

    alpha_o: complex
    alpha_e: complex
    g_eff_o: complex
    g_eff_e: complex
    mode: DriveMode


_RATE_FIELDS = (
    "kappa_o", "kappa_e", "kappa_m", "kappa_o_ex", "kappa_e_ex", "kappa_m_ex",
    "g_o", "g_e",
)


def validate(params: SystemParams) -> SystemParams:
    """Check every parameter invariant; return ``params`` unchanged if all hold.

    Raises :class:`ParameterError` naming the first violated invariant.
    """
    for name in _RATE_FIELDS:
        if getattr(params, name) < 0:
            raise ParameterError(f"negative rate: {name}")
    if not params.omega_m > 0:
        raise ParameterError("mechanical frequency omega_m must be > 0")
    for cav in ("o", "e"):
        if getattr(params, f"kappa_{cav}_ex") > getattr(params, f"kappa_{cav}"):
            raise ParameterError(
                f"external coupling exceeds total: kappa_{cav}_ex > kappa_{cav}"
            )
    if params.kappa_m_ex != params.kappa_m:
        raise ParameterError("mechanical cavity has a single port: kappa_m_ex must equal kappa_m")
    return params


def _steady_denominators(params: SystemParams, mode: DriveMode) -> tuple[complex, complex]:
    if mode is DriveMode.CONSTANT:
        return (
            1j * params.kappa_o - 2.0 * params.delta_o,
            1j * params.kappa_e - 2.0 * params.delta_e,
        )
    return (
        4.0 * params.omega_m - 2.0 * params.delta_o + 1j * params.kappa_o,
        4.0 * params.omega_m - 2.0 * params.delta_e + 1j * params.kappa_e,
    )


def steady_amplitudes(params: SystemParams, drive: DriveProtocol) -> SteadyAmplitudes:
    """Closed-form steady state of the classical pump amplitude for both protocols.

    Constant drive:   alpha_i = 2*Omega / (i*kappa_i - 2*Delta_i)
    Parametric drive: envelope = 2*Omega / (4*omega_m - 2*Delta_i + i*kappa_i)

    Effective couplings are ``g_i`` times the returned amplitude.
    """
    den_o, den_e = _steady_denominators(params, drive.mode)
    for cav, den in (("o", den_o), ("e", den_e)):
        if den == 0:
            raise SingularAmplitudeError(
                f"steady amplitude of cavity {cav} is singular: undamped and resonant"
            )
    alpha_o = 2.0 * drive.omega_drive / den_o
    alpha_e = 2.0 * drive.omega_drive / den_e
    return SteadyAmplitudes(
        alpha_o=alpha_o,
        alpha_e=alpha_e,
        g_eff_o=params.g_o * alpha_o,
        g_eff_e=params.g_e * alpha_e,
        mode=drive.mode,
    )


@dataclass(frozen=True)
class AmplitudeTrajectory:
    """Sampled classical pump amplitudes alpha_o(t), alpha_e(t)."""

    times: np.ndarray
    alpha_o: np.ndarray
    alpha_e: np.ndarray


def _rk4_scalar(c: complex, drive_at, t_end: float, n_steps: int, stride: int):
    """Fixed-step classical RK4 for alpha' = c*alpha - i*Omega(t), alpha(0)=0.

    Returns (sample times, sampled values, final value)."""
    dt = t_end / n_steps
    half = 0.5 * dt
    sixth = dt / 6.0
    y = 0.0 + 0.0j
    ts = [0.0]
    ys = [y]
    for step in range(n_steps):
        t = step * dt
        d0 = -1j * drive_at(t)
        dm = -1j * drive_at(t + half)
        d1 = -1j * drive_at(t + dt)
        f1 = c * y + d0
        f2 = c * (y + half * f1) + dm
        f3 = c * (y + half * f2) + dm
        f4 = c * (y + dt * f3) + d1
        y = y + sixth * (f1 + 2.0 * (f2 + f3) + f4)
        if (step + 1) % stride == 0:
            ts.append((step + 1) * dt)
            ys.append(y)
    return ts, ys, y


def integrate_classical_amplitude(
    params: SystemParams,
    drive: DriveProtocol,
    t_end: float,
    dt: float,
    max_samples: int = 4096,
    drift_tol: float = 1e-6,
) -> AmplitudeTrajectory:
    """Integrate the classical pump-amplitude equation from alpha(0) = 0.

    The equation is alpha_i' = (-i*Delta_i - kappa_i/2) alpha_i - i*Omega_i(t)
    with Omega_i(t) constant or oscillating according to ``drive``.  Fixed-step
    classical 4th-order integration; the result is cross-checked against a
    half-step integration and a relative drift above ``drift_tol`` raises
    :class:`StepSizeError`.

    ``dt`` must satisfy dt < 0.1 / max(kappa_i, |Delta_i|, omega_m).
    """
    validate(params)
    scale = max(params.kappa_o, params.kappa_e, params.kappa_m,
                abs(params.delta_o), abs(params.delta_e), params.omega_m)
    if scale > 0 and dt >= 0.1 / scale:
        raise StepSizeError(f"dt={dt:g} too coarse; need dt < {0.1 / scale:g}")
    if t_end <= 0:
        raise StepSizeError("t_end must be > 0")

    omega = drive.omega_drive
    if drive.mode is DriveMode.CONSTANT:
        def drive_at(t):
            return omega
    else:
        two_wm = 2.0 * params.omega_m

        def drive_at(t):
            return omega * complex(math.cos(two_wm * t), -math.sin(two_wm * t))

    n_steps = max(1, math.ceil(t_end / dt))
    stride = max(1, n_steps // max_samples)
    out = {}
    for cav, delta, kappa in (("o", params.delta_o, params.kappa_o),
                              ("e", params.delta_e, params.kappa_e)):
        c = -1j * delta - 0.5 * kappa
        ts, ys, y_full = _rk4_scalar(c, drive_at, t_end, n_steps, stride)
        _, _, y_half = _rk4_scalar(c, drive_at, t_end, 2 * n_steps, 2 * stride)
        drift = abs(y_full - y_half) / max(abs(y_half), 1e-300)
        if abs(y_half) > 0 and drift > drift_tol:
            raise StepSizeError(
                f"step size too coarse for cavity {cav}: half-step drift {drift:.2e}"
            )
        out[cav] = (ts, ys)
    times = np.asarray(out["o"][0])
    return AmplitudeTrajectory(
        times=times,
        alpha_o=np.asarray(out["o"][1], dtype=complex),
        alpha_e=np.asarray(out["e"][1], dtype=complex),
    )


def steady_state_trajectory(params: SystemParams, drive: DriveProtocol,
                            times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form steady-state amplitudes evaluated on ``times`` (for comparison
    against the integrated trajectory)."""
    amps = steady_amplitudes(params, drive)
    if drive.mode is DriveMode.CONSTANT:
        ones = np.ones_like(times, dtype=complex)
        return amps.alpha_o * ones, amps.alpha_e * ones
    phase = np.exp(-2j * params.omega_m * np.asarray(times))
    return amps.alpha_o * phase, amps.alpha_e * phase
