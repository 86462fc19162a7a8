"""Run-configuration files.

TOML with three sections; every frequency or rate is entered as value/2pi in Hz
(the convention used when quoting such parameters), converted to rad/s on load.

[params]   omega_m, delta_o, delta_e, kappa_o, kappa_e, kappa_m,
           kappa_o_ex, kappa_e_ex, g_o, g_e, optionally kappa_m_ex
[drive]    mode = "constant" | "parametric", omega, optionally n_sidebands
[sweep]    optional overrides: from, to, points, scale = "linear" | "log"
[probe]    optional: omega (defaults to omega_m)

Unknown keys are rejected by name.  A single drive amplitude is applied
symmetrically to both EM cavities; per-cavity amplitudes are not accepted.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, ParameterError
from .params import DriveMode, DriveProtocol, SystemParams, hz_to_rad, validate

_PARAM_KEYS = {
    "omega_m", "delta_o", "delta_e", "kappa_o", "kappa_e", "kappa_m",
    "kappa_o_ex", "kappa_e_ex", "g_o", "g_e",
}
_PARAM_OPTIONAL = {"kappa_m_ex"}
_DRIVE_KEYS = {"mode", "omega"}
_DRIVE_OPTIONAL = {"n_sidebands"}
_SWEEP_KEYS = {"from", "to", "points", "scale"}
_PROBE_KEYS = {"omega"}
_ASYMMETRIC_KEYS = {"omega_o", "omega_e"}


@dataclass(frozen=True)
class SweepSettings:
    """Grid overrides from the [sweep] section (Hz where dimensional)."""

    from_hz: float | None = None
    to_hz: float | None = None
    points: int | None = None
    scale: str | None = None


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    drive: DriveProtocol
    probe_omega: float  # rad/s
    sweep: SweepSettings


def _require_number(section: str, key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {key}: expected a number, got {value!r}")
    return float(value)


def _check_keys(section: str, table: dict, required: set[str], optional: set[str]):
    for key in table:
        if key in _ASYMMETRIC_KEYS:
            raise ConfigError(
                f"[{section}] {key}: per-cavity drive amplitudes are not supported; "
                "the drive is symmetric, set a single 'omega'"
            )
        if key not in required | optional:
            raise ConfigError(f"[{section}] unknown key: {key}")
    for key in required:
        if key not in table:
            raise ConfigError(f"[{section}] missing key: {key}")


def load_config(path: str | Path) -> RunConfig:
    """Parse and validate a configuration file; all checks report by key."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None

    for section in data:
        if section not in ("params", "drive", "sweep", "probe"):
            raise ConfigError(f"unknown section: [{section}]")
    if "params" not in data:
        raise ConfigError("missing section: [params]")
    if "drive" not in data:
        raise ConfigError("missing section: [drive]")

    ptab = data["params"]
    _check_keys("params", ptab, _PARAM_KEYS, _PARAM_OPTIONAL)
    kwargs = {k: _require_number("params", k, v) for k, v in ptab.items()}
    try:
        params = validate(SystemParams.from_hz(**kwargs))
    except ParameterError as exc:
        raise ConfigError(f"[params] {exc}") from None

    dtab = data["drive"]
    _check_keys("drive", dtab, _DRIVE_KEYS, _DRIVE_OPTIONAL)
    mode_raw = dtab["mode"]
    try:
        mode = DriveMode(mode_raw)
    except ValueError:
        raise ConfigError(
            f"[drive] mode: expected 'constant' or 'parametric', got {mode_raw!r}"
        ) from None
    omega_drive = hz_to_rad(_require_number("drive", "omega", dtab["omega"]))
    n_sidebands = dtab.get("n_sidebands", 2 if mode is DriveMode.PARAMETRIC else 1)
    if isinstance(n_sidebands, bool) or not isinstance(n_sidebands, int):
        raise ConfigError("[drive] n_sidebands: expected an integer")
    if mode is DriveMode.CONSTANT and "n_sidebands" in dtab:
        raise ConfigError("[drive] n_sidebands: only meaningful for the parametric mode")
    try:
        drive = DriveProtocol(mode, omega_drive, n_sidebands)
    except ParameterError as exc:
        raise ConfigError(f"[drive] {exc}") from None

    sweep = SweepSettings()
    if "sweep" in data:
        stab = data["sweep"]
        _check_keys("sweep", stab, set(), _SWEEP_KEYS)
        scale = stab.get("scale")
        if scale is not None and scale not in ("linear", "log"):
            raise ConfigError(f"[sweep] scale: expected 'linear' or 'log', got {scale!r}")
        points = stab.get("points")
        if points is not None and (isinstance(points, bool) or not isinstance(points, int)
                                   or points < 2):
            raise ConfigError("[sweep] points: expected an integer >= 2")
        sweep = SweepSettings(
            from_hz=_require_number("sweep", "from", stab["from"]) if "from" in stab else None,
            to_hz=_require_number("sweep", "to", stab["to"]) if "to" in stab else None,
            points=points,
            scale=scale,
        )

    probe_omega = params.omega_m
    if "probe" in data:
        _check_keys("probe", data["probe"], set(), _PROBE_KEYS)
        if "omega" in data["probe"]:
            probe_omega = hz_to_rad(_require_number("probe", "omega", data["probe"]["omega"]))

    if not math.isfinite(probe_omega):
        raise ConfigError("[probe] omega: must be finite")
    return RunConfig(params=params, drive=drive, probe_omega=probe_omega, sweep=sweep)
