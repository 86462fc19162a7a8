"""Drift matrices, Fourier blocks, input-coupling matrix and drive vector.

State ordering is fixed to [a_o, a_e, a_o+, a_e+, a_m, a_m+] ('+' marking the
creation-operator rows), which splits the 6x6 matrices into three 2x2 diagonal
blocks: EM annihilation, EM creation, mechanical.  Everything downstream (the
sideband recursion, the block-structure theorems, the metrics) inherits this
ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .params import DriveMode, SteadyAmplitudes, SystemParams

#: slices of the three 2x2 state blocks under the fixed ordering
BLOCK_SLICES = (slice(0, 2), slice(2, 4), slice(4, 6))


@dataclass(frozen=True)
class PortColumn:
    """One column of the input/output vector: a named port, annihilation or
    creation component."""

    label: str      # "o.ex", "o.int", "e.ex", "e.int", "m"
    cavity: str     # "o", "e" or "m"
    creation: bool
    coupling: float  # rad/s, the kappa of this port

    @property
    def name(self) -> str:
        """Display name; creation components carry a trailing apostrophe."""
        return self.label + ("'" if self.creation else "")


@dataclass(frozen=True)
class PortLayout:
    """Input/output port arrangement and the block-diagonal coupling matrix B.

    Columns are ordered [EM annihilation (l), EM creation (l), mechanical (2)]
    with l = k_o + k_e; per EM cavity the external port comes first, then the
    internal-loss port when its coupling is nonzero (zero-coupling ports are
    elided).  B maps that port order onto the 6 state rows.
    """

    columns: tuple[PortColumn, ...]
    b_matrix: np.ndarray  # (6, n_ports), real

    @property
    def n_ports(self) -> int:
        return len(self.columns)

    @property
    def column_index(self) -> dict[tuple[str, bool], int]:
        """Map (port label, creation?) -> column index."""
        return {(c.label, c.creation): i for i, c in enumerate(self.columns)}

    def col(self, label: str, creation: bool = False) -> int:
        try:
            return self.column_index[(label, creation)]
        except KeyError:
            raise ParameterError(f"unknown port: {label}{'~creation' if creation else ''}") from None

    @property
    def em_block_size(self) -> int:
        """l = k_o + k_e, the number of EM input ports (per conjugation sector)."""
        return sum(1 for c in self.columns if c.cavity != "m" and not c.creation)

    def block_of_column(self, j: int) -> int:
        """Index (0, 1, 2) of the EM-annihilation / EM-creation / mechanical
        column group that column ``j`` belongs to."""
        l = self.em_block_size
        if j < l:
            return 0
        if j < 2 * l:
            return 1
        return 2


def build_port_layout(params: SystemParams) -> PortLayout:
    """Assemble the port list and B for the given (validated) parameters.

    Per EM cavity the ports are (external, internal) with couplings
    (kappa_ex, kappa - kappa_ex); an exactly zero internal coupling drops the
    port.  The mechanical cavity always has the single port "m" with coupling
    kappa_m.  Per cavity the squared B entries sum to the total decay rate.
    """
    em_ports: list[PortColumn] = []
    for cav, kappa, kappa_ex in (("o", params.kappa_o, params.kappa_o_ex),
                                 ("e", params.kappa_e, params.kappa_e_ex)):
        em_ports.append(PortColumn(f"{cav}.ex", cav, False, kappa_ex))
        internal = kappa - kappa_ex
        if internal > 0.0:
            em_ports.append(PortColumn(f"{cav}.int", cav, False, internal))

    columns = (
        em_ports
        + [PortColumn(c.label, c.cavity, True, c.coupling) for c in em_ports]
        + [PortColumn("m", "m", False, params.kappa_m),
           PortColumn("m", "m", True, params.kappa_m)]
    )

    l = len(em_ports)
    row_of_cavity = {"o": 0, "e": 1}
    d_block = np.zeros((2, l))
    for j, port in enumerate(em_ports):
        d_block[row_of_cavity[port.cavity], j] = np.sqrt(port.coupling)

    b = np.zeros((6, 2 * l + 2))
    b[0:2, 0:l] = d_block
    b[2:4, l:2 * l] = d_block
    b[4:6, 2 * l:] = np.sqrt(params.kappa_m) * np.eye(2)
    return PortLayout(columns=tuple(columns), b_matrix=b)


def _diagonal_drift(params: SystemParams) -> np.ndarray:
    return np.array(
        [
            -1j * params.delta_o - 0.5 * params.kappa_o,
            -1j * params.delta_e - 0.5 * params.kappa_e,
            +1j * params.delta_o - 0.5 * params.kappa_o,
            +1j * params.delta_e - 0.5 * params.kappa_e,
            -1j * params.omega_m - 0.5 * params.kappa_m,
            +1j * params.omega_m - 0.5 * params.kappa_m,
        ],
        dtype=complex,
    )


def build_drift_constant(params: SystemParams, amps: SteadyAmplitudes) -> np.ndarray:
    """Full 6x6 drift matrix for the constant protocol.

    The EM rows couple to the mechanical position through the effective
    couplings, the mechanical rows couple back with conjugated signs, and the
    creation rows mirror the annihilation rows under complex conjugation.
    """
    if amps.mode is not DriveMode.CONSTANT:
        raise ParameterError("constant drift matrix requires constant-protocol amplitudes")
    g_o, g_e = amps.g_eff_o, amps.g_eff_e
    a = np.diag(_diagonal_drift(params))
    a[0, 4] = a[0, 5] = -1j * g_o
    a[1, 4] = a[1, 5] = -1j * g_e
    a[2, 4] = a[2, 5] = +1j * np.conj(g_o)
    a[3, 4] = a[3, 5] = +1j * np.conj(g_e)
    a[4, 0], a[4, 1] = -1j * np.conj(g_o), -1j * np.conj(g_e)
    a[4, 2], a[4, 3] = -1j * g_o, -1j * g_e
    a[5, 0], a[5, 1] = +1j * np.conj(g_o), +1j * np.conj(g_e)
    a[5, 2], a[5, 3] = +1j * g_o, +1j * g_e
    return a


@dataclass(frozen=True)
class SidebandMatrixSet:
    """Fourier blocks of the periodically modulated drift matrix.

    A(t) = a_d + a_minus * exp(-2i*omega_m*t) + a_plus * exp(+2i*omega_m*t),
    with a_d the (diagonal) time-independent part.  The four Q blocks are the
    only nonzero 2x2 sub-blocks of a_minus / a_plus; q_cm = conj(q_am) and
    q_ma = -conj(q_mc) hold exactly by construction.
    """

    a_d: np.ndarray
    a_minus: np.ndarray
    a_plus: np.ndarray
    q_am: np.ndarray
    q_mc: np.ndarray
    q_cm: np.ndarray
    q_ma: np.ndarray
    omega_m: float
    kappa_m: float


def build_drift_fourier(params: SystemParams, amps: SteadyAmplitudes) -> SidebandMatrixSet:
    """Fourier decomposition of the drift matrix for the parametric protocol.

    The effective-coupling envelopes populate the Q blocks; entries carrying the
    unconjugated envelope rotate with the drive (a_minus), conjugated entries
    rotate against it (a_plus).
    """
    if amps.mode is not DriveMode.PARAMETRIC:
        raise ParameterError("Fourier drift blocks require parametric-protocol amplitudes")
    g_o, g_e = amps.g_eff_o, amps.g_eff_e
    q_am = np.array([[-1j * g_o, -1j * g_o], [-1j * g_e, -1j * g_e]])
    q_mc = np.array([[-1j * g_o, -1j * g_e], [+1j * g_o, +1j * g_e]])
    q_cm = q_am.conj()
    q_ma = -q_mc.conj()
    a_minus = np.zeros((6, 6), dtype=complex)
    a_minus[0:2, 4:6] = q_am
    a_minus[4:6, 2:4] = q_mc
    a_plus = np.zeros((6, 6), dtype=complex)
    a_plus[2:4, 4:6] = q_cm
    a_plus[4:6, 0:2] = q_ma
    return SidebandMatrixSet(
        a_d=np.diag(_diagonal_drift(params)),
        a_minus=a_minus,
        a_plus=a_plus,
        q_am=q_am,
        q_mc=q_mc,
        q_cm=q_cm,
        q_ma=q_ma,
        omega_m=params.omega_m,
        kappa_m=params.kappa_m,
    )


def build_drive_vector(params: SystemParams, amps: SteadyAmplitudes) -> np.ndarray:
    """Inhomogeneous drive vector of the equations of motion.

    Only the mechanical rows are driven, by the radiation-pressure offset
    g_i*|alpha_i|^2 of each EM cavity; the creation row is the negation of the
    annihilation row.  The frequency-domain solvers deliberately ignore this
    vector (its steady state only feeds the zero-frequency component); it is
    exposed for completeness and testing.
    """
    push = -1j * (params.g_o * abs(amps.alpha_o) ** 2 + params.g_e * abs(amps.alpha_e) ** 2)
    return np.array([0, 0, 0, 0, push, -push], dtype=complex)
