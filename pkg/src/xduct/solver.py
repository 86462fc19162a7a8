"""Frequency-domain transfer-matrix solvers.

Three independent paths:

* :func:`solve_constant` - direct 6x6 solve for the constant protocol,
  T(w) = B^T (-iw*I - A)^{-1} B - I.
* :func:`solve_parametric` - recursive elimination of the +-2k*omega_m sideband
  ladder for the parametric protocol.  Each elimination step only ever inverts
  three 2x2 blocks because every chain matrix is block diagonal under the fixed
  state ordering.
* :func:`dense_oracle` - assembles the full truncated (2N+1)-block linear
  system and solves it with one dense LU factorization.  It shares no code with
  the recursion and exists to cross-validate it.

Every solve carries a condition-number estimate; estimates above 1e12 emit
:class:`IllConditionedWarning`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import SolverError
from .matrices import (
    BLOCK_SLICES,
    PortLayout,
    SidebandMatrixSet,
    build_drift_constant,
    build_drift_fourier,
    build_port_layout,
)
from .params import DriveMode, DriveProtocol, SystemParams, steady_amplitudes, validate

COND_WARN_THRESHOLD = 1e12


class IllConditionedWarning(UserWarning):
    """A matrix inverted during a solve has condition estimate above 1e12."""


def _checked_inv(m: np.ndarray, what: str) -> tuple[np.ndarray, float]:
    """Invert via LU with partial pivoting; return (inverse, condition estimate)."""
    try:
        inv = np.linalg.inv(m)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"singular matrix in {what}") from exc
    if not np.all(np.isfinite(inv)):
        raise SolverError(f"numerically singular matrix in {what}")
    cond = np.linalg.norm(m, 1) * np.linalg.norm(inv, 1)
    if cond > COND_WARN_THRESHOLD:
        warnings.warn(
            f"ill-conditioned matrix in {what}: condition estimate {cond:.2e}",
            IllConditionedWarning,
            stacklevel=3,
        )
    return inv, cond


def _blockwise_inv(m: np.ndarray, what: str) -> tuple[np.ndarray, float]:
    """Invert a block-diagonal matrix by inverting its three 2x2 blocks."""
    out = np.zeros_like(m)
    cond = 0.0
    for b, sl in enumerate(BLOCK_SLICES):
        try:
            blk_inv = np.linalg.inv(m[sl, sl])
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"singular block {b} in {what}") from exc
        if not np.all(np.isfinite(blk_inv)):
            raise SolverError(f"numerically singular block {b} in {what}")
        out[sl, sl] = blk_inv
        cond = max(cond, np.linalg.norm(m[sl, sl], 1) * np.linalg.norm(blk_inv, 1))
    if cond > COND_WARN_THRESHOLD:
        warnings.warn(
            f"ill-conditioned matrix in {what}: condition estimate {cond:.2e}",
            IllConditionedWarning,
            stacklevel=3,
        )
    return out, cond


@dataclass(frozen=True)
class RecursionChain:
    """The eliminated-sideband matrices X_(+-)[k] and their dressings Xi_(+-)[k]
    for k = 1..N, at one probe frequency.

    Boundary: X_(+-)[N] = [-i(w +- 2N*omega_m) I - a_d]^{-1}; descending from it,
    Xi_(+-)[k] = A_(+-) X_(+-)[k] A_(-+) and
    X_(+-)[k] = [-i(w +- 2k*omega_m) I - a_d - Xi_(+-)[k+1]]^{-1}.
    All of them are block diagonal with 2x2 blocks.
    """

    x_plus: dict[int, np.ndarray]
    x_minus: dict[int, np.ndarray]
    xi_plus: dict[int, np.ndarray]
    xi_minus: dict[int, np.ndarray]
    probe_omega: float
    condition: float


def build_recursion(mats: SidebandMatrixSet, omega: float, n: int) -> RecursionChain:
    """Chain the sideband elimination from the truncation boundary down to k=1."""
    if n < 1:
        raise SolverError("sideband truncation order must be >= 1")
    if mats.kappa_m <= 0.0:
        raise SolverError(
            "kappa_m = 0 is rejected by the sideband solver (exactly singular "
            "mechanical block at resonance); use a small positive value"
        )
    eye = np.eye(6)
    wm = mats.omega_m
    x: dict[int, dict[int, np.ndarray]] = {+1: {}, -1: {}}
    xi: dict[int, dict[int, np.ndarray]] = {+1: {}, -1: {}}
    cond = 0.0
    for sign, a_s, a_o in ((+1, mats.a_plus, mats.a_minus),
                           (-1, mats.a_minus, mats.a_plus)):
        tag = "+" if sign > 0 else "-"
        boundary = -1j * (omega + sign * 2 * n * wm) * eye - mats.a_d
        x[sign][n], c = _blockwise_inv(boundary, f"boundary X_{tag}[{n}]")
        cond = max(cond, c)
        for k in range(n - 1, 0, -1):
            xi[sign][k + 1] = a_s @ x[sign][k + 1] @ a_o
            m = -1j * (omega + sign * 2 * k * wm) * eye - mats.a_d - xi[sign][k + 1]
            x[sign][k], c = _blockwise_inv(m, f"X_{tag}[{k}]")
            cond = max(cond, c)
        xi[sign][1] = a_s @ x[sign][1] @ a_o
    return RecursionChain(
        x_plus=x[+1], x_minus=x[-1], xi_plus=xi[+1], xi_minus=xi[-1],
        probe_omega=omega, condition=cond,
    )


@dataclass(frozen=True)
class TransferSolution:
    """Transfer matrices at one probe frequency, in port space.

    ``t_central`` maps inputs at the probe frequency to outputs at the probe
    frequency; ``t_sideband[(sign, k)]`` maps inputs at probe + sign*2k*omega_m
    into the same outputs.  The parametric solver materializes sidebands only
    for k <= 2 (higher orders vanish identically); the dense oracle keeps all
    k <= N so the vanishing can be checked.
    """

    t_central: np.ndarray
    t_sideband: dict[tuple[int, int], np.ndarray]
    x_central: np.ndarray
    layout: PortLayout
    probe_omega: float
    omega_m: float
    protocol: str            # "constant" or "parametric"
    n_sidebands: int | None  # truncation order, None for constant
    method: str              # "direct", "recursion" or "dense"
    condition: float = field(default=0.0, compare=False)

    @property
    def port_map(self) -> dict[tuple[str, bool], int]:
        return self.layout.column_index

    def element(self, out_label: str, in_label: str, *, out_creation: bool = False,
                in_creation: bool = False, sign: int = 0, k: int = 0) -> complex:
        """One scattering element by port name; (sign, k) selects a sideband
        matrix, sign=0 the central one."""
        row = self.layout.col(out_label, out_creation)
        col = self.layout.col(in_label, in_creation)
        if sign == 0:
            return complex(self.t_central[row, col])
        return complex(self.t_sideband[(sign, k)][row, col])


def solve_constant(a_matrix: np.ndarray, layout: PortLayout, omega: float,
                   omega_m: float = float("nan")) -> TransferSolution:
    """Transfer matrix of the constant protocol at probe frequency ``omega``."""
    m = -1j * omega * np.eye(6) - a_matrix
    x, cond = _checked_inv(m, "constant-drive solve (undamped resonance at probe frequency?)")
    b = layout.b_matrix
    t = b.T @ x @ b - np.eye(layout.n_ports)
    return TransferSolution(
        t_central=t, t_sideband={}, x_central=x, layout=layout,
        probe_omega=omega, omega_m=omega_m, protocol="constant",
        n_sidebands=None, method="direct", condition=cond,
    )


def solve_parametric(mats: SidebandMatrixSet, layout: PortLayout, omega: float,
                     n: int) -> TransferSolution:
    """Transfer matrices of the parametric protocol at probe frequency ``omega``.

    Central matrix: T = B^T X B - I with
    X = [-iw*I - a_d - Xi_-[1] - Xi_+[1]]^{-1}; sideband matrices
    T_(+-)[k] = B^T X (A_(+-) X_(+-)[1]) ... (A_(+-) X_(+-)[k]) B for k = 1, 2.
    """
    chain = build_recursion(mats, omega, n)
    m = -1j * omega * np.eye(6) - mats.a_d - chain.xi_minus[1] - chain.xi_plus[1]
    x, cond = _blockwise_inv(m, "central solve (unstable/undamped mode at probe frequency?)")
    cond = max(cond, chain.condition)
    b = layout.b_matrix
    t = b.T @ x @ b - np.eye(layout.n_ports)
    t_sideband: dict[tuple[int, int], np.ndarray] = {}
    for sign, a_s, x_chain in ((+1, mats.a_plus, chain.x_plus),
                               (-1, mats.a_minus, chain.x_minus)):
        prod = np.eye(6, dtype=complex)
        for k in range(1, min(n, 2) + 1):
            prod = prod @ (a_s @ x_chain[k])
            t_sideband[(sign, k)] = b.T @ x @ prod @ b
    return TransferSolution(
        t_central=t, t_sideband=t_sideband, x_central=x, layout=layout,
        probe_omega=omega, omega_m=mats.omega_m, protocol="parametric",
        n_sidebands=n, method="recursion", condition=cond,
    )


def _extended_generator(mats: SidebandMatrixSet, n: int) -> np.ndarray:
    """Block-tridiagonal generator of the truncated sideband ladder: diagonal
    blocks a_d + 2ik*omega_m*I (k = -N..N), a_plus above, a_minus below."""
    size = 6 * (2 * n + 1)
    gen = np.zeros((size, size), dtype=complex)
    for j in range(2 * n + 1):
        k = j - n
        sl = slice(6 * j, 6 * j + 6)
        gen[sl, sl] = mats.a_d + 2j * k * mats.omega_m * np.eye(6)
        if j + 1 < 2 * n + 1:
            gen[sl, slice(6 * (j + 1), 6 * (j + 1) + 6)] = mats.a_plus
        if j > 0:
            gen[sl, slice(6 * (j - 1), 6 * (j - 1) + 6)] = mats.a_minus
    return gen


def dense_oracle(mats: SidebandMatrixSet, layout: PortLayout, omega: float,
                 n: int) -> TransferSolution:
    """Structure-agnostic reference solve of the truncated sideband system.

    Builds the (2N+1)*6-dimensional extended linear system with inputs at every
    sideband, factorizes it once, and reads the central-output block row off the
    inverse.  All sideband matrices k = 1..N are materialized (the recursion
    only keeps k <= 2), so tail orders can be inspected directly.
    """
    if n < 1:
        raise SolverError("sideband truncation order must be >= 1")
    nblk = 2 * n + 1
    size = 6 * nblk
    m = -1j * omega * np.eye(size) - _extended_generator(mats, n)
    b = layout.b_matrix
    central_rows = slice(6 * n, 6 * n + 6)
    # one factorization: the coupling columns of every sideband plus unit
    # columns for the central resolvent block
    rhs = np.zeros((size, nblk * layout.n_ports + 6))
    for j in range(nblk):
        rhs[6 * j:6 * j + 6, layout.n_ports * j:layout.n_ports * (j + 1)] = b
    rhs[central_rows, nblk * layout.n_ports:] = np.eye(6)
    try:
        sol = np.linalg.solve(m, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolverError("singular extended sideband system") from exc
    if not np.all(np.isfinite(sol)):
        raise SolverError("numerically singular extended sideband system")
    cond = np.linalg.cond(m, 1)
    if cond > COND_WARN_THRESHOLD:
        warnings.warn(
            f"ill-conditioned extended system: condition estimate {cond:.2e}",
            IllConditionedWarning,
            stacklevel=2,
        )

    def port_block(j: int) -> np.ndarray:
        return b.T @ sol[central_rows, layout.n_ports * j:layout.n_ports * (j + 1)]

    t = port_block(n) - np.eye(layout.n_ports)
    t_sideband = {}
    for k in range(1, n + 1):
        t_sideband[(+1, k)] = port_block(n + k)
        t_sideband[(-1, k)] = port_block(n - k)
    # central-central resolvent block doubles as x_central
    x_central = sol[central_rows, nblk * layout.n_ports:]
    return TransferSolution(
        t_central=t, t_sideband=t_sideband, x_central=x_central, layout=layout,
        probe_omega=omega, omega_m=mats.omega_m, protocol="parametric",
        n_sidebands=n, method="dense", condition=cond,
    )


def solve_point(params: SystemParams, drive: DriveProtocol, omega: float,
                method: str = "auto") -> TransferSolution:
    """Validate parameters, build matrices and solve at one probe frequency.

    ``method``: "auto" picks the direct solve for the constant protocol and the
    sideband recursion for the parametric one; "dense" forces the dense oracle
    (parametric only).
    """
    validate(params)
    layout = build_port_layout(params)
    amps = steady_amplitudes(params, drive)
    if drive.mode is DriveMode.CONSTANT:
        a = build_drift_constant(params, amps)
        return solve_constant(a, layout, omega, omega_m=params.omega_m)
    mats = build_drift_fourier(params, amps)
    if method == "dense":
        return dense_oracle(mats, layout, omega, drive.n_sidebands)
    return solve_parametric(mats, layout, omega, drive.n_sidebands)


def stability_margin(mats: SidebandMatrixSet | np.ndarray, n: int = 2) -> float:
    """Advisory stability heuristic: largest real part among the eigenvalues of
    the (extended) drift generator.  Negative means every mode is damped.

    This is a heuristic only; no sharper criterion is enforced anywhere in the
    solvers.  For a constant-protocol drift matrix pass the 6x6 matrix itself.
    """
    if isinstance(mats, np.ndarray):
        gen = mats
    else:
        gen = _extended_generator(mats, n)
    return float(np.linalg.eigvals(gen).real.max())
