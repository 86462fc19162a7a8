"""Transduction efficiency, added noise, noise lower bound and structural
diagnostics computed from a :class:`~xduct.solver.TransferSolution`.

Conventions baked in here:

* The signal enters the external electrical port and leaves the external
  optical port; the output of interest is always a single row of the transfer
  matrices.
* The mechanical mode is not rotated by any pump frame, so its input operators
  exist only at one frequency sign: annihilation components at positive
  frequency, creation components at negative frequency.  Columns multiplying a
  nonexistent operator are excluded from the added-noise sum ("the frequency
  sign rule").  Columns are enumerated from the solution's port layout plus its
  sideband matrices, never from a hard-coded list.
* The noise sum weights the conjugate-signal column by 3/2 (the signal is a
  one-photon coherent state, every other input is vacuum) and all other
  surviving columns by 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ParameterError
from .solver import TransferSolution


def mechanical_column_survives(nu: float, creation: bool) -> bool:
    """Whether a mechanical input component exists at frequency ``nu``."""
    return (nu < 0.0) if creation else (nu > 0.0)


@dataclass(frozen=True)
class NoiseTerm:
    """One contribution to eta^2 * S: source column, statistical weight and the
    squared magnitude of its transfer element."""

    source: str        # e.g. "e.ex'(w)", "m'(w-2wm)", "o.int(w+4wm)"
    weight: float      # 3/2 for the conjugate-signal column, 1/2 otherwise
    mag_sq: float

    @property
    def contribution(self) -> float:
        return self.weight * self.mag_sq


@dataclass(frozen=True)
class NoiseReport:
    """Efficiency and added-noise figures at one probe frequency."""

    eta: float
    s_added: float
    s_lower_bound: float
    r_squared: float
    commutator_residual: float
    term_breakdown: tuple[NoiseTerm, ...]
    eta_zero: bool = False  # True when eta = 0 and s_added is reported as inf


def efficiency(sol: TransferSolution, out_port: str = "o.ex",
               in_port: str = "e.ex") -> float:
    """Magnitude of the central transfer element from ``in_port`` (annihilation)
    to ``out_port`` (annihilation)."""
    return abs(sol.element(out_port, in_port))


def _sideband_items(sol: TransferSolution) -> Iterable[tuple[int, int, np.ndarray, float]]:
    """(sign, k, matrix, input frequency) for every sideband matrix, in a
    deterministic order."""
    for (sign, k) in sorted(sol.t_sideband):
        yield sign, k, sol.t_sideband[(sign, k)], sol.probe_omega + sign * 2 * k * sol.omega_m


def _frequency_tag(sign: int, k: int) -> str:
    if sign == 0:
        return "(w)"
    return f"(w{'+' if sign > 0 else '-'}{2 * k}wm)"


def added_noise(sol: TransferSolution, signal_in: str = "e.ex",
                signal_out: str = "o.ex") -> NoiseReport:
    """Added noise referred to the signal, from the transfer-matrix elements.

    eta^2 * S = 3/2 |conjugate-signal element|^2 + 1/2 * sum over every other
    central column and every surviving sideband column of |element|^2.  The
    signal column itself is excluded; mechanical columns obey the frequency
    sign rule.  At eta = 0 the noise is reported as +inf with ``eta_zero`` set.
    """
    row = sol.layout.col(signal_out)
    sig_col = sol.layout.col(signal_in)
    conj_sig_col = sol.layout.col(signal_in, creation=True)

    terms: list[NoiseTerm] = []
    for j, col in enumerate(sol.layout.columns):
        if j == sig_col:
            continue
        if col.cavity == "m" and not mechanical_column_survives(sol.probe_omega, col.creation):
            continue
        weight = 1.5 if j == conj_sig_col else 0.5
        mag_sq = abs(sol.t_central[row, j]) ** 2
        terms.append(NoiseTerm(col.name + _frequency_tag(0, 0), weight, mag_sq))
    for sign, k, matrix, nu in _sideband_items(sol):
        for j, col in enumerate(sol.layout.columns):
            if col.cavity == "m" and not mechanical_column_survives(nu, col.creation):
                continue
            mag_sq = abs(matrix[row, j]) ** 2
            terms.append(NoiseTerm(col.name + _frequency_tag(sign, k), 0.5, mag_sq))

    eta = efficiency(sol, signal_out, signal_in)
    eta_sq_s = sum(t.contribution for t in terms)
    r_sq = abs(sol.t_central[row, conj_sig_col]) ** 2 / eta**2 if eta > 0 else math.inf
    if eta > 0:
        s = eta_sq_s / eta**2
        bound = noise_lower_bound(eta, r_sq)
        eta_zero = False
    else:
        s, bound, r_sq = math.inf, math.inf, math.inf
        eta_zero = True
    return NoiseReport(
        eta=eta,
        s_added=s,
        s_lower_bound=bound,
        r_squared=r_sq,
        commutator_residual=commutator_residual(sol, out_port=signal_out),
        term_breakdown=tuple(terms),
        eta_zero=eta_zero,
    )


def noise_lower_bound(eta: float, r_squared: float) -> float:
    """Noise floor achievable only by squeezing every noisy input:
    3/2 R^2 + |(1 - eta^2)/(2 eta^2) + R^2/2|.  Positive whenever eta > 1."""
    if eta <= 0:
        raise ParameterError("noise lower bound requires eta > 0")
    return 1.5 * r_squared + abs((1.0 - eta**2) / (2.0 * eta**2) + r_squared / 2.0)


def commutator_residual(sol: TransferSolution, out_port: str = "o.ex") -> float:
    """Deviation of the output row from preserving the bosonic commutator.

    Sums |element|^2 over annihilation columns minus |element|^2 over creation
    columns, across the central matrix and every materialized sideband matrix,
    and returns |sum - 1|.  Every column participates: the identity is the
    scattering-row normalization of the solved linear system, and it holds at
    double precision for a correct solve.
    """
    row = sol.layout.col(out_port)
    total = 0.0
    matrices = [sol.t_central] + [sol.t_sideband[key] for key in sorted(sol.t_sideband)]
    for matrix in matrices:
        for j, col in enumerate(sol.layout.columns):
            mag_sq = abs(matrix[row, j]) ** 2
            total += -mag_sq if col.creation else mag_sq
    return abs(total - 1.0)


@dataclass(frozen=True)
class StructureReport:
    """Numerical check of the structural theorems across a family of solutions
    computed at the same parameters and probe frequency.

    * ``off_block_max``: largest central-matrix entry outside the
      EM-annihilation / EM-creation / mechanical diagonal blocks, scaled by the
      largest entry.  The block structure implies in particular that every
      conjugate transmission (annihilation output from creation input) vanishes.
    * ``tail_max``: largest entry of any sideband matrix with k > 2 (available
      from dense-oracle solutions), same scaling.
    * ``n_variation_max``: largest relative change of the central and k <= 2
      sideband matrices among truncation orders N >= 2.
    * ``n1_deviation``: relative difference between the N=1 and N=2 central
      matrices (generically nonzero; the invariance starts at N=2).
    """

    off_block_max: float
    tail_max: float | None
    n_variation_max: float | None
    n1_deviation: float | None
    theorems_applicable: bool


def _off_block_max(sol: TransferSolution) -> float:
    t = sol.t_central
    scale = max(np.abs(t).max(), 1.0)
    mask = np.ones_like(t, dtype=bool)
    n = sol.layout.n_ports
    for block in range(3):
        idx = [j for j in range(n) if sol.layout.block_of_column(j) == block]
        mask[np.ix_(idx, idx)] = False
    return float(np.abs(t[mask]).max() / scale) if mask.any() else 0.0


def _relative_diff(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.abs(a).max(), np.abs(b).max(), 1.0)
    return float(np.abs(a - b).max() / scale)


def structure_report(solutions: Sequence[TransferSolution]) -> StructureReport:
    """Evaluate the block-structure diagnostics over ``solutions``.

    Pass a mix of recursion and dense-oracle solutions at different truncation
    orders; constant-protocol solutions make the theorems inapplicable."""
    parametric = [s for s in solutions if s.protocol == "parametric"]
    if not parametric:
        return StructureReport(
            off_block_max=float("nan"), tail_max=None, n_variation_max=None,
            n1_deviation=None, theorems_applicable=False,
        )
    off_block = max(_off_block_max(s) for s in parametric)

    tails = [
        np.abs(mat).max() / max(np.abs(s.t_central).max(), 1.0)
        for s in parametric if s.method == "dense"
        for (sign, k), mat in s.t_sideband.items() if k > 2
    ]
    tail_max = float(max(tails)) if tails else None

    by_n: dict[int, TransferSolution] = {}
    for s in parametric:
        by_n.setdefault(s.n_sidebands, s)
    high_orders = sorted(n for n in by_n if n >= 2)
    n_variation = None
    if len(high_orders) >= 2:
        ref = by_n[high_orders[0]]
        diffs = []
        for n in high_orders[1:]:
            other = by_n[n]
            diffs.append(_relative_diff(ref.t_central, other.t_central))
            for key in ref.t_sideband:
                if key[1] <= 2 and key in other.t_sideband:
                    diffs.append(_relative_diff(ref.t_sideband[key], other.t_sideband[key]))
        n_variation = float(max(diffs))
    n1_dev = None
    if 1 in by_n and high_orders:
        n1_dev = _relative_diff(by_n[1].t_central, by_n[high_orders[0]].t_central)
    return StructureReport(
        off_block_max=off_block, tail_max=tail_max, n_variation_max=n_variation,
        n1_deviation=n1_dev, theorems_applicable=True,
    )
