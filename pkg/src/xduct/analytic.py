"""Closed-form transfer elements of the ideal symmetric transducer.

"Ideal symmetric" means both EM cavities are lossless and identical
(kappa_ex = kappa, same g), pumps detuned by exactly the mechanical frequency,
and the mechanical linewidth taken to zero.  Everything here is a function of
the single ratio r = kappa / (4 omega_m); the numeric solvers reproduce these
values in the limit kappa_m -> 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ParameterError


class IdealProtocol(enum.Enum):
    CONSTANT = "constant"
    PARAMETRIC_N1 = "pd_n1"
    PARAMETRIC_N2 = "pd_n2"


@dataclass(frozen=True)
class IdealCase:
    """Parameters of the ideal symmetric transducer: shared EM linewidth,
    mechanical frequency (both rad/s) and the drive protocol."""

    kappa: float
    omega_m: float
    protocol: IdealProtocol

    def __post_init__(self):
        if not self.kappa > 0:
            raise ParameterError("kappa must be > 0")
        if not self.omega_m > 0:
            raise ParameterError("omega_m must be > 0")

    @property
    def r(self) -> float:
        """The sideband-resolution ratio kappa / (4 omega_m)."""
        return self.kappa / (4.0 * self.omega_m)


def eta_sideband_unresolved(kappa: float, omega_m: float) -> float:
    """sqrt(1 + kappa^2 / (16 omega_m^2)): the efficiency magnitude shared by the
    constant protocol and the parametric protocol at truncation order >= 2."""
    return math.sqrt(1.0 + (kappa / (4.0 * omega_m)) ** 2)


@dataclass(frozen=True)
class ConstIdealElements:
    """Transfer elements of the ideal symmetric transducer under constant drive,
    probed at the mechanical frequency."""

    t_oe: complex       # signal transmission
    t_oo: complex       # reflection
    t_oe_conj: complex  # conjugate (creation-input) transmission
    t_oo_conj: complex  # conjugate reflection
    eta: float


def const_symmetric(case: IdealCase, g_eff: complex = 1.0) -> ConstIdealElements:
    """Constant-drive closed forms: t_oe = -1 - i*r, t_oo = -i*r and the two
    conjugate elements -i*r*G/G* whose magnitude is r and whose phase depends
    only on arg(G).  ``g_eff`` fixes that phase (magnitude irrelevant)."""
    if case.protocol is not IdealProtocol.CONSTANT:
        raise ParameterError("constant-drive closed forms require the constant protocol")
    if g_eff == 0:
        raise ParameterError("g_eff must be nonzero (its phase sets the conjugate elements)")
    r = case.r
    g = complex(g_eff)
    conj_elem = -1j * r * g / g.conjugate()
    return ConstIdealElements(
        t_oe=complex(-1.0, -r),
        t_oo=-1j * r,
        t_oe_conj=conj_elem,
        t_oo_conj=conj_elem,
        eta=eta_sideband_unresolved(case.kappa, case.omega_m),
    )


@dataclass(frozen=True)
class PdIdealElements:
    """Magnitudes of the parametric-drive transfer elements of the ideal
    symmetric transducer, probed at the mechanical frequency.

    ``sideband_abs`` is the common magnitude of the two surviving sideband
    couplings into the optical output (the creation-component columns of the
    second lower sideband matrix); ``conjugate_abs`` is the magnitude of every
    central conjugate transmission, which vanishes identically."""

    eta: float
    reflection_abs: float
    sideband_abs: float
    conjugate_abs: float


def pd_ideal(case: IdealCase) -> PdIdealElements:
    """Parametric-drive closed forms.

    Truncation order 1: perfect transduction, eta = 1 and every unwanted
    element vanishes.  Truncation order 2 (exact for any larger order):
    eta = sqrt(1 + r^2 * ...) shared with the constant protocol, while the
    reflection and the two sideband couplings all have magnitude r."""
    if case.protocol is IdealProtocol.CONSTANT:
        raise ParameterError("parametric closed forms require a parametric protocol")
    if case.protocol is IdealProtocol.PARAMETRIC_N1:
        return PdIdealElements(eta=1.0, reflection_abs=0.0, sideband_abs=0.0,
                               conjugate_abs=0.0)
    r = case.r
    return PdIdealElements(
        eta=eta_sideband_unresolved(case.kappa, case.omega_m),
        reflection_abs=r,
        sideband_abs=r,
        conjugate_abs=0.0,
    )
