"""Effective Peierls phases for the three band topologies.

Each geometry carries a winding number w and a band invariant nu, and three
phase contributions: the flux-driven Aharonov-Bohm phase 2*pi*w*(Phi/Phi0),
the Zak phase pi*nu, and a torsion phase w*pi.  The canonical per-topology
phase laws are

    loop:     theta = 2*pi*phi
    moebius:  theta = 4*pi*phi + 2*pi
    trefoil:  theta = 6*pi*phi + 4*pi

with phi = Phi/Phi0.  Summing the three component phases does NOT reproduce
these laws (the flux coefficients disagree for moebius/trefoil, and the loop
law drops the torsion offset); the laws are what the observable frequency
content follows, so they are canonical here.  The component-sum path is kept
for inspection, and every PhaseBreakdown records which path produced it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidParameterError

__all__ = [
    "Topology",
    "PhaseBreakdown",
    "ab_phase",
    "zak_phase",
    "torsion_phase",
    "effective_phase",
    "composed_phase",
    "dressed_hopping",
    "hybridization_energy",
]

_TWO_PI = 2.0 * math.pi


class Topology(enum.Enum):
    """Band topology descriptor; members carry their fixed (w, nu) table."""

    LOOP = "loop"
    MOEBIUS = "moebius"
    TREFOIL = "trefoil"

    @property
    def winding_w(self) -> int:
        return {"loop": 1, "moebius": 1, "trefoil": 2}[self.value]

    @property
    def invariant_nu(self) -> int:
        return {"loop": 0, "moebius": 1, "trefoil": 2}[self.value]

    @property
    def flux_coefficient(self) -> int:
        """c in theta = 2*pi*c*phi + offset; sets the oscillation frequency."""
        return {"loop": 1, "moebius": 2, "trefoil": 3}[self.value]

    @property
    def phase_offset(self) -> float:
        """Constant offset of the phase law: 0, 2*pi, 4*pi."""
        return {"loop": 0.0, "moebius": _TWO_PI, "trefoil": 2 * _TWO_PI}[self.value]

    @classmethod
    def from_name(cls, name: str) -> "Topology":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise InvalidParameterError(
                f"unknown topology {name!r}; expected one of "
                f"{[m.value for m in cls]}"
            ) from None


@dataclass(frozen=True)
class PhaseBreakdown:
    """Phase contributions (radians) and the total, tagged with its origin.

    ``source`` is ``"topology-law"`` when theta_total follows the canonical
    per-topology law, or ``"component-sum"`` when it is the plain sum
    theta_ab + gamma_zak + gamma_topo.
    """

    theta_ab: float
    gamma_zak: float
    gamma_topo: float
    theta_total: float
    source: str


def ab_phase(w: int, flux: float) -> float:
    """Aharonov-Bohm phase 2*pi*w*flux for flux in units of Phi0."""
    if not math.isfinite(flux):
        raise InvalidParameterError(f"flux must be finite, got {flux!r}")
    return _TWO_PI * w * flux


def zak_phase(nu: int) -> float:
    """Zak phase pi*nu of a band with invariant nu."""
    return math.pi * nu


def torsion_phase(w: int) -> float:
    """Torsion phase w*pi accumulated by twisting the band w times."""
    return math.pi * w


def _components(t: Topology, flux: float) -> tuple[float, float, float]:
    return ab_phase(t.winding_w, flux), zak_phase(t.invariant_nu), torsion_phase(t.winding_w)


def effective_phase(t: Topology, flux: float) -> PhaseBreakdown:
    """Canonical effective Peierls phase of topology ``t`` at the given flux.

    theta_total follows the per-topology law 2*pi*c*flux + offset; the
    component phases are reported alongside for inspection even though they
    do not sum to the law.
    """
    theta_ab, gamma_zak, gamma_topo = _components(t, flux)
    theta_total = _TWO_PI * t.flux_coefficient * flux + t.phase_offset
    return PhaseBreakdown(theta_ab, gamma_zak, gamma_topo, theta_total, "topology-law")


def composed_phase(t: Topology, flux: float) -> PhaseBreakdown:
    """Component-sum phase theta_ab + gamma_zak + gamma_topo (inspection path)."""
    theta_ab, gamma_zak, gamma_topo = _components(t, flux)
    return PhaseBreakdown(
        theta_ab, gamma_zak, gamma_topo, theta_ab + gamma_zak + gamma_topo, "component-sum"
    )


def dressed_hopping(t0: complex, theta: float) -> complex:
    """Attach the Peierls phase factor: t0 * exp(i*theta).

    The factor has unit modulus, so |dressed_hopping(t0, theta)| == |t0|.
    """
    if not math.isfinite(theta):
        raise InvalidParameterError(f"theta must be finite, got {theta!r}")
    return complex(t0) * complex(math.cos(theta), math.sin(theta))


def hybridization_energy(e_m0: float, theta: float) -> float:
    """Phase-dressed Majorana hybridization E_M1 = E_M0 * cos(theta).

    Only the real part of the dressed tunneling contributes to the splitting,
    hence the cosine; |E_M1| <= E_M0 for all theta.
    """
    if not (math.isfinite(e_m0) and math.isfinite(theta)):
        raise InvalidParameterError("e_m0 and theta must be finite")
    return e_m0 * math.cos(theta)
