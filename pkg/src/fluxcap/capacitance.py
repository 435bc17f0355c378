"""Parity-resolved quantum capacitance and flux sweeps.

The readout observable is the quantum capacitance of a dot level coupled to a
Majorana pair threaded by flux.  For parity sector Z = +/-1, with detuning
E_D, dressed hybridization E_M and effective hopping t_eff,

    C_Q(Z) = pref * (E_D + Z*E_M)^2 / E^3 * tanh(E / (2*k_B*T)),
    E      = sqrt((E_D + Z*E_M)^2 + 4*|t_eff|^2).

Thermal mixtures weight the two sectors with Boltzmann factors of the sector
energies, and the parity-shift response dC_Q combines the sector difference
with the probability susceptibility dP.

Energies are in ueV throughout; capacitance is reported in units of the
configurable e^2*alpha^2 prefactor (default 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidParameterError,
    InvalidParityError,
    InvalidSignalError,
    InvalidTemperatureError,
)
from .model import parity_energy
from .phases import Topology, dressed_hopping, effective_phase, hybridization_energy

__all__ = [
    "PARITY_MODES",
    "PhysicalParams",
    "FluxSignal",
    "parity_probabilities",
    "delta_p",
    "parity_capacitance",
    "total_capacitance",
    "delta_capacitance",
    "sweep_flux",
]

#: Supported sweep modes: fixed parity sectors, thermal mixture, parity-shift response.
PARITY_MODES = ("+1", "-1", "total", "delta")


@dataclass(frozen=True)
class PhysicalParams:
    """Scalar physics inputs of a sweep (energies in ueV).

    ``capacitance_prefactor`` is the full e^2*alpha^2 factor in the chosen
    unit system; ``lever_alpha`` is recorded for bookkeeping (use it to build
    the prefactor) but is not applied a second time.  ``delta_e_d`` defaults
    to 0.01*e_m0, keeping the parity-shift response in the linear regime.
    """

    e_d: float = 0.0
    e_m0: float = 40.0
    t_l: complex = 15.0 + 0.0j
    t_r: complex = 0.0j
    delta_e_d: float | None = None
    lever_alpha: float = 1.0
    k_b_t: float = 2.0
    capacitance_prefactor: float = 1.0

    def __post_init__(self) -> None:
        if self.delta_e_d is None:
            object.__setattr__(self, "delta_e_d", 0.01 * self.e_m0)
        for name in ("e_d", "e_m0", "delta_e_d", "lever_alpha", "k_b_t", "capacitance_prefactor"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        for name in ("t_l", "t_r"):
            c = complex(getattr(self, name))
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise InvalidParameterError(f"{name} must be finite")
        if self.k_b_t <= 0:
            raise InvalidTemperatureError(f"k_b_t must be > 0, got {self.k_b_t}")
        if not 0.0 < self.lever_alpha <= 1.0:
            raise InvalidParameterError(
                f"lever_alpha must lie in (0, 1], got {self.lever_alpha}"
            )


@dataclass
class FluxSignal:
    """Uniformly sampled capacitance values over normalized flux.

    ``flux_values`` must be strictly increasing with constant step; the
    effective sweep span for spectral purposes is ``n * step`` (the grid is
    half-open, so an integer span contains whole oscillation periods).
    """

    flux_values: np.ndarray
    cq_values: np.ndarray
    parity_mode: str
    noise_sigma: float = 0.0
    rng_seed: int | None = None

    def __post_init__(self) -> None:
        self.flux_values = np.asarray(self.flux_values, dtype=float)
        self.cq_values = np.asarray(self.cq_values, dtype=float)
        if self.flux_values.ndim != 1 or self.flux_values.shape != self.cq_values.shape:
            raise InvalidSignalError("flux_values and cq_values must be equal-length 1-D arrays")
        if len(self.flux_values) < 2:
            raise InvalidSignalError("a flux signal needs at least 2 samples")
        steps = np.diff(self.flux_values)
        if steps[0] <= 0 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise InvalidSignalError("flux_values must be strictly increasing with constant step")
        if self.parity_mode not in PARITY_MODES:
            raise InvalidSignalError(
                f"parity_mode must be one of {PARITY_MODES}, got {self.parity_mode!r}"
            )

    @property
    def n_samples(self) -> int:
        return len(self.flux_values)

    @property
    def flux_step(self) -> float:
        return float(self.flux_values[1] - self.flux_values[0])

    @property
    def flux_span(self) -> float:
        """Span covered by the half-open grid, n * step."""
        return self.n_samples * self.flux_step


def parity_probabilities(e_plus: float, e_minus: float, k_b_t: float) -> tuple[float, float]:
    """Boltzmann occupation (P+, P-) of the two parity sectors.

    Evaluated with the common energy offset removed, so arbitrarily large
    energies never overflow; P+ + P- = 1 by construction.
    """
    if k_b_t <= 0 or not math.isfinite(k_b_t):
        raise InvalidTemperatureError(f"k_b_t must be > 0, got {k_b_t}")
    ref = min(e_plus, e_minus)
    w_plus = math.exp(-(e_plus - ref) / k_b_t)
    w_minus = math.exp(-(e_minus - ref) / k_b_t)
    total = w_plus + w_minus
    return w_plus / total, w_minus / total


def _log_cosh(x: float) -> float:
    # |x| + log1p(e^{-2|x|}) - log 2, stable for any magnitude
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def delta_p(e_plus: float, e_minus: float, k_b_t: float) -> float:
    """Parity-probability susceptibility

        dP = cosh^2(E+/2kT) cosh^2(E-/2kT) / [cosh^2(E+/2kT) + cosh^2(E-/2kT)]^2.

    Algebraically dP = 1 / (r + 2 + 1/r) with r the cosh^2 ratio, which is
    what is evaluated here (via log-cosh), so the result is exactly 1/4 at
    E+ = E- and decays to 0 without overflow for large arguments.
    """
    if k_b_t <= 0 or not math.isfinite(k_b_t):
        raise InvalidTemperatureError(f"k_b_t must be > 0, got {k_b_t}")
    a = e_plus / (2.0 * k_b_t)
    b = e_minus / (2.0 * k_b_t)
    log_ratio = 2.0 * (_log_cosh(a) - _log_cosh(b))
    if log_ratio > 700.0 or log_ratio < -700.0:
        return 0.0
    r = math.exp(log_ratio)
    return 1.0 / (r + 2.0 + 1.0 / r)


def parity_capacitance(p: PhysicalParams, e_m: float, t_eff: complex, z: int) -> float:
    """Quantum capacitance of parity sector ``z`` (+1 or -1).

    Returns 0 at the degenerate point E_D + Z*E_M = 0, t_eff = 0 (the limit
    value of the expression).
    """
    if z not in (+1, -1):
        raise InvalidParityError(f"parity index z must be +1 or -1, got {z}")
    n = p.e_d + z * e_m
    e = math.hypot(n, 2.0 * abs(t_eff))
    if e == 0.0:
        return 0.0
    # n^2/e^3 * tanh(e/2kT) rewritten in bounded factors so subnormal energies
    # neither underflow e^3 nor overflow the quotient
    x = e / (2.0 * p.k_b_t)
    tanh_ratio = math.tanh(x) / x if x > 0.0 else 1.0
    return p.capacitance_prefactor * (n / e) ** 2 * tanh_ratio / (2.0 * p.k_b_t)


def total_capacitance(
    p: PhysicalParams,
    e_m: float,
    t_eff: complex,
    t_eff_minus: complex | None = None,
) -> float:
    """Thermal capacitance sum_{Z=+/-1} P(Z) * C_Q(Z).

    Both sectors share ``t_eff`` unless ``t_eff_minus`` supplies a distinct
    odd-sector hopping (as a flux sweep does when t_r != 0).
    """
    t_minus = t_eff if t_eff_minus is None else t_eff_minus
    e_plus = parity_energy(p.e_d, e_m, t_eff, +1).value
    e_minus = parity_energy(p.e_d, e_m, t_minus, -1).value
    prob_plus, prob_minus = parity_probabilities(e_plus, e_minus, p.k_b_t)
    return prob_plus * parity_capacitance(p, e_m, t_eff, +1) + prob_minus * parity_capacitance(
        p, e_m, t_minus, -1
    )


def delta_capacitance(
    p: PhysicalParams,
    e_m: float,
    t_eff: complex,
    t_eff_minus: complex | None = None,
) -> float:
    """Capacitance change under a parity shift,

        dC_Q = -[C_Q(+1) - C_Q(-1)] * dE_D * (4 / k_B T) * dP.

    Vanishes identically at E_D = 0 (sector symmetry) and for dE_D = 0.
    """
    t_minus = t_eff if t_eff_minus is None else t_eff_minus
    bracket = parity_capacitance(p, e_m, t_eff, +1) - parity_capacitance(p, e_m, t_minus, -1)
    e_plus = parity_energy(p.e_d, e_m, t_eff, +1).value
    e_minus = parity_energy(p.e_d, e_m, t_minus, -1).value
    dp = delta_p(e_plus, e_minus, p.k_b_t)
    return -bracket * p.delta_e_d * (4.0 / p.k_b_t) * dp


def _mode_label(z_mode: int | str) -> str:
    if z_mode in (+1, -1):
        return "+1" if z_mode == +1 else "-1"
    if z_mode in PARITY_MODES:
        return str(z_mode)
    raise InvalidParameterError(
        f"z_mode must be +1, -1, 'total' or 'delta', got {z_mode!r}"
    )


def sweep_flux(
    p: PhysicalParams,
    t: Topology,
    z_mode: int | str = +1,
    flux_span: float = 10.0,
    n_samples: int = 4096,
    noise_sigma: float = 0.0,
    rng_seed: int | None = None,
) -> FluxSignal:
    """Sample the selected capacitance quantity on a uniform flux grid.

    Each flux point composes the topology's effective phase into the dressed
    hybridization E_M1 = E_M0*cos(theta) and hoppings t_{L,R}*e^{i*theta};
    the per-sector effective hopping follows the block off-diagonals,
    t_eff(Z) = t_L1 + Z*t_R1.  The grid is half-open ([0, span)), so integer
    spans hold whole oscillation periods.  Gaussian noise of standard
    deviation ``noise_sigma`` is added i.i.d. when nonzero; the draw is
    deterministic for a fixed ``rng_seed``.
    """
    mode = _mode_label(z_mode)
    if not isinstance(n_samples, (int, np.integer)) or n_samples < 2:
        raise InvalidParameterError(f"n_samples must be an integer >= 2, got {n_samples!r}")
    if not (math.isfinite(flux_span) and flux_span > 0):
        raise InvalidParameterError(f"flux_span must be > 0, got {flux_span!r}")
    if not (math.isfinite(noise_sigma) and noise_sigma >= 0):
        raise InvalidParameterError(f"noise_sigma must be >= 0, got {noise_sigma!r}")

    flux = np.linspace(0.0, flux_span, int(n_samples), endpoint=False)
    cq = np.empty(int(n_samples), dtype=float)
    for i, phi in enumerate(flux):
        theta = effective_phase(t, float(phi)).theta_total
        e_m1 = hybridization_energy(p.e_m0, theta)
        t_l1 = dressed_hopping(p.t_l, theta)
        t_r1 = dressed_hopping(p.t_r, theta)
        t_plus = t_l1 + t_r1
        t_minus = t_l1 - t_r1
        if mode == "+1":
            cq[i] = parity_capacitance(p, e_m1, t_plus, +1)
        elif mode == "-1":
            cq[i] = parity_capacitance(p, e_m1, t_minus, -1)
        elif mode == "total":
            cq[i] = total_capacitance(p, e_m1, t_plus, t_minus)
        else:
            cq[i] = delta_capacitance(p, e_m1, t_plus, t_minus)

    if noise_sigma > 0.0:
        rng = np.random.default_rng(rng_seed)
        cq = cq + rng.normal(0.0, noise_sigma, size=cq.shape)

    return FluxSignal(
        flux_values=flux,
        cq_values=cq,
        parity_mode=mode,
        noise_sigma=float(noise_sigma),
        rng_seed=rng_seed,
    )
