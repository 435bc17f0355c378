"""Lorentzian peak fits, signal-to-noise ratio, and coherence time.

The peak model is

    L(f) = A * gamma^2 / ((f - f0)^2 + gamma^2) + B,

where gamma is the half-width at half maximum of the model.  Fit results
report the linewidth in the FWHM convention (``gamma`` = 2 * model
half-width), because the coherence-time relation tau = 1/(pi*gamma) is
stated for the full width; the raw model half-width is kept alongside as
``gamma_half_width``.

The fitter is a damped (Levenberg-Marquardt style) least-squares loop with
an analytic Jacobian, positivity of A and gamma enforced by optimizing their
logarithms, a monotone non-increasing objective across accepted steps, an
iteration cap, and an amplitude floor of 1e-10 for fits that collapse to
zero peak height.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FitDegenerateError, InvalidLinewidthError, InvalidSignalError
from .spectral import PowerSpectrum

__all__ = [
    "AMPLITUDE_FLOOR",
    "LorentzianFit",
    "lorentzian",
    "lorentzian_jacobian",
    "fit_lorentzian",
    "snr",
    "coherence_time",
]

#: Reported amplitude floor for fits whose peak height collapses to zero.
AMPLITUDE_FLOOR = 1e-10


@dataclass
class LorentzianFit:
    """Fitted peak parameters and derived readout metrics.

    ``gamma`` is the FWHM-convention linewidth entering tau = 1/(pi*gamma);
    ``gamma_half_width`` is the same fit expressed as the model's half-width.
    ``snr`` is amplitude over RMS residual; it is ``inf`` for a residual-free
    (noiseless) fit.
    """

    amplitude_a: float
    gamma: float
    f0: float
    baseline_b: float
    residual_sigma: float
    snr: float
    tau: float
    converged: bool
    iterations: int
    gamma_half_width: float


def lorentzian(f, a: float, gamma: float, f0: float, b: float):
    """Peak model A*gamma^2/((f-f0)^2 + gamma^2) + B; gamma is the half-width."""
    f = np.asarray(f, dtype=float)
    d2 = (f - f0) ** 2
    out = a * gamma**2 / (d2 + gamma**2) + b
    return out if out.ndim else float(out)


def lorentzian_jacobian(f, a: float, gamma: float, f0: float, b: float) -> np.ndarray:
    """Analytic model gradients d L / d(a, gamma, f0, b), shape (n, 4)."""
    f = np.atleast_1d(np.asarray(f, dtype=float))
    d = f - f0
    denom = d**2 + gamma**2
    j = np.empty((f.size, 4))
    j[:, 0] = gamma**2 / denom
    j[:, 1] = 2.0 * a * gamma * d**2 / denom**2
    j[:, 2] = 2.0 * a * gamma**2 * d / denom**2
    j[:, 3] = 1.0
    return j


def _initial_guess(freqs: np.ndarray, power: np.ndarray) -> tuple[float, float, float, float]:
    # peak bin (DC excluded), median baseline, one-bin half-width
    k = 1 + int(np.argmax(power[1:]))
    b0 = float(np.median(power))
    a0 = float(power[k]) - b0
    scale = float(power.max() - power.min())
    if a0 <= 0.0:
        a0 = max(1e-3 * scale, 1e-300)
    g0 = float(freqs[1] - freqs[0])
    return a0, g0, float(freqs[k]), b0


def fit_lorentzian(
    spec: PowerSpectrum,
    max_iterations: int = 200,
    rel_tol: float = 1e-10,
) -> LorentzianFit:
    """Least-squares Lorentzian fit of a one-sided power spectrum.

    Initial values come from the spectrum itself (peak bin, median baseline,
    one-bin width).  The damping parameter grows until a step lowers the
    objective, so the objective never increases across accepted steps; if the
    iteration cap is reached the best-effort parameters are returned with
    ``converged=False``.

    Raises FitDegenerateError when every bin holds the same value (no peak to
    fit) and InvalidSignalError for spectra shorter than 8 bins.
    """
    freqs = spec.frequencies
    power = spec.power
    if len(power) < 8:
        raise InvalidSignalError(f"need at least 8 spectrum bins to fit, got {len(power)}")
    if float(power.max()) == float(power.min()):
        raise FitDegenerateError(
            "degenerate spectrum: all power values are identical, no peak to fit"
        )

    # Normalize amplitudes so the solver sees an O(1) problem regardless of
    # input scale; A and B are mapped back afterwards.  This keeps SNR exactly
    # invariant under rescaling of the spectrum.
    scale = float(np.abs(power).max())
    data = power / scale
    a0, g0, f00, b0 = _initial_guess(freqs, data)

    # A wider-than-axis peak is indistinguishable from a baseline shift, and a
    # much-narrower-than-bin peak can slip between grid points with A -> inf,
    # A*gamma^2 finite; neither is identifiable from the data, so gamma is
    # confined to [bin/4, axis width] (and A to a generous ceiling).
    log_a_max = math.log(1e6)
    log_g_max = math.log(float(freqs[-1] - freqs[0]))
    log_g_min = math.log(float(freqs[1] - freqs[0]) / 4.0)

    # Optimize u = (log a, log gamma, f0, b)
    u = np.array([math.log(a0), math.log(g0), f00, b0])

    def unpack(u):
        return math.exp(u[0]), math.exp(u[1]), u[2], u[3]

    def residuals(u):
        a, g, f0, b = unpack(u)
        return lorentzian(freqs, a, g, f0, b) - data

    r = residuals(u)
    cost = float(r @ r)
    lam = 1e-3
    converged = False
    iterations = 0

    for iterations in range(1, max_iterations + 1):
        a, g, f0, b = unpack(u)
        j = lorentzian_jacobian(freqs, a, g, f0, b)
        j[:, 0] *= a  # chain rule: d/d log a
        j[:, 1] *= g  # chain rule: d/d log gamma
        jtj = j.T @ j
        jtr = j.T @ r
        if float(np.abs(jtr).max()) < 1e-14 * max(cost, 1.0):
            converged = True
            break

        accepted = False
        for _ in range(40):
            damped = jtj + lam * np.diag(np.maximum(np.diag(jtj), 1e-12))
            try:
                step = np.linalg.solve(damped, -jtr)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            u_try = u + step
            if not np.all(np.isfinite(u_try)):
                lam *= 10.0
                continue
            u_try[0] = min(max(u_try[0], -600.0), log_a_max)
            u_try[1] = min(max(u_try[1], log_g_min), log_g_max)
            r_try = residuals(u_try)
            cost_try = float(r_try @ r_try)
            if math.isfinite(cost_try) and cost_try <= cost:
                improvement = cost - cost_try
                u, r, cost = u_try, r_try, cost_try
                lam = max(lam / 3.0, 1e-14)
                accepted = True
                if improvement <= rel_tol * max(cost, 1e-300):
                    converged = True
                break
            lam *= 10.0
        if converged or cost == 0.0:
            converged = True
            break
        if not accepted:
            break  # damping exhausted without an acceptable step

    a, g, f0, b = unpack(u)
    model = lorentzian(freqs, a, g, f0, b)
    residual = power - model * scale
    sigma = float(np.std(residual))
    # The floor marks fits whose peak height collapsed to zero relative to the
    # spectrum's own scale; a small spectrum with a genuine peak keeps its
    # true amplitude (so rescaling the input rescales A exactly).
    collapsed = a < 1e-12
    amplitude = AMPLITUDE_FLOOR if collapsed else a * scale
    gamma_fwhm = 2.0 * g
    return LorentzianFit(
        amplitude_a=amplitude,
        gamma=gamma_fwhm,
        f0=float(f0),
        baseline_b=b * scale,
        residual_sigma=sigma,
        snr=amplitude / sigma if sigma > 0.0 else math.inf,
        tau=1.0 / (math.pi * gamma_fwhm),
        converged=converged,
        iterations=iterations,
        gamma_half_width=float(g),
    )


def snr(fit: LorentzianFit) -> float:
    """Amplitude-to-noise ratio A / sigma; ``inf`` marks a noiseless fit."""
    if fit.residual_sigma == 0.0:
        return math.inf
    return fit.amplitude_a / fit.residual_sigma


def coherence_time(gamma: float) -> float:
    """Coherence time tau = 1/(pi*gamma) from a FWHM linewidth in Hz."""
    if not math.isfinite(gamma) or gamma <= 0.0:
        raise InvalidLinewidthError(f"gamma must be > 0, got {gamma!r}")
    return 1.0 / (math.pi * gamma)
