"""Mean removal, Hann windowing, DFT, and one-sided power spectra.

Sampling convention: one flux quantum plays the role of one second, so a
sweep spanning S quanta with N samples yields frequency bins f_k = k / S
("Hz" = cycles per flux quantum) for k = 0 .. N/2, and the one-sided power
spectral density

    P[k] = (2 / N^2) * | sum_n w[n] C'_Q[n] exp(-i 2 pi k n / N) |^2

with w the Hann window and C'_Q the detrended signal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capacitance import FluxSignal
from .errors import InvalidSignalError

__all__ = [
    "PowerSpectrum",
    "detrend",
    "hann_window",
    "power_spectrum",
    "peak_location",
]


@dataclass
class PowerSpectrum:
    """One-sided PSD with N/2 + 1 bins; ``window`` tags the taper used."""

    frequencies: np.ndarray
    power: np.ndarray
    n_input: int
    window: str = "hann"

    def __post_init__(self) -> None:
        self.frequencies = np.asarray(self.frequencies, dtype=float)
        self.power = np.asarray(self.power, dtype=float)
        if self.frequencies.shape != self.power.shape or self.frequencies.ndim != 1:
            raise InvalidSignalError("frequencies and power must be equal-length 1-D arrays")
        if len(self.power) != self.n_input // 2 + 1:
            raise InvalidSignalError("one-sided spectrum must have N/2 + 1 bins")

    @property
    def frequency_step(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])


def detrend(signal: FluxSignal) -> FluxSignal:
    """Remove the mean, leaving all sampling metadata untouched."""
    return FluxSignal(
        flux_values=signal.flux_values,
        cq_values=signal.cq_values - signal.cq_values.mean(),
        parity_mode=signal.parity_mode,
        noise_sigma=signal.noise_sigma,
        rng_seed=signal.rng_seed,
    )


def hann_window(n: int) -> np.ndarray:
    """Symmetric Hann taper w[i] = (1 - cos(2 pi i / (N-1))) / 2, zero at both ends."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidSignalError(f"window length must be an integer >= 2, got {n!r}")
    i = np.arange(n, dtype=float)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * i / (n - 1)))


def power_spectrum(signal: FluxSignal) -> PowerSpectrum:
    """Detrend, Hann-window, and transform a flux signal into its one-sided PSD.

    Requires an even number of samples (the one-sided range runs to k = N/2).
    The FluxSignal constructor has already enforced uniform sampling.
    """
    n = signal.n_samples
    if n % 2 != 0:
        raise InvalidSignalError(f"power_spectrum requires an even sample count, got {n}")
    windowed = hann_window(n) * detrend(signal).cq_values
    amplitudes = np.fft.rfft(windowed)
    power = (2.0 / n**2) * np.abs(amplitudes) ** 2
    frequencies = np.arange(n // 2 + 1, dtype=float) / signal.flux_span
    return PowerSpectrum(frequencies=frequencies, power=power, n_input=n, window="hann")


def peak_location(spec: PowerSpectrum) -> tuple[float, float]:
    """(frequency, power) of the strongest bin, excluding DC.

    Windowed detrending leaves residual power at k = 0, so the DC bin is
    never a candidate; exact ties resolve to the lower frequency.
    """
    if len(spec.power) < 2:
        raise InvalidSignalError("spectrum has no bins beyond DC")
    k = 1 + int(np.argmax(spec.power[1:]))
    return float(spec.frequencies[k]), float(spec.power[k])
