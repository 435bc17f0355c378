"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Three checks (4, 5, and the noise-dominated clause of 8) encode
expectations the implemented model provably cannot reproduce; they are kept
as stated and fail honestly.  See the README's "Known-red acceptance checks"
section for the measured values and the structural reasons.
"""

import math
import time

import numpy as np
import pytest

from fluxcap.capacitance import PhysicalParams, sweep_flux
from fluxcap.fitting import (
    AMPLITUDE_FLOOR,
    coherence_time,
    fit_lorentzian,
    lorentzian,
)
from fluxcap.harness import SweepConfig, format_table, run_sweep
from fluxcap.phases import Topology
from fluxcap.spectral import PowerSpectrum, hann_window, power_spectrum

TOPOLOGIES = (Topology.LOOP, Topology.MOEBIUS, Topology.TREFOIL)
EXPECTED_F0 = {Topology.LOOP: 2.0, Topology.MOEBIUS: 4.0, Topology.TREFOIL: 6.0}
BIN_WIDTH = 0.1  # default span-10 frequency resolution


def check(number: int, name: str, ok: bool, details: str) -> None:
    verdict = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {number} ({name}): {verdict} — {details}"
    print(line)
    assert ok, line


def noiseless_signal(e0: float, topo: Topology, z: str):
    return sweep_flux(PhysicalParams(e_d=e0), topo, z, flux_span=10.0, n_samples=4096)


@pytest.fixture(scope="module")
def noiseless_grid():
    grid = {}
    for e0 in (0.0, 2.0, 10.0):
        for topo in TOPOLOGIES:
            for z in ("+1", "-1"):
                grid[(e0, topo, z)] = noiseless_signal(e0, topo, z)
    return grid


@pytest.fixture(scope="module")
def noiseless_fits(noiseless_grid):
    return {key: fit_lorentzian(power_spectrum(sig)) for key, sig in noiseless_grid.items()}


def test_criterion_1_coherence_time_arithmetic():
    tau_a = coherence_time(0.0997)
    tau_b = coherence_time(0.275)
    ok = abs(tau_a - 3.19) / 3.19 <= 0.005 and abs(tau_b - 1.16) / 1.16 <= 0.005
    check(
        1,
        "coherence-time arithmetic",
        ok,
        f"tau(0.0997 Hz) = {tau_a:.4f} s (target 3.19), tau(0.275 Hz) = {tau_b:.4f} s (target 1.16)",
    )


def test_criterion_2_peak_frequency_topology_ordering():
    t_start = time.perf_counter()
    results = []
    ok = True
    for e0 in (0.0, 2.0):
        for topo in TOPOLOGIES:
            for z in ("+1", "-1"):
                fit = fit_lorentzian(power_spectrum(noiseless_signal(e0, topo, z)))
                results.append((e0, topo.value, z, fit.f0))
                if abs(fit.f0 - EXPECTED_F0[topo]) > BIN_WIDTH:
                    ok = False
    elapsed = time.perf_counter() - t_start
    ok = ok and elapsed < 5.0
    summary = ", ".join(f"{t}@E0={e0:g}/{z}: {f0:.2f}" for e0, t, z, f0 in results[:6])
    check(
        2,
        "peak-frequency topology ordering",
        ok,
        f"fitted f0 vs 2/4/6 within {BIN_WIDTH}; {summary}, ... ({elapsed:.2f} s for 12 fits)",
    )


def test_criterion_3_parity_symmetry_at_zero_detuning(noiseless_grid):
    worst = 0.0
    for topo in TOPOLOGIES:
        plus = noiseless_grid[(0.0, topo, "+1")].cq_values
        minus = noiseless_grid[(0.0, topo, "-1")].cq_values
        scale = np.max(np.abs(plus))
        worst = max(worst, float(np.max(np.abs(plus - minus))) / scale)
    check(
        3,
        "parity symmetry at E0=0",
        worst <= 1e-12,
        f"max pointwise relative deviation across topologies = {worst:.3e} (tolerance 1e-12)",
    )


def test_criterion_4_flatness_at_large_detuning(noiseless_grid):
    ratios = {}
    for topo in TOPOLOGIES:
        ptp_plus = float(np.ptp(noiseless_grid[(10.0, topo, "+1")].cq_values))
        ptp_minus = float(np.ptp(noiseless_grid[(10.0, topo, "-1")].cq_values))
        ratios[topo.value] = ptp_minus / ptp_plus
    ok = all(r <= 1e-4 for r in ratios.values())
    check(
        4,
        "flatness at E0=10, Z=-1",
        ok,
        "ptp(Z=-1)/ptp(Z=+1) = "
        + ", ".join(f"{k}: {v:.3e}" for k, v in ratios.items())
        + " (required <= 1e-4; the parity flip equals a half-period flux shift, so the ratio is 1)",
    )


def test_criterion_5_resolution_limited_linewidth(noiseless_fits):
    gammas = [fit.gamma for fit in noiseless_fits.values()]
    lo, hi = min(gammas), max(gammas)
    ok = all(abs(g - 0.0997) <= 0.005 for g in gammas)
    check(
        5,
        "resolution-limited linewidth",
        ok,
        f"fitted gamma in [{lo:.4f}, {hi:.4f}] Hz vs required 0.0997 +/- 0.005 "
        "(least-squares width of the on-bin Hann-squared kernel is ~0.1056)",
    )


def test_criterion_6_lorentzian_fit_recovery():
    freqs = np.arange(2049) / 10.0
    truth = dict(a=1.0, gamma=0.1, f0=2.0, b=0.0)
    clean = lorentzian(freqs, **truth)
    fit = fit_lorentzian(PowerSpectrum(frequencies=freqs, power=clean, n_input=4096))
    noiseless_ok = (
        abs(fit.amplitude_a - truth["a"]) <= 1e-6
        and abs(fit.gamma_half_width - truth["gamma"]) / truth["gamma"] <= 1e-6
        and abs(fit.f0 - truth["f0"]) / truth["f0"] <= 1e-6
        and abs(fit.baseline_b) <= 1e-6
    )
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        noisy = clean + rng.normal(0.0, truth["a"] / 20.0, size=clean.shape)
        nfit = fit_lorentzian(PowerSpectrum(frequencies=freqs, power=noisy, n_input=4096))
        if abs(nfit.amplitude_a - truth["a"]) <= 0.1 and abs(nfit.f0 - truth["f0"]) <= BIN_WIDTH:
            hits += 1
    ok = noiseless_ok and hits >= 95
    check(
        6,
        "Lorentzian fit recovery",
        ok,
        f"noiseless params to 1e-6: {noiseless_ok}; seeded-noise recovery {hits}/100 (need >= 95)",
    )


def test_criterion_7_dft_oracle_equivalence():
    worst_dft = 0.0
    worst_parseval = 0.0
    for n in (16, 128, 1024):
        rng = np.random.default_rng(n)
        values = rng.normal(size=n)
        flux = np.linspace(0.0, float(n), n, endpoint=False)
        from fluxcap.capacitance import FluxSignal

        spec = power_spectrum(FluxSignal(flux, values, "+1"))
        # brute-force O(N^2) DFT oracle
        w = hann_window(n)
        y = w * (values - values.mean())
        ks = np.arange(n // 2 + 1)
        phases = np.exp(-2j * np.pi * np.outer(ks, np.arange(n)) / n)
        oracle = (2.0 / n**2) * np.abs(phases @ y) ** 2
        scale = oracle.max()
        worst_dft = max(worst_dft, float(np.max(np.abs(spec.power - oracle))) / scale)
        amps = np.fft.rfft(y)
        lhs = spec.power.sum()
        rhs = (y @ y) / n + (abs(amps[0]) ** 2 + abs(amps[-1]) ** 2) / n**2
        worst_parseval = max(worst_parseval, abs(lhs - rhs) / rhs)
    ok = worst_dft <= 1e-9 and worst_parseval <= 1e-9
    check(
        7,
        "DFT oracle equivalence",
        ok,
        f"max relative deviation vs naive DFT = {worst_dft:.2e}, "
        f"windowed Parseval = {worst_parseval:.2e} (both need <= 1e-9)",
    )


def test_criterion_8_table_reproduction_shape(tmp_path):
    cfg = SweepConfig(output_dir=str(tmp_path / "paper-grid"))
    rows = run_sweep(cfg)
    header = format_table(rows).splitlines()[0]
    shape_ok = (
        len(rows) == 18
        and header == "e0_ueV,topology,parity,A,gamma_hz,f0_hz,baseline,snr,tau_s,converged"
        and [(r.e0, r.topology, r.parity) for r in rows]
        == [
            (e0, topo, z)
            for e0 in (0.0, 2.0, 10.0)
            for topo in ("loop", "moebius", "trefoil")
            for z in ("+1", "-1")
        ]
    )
    noise_rows = [r for r in rows if r.e0 == 10.0 and r.parity == "-1"]
    floor_ok = all(r.a == AMPLITUDE_FLOOR and r.snr < 10.0 for r in noise_rows)
    detail_floor = ", ".join(f"{r.topology}: A={r.a:.2e}/snr={r.snr:.1f}" for r in noise_rows)
    ok = shape_ok and floor_ok
    check(
        8,
        "table reproduction shape",
        ok,
        f"rows/columns/ordering ok: {shape_ok}; noise-dominated (E0=10, Z=-1) at floor with "
        f"single-digit SNR: {floor_ok} [{detail_floor}] "
        "(the parity symmetry gives those rows the same peak as Z=+1, so they are not noise-dominated)",
    )


def test_criterion_9_snr_scale_invariance():
    rng = np.random.default_rng(23)
    freqs = np.arange(2049) / 10.0
    power = lorentzian(freqs, 1.0, 0.1, 2.0, 0.02) + rng.normal(0.0, 0.05, size=freqs.shape)
    base = fit_lorentzian(PowerSpectrum(frequencies=freqs, power=power, n_input=4096))
    worst = 0.0
    for factor in (2.0, 3.7, 1e6, 1e-6):
        scaled = fit_lorentzian(
            PowerSpectrum(frequencies=freqs, power=power * factor, n_input=4096)
        )
        worst = max(worst, abs(scaled.snr - base.snr) / base.snr)
    check(
        9,
        "SNR scale invariance",
        worst <= 1e-9,
        f"max relative SNR change across scale factors = {worst:.2e} (tolerance 1e-9)",
    )
