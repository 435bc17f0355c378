"""Flux-dependent quantum capacitance of Majorana-dot qubits on loop, Moebius,
and trefoil band topologies, with a spectral readout pipeline (detrend, Hann
window, one-sided PSD), Lorentzian peak fitting, and SNR / coherence-time
metrics."""

from .capacitance import (
    PARITY_MODES,
    FluxSignal,
    PhysicalParams,
    delta_capacitance,
    delta_p,
    parity_capacitance,
    parity_probabilities,
    sweep_flux,
    total_capacitance,
)
from .errors import (
    ConfigError,
    FitDegenerateError,
    FluxcapError,
    InvalidLinewidthError,
    InvalidParameterError,
    InvalidParityError,
    InvalidSignalError,
    InvalidTemperatureError,
)
from .fitting import (
    AMPLITUDE_FLOOR,
    LorentzianFit,
    coherence_time,
    fit_lorentzian,
    lorentzian,
    lorentzian_jacobian,
    snr,
)
from .harness import ResultRow, SweepConfig, emit_plot_data, emit_table, run_sweep
from .model import (
    BareParams,
    ParityBlockParams,
    ParityEnergy,
    block_excitation_gaps,
    build_even_block,
    build_full_hamiltonian,
    build_odd_block,
    parity_energy,
)
from .phases import (
    PhaseBreakdown,
    Topology,
    ab_phase,
    composed_phase,
    dressed_hopping,
    effective_phase,
    hybridization_energy,
    torsion_phase,
    zak_phase,
)
from .spectral import PowerSpectrum, detrend, hann_window, peak_location, power_spectrum

__version__ = "0.1.0"
