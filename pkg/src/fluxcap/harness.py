"""Sweep orchestration: configuration, the detuning/topology/parity grid,
flat-file persistence, and figure-data emission.

A sweep runs the full readout chain (flux sweep -> detrend -> Hann window ->
one-sided PSD -> Lorentzian fit) at every grid point and aggregates one
result row per point.  Everything is deterministic for a fixed configuration
including the seed: grid points draw their noise from per-point child seeds
derived from the master seed, rows are ordered canonically (detuning
ascending, then loop/moebius/trefoil, then parity +1, -1, total, delta), and
floats are serialized with a fixed format, so repeated runs produce
byte-identical tables.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .capacitance import PARITY_MODES, FluxSignal, PhysicalParams, sweep_flux
from .errors import ConfigError, FitDegenerateError
from .fitting import fit_lorentzian
from .phases import Topology
from .spectral import PowerSpectrum, power_spectrum

__all__ = [
    "DEFAULT_NOISE_SIGMA",
    "SCHEMA_VERSION",
    "SweepConfig",
    "ResultRow",
    "load_config",
    "config_from_values",
    "run_sweep",
    "emit_table",
    "format_table",
    "parse_table",
    "emit_plot_data",
]

SCHEMA_VERSION = 1

#: Default injected flux-domain noise, from the target residual scale
#: sigma_res = A_fit/11.9 mapped through the Hann noise gain E[P] = 3*s^2/(4N):
#: s = sqrt(4*N*A_fit/(3*11.9)) with A_fit ~ 3.8e-6 at the default physics.
#: Measured row SNRs then sit in the low tens (the PSD noise is exponential,
#: so individual rows scatter and an occasional row latches a noise spike).
DEFAULT_NOISE_SIGMA = 0.042

_TOPOLOGY_ORDER = (Topology.LOOP, Topology.MOEBIUS, Topology.TREFOIL)
_PARITY_ORDER = ("+1", "-1", "total", "delta")
_EMIT_CHOICES = ("signals", "spectra", "fits", "table", "plots")
_TABLE_COLUMNS = (
    "e0_ueV",
    "topology",
    "parity",
    "A",
    "gamma_hz",
    "f0_hz",
    "baseline",
    "snr",
    "tau_s",
    "converged",
)


@dataclass
class SweepConfig:
    """Full parameter set of one reproducible sweep."""

    topologies: tuple[Topology, ...] = _TOPOLOGY_ORDER
    detunings: tuple[float, ...] = (0.0, 2.0, 10.0)
    parities: tuple[str, ...] = ("+1", "-1")
    physical: PhysicalParams = field(default_factory=PhysicalParams)
    flux_span: float = 10.0
    n_samples: int = 4096
    noise_sigma: float = DEFAULT_NOISE_SIGMA
    rng_seed: int = 5
    output_dir: str = "fluxcap-out"
    emit: frozenset[str] = frozenset({"signals", "spectra", "fits", "table"})

    def __post_init__(self) -> None:
        if not self.topologies or not self.detunings:
            raise ConfigError("topologies and detunings must be non-empty")
        if not self.parities:
            raise ConfigError("parities must be non-empty")
        bad = [z for z in self.parities if z not in PARITY_MODES]
        if bad:
            raise ConfigError(f"unknown parities {bad}; choose from {PARITY_MODES}")
        n = self.n_samples
        if n < 2 or (n & (n - 1)) != 0:
            raise ConfigError(f"n_samples must be a power of two >= 2, got {n}")
        if self.flux_span <= 0 or not math.isfinite(self.flux_span):
            raise ConfigError(f"flux_span must be > 0, got {self.flux_span}")
        if self.noise_sigma < 0 or not math.isfinite(self.noise_sigma):
            raise ConfigError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        unknown = set(self.emit) - set(_EMIT_CHOICES)
        if unknown:
            raise ConfigError(f"unknown emit targets {sorted(unknown)}")


@dataclass
class ResultRow:
    """One fitted grid point of the sweep table."""

    e0: float
    topology: str
    parity: str
    a: float
    gamma: float
    f0: float
    baseline: float
    snr: float
    tau: float
    converged: bool


# --------------------------- configuration files ---------------------------

_CONFIG_KEYS = {
    "schema_version": int,
    "topology": str,
    "e0": str,
    "parity": str,
    "e_m0": complex,
    "t_l": complex,
    "t_r": complex,
    "delta_e_d": float,
    "lever_alpha": float,
    "k_b_t": float,
    "prefactor": float,
    "span": float,
    "samples": int,
    "noise": float,
    "seed": int,
    "out": str,
    "emit": str,
}


def _parse_scalar(key: str, raw: str):
    kind = _CONFIG_KEYS[key]
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is complex:
            c = complex(raw.replace(" ", ""))
            return c
        return raw
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: cannot parse {raw!r}") from exc


def load_config(path: str, overrides: dict | None = None) -> SweepConfig:
    """Read a flat ``key = value`` config document and build a SweepConfig.

    Lines are ``key = value`` with ``#`` comments; list-valued keys take
    comma-separated entries.  ``overrides`` (same key names, already typed or
    raw strings) take precedence over file values; CLI flags feed in here.
    """
    values: dict = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                text = line.split("#", 1)[0].strip()
                if not text:
                    continue
                if "=" not in text:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {text!r}")
                key, raw = (part.strip() for part in text.split("=", 1))
                if key not in _CONFIG_KEYS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = _parse_scalar(key, raw)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    if values.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema_version {values['schema_version']} (expected {SCHEMA_VERSION})"
        )
    if overrides:
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"unknown override key {key!r}")
            values[key] = _parse_scalar(key, value) if isinstance(value, str) else value
    return config_from_values(values)


def config_from_values(values: dict) -> SweepConfig:
    """Assemble a SweepConfig from a flat, typed key/value mapping."""
    physical_kwargs = {}
    for cfg_key, field_name in (
        ("e_m0", "e_m0"),
        ("t_l", "t_l"),
        ("t_r", "t_r"),
        ("delta_e_d", "delta_e_d"),
        ("lever_alpha", "lever_alpha"),
        ("k_b_t", "k_b_t"),
        ("prefactor", "capacitance_prefactor"),
    ):
        if cfg_key in values:
            value = values[cfg_key]
            if field_name in ("e_m0",) and isinstance(value, complex):
                value = value.real
            physical_kwargs[field_name] = value
    kwargs: dict = {}
    if "topology" in values:
        names = [s.strip() for s in str(values["topology"]).split(",") if s.strip()]
        kwargs["topologies"] = tuple(Topology.from_name(name) for name in names)
    if "e0" in values:
        try:
            kwargs["detunings"] = tuple(
                float(s) for s in str(values["e0"]).split(",") if s.strip()
            )
        except ValueError as exc:
            raise ConfigError(f"cannot parse e0 list {values['e0']!r}") from exc
    if "parity" in values:
        kwargs["parities"] = tuple(s.strip() for s in str(values["parity"]).split(",") if s.strip())
    if "span" in values:
        kwargs["flux_span"] = values["span"]
    if "samples" in values:
        kwargs["n_samples"] = values["samples"]
    if "noise" in values:
        kwargs["noise_sigma"] = values["noise"]
    if "seed" in values:
        kwargs["rng_seed"] = values["seed"]
    if "out" in values:
        kwargs["output_dir"] = values["out"]
    if "emit" in values:
        kwargs["emit"] = frozenset(
            s.strip() for s in str(values["emit"]).split(",") if s.strip()
        )
    try:
        kwargs["physical"] = PhysicalParams(**physical_kwargs)
        return SweepConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


# ------------------------------- sweep core --------------------------------


def _grid(cfg: SweepConfig) -> list[tuple[float, Topology, str]]:
    detunings = sorted(cfg.detunings)
    topologies = sorted(set(cfg.topologies), key=_TOPOLOGY_ORDER.index)
    parities = sorted(set(cfg.parities), key=_PARITY_ORDER.index)
    return [(e0, topo, z) for e0 in detunings for topo in topologies for z in parities]


def _point_seed(master: int | None, index: int) -> int | None:
    if master is None:
        return None
    return int(np.random.SeedSequence([int(master), index]).generate_state(1)[0])


def _point_tag(e0: float, topo: Topology, parity: str) -> str:
    ztag = f"z{parity}" if parity in ("+1", "-1") else parity
    return f"e0-{format(e0, 'g')}_{topo.value}_{ztag}"


def _meta_lines(cfg: SweepConfig, e0: float, topo: Topology, parity: str, seed) -> list[str]:
    return [
        f"# fluxcap v{SCHEMA_VERSION}",
        "# units: energies in ueV; capacitance in e^2*alpha^2/ueV (prefactor "
        f"{format(cfg.physical.capacitance_prefactor, '.12g')}); frequency in cycles per flux quantum",
        f"# topology = {topo.value}",
        f"# e0_ueV = {format(e0, '.12g')}",
        f"# parity = {parity}",
        f"# n_samples = {cfg.n_samples}",
        f"# flux_span = {format(cfg.flux_span, '.12g')}",
        f"# noise_sigma = {format(cfg.noise_sigma, '.12g')}",
        f"# rng_seed = {seed}",
    ]


def _write_series(path: str, meta: list[str], columns: tuple[str, str], x, y) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in meta:
            fh.write(line + "\n")
        fh.write(f"# columns = {columns[0]} {columns[1]}\n")
        for xi, yi in zip(x, y):
            fh.write(f"{format(xi, '.12g')} {format(yi, '.12g')}\n")


def run_sweep(cfg: SweepConfig) -> list[ResultRow]:
    """Execute the full grid and persist the requested artifacts.

    The output directory is created and probed for writability before any
    computation.  Degenerate fits never abort the sweep; they appear as rows
    with ``converged=False`` and NaN parameters.
    """
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    probe = os.path.join(out, ".write-probe")
    with open(probe, "w", encoding="utf-8") as fh:
        fh.write("ok")
    os.remove(probe)
    for sub in ("signals", "spectra", "fits", "plots"):
        if sub in cfg.emit:
            os.makedirs(os.path.join(out, sub), exist_ok=True)

    rows: list[ResultRow] = []
    for index, (e0, topo, parity) in enumerate(_grid(cfg)):
        seed = _point_seed(cfg.rng_seed, index)
        physical = replace(cfg.physical, e_d=e0)
        signal = sweep_flux(
            physical,
            topo,
            parity,
            flux_span=cfg.flux_span,
            n_samples=cfg.n_samples,
            noise_sigma=cfg.noise_sigma,
            rng_seed=seed,
        )
        spectrum = power_spectrum(signal)
        try:
            fit = fit_lorentzian(spectrum)
            row = ResultRow(
                e0=e0,
                topology=topo.value,
                parity=parity,
                a=fit.amplitude_a,
                gamma=fit.gamma,
                f0=fit.f0,
                baseline=fit.baseline_b,
                snr=fit.snr,
                tau=fit.tau,
                converged=fit.converged,
            )
        except FitDegenerateError:
            row = ResultRow(
                e0=e0,
                topology=topo.value,
                parity=parity,
                a=math.nan,
                gamma=math.nan,
                f0=math.nan,
                baseline=math.nan,
                snr=math.nan,
                tau=math.nan,
                converged=False,
            )
        rows.append(row)

        tag = _point_tag(e0, topo, parity)
        meta = _meta_lines(cfg, e0, topo, parity, seed)
        if "signals" in cfg.emit:
            _write_series(
                os.path.join(out, "signals", f"signal_{tag}.txt"),
                meta,
                ("flux_quanta", "cq"),
                signal.flux_values,
                signal.cq_values,
            )
        if "spectra" in cfg.emit:
            _write_series(
                os.path.join(out, "spectra", f"spectrum_{tag}.txt"),
                meta,
                ("frequency_hz", "power"),
                spectrum.frequencies,
                spectrum.power,
            )
        if "fits" in cfg.emit:
            payload = {
                "schema_version": SCHEMA_VERSION,
                "gamma_convention": "fwhm (tau = 1/(pi*gamma)); half-width alternate in gamma_half_width_hz",
                "gamma_half_width_hz": _json_float(row.gamma / 2.0),
                "row": _row_dict(row),
                "sweep": {
                    "n_samples": cfg.n_samples,
                    "flux_span": cfg.flux_span,
                    "noise_sigma": cfg.noise_sigma,
                    "rng_seed": seed,
                },
            }
            with open(os.path.join(out, "fits", f"fit_{tag}.json"), "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
        if "plots" in cfg.emit:
            emit_plot_data(
                signal, os.path.join(out, "plots", f"signal_{tag}"), meta=meta, render=True
            )
            emit_plot_data(
                spectrum, os.path.join(out, "plots", f"spectrum_{tag}"), meta=meta, render=True
            )

    if "table" in cfg.emit:
        emit_table(rows, out, cfg)
    return rows


# ------------------------------ table emission ------------------------------


def _fmt(value: float) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return format(value, ".12g")


def _json_float(value: float):
    # JSON has no inf/nan literals; encode as strings the parser understands
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _row_dict(row: ResultRow) -> dict:
    return {
        "e0_ueV": _json_float(row.e0),
        "topology": row.topology,
        "parity": row.parity,
        "A": _json_float(row.a),
        "gamma_hz": _json_float(row.gamma),
        "f0_hz": _json_float(row.f0),
        "baseline": _json_float(row.baseline),
        "snr": _json_float(row.snr),
        "tau_s": _json_float(row.tau),
        "converged": row.converged,
    }


def format_table(rows: list[ResultRow], cfg: SweepConfig | None = None) -> str:
    """Render rows as '#'-headed delimited text with the canonical columns."""
    lines = []
    if cfg is not None:
        lines += [
            f"# fluxcap table v{SCHEMA_VERSION}",
            "# units: energies in ueV; A/baseline in e^2*alpha^2/ueV units; "
            "gamma/f0 in cycles per flux quantum; tau in s",
            f"# n_samples = {cfg.n_samples}",
            f"# flux_span = {format(cfg.flux_span, '.12g')}",
            f"# noise_sigma = {format(cfg.noise_sigma, '.12g')}",
            f"# rng_seed = {cfg.rng_seed}",
        ]
    lines.append(",".join(_TABLE_COLUMNS))
    for row in rows:
        lines.append(
            ",".join(
                (
                    _fmt(row.e0),
                    row.topology,
                    row.parity,
                    _fmt(row.a),
                    _fmt(row.gamma),
                    _fmt(row.f0),
                    _fmt(row.baseline),
                    _fmt(row.snr),
                    _fmt(row.tau),
                    _fmt(row.converged),
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> list[ResultRow]:
    """Inverse of :func:`format_table` (comment and header lines are skipped)."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith(_TABLE_COLUMNS[0]):
            continue
        parts = line.split(",")
        if len(parts) != len(_TABLE_COLUMNS):
            raise ConfigError(f"malformed table row: {line!r}")
        rows.append(
            ResultRow(
                e0=float(parts[0]),
                topology=parts[1],
                parity=parts[2],
                a=float(parts[3]),
                gamma=float(parts[4]),
                f0=float(parts[5]),
                baseline=float(parts[6]),
                snr=float(parts[7]),
                tau=float(parts[8]),
                converged=parts[9] == "true",
            )
        )
    return rows


def emit_table(rows: list[ResultRow], out_dir: str, cfg: SweepConfig | None = None) -> tuple[str, str]:
    """Write the delimited table and its schema-versioned JSON twin."""
    csv_path = os.path.join(out_dir, "table.csv")
    json_path = os.path.join(out_dir, "table.json")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(format_table(rows, cfg))
    payload = {
        "schema_version": SCHEMA_VERSION,
        "columns": list(_TABLE_COLUMNS),
        "rows": [_row_dict(row) for row in rows],
    }
    if cfg is not None:
        payload["sweep"] = {
            "n_samples": cfg.n_samples,
            "flux_span": cfg.flux_span,
            "noise_sigma": cfg.noise_sigma,
            "rng_seed": cfg.rng_seed,
        }
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path


# ------------------------------- figure data -------------------------------


def emit_plot_data(
    obj: FluxSignal | PowerSpectrum,
    path_stem: str,
    meta: list[str] | None = None,
    render: bool = False,
) -> list[str]:
    """Write x/y series for a signal or spectrum; optionally render an SVG.

    The rendering, when requested, is a deterministic function of the data
    (fixed figure geometry, no timestamps in the SVG output).
    """
    if isinstance(obj, FluxSignal):
        columns = ("flux_quanta", "cq")
        x, y = obj.flux_values, obj.cq_values
        xlabel, ylabel = "flux (Phi/Phi0)", "C_Q (prefactor units)"
    elif isinstance(obj, PowerSpectrum):
        columns = ("frequency_hz", "power")
        x, y = obj.frequencies, obj.power
        xlabel, ylabel = "frequency (cycles/quantum)", "power"
    else:
        raise TypeError(f"cannot emit plot data for {type(obj).__name__}")
    series_path = path_stem + ".txt"
    _write_series(series_path, meta or [f"# fluxcap v{SCHEMA_VERSION}"], columns, x, y)
    written = [series_path]
    if render:
        import matplotlib

        matplotlib.use("Agg", force=False)
        import matplotlib.pyplot as plt

        with plt.rc_context({"svg.hashsalt": "fluxcap"}):
            fig, ax = plt.subplots(figsize=(6.0, 3.2), dpi=100)
            ax.plot(x, y, lw=0.8)
            ax.set_xlabel(xlabel)
            ax.set_ylabel(ylabel)
            fig.tight_layout()
            svg_path = path_stem + ".svg"
            fig.savefig(svg_path, format="svg", metadata={"Date": None})
            plt.close(fig)
        written.append(svg_path)
    return written
