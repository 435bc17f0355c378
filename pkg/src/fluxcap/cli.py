"""Command-line interface: sweep / single / table / plot.

Flags mirror the config-file keys; flag values override file values.  Exit
codes: 0 success, 1 invalid configuration, 2 I/O failure, 3 sweep completed
but some fits did not converge.
"""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys

from .errors import ConfigError, FluxcapError
from .harness import (
    ResultRow,
    SweepConfig,
    config_from_values,
    emit_table,
    format_table,
    load_config,
    run_sweep,
)


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--seed", type=int, help="master RNG seed")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--e0", help="comma list of detunings in ueV, e.g. '0,2,10'")
    parser.add_argument("--topology", help="comma list from {loop,moebius,trefoil}")
    parser.add_argument("--parity", help="comma list from {+1,-1,total,delta}")
    parser.add_argument("--samples", type=int, help="samples per sweep (power of two)")
    parser.add_argument("--span", type=float, help="flux span in flux quanta")
    parser.add_argument("--noise", type=float, help="flux-domain noise sigma (0 = noiseless)")


def _build_config(args: argparse.Namespace, force_emit: set[str] | None = None) -> SweepConfig:
    overrides = {
        "seed": args.seed,
        "out": args.out,
        "e0": args.e0,
        "topology": args.topology,
        "parity": args.parity,
        "samples": args.samples,
        "span": args.span,
        "noise": args.noise,
    }
    if args.config:
        cfg = load_config(args.config, overrides)
    else:
        cfg = config_from_values({k: v for k, v in overrides.items() if v is not None})
    if force_emit is not None:
        cfg.emit = frozenset(force_emit)
    return cfg


def _single_point_config(args: argparse.Namespace, emit: set[str]) -> SweepConfig:
    cfg = _build_config(args, force_emit=emit)
    if len(cfg.detunings) != 1 or len(cfg.topologies) != 1 or len(cfg.parities) != 1:
        raise ConfigError(
            "single/plot need exactly one detuning, topology, and parity "
            f"(got {len(cfg.detunings)} x {len(cfg.topologies)} x {len(cfg.parities)})"
        )
    return cfg


def _finish(rows: list[ResultRow]) -> int:
    return 3 if any(not row.converged for row in rows) else 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    rows = run_sweep(cfg)
    sys.stdout.write(format_table(rows, cfg))
    sys.stdout.write(f"# wrote {len(rows)} rows to {cfg.output_dir}\n")
    return _finish(rows)


def _cmd_single(args: argparse.Namespace) -> int:
    cfg = _single_point_config(args, emit={"signals", "spectra", "fits", "table"})
    rows = run_sweep(cfg)
    sys.stdout.write(format_table(rows, cfg))
    return _finish(rows)


def _cmd_table(args: argparse.Namespace) -> int:
    out = args.out or (load_config(args.config).output_dir if args.config else None)
    if not out:
        raise ConfigError("table needs --out (or --config naming an output dir)")
    fit_paths = sorted(glob.glob(os.path.join(out, "fits", "fit_*.json")))
    if not fit_paths:
        raise ConfigError(f"no persisted fits under {out!r}")
    rows = []
    for path in fit_paths:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        r = payload["row"]

        def num(value):
            return float(value) if isinstance(value, str) else value

        rows.append(
            ResultRow(
                e0=num(r["e0_ueV"]),
                topology=r["topology"],
                parity=r["parity"],
                a=num(r["A"]),
                gamma=num(r["gamma_hz"]),
                f0=num(r["f0_hz"]),
                baseline=num(r["baseline"]),
                snr=num(r["snr"]),
                tau=num(r["tau_s"]),
                converged=bool(r["converged"]),
            )
        )
    order = {"loop": 0, "moebius": 1, "trefoil": 2}
    zorder = {"+1": 0, "-1": 1, "total": 2, "delta": 3}
    rows.sort(key=lambda row: (row.e0, order[row.topology], zorder[row.parity]))
    emit_table(rows, out)
    sys.stdout.write(format_table(rows))
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    cfg = _single_point_config(args, emit={"plots"})
    rows = run_sweep(cfg)
    sys.stdout.write(f"# wrote plot data for {len(rows)} point(s) to "
                     f"{os.path.join(cfg.output_dir, 'plots')}\n")
    return _finish(rows)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="fluxcap",
        description="Flux-dependent quantum capacitance sweeps with spectral readout metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, summary in (
        ("sweep", _cmd_sweep, "run the full detuning x topology x parity grid"),
        ("single", _cmd_single, "run one grid point"),
        ("table", _cmd_table, "re-aggregate persisted fits into the table files"),
        ("plot", _cmd_plot, "emit figure data (and SVG) for one grid point"),
    ):
        p = sub.add_parser(name, help=summary)
        _add_common_flags(p)
        p.set_defaults(func=func)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"error: invalid configuration: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: I/O failure: {exc}\n")
        return 2
    except FluxcapError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
