"""Command-line interface.

Subcommands:

* power-table -- effective-power grid for the split and exact procedures
* simulate    -- run the splitting experiment, emit CSV/JSON (+ optional SVG)
* calibrate   -- transform p-values into e-values
* ecdf        -- empirical CDF of exact p-values under the alternative
* plot        -- render the experiment figure without the delimited output

Exit codes: 0 success, 1 invalid configuration or arguments, 2 numerical
or I/O failure. Simulation inputs may come from --config, a flat
key=value file with the fields of ExperimentConfig; explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .calibration import (
    JEFFREYS_ANCHORS,
    SHAFER,
    VS_BOUND,
    VS_NOT_EVALUE_NOTE,
    calibrate,
    epsilon_calibrator,
)
from .errors import NumericalError, ValidationError
from .power import power_table
from .runner import (
    build_manifest,
    emit_csv,
    emit_json,
    pvalue_ecdf,
    run_experiment,
)
from .simulation import DEFAULT_SEED, ExperimentConfig

_CLASSICAL_DELTAS = {2: [1.0, 2.0, 4.0], 10: [1.0, 2.0, 4.0, 6.0]}

_CONFIG_FIELD_TYPES = {
    "m": int,
    "r": int,
    "split_fraction": float,
    "delta": float,
    "sigma0": float,
    "n_datasets": int,
    "n_splits": int,
    "seed": int,
}


def _add_experiment_flags(parser: argparse.ArgumentParser, with_counts: bool = True):
    parser.add_argument("--config", type=Path, help="flat key=value experiment config file")
    parser.add_argument("--m", type=int, help="number of populations")
    parser.add_argument("--r", type=int, help="sample size per population")
    parser.add_argument("--p", type=float, dest="split_fraction",
                        help="selection-portion fraction (p*r must be integer)")
    parser.add_argument("--delta", type=float, help="standardized signal")
    parser.add_argument("--sigma0", type=float, help="known noise scale (default 1)")
    if with_counts:
        parser.add_argument("--datasets", type=int, help="number of datasets")
        parser.add_argument("--splits", type=int, help="random splits per dataset")
    parser.add_argument("--seed", type=int, help=f"master RNG seed (default {DEFAULT_SEED})")


def _read_config_file(path: Path) -> dict:
    values = {}
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_FIELD_TYPES:
            raise ValidationError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _CONFIG_FIELD_TYPES[key](value.strip())
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def _experiment_config(args) -> ExperimentConfig:
    values = {
        "m": 2,
        "r": 100,
        "split_fraction": 0.4,
        "delta": 2.0,
        "seed": DEFAULT_SEED,
    }
    if getattr(args, "config", None) is not None:
        values.update(_read_config_file(args.config))
    overrides = {
        "m": args.m,
        "r": args.r,
        "split_fraction": args.split_fraction,
        "delta": args.delta,
        "sigma0": getattr(args, "sigma0", None),
        "n_datasets": getattr(args, "datasets", None),
        "n_splits": getattr(args, "splits", None),
        "seed": args.seed,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def _write_rows(rows, header, out: Path | None):
    if out is None:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
        return
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_power_table(args) -> int:
    ms = args.m if args.m else [2, 10]
    alphas = args.alpha
    ps = args.p
    header = ["alpha", "m", "delta", "procedure", "split_fraction", "value", "display"]
    rows = []
    for m in ms:
        deltas = args.delta if args.delta else _CLASSICAL_DELTAS.get(m, [1.0, 2.0, 4.0])
        for cell in power_table(alphas, [m], deltas, ps):
            rows.append([
                cell.alpha, cell.m, cell.delta, cell.procedure,
                "" if cell.split_fraction is None else cell.split_fraction,
                repr(cell.value), cell.display,
            ])
    _write_rows(rows, header, args.out)
    return 0


def _cmd_simulate(args) -> int:
    cfg = _experiment_config(args)
    data = run_experiment(cfg, keep_splits=args.full_splits, domain=args.domain)
    if args.out is None:
        if args.svg:
            raise ValidationError("--svg needs --out to name the output files")
        if args.format == "json":
            emit_json(data, sys.stdout, manifest=None, full_splits=args.full_splits)
        else:
            emit_csv(data, sys.stdout)
        return 0
    out = Path(args.out)
    paths = [out]
    manifest_path = out.with_suffix(out.suffix + ".manifest.json")
    svg_path = out.with_suffix(".svg")
    if args.svg:
        paths.append(svg_path)
    manifest = build_manifest(cfg, [str(p) for p in paths])
    if args.format == "json":
        emit_json(data, out, manifest=manifest, full_splits=args.full_splits)
    else:
        emit_csv(data, out)
    if args.svg:
        from .plots import emit_svg

        emit_svg(data, svg_path, domain=args.domain, show_vs=args.show_vs)
    with open(manifest_path, "w") as fh:
        fh.write(manifest.to_json())
        fh.write("\n")
    print(f"wrote {', '.join(str(p) for p in paths)} and {manifest_path}")
    return 0


def _cmd_calibrate(args) -> int:
    header = ["p", "shafer_e", "jeffreys_e"]
    eps_kind = epsilon_calibrator(args.eps) if args.eps is not None else None
    if eps_kind is not None:
        header.append(f"epsilon_{args.eps:g}_e")
    if args.show_vs:
        header.append("vs_bound")
        print(f"note: {VS_NOT_EVALUE_NOTE}", file=sys.stderr)
    rows = []
    for p in args.p_values:
        row = [p, calibrate(p, SHAFER)]
        anchor = JEFFREYS_ANCHORS.get(p)
        row.append("" if anchor is None else anchor)
        if eps_kind is not None:
            row.append(calibrate(p, eps_kind))
        if args.show_vs:
            row.append(calibrate(p, VS_BOUND))
        rows.append(row)
    _write_rows(rows, header, args.out)
    return 0


def _cmd_ecdf(args) -> int:
    cfg = _experiment_config(args)
    if args.grid:
        grid = sorted(float(g) for g in args.grid)
    else:
        grid = [i / 100 for i in range(101)]
    points = pvalue_ecdf(cfg, args.reps, grid)
    _write_rows([[a, f] for a, f in points], ["alpha", "ecdf"], args.out)
    if args.svg:
        if args.out is None:
            raise ValidationError("--svg needs --out to name the output file")
        from .plots import emit_ecdf_svg

        emit_ecdf_svg(points, Path(args.out).with_suffix(".svg"))
    return 0


def _cmd_plot(args) -> int:
    cfg = _experiment_config(args)
    data = run_experiment(cfg, domain=args.domain)
    from .plots import emit_svg

    emit_svg(data, args.out, domain=args.domain, show_vs=args.show_vs)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxsplit",
        description="Data-splitting hypothesis tests: effective power, "
                    "split p-values, averaged e-values, calibrators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pt = sub.add_parser("power-table", help="effective-power grid (split + exact)")
    pt.add_argument("--alpha", type=float, nargs="+", default=[0.1, 0.01])
    pt.add_argument("--m", type=int, nargs="+")
    pt.add_argument("--delta", type=float, nargs="+")
    pt.add_argument("--p", type=float, nargs="+", default=[0.2, 0.4, 0.6])
    pt.add_argument("--out", type=Path)
    pt.set_defaults(func=_cmd_power_table)

    sim = sub.add_parser("simulate", help="run the splitting experiment")
    _add_experiment_flags(sim)
    sim.add_argument("--out", type=Path, help="output file (CSV or JSON)")
    sim.add_argument("--format", choices=["csv", "json"], default="csv")
    sim.add_argument("--svg", action="store_true", help="also render the figure")
    sim.add_argument("--domain", choices=["p", "e"], default="p")
    sim.add_argument("--show-vs", action="store_true",
                     help="include the VS envelope (not a valid e-value)")
    sim.add_argument("--full-splits", action="store_true",
                     help="JSON only: dump every per-split outcome")
    sim.set_defaults(func=_cmd_simulate)

    cal = sub.add_parser("calibrate", help="turn p-values into e-values")
    cal.add_argument("p_values", type=float, nargs="+", metavar="P")
    cal.add_argument("--eps", type=float, help="add the eps-family calibrator column")
    cal.add_argument("--show-vs", action="store_true",
                     help="include the VS envelope (not a valid e-value)")
    cal.add_argument("--out", type=Path)
    cal.set_defaults(func=_cmd_calibrate)

    ec = sub.add_parser("ecdf", help="empirical CDF of exact p-values")
    _add_experiment_flags(ec, with_counts=False)
    ec.add_argument("--reps", type=int, default=10_000, help="number of datasets")
    ec.add_argument("--grid", type=float, nargs="+", help="evaluation sizes")
    ec.add_argument("--out", type=Path)
    ec.add_argument("--svg", action="store_true", help="also render the step plot")
    ec.set_defaults(func=_cmd_ecdf)

    pl = sub.add_parser("plot", help="render the experiment figure")
    _add_experiment_flags(pl)
    pl.add_argument("--domain", choices=["p", "e"], default="p")
    pl.add_argument("--show-vs", action="store_true",
                    help="include the VS envelope (not a valid e-value)")
    pl.add_argument("--out", type=Path, required=True, help="SVG output path")
    pl.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint():  # console_scripts hook
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
