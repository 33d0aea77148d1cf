"""Experiment orchestration and delimited output.

run_experiment draws n_datasets datasets, splits each one n_splits times,
and condenses every dataset into one summary row: the five-number boxplot
statistics of its split p-values, the exact p-value, the average e-value
over the same splits, the Shafer- and VS-transformed exact p-value, and
the p-domain projection of the average e-value through Shafer's inverse.

Numeric CSV columns are written with repr(float) (shortest round-tripping
decimal), so a rerun with the same configuration and seed is byte-identical.
"""

from __future__ import annotations

import csv
import datetime
import json
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .calibration import SHAFER, VS_BOUND, VS_NOT_EVALUE_NOTE, calibrate, shafer_inverse
from .errors import ValidationError
from .simulation import (
    GENERATOR_NAME,
    ExperimentConfig,
    SplitOutcome,
    average_evalues,
    evaluate_split,
    exact_pvalue,
    generate_dataset,
    random_split,
)

__all__ = [
    "CSV_COLUMNS",
    "DatasetSummary",
    "FigureData",
    "FiveNumberSummary",
    "RunManifest",
    "build_manifest",
    "emit_csv",
    "emit_json",
    "figure_id_for",
    "figure_payload",
    "pvalue_ecdf",
    "read_figure_csv",
    "run_experiment",
]

CSV_COLUMNS = [
    "dataset_index",
    "box_min",
    "box_q1",
    "box_median",
    "box_q3",
    "box_max",
    "exact_p",
    "avg_e",
    "shafer_e_of_exact_p",
    "vs_of_exact_p",
    "sinv_of_avg_e",
    "saturation_flag",
]


@dataclass(frozen=True)
class FiveNumberSummary:
    """Boxplot statistics: quartiles plus whiskers at the most extreme
    points within 1.5 IQR of the box; data beyond them are outliers."""

    low: float
    q1: float
    median: float
    q3: float
    high: float

    def __post_init__(self):
        if not self.low <= self.q1 <= self.median <= self.q3 <= self.high:
            raise ValidationError("five-number summary must be nondecreasing")


def five_number_summary(values) -> tuple[FiveNumberSummary, tuple[float, ...]]:
    """Summary plus the outliers beyond the whiskers.

    Whiskers sit on the most extreme data within 1.5 IQR of the box and
    are clipped to the box edges when no datum reaches past them (the
    standard boxplot convention, so bxp renders these summaries verbatim).
    """
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValidationError("cannot summarize an empty sample")
    q1, median, q3 = np.percentile(x, [25.0, 50.0, 75.0])
    iqr = q3 - q1
    below = x[x >= q1 - 1.5 * iqr]
    low = float(below.min()) if below.size and below.min() <= q1 else float(q1)
    above = x[x <= q3 + 1.5 * iqr]
    high = float(above.max()) if above.size and above.max() >= q3 else float(q3)
    summary = FiveNumberSummary(
        low=low, q1=float(q1), median=float(median), q3=float(q3), high=high)
    outliers = tuple(float(v) for v in np.sort(x[(x < low) | (x > high)]))
    return summary, outliers


@dataclass(frozen=True)
class DatasetSummary:
    """One CSV row: per-dataset statistics over its random splits."""

    dataset_index: int
    box: FiveNumberSummary
    outliers: tuple[float, ...]
    exact_p: float
    avg_e: float
    shafer_e_of_exact_p: float
    vs_of_exact_p: float
    sinv_of_avg_e: float
    saturated: bool

    def csv_values(self) -> list:
        return [
            self.dataset_index,
            self.box.low,
            self.box.q1,
            self.box.median,
            self.box.q3,
            self.box.high,
            self.exact_p,
            self.avg_e,
            self.shafer_e_of_exact_p,
            self.vs_of_exact_p,
            self.sinv_of_avg_e,
            int(self.saturated),
        ]


@dataclass
class FigureData:
    """Per-dataset summaries of one experiment, ready for plotting/serialization."""

    config: ExperimentConfig
    records: list[DatasetSummary]
    figure_id: str | None = None
    split_records: list[list[SplitOutcome]] | None = None


@dataclass
class RunManifest:
    """Reproducibility record written next to every output file set."""

    config: dict
    generator_name: str
    software_version: str
    timestamp: str
    output_paths: list[str] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


# Figure ids of the classical plots, keyed by (m, delta, domain).
_FIGURE_IDS = {
    (2, 1.0, "p"): "F1",
    (2, 4.0, "p"): "F2",
    (2, 2.0, "p"): "F3",
    (10, 2.0, "p"): "F4",
    (10, 4.0, "p"): "F4",
    (2, 2.0, "e"): "F5",
    (10, 6.0, "p"): "F6",
    (10, 6.0, "e"): "F7",
}


def figure_id_for(cfg: ExperimentConfig, domain: str = "p") -> str | None:
    """Classical figure id for this configuration, if it matches one."""
    return _FIGURE_IDS.get((cfg.m, float(cfg.delta), domain))


def summarize_dataset(cfg: ExperimentConfig, dataset_index: int,
                      keep_splits: bool = False) -> tuple[DatasetSummary, list[SplitOutcome]]:
    """All per-split statistics of one dataset condensed into a summary row."""
    dataset = generate_dataset(cfg, dataset_index)
    outcomes = [
        evaluate_split(dataset, random_split(cfg, dataset_index, s), cfg)
        for s in range(cfg.n_splits)
    ]
    box, outliers = five_number_summary([o.p_value for o in outcomes])
    avg_e = average_evalues([o.e_value for o in outcomes])
    p_exact = exact_pvalue(dataset, cfg)
    summary = DatasetSummary(
        dataset_index=dataset_index,
        box=box,
        outliers=outliers,
        exact_p=p_exact,
        avg_e=avg_e,
        shafer_e_of_exact_p=calibrate(p_exact, SHAFER),
        vs_of_exact_p=calibrate(p_exact, VS_BOUND),
        sinv_of_avg_e=shafer_inverse(avg_e),
        saturated=any(o.saturated for o in outcomes),
    )
    return summary, (outcomes if keep_splits else [])


def run_experiment(cfg: ExperimentConfig, keep_splits: bool = False,
                   domain: str = "p") -> FigureData:
    """Run the full experiment; pure given (config, seed), no I/O."""
    records = []
    split_records = [] if keep_splits else None
    for d in range(cfg.n_datasets):
        summary, outcomes = summarize_dataset(cfg, d, keep_splits=keep_splits)
        records.append(summary)
        if keep_splits:
            split_records.append(outcomes)
    return FigureData(
        config=cfg,
        records=records,
        figure_id=figure_id_for(cfg, domain),
        split_records=split_records,
    )


def pvalue_ecdf(cfg: ExperimentConfig, n_reps: int, grid) -> list[tuple[float, float]]:
    """Empirical CDF of exact p-values over n_reps fresh datasets.

    Under the alternative this estimates power as a function of test size;
    replication i uses the dataset stream with dataset_index = i.
    """
    if not (isinstance(n_reps, int) and n_reps >= 1):
        raise ValidationError("n_reps must be an integer >= 1")
    pvals = np.empty(n_reps)
    for i in range(n_reps):
        pvals[i] = exact_pvalue(generate_dataset(cfg, i), cfg)
    pvals.sort()
    return [(float(a), float(np.searchsorted(pvals, a, side="right") / n_reps)) for a in grid]


def _format_number(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(data: FigureData, fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(CSV_COLUMNS)
    for record in data.records:
        writer.writerow([_format_number(v) for v in record.csv_values()])


def emit_csv(data: FigureData, path) -> None:
    """Write one row per dataset with the fixed column set, full precision.

    path may also be an open text file (e.g. sys.stdout).
    """
    if hasattr(path, "write"):
        _write_csv(data, path)
        return
    try:
        with open(path, "w", newline="") as fh:
            _write_csv(data, fh)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_figure_csv(path) -> list[dict]:
    """Parse an emit_csv file back into per-row dicts of floats/ints."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise ValidationError(f"unexpected CSV header in {path}")
        for raw in reader:
            row = {k: float(raw[k]) for k in CSV_COLUMNS}
            row["dataset_index"] = int(raw["dataset_index"])
            row["saturation_flag"] = int(raw["saturation_flag"])
            rows.append(row)
    return rows


def build_manifest(cfg: ExperimentConfig, output_paths) -> RunManifest:
    return RunManifest(
        config=cfg.as_dict(),
        generator_name=GENERATOR_NAME,
        software_version=__version__,
        timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        output_paths=[str(p) for p in output_paths],
        notes={"vs_of_exact_p": VS_NOT_EVALUE_NOTE},
    )


def figure_payload(data: FigureData, manifest: RunManifest | None = None,
                   full_splits: bool = False) -> dict:
    """JSON-ready mirror of the CSV rows plus manifest and optional split dump."""
    datasets = []
    for record in data.records:
        obj = dict(zip(CSV_COLUMNS, record.csv_values()))
        obj["outliers"] = list(record.outliers)
        datasets.append(obj)
    payload = {
        "figure_id": data.figure_id,
        "datasets": datasets,
        "notes": {"vs_of_exact_p": VS_NOT_EVALUE_NOTE},
    }
    if manifest is not None:
        payload["manifest"] = manifest.__dict__
    if full_splits:
        if data.split_records is None:
            raise ValidationError("experiment was run without keep_splits")
        payload["splits"] = [
            [
                {
                    "split_index": s,
                    "selected": o.selected,
                    "a": o.a,
                    "b": o.b,
                    "sigma": o.sigma,
                    "p_value": o.p_value,
                    "e_value": o.e_value,
                    "saturated": o.saturated,
                }
                for s, o in enumerate(outcomes)
            ]
            for outcomes in data.split_records
        ]
    return payload


def emit_json(data: FigureData, path, manifest: RunManifest | None = None,
              full_splits: bool = False) -> None:
    """Write the figure_payload JSON; path may be an open text file."""
    payload = figure_payload(data, manifest=manifest, full_splits=full_splits)
    if hasattr(path, "write"):
        json.dump(payload, path, indent=2)
        path.write("\n")
        return
    try:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write JSON to {path}: {exc}") from exc
