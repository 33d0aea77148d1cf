"""Data-splitting hypothesis tests with p-values and averaged e-values.

Library layout:

* numerics    -- normal pdf/cdf/quantile and adaptive quadrature
* power       -- effective power of the split and exact procedures
* simulation  -- seeded datasets, random splits, p-/e-values per split
* calibration -- p-to-e calibrators, inverse, Jeffreys verdicts
* runner      -- experiment orchestration, CSV/JSON emission, ECDF
* plots       -- SVG figures (boxplots and calibrated series)
* cli         -- the coxsplit command-line interface
"""

__version__ = "0.1.0"

from .calibration import (
    JEFFREYS_ANCHORS,
    SHAFER,
    VS_BOUND,
    VS_NOT_EVALUE_NOTE,
    CalibratorKind,
    SignificanceVerdict,
    calibrate,
    e_to_p,
    epsilon_calibrator,
    jeffreys_verdict,
    shafer_inverse,
    vs_is_supremum,
)
from .errors import (
    CoxSplitError,
    InfeasibilityError,
    NumericalError,
    ValidationError,
)
from .numerics import (
    QuadratureSpec,
    integrate,
    normal_cdf,
    normal_pdf,
    normal_quantile,
)
from .power import (
    PowerCell,
    PowerQuery,
    alpha_single_from_family,
    exact_power,
    format_power,
    power_table,
    split_power,
)
from .runner import (
    CSV_COLUMNS,
    DatasetSummary,
    FigureData,
    FiveNumberSummary,
    RunManifest,
    build_manifest,
    emit_csv,
    emit_json,
    figure_id_for,
    pvalue_ecdf,
    read_figure_csv,
    run_experiment,
)
from .simulation import (
    DEFAULT_SEED,
    EXPONENT_CLAMP,
    GENERATOR_NAME,
    Dataset,
    ExperimentConfig,
    SplitAssignment,
    SplitOutcome,
    average_evalues,
    data_split_pvalue,
    enumerate_all_splits,
    evaluate_split,
    evalue,
    exact_pvalue,
    generate_dataset,
    log_evalue,
    random_split,
)

__all__ = [
    "__version__",
    # errors
    "CoxSplitError", "ValidationError", "InfeasibilityError", "NumericalError",
    # numerics
    "QuadratureSpec", "integrate", "normal_cdf", "normal_pdf", "normal_quantile",
    # power
    "PowerQuery", "PowerCell", "split_power", "exact_power",
    "alpha_single_from_family", "power_table", "format_power",
    # simulation
    "DEFAULT_SEED", "EXPONENT_CLAMP", "GENERATOR_NAME",
    "ExperimentConfig", "Dataset", "SplitAssignment", "SplitOutcome",
    "generate_dataset", "random_split", "data_split_pvalue", "exact_pvalue",
    "evalue", "log_evalue", "evaluate_split", "average_evalues",
    "enumerate_all_splits",
    # calibration
    "CalibratorKind", "SignificanceVerdict", "SHAFER", "VS_BOUND",
    "VS_NOT_EVALUE_NOTE", "JEFFREYS_ANCHORS", "calibrate", "shafer_inverse",
    "e_to_p", "jeffreys_verdict", "epsilon_calibrator", "vs_is_supremum",
    # runner
    "CSV_COLUMNS", "FigureData", "DatasetSummary", "FiveNumberSummary",
    "RunManifest", "run_experiment", "pvalue_ecdf", "emit_csv", "emit_json",
    "read_figure_csv", "build_manifest", "figure_id_for",
]
