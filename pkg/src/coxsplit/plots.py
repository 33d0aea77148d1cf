"""Static SVG figures rendered with matplotlib.

Two layouts mirror the classical report figures:

* p-domain: one boxplot per dataset of its split p-values, a blue line for
  the exact p-values, and an orange line projecting the average e-values
  into the p-domain through Shafer's inverse;
* e-domain (log scale): a blue line for Shafer-calibrated exact p-values,
  an orange line for the average e-values, and optionally a green line for
  the VS bound of the exact p-values (an envelope, not a valid e-value).

Every plotted artist carries a stable SVG id (gid) -- box-<i>,
series-exact-p, series-avg-e, series-vs, series-ecdf -- so emitted files
can be inspected structurally.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .calibration import VS_NOT_EVALUE_NOTE
from .errors import ValidationError
from .runner import FigureData

__all__ = ["emit_ecdf_svg", "emit_svg"]

_BLUE = "tab:blue"
_ORANGE = "tab:orange"
_GREEN = "tab:green"


def _finish(fig, path):
    try:
        fig.savefig(path, format="svg")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc
    finally:
        plt.close(fig)


def emit_svg(data: FigureData, path, domain: str = "p", show_vs: bool = False) -> None:
    """Render the experiment summaries to an SVG file.

    domain "p" draws the boxplot layout, domain "e" the calibrated-series
    layout; show_vs adds the VS envelope in the e-domain.
    """
    if domain not in ("p", "e"):
        raise ValidationError(f"domain must be 'p' or 'e', got {domain!r}")
    records = data.records
    positions = [r.dataset_index + 1 for r in records]
    cfg = data.config
    title = f"m={cfg.m}, delta={cfg.delta:g}, p={cfg.split_fraction:g}, r={cfg.r}"

    fig, ax = plt.subplots(figsize=(8, 5))
    if domain == "p":
        stats = [
            {
                "med": r.box.median,
                "q1": r.box.q1,
                "q3": r.box.q3,
                "whislo": r.box.low,
                "whishi": r.box.high,
                "fliers": list(r.outliers),
                "label": str(r.dataset_index),
            }
            for r in records
        ]
        artists = ax.bxp(stats, positions=positions, showfliers=True)
        for i, box in enumerate(artists["boxes"]):
            box.set_gid(f"box-{records[i].dataset_index}")
        ax.plot(positions, [r.exact_p for r in records], color=_BLUE,
                marker="o", gid="series-exact-p", label="exact p-value")
        ax.plot(positions, [r.sinv_of_avg_e for r in records], color=_ORANGE,
                marker="o", gid="series-avg-e", label="average e-value (p-domain)")
        ax.set_ylabel("p-value")
    else:
        ax.plot(positions, [r.shafer_e_of_exact_p for r in records], color=_BLUE,
                marker="o", gid="series-exact-p", label="calibrated exact p-value")
        ax.plot(positions, [r.avg_e for r in records], color=_ORANGE,
                marker="o", gid="series-avg-e", label="average e-value")
        if show_vs:
            ax.plot(positions, [r.vs_of_exact_p for r in records], color=_GREEN,
                    marker="o", gid="series-vs",
                    label="VS bound (not a valid e-value)")
            fig.text(0.01, 0.01, VS_NOT_EVALUE_NOTE, fontsize=6, color="gray")
        ax.set_yscale("log")
        ax.set_ylabel("e-value")
    ax.set_xlabel("dataset")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    _finish(fig, path)


def emit_ecdf_svg(points, path, title: str = "empirical CDF of exact p-values") -> None:
    """Step plot of (alpha, F(alpha)) pairs from pvalue_ecdf."""
    if not points:
        raise ValidationError("no ECDF points to plot")
    alphas = [a for a, _ in points]
    values = [f for _, f in points]
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.step(alphas, values, where="post", color=_BLUE, gid="series-ecdf")
    ax.set_xlabel("test size")
    ax.set_ylabel("fraction of p-values below size")
    ax.set_title(title)
    _finish(fig, path)
