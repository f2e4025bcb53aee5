"""Render geocastlab CSV results into the four standard figure kinds.

lines    binned mean normalized usage per algorithm with 95% bars
box      per-algorithm distribution of normalized usage
scatter  links used per destination count, intensity by occurrence,
         with the mean overlaid
degree   per-graph mean normalized usage against average node degree
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

KINDS = ("lines", "box", "scatter", "degree")

RUNS_COLUMNS = [
    "graph", "algorithm", "source", "set_id", "mode", "n_dests",
    "n_nodes", "n_edges", "links_used", "spt_links", "steiner_links",
]
BINS_COLUMNS = ["algorithm", "bin", "mean_norm_usage", "ci95_half_width", "n_networks"]

# drawing order and styles follow the usual presentation: solid lines for
# the algorithms, dashed shortest path tree, dotted Steiner heuristic
SERIES_STYLE = {
    "flood": dict(color="tab:gray", linestyle="-"),
    "dv1": dict(color="tab:red", linestyle="-"),
    "dv2": dict(color="tab:orange", linestyle="-"),
    "dv3": dict(color="tab:olive", linestyle="-"),
    "dv4": dict(color="tab:green", linestyle="-"),
    "path": dict(color="tab:blue", linestyle="-"),
    "spt": dict(color="tab:cyan", linestyle="--"),
    "steiner": dict(color="black", linestyle=":"),
}

X_LABEL = "normalized number of destinations"
Y_LABEL = "normalized link usage"


class SchemaError(ValueError):
    """Input CSV does not match the harness schema."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    input: Path
    output: Path

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}")


def _load(path: Path, columns: list[str]) -> pd.DataFrame:
    frame = pd.read_csv(path)
    for column in columns:
        if column not in frame.columns:
            raise SchemaError(f"{path}: missing column {column!r}")
    return frame


def _algorithm_order(names) -> list[str]:
    known = [a for a in SERIES_STYLE if a in names]
    return known + sorted(set(names) - set(known))


def lines_series(frame: pd.DataFrame) -> dict[str, pd.DataFrame]:
    """Per-algorithm bin table exactly as plotted, keyed by algorithm."""
    out = {}
    for algorithm in _algorithm_order(frame["algorithm"].unique()):
        rows = frame[frame["algorithm"] == algorithm].sort_values("bin")
        out[algorithm] = rows
    return out


def _norm_usage(frame: pd.DataFrame) -> pd.Series:
    return frame["links_used"] / frame["n_edges"]


def render(spec: FigureSpec) -> Path:
    """Write one figure; returns the output path."""
    if spec.kind == "lines":
        frame = _load(spec.input, BINS_COLUMNS)
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for algorithm, rows in lines_series(frame).items():
            style = SERIES_STYLE.get(algorithm, {})
            ax.errorbar(rows["bin"] / 10.0, rows["mean_norm_usage"],
                        yerr=rows["ci95_half_width"], capsize=2, label=algorithm, **style)
        ax.set_xlabel(X_LABEL)
        ax.set_ylabel(Y_LABEL)
        ax.legend(fontsize=8)
    elif spec.kind == "box":
        frame = _load(spec.input, RUNS_COLUMNS)
        frame = frame.assign(norm=_norm_usage(frame))
        order = _algorithm_order(frame["algorithm"].unique()) + ["spt", "steiner"]
        data, labels = [], []
        for algorithm in order:
            if algorithm == "spt":
                values = frame.drop_duplicates(["graph", "source", "set_id"])
                series = values["spt_links"] / values["n_edges"]
            elif algorithm == "steiner":
                values = frame.drop_duplicates(["graph", "source", "set_id"])
                series = values["steiner_links"] / values["n_edges"]
            else:
                series = frame.loc[frame["algorithm"] == algorithm, "norm"]
            if len(series):
                data.append(series.to_numpy())
                labels.append(algorithm)
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        ax.boxplot(data, tick_labels=labels)
        ax.set_ylabel(Y_LABEL)
    elif spec.kind == "scatter":
        frame = _load(spec.input, RUNS_COLUMNS)
        counts = frame.groupby(["n_dests", "links_used"]).size().reset_index(name="count")
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        ax.scatter(counts["n_dests"], counts["links_used"],
                   c=counts["count"], cmap="Blues", s=28, edgecolors="none")
        means = frame.groupby("n_dests")["links_used"].mean().sort_index()
        ax.plot(means.index, means.to_numpy(), color="red", label="mean")
        ax.set_xlabel("number of destinations")
        ax.set_ylabel("links used")
        ax.legend(fontsize=8)
    else:  # degree
        frame = _load(spec.input, RUNS_COLUMNS)
        frame = frame.assign(norm=_norm_usage(frame),
                             degree=2.0 * frame["n_edges"] / frame["n_nodes"])
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for algorithm in _algorithm_order(frame["algorithm"].unique()):
            rows = frame[frame["algorithm"] == algorithm]
            per_graph = rows.groupby("graph").agg(norm=("norm", "mean"), degree=("degree", "first"))
            style = SERIES_STYLE.get(algorithm, {})
            ax.scatter(per_graph["degree"], per_graph["norm"], s=30,
                       label=algorithm, color=style.get("color"))
        ax.set_xlabel("average node degree")
        ax.set_ylabel(Y_LABEL)
        ax.legend(fontsize=8)

    fig.tight_layout()
    # no timestamps so rendering the same inputs is reproducible
    fig.savefig(spec.output, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return spec.output
