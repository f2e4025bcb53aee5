"""Experiment orchestration: run algorithms over topology corpora,
compute the link-usage metrics (normalization, 10% bins, averages) and
read/write the CSV interchange files.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from .oracles import spt_cost, steiner_kmb
from .simengine import ALGORITHMS, SimEngine, gen_geo_scoped, gen_random
from .topology import Topology, TopologyError, load_edgelist, load_graphml

log = logging.getLogger("geocastlab")

RUN_FIELDS = (
    "graph",
    "algorithm",
    "source",
    "set_id",
    "mode",
    "n_dests",
    "n_nodes",
    "n_edges",
    "links_used",
    "spt_links",
    "steiner_links",
)

BIN_FIELDS = ("algorithm", "bin", "mean_norm_usage", "ci95_half_width", "n_networks")

# oracle columns re-emitted by aggregate() as pseudo-algorithms
ORACLE_SERIES = ("spt", "steiner")


class HarnessError(ValueError):
    pass


@dataclass(frozen=True)
class RunRow:
    graph: str
    algorithm: str
    source: int
    set_id: str
    mode: str
    n_dests: int
    n_nodes: int
    n_edges: int
    links_used: int
    spt_links: int
    steiner_links: int


@dataclass(frozen=True)
class BinRow:
    algorithm: str
    bin: int
    mean_norm_usage: float
    ci95_half_width: float
    n_networks: int


@dataclass
class ExperimentConfig:
    topologies: list[Path]
    algorithms: tuple[str, ...] = ALGORITHMS
    mode: str = "geo"
    cap: int = 200
    seed: int = 0
    min_nodes: int = 0
    max_nodes: int | None = None


def load_topology_file(path: Path) -> Topology:
    data = path.read_bytes()
    if path.suffix.lower() == ".graphml":
        return load_graphml(data, name=path.stem)
    return load_edgelist(data.decode("utf-8"), name=path.stem)


def resolve_topologies(paths) -> list[Path]:
    files: list[Path] = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            files.extend(sorted(q for q in p.iterdir() if q.suffix.lower() in (".graphml", ".edges", ".txt")))
        else:
            files.append(p)
    return files


def run_experiment(config: ExperimentConfig):
    """Yield one RunRow per (graph, algorithm, destination spec)."""
    for algo in config.algorithms:
        if algo not in ALGORITHMS:
            raise HarnessError(f"unknown algorithm {algo!r}")
    if config.mode not in ("geo", "random"):
        raise HarnessError(f"unknown mode {config.mode!r}")

    usable = 0
    for path in resolve_topologies(config.topologies):
        try:
            topology = load_topology_file(path)
        except Exception as exc:  # noqa: BLE001 - per-file isolation
            log.warning("skipping %s: %s", path, exc)
            continue
        if topology.n_nodes < config.min_nodes:
            continue
        if config.max_nodes is not None and topology.n_nodes > config.max_nodes:
            continue
        if config.mode == "geo" and not topology.has_coords():
            log.warning("skipping %s: geo mode needs coordinates", topology.name)
            continue
        usable += 1
        yield from run_topology(topology, config)
    if not usable:
        raise HarnessError("no usable topologies")


def run_topology(topology: Topology, config: ExperimentConfig):
    """Converge routing state once, then simulate every spec/algorithm."""
    engine = SimEngine(topology)
    pathdb = engine.pathdb
    if config.mode == "geo":
        specs = list(gen_geo_scoped(topology))
    else:
        specs = list(gen_random(topology, config.cap, config.seed))
    for spec in specs:
        spt = spt_cost(topology, spec.source, spec.dests, pathdb)
        terminals = set(spec.dests) | {spec.source}
        steiner = steiner_kmb(topology, terminals, pathdb)
        for algo in config.algorithms:
            record = engine.simulate(algo, spec)
            if not record.delivered >= spec.dests:
                raise HarnessError(
                    f"{topology.name}/{algo}: undelivered destinations for {spec.set_id}"
                )
            yield RunRow(
                graph=topology.name,
                algorithm=algo,
                source=spec.source,
                set_id=spec.set_id,
                mode=spec.mode,
                n_dests=len(spec.dests),
                n_nodes=topology.n_nodes,
                n_edges=topology.n_edges,
                links_used=record.link_usage,
                spt_links=spt.links,
                steiner_links=steiner.links,
            )


def dest_bin(n_dests: int, n_nodes: int) -> int:
    """10% bin of the addressable-router fraction, in 1..10."""
    fraction = n_dests / (n_nodes - 1)
    return min(10, max(1, math.ceil(fraction * 10)))


def _mean(values):
    return sum(values) / len(values)


def _ci95_half_width(values) -> float:
    if len(values) < 2:
        return 0.0
    m = _mean(values)
    var = sum((v - m) ** 2 for v in values) / (len(values) - 1)
    return 1.96 * math.sqrt(var / len(values))


def aggregate(rows, min_nodes: int = 10) -> list[BinRow]:
    """Binned normalized usage averaged across networks.

    Normalized usage is links_used / n_edges.  Per-graph per-bin means
    are computed first and then averaged over all graphs with more than
    `min_nodes` nodes; the confidence interval is taken across the graph
    means.  The spt/steiner oracle columns are re-emitted as series of
    their own so baselines can be compared and plotted.
    """
    rows = list(rows)
    if not rows:
        raise HarnessError("no rows to aggregate")
    per_graph: dict[tuple[str, str, int], list[float]] = {}
    seen_specs: set[tuple[str, int, str]] = set()
    eligible_rows = [r for r in rows if r.n_nodes > min_nodes]
    for row in eligible_rows:
        b = dest_bin(row.n_dests, row.n_nodes)
        per_graph.setdefault((row.algorithm, row.graph, b), []).append(row.links_used / row.n_edges)
        spec_key = (row.graph, row.source, row.set_id)
        if spec_key not in seen_specs:
            seen_specs.add(spec_key)
            per_graph.setdefault(("spt", row.graph, b), []).append(row.spt_links / row.n_edges)
            per_graph.setdefault(("steiner", row.graph, b), []).append(row.steiner_links / row.n_edges)
    if not eligible_rows:
        log.warning("aggregate: every graph filtered out by min_nodes=%d", min_nodes)
        return []

    graph_means: dict[tuple[str, int], dict[str, float]] = {}
    for (algo, graph, b), values in per_graph.items():
        graph_means.setdefault((algo, b), {})[graph] = _mean(values)

    out = []
    for (algo, b), by_graph in sorted(graph_means.items()):
        means = [by_graph[g] for g in sorted(by_graph)]
        out.append(BinRow(algo, b, _mean(means), _ci95_half_width(means), len(means)))
    return out


@dataclass
class ComparisonSummary:
    """Paired per-spec usage ratios, aggregated per graph."""

    numerator: str
    denominator: str
    per_graph: list[tuple[str, int, float, float, float, float]] = field(default_factory=list)
    mean: float = 0.0
    sd: float = 0.0
    min: float = 0.0
    max: float = 0.0


def compare_algorithms(rows, numerator: str = "dv4", denominator: str = "path") -> ComparisonSummary:
    """Per-spec usage ratio numerator/denominator, aggregated per graph."""
    num: dict[tuple[str, int, str], RunRow] = {}
    den: dict[tuple[str, int, str], RunRow] = {}
    for row in rows:
        key = (row.graph, row.source, row.set_id)
        if row.algorithm == numerator:
            num[key] = row
        elif row.algorithm == denominator:
            den[key] = row
    if not num or set(num) != set(den):
        raise HarnessError(f"rows do not pair {numerator} with {denominator} per spec")

    by_graph: dict[str, list[float]] = {}
    for key, row in num.items():
        by_graph.setdefault(key[0], []).append(row.links_used / den[key].links_used)

    summary = ComparisonSummary(numerator, denominator)
    graph_means = []
    for graph in sorted(by_graph):
        ratios = by_graph[graph]
        gmean = _mean(ratios)
        graph_means.append(gmean)
        summary.per_graph.append(
            (graph, len(ratios), gmean, _stdev(ratios), min(ratios), max(ratios))
        )
    summary.mean = _mean(graph_means)
    summary.sd = _stdev(graph_means)
    summary.min = min(graph_means)
    summary.max = max(graph_means)
    return summary


def _stdev(values) -> float:
    if len(values) < 2:
        return 0.0
    m = _mean(values)
    return math.sqrt(sum((v - m) ** 2 for v in values) / (len(values) - 1))


def write_runs_csv(rows, out) -> int:
    """Write RunRows sorted into a stable order; returns the row count."""
    rows = sorted(rows, key=lambda r: (r.graph, r.algorithm, r.source, r.set_id))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RUN_FIELDS)
    for r in rows:
        writer.writerow([getattr(r, f) for f in RUN_FIELDS])
    return len(rows)


def read_runs_csv(source) -> list[RunRow]:
    reader = csv.DictReader(source)
    missing = set(RUN_FIELDS) - set(reader.fieldnames or ())
    if missing:
        raise HarnessError(f"runs csv is missing columns: {sorted(missing)}")
    out = []
    for rec in reader:
        out.append(
            RunRow(
                graph=rec["graph"],
                algorithm=rec["algorithm"],
                source=int(rec["source"]),
                set_id=rec["set_id"],
                mode=rec["mode"],
                n_dests=int(rec["n_dests"]),
                n_nodes=int(rec["n_nodes"]),
                n_edges=int(rec["n_edges"]),
                links_used=int(rec["links_used"]),
                spt_links=int(rec["spt_links"]),
                steiner_links=int(rec["steiner_links"]),
            )
        )
    return out


def write_bins_csv(bins, out) -> int:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BIN_FIELDS)
    for b in sorted(bins, key=lambda b: (b.algorithm, b.bin)):
        writer.writerow([b.algorithm, b.bin, f"{b.mean_norm_usage:.6f}", f"{b.ci95_half_width:.6f}", b.n_networks])
    return len(bins)


def write_compare_csv(summary: ComparisonSummary, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("graph", "n_pairs", "mean_ratio", "sd_ratio", "min_ratio", "max_ratio"))
    for graph, n, gmean, sd, lo, hi in summary.per_graph:
        writer.writerow((graph, n, f"{gmean:.6f}", f"{sd:.6f}", f"{lo:.6f}", f"{hi:.6f}"))
    writer.writerow(
        ("ALL", len(summary.per_graph), f"{summary.mean:.6f}", f"{summary.sd:.6f}",
         f"{summary.min:.6f}", f"{summary.max:.6f}")
    )
