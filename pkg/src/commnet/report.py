"""Assembly of the paired-network analysis report.

A report compares a base graph with the overlapping-community network
projected from its ground-truth cover: global topology scalars, the full
set of histograms (degree, clustering-by-degree, hop distances,
membership, overlap size, community size, community degree), and a
ranked distribution-fit table per histogram.

Everything outside the ``provenance`` block is a pure function of the
inputs and the recorded configuration, so two runs with identical inputs
and seeds serialize to byte-identical JSON once provenance is stripped.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .cover import (
    CommunityCover,
    CoverSummary,
    IntegerHistogram,
    community_size_histogram,
    membership_histogram,
    overlap_size_histogram,
)
from .distfit import FAMILIES, WeightedSample, fit_all, powerlaw_xmin_scan
from .graph import (
    Graph,
    LoadSummary,
    connected_components,
    density,
    density_directed_convention,
    extract_giant,
)
from .metrics import (
    RNG_ALGORITHM,
    clustering_by_degree,
    global_summary,
    hop_distribution,
)
from .project import community_degree_histogram, component_census, project

SCHEMA_VERSION = 1
FIT_MIN_SAMPLES = 5
DEFAULT_SAMPLE_SOURCES = 3000

FIGURE_FILES = (
    "fig1_degree.csv",
    "fig2_clustering_by_degree.csv",
    "fig3_hop_distance.csv",
    "fig4_membership.csv",
    "fig5_overlap_size.csv",
    "fig6_community_degree.csv",
)


@dataclass(frozen=True)
class ReportConfig:
    """Reproducibility-relevant knobs of a report run.

    Hop distributions are exact (BFS from every node) when
    ``sample_sources`` is None or at least the node count; otherwise they
    are estimated from ``sample_sources`` distinct sources drawn with the
    pinned generator.  The exact diameter is always computed.
    """

    threshold: int = 1
    sample_sources: int | None = DEFAULT_SAMPLE_SOURCES
    seed: int = 0
    threads: int = 1
    scan_powerlaw: bool = True

    def to_dict(self) -> dict:
        out = asdict(self)
        out["rng_algorithm"] = RNG_ALGORITHM
        return out


# --------------------------------------------------------------------------
# fit tables


def fit_table(samples) -> dict:
    """Rank all families on ``samples``; tolerate too-small samples.

    Returns ``{"sample_size", "results", "error"}`` where ``results`` is
    the ranked list of per-family dicts (inapplicable families carry an
    ``error`` message in place of a KS value).  ``samples`` may be None,
    which yields an empty table.
    """
    if samples is None:
        return {"sample_size": 0.0, "results": [], "error": "empty sample"}
    try:
        results = fit_all(samples)
    except ValueError as exc:
        return {"sample_size": 0.0, "results": [], "error": str(exc)}
    return {
        "sample_size": results[0].sample_size,
        "results": [r.to_dict() for r in results],
        "error": None,
    }


def _sample_from_hist(bins: dict[int, float]) -> WeightedSample | None:
    try:
        return WeightedSample.from_counts(list(bins),
                                          [bins[k] for k in bins])
    except ValueError:
        return None


def _sample_from_values(values) -> WeightedSample | None:
    try:
        return WeightedSample.from_values(values)
    except ValueError:
        return None


def _scan_sidecar(samples) -> dict | None:
    """KS-minimizing power-law cutoff scan, or None when inapplicable."""
    if samples is None:
        return None
    try:
        scan = powerlaw_xmin_scan(samples)
    except ValueError:
        return None
    return asdict(scan)


def _histogram_dict(hist: IntegerHistogram) -> dict[str, int]:
    return {str(k): int(hist.bins[k]) for k in sorted(hist.bins)}


# --------------------------------------------------------------------------
# per-network analysis


def network_section(g: Graph, label: str, config: ReportConfig) -> dict:
    """Full topology profile of one (connected) graph.

    Emits the degree histogram, clustering-by-degree curve, hop pmf/cdf,
    the scalar summary, and ranked fit tables for each of the three
    distributions.  The clustering-by-degree fit treats the per-degree
    mean values as an unweighted sample; the hop fit uses the pairwise
    distance multiset.
    """
    n = g.node_count
    degree_hist = IntegerHistogram.from_values(g.degrees) if n else \
        IntegerHistogram({})
    degree_sample = _sample_from_hist(degree_hist.bins)

    if n < 2 or g.edge_count == 0:
        # single-node (or edgeless) giant: distances and clustering are
        # undefined, report structure is preserved with empty slots
        section = {
            "label": label,
            "nodes": n,
            "links": g.edge_count,
            "density": density(g) if n >= 2 else None,
            "density_directed_convention":
                density_directed_convention(g) if n >= 2 else None,
            "global": None,
            "hop": None,
            "histograms": {
                "degree": _histogram_dict(degree_hist),
                "clustering_by_degree": {},
            },
            "fits": {
                "degree": fit_table(degree_sample),
                "clustering_by_degree": fit_table(None),
                "hop": fit_table(None),
            },
        }
        if config.scan_powerlaw:
            section["powerlaw_scan"] = {"degree": None}
        return section

    if config.sample_sources is None or config.sample_sources >= n:
        hop = hop_distribution(g, threads=config.threads)
    else:
        hop = hop_distribution(g, sources=config.sample_sources,
                               seed=config.seed, threads=config.threads)
    summary = global_summary(g, hop)
    cbd = clustering_by_degree(g)

    cbd_sample = _sample_from_values(
        [cbd.per_degree[k] for k in sorted(cbd.per_degree)])
    hop_sample = _sample_from_hist(hop.pair_counts)

    section = {
        "label": label,
        "nodes": g.node_count,
        "links": g.edge_count,
        "density": density(g),
        "density_directed_convention": density_directed_convention(g),
        "global": summary.to_dict(),
        "hop": hop.to_dict(),
        "histograms": {
            "degree": _histogram_dict(degree_hist),
            "clustering_by_degree": {
                str(k): [cbd.per_degree[k], cbd.eligible_node_count[k]]
                for k in sorted(cbd.per_degree)
            },
        },
        "fits": {
            "degree": fit_table(degree_sample),
            "clustering_by_degree": fit_table(cbd_sample),
            "hop": fit_table(hop_sample),
        },
    }
    if config.scan_powerlaw:
        section["powerlaw_scan"] = {"degree": _scan_sidecar(degree_sample)}
    return section


# --------------------------------------------------------------------------
# full report


def build_report(
    g: Graph,
    load: LoadSummary,
    cover: CommunityCover,
    cover_summary: CoverSummary,
    *,
    config: ReportConfig | None = None,
    dataset_label: str = "base",
    graph_path: str | None = None,
    cover_path: str | None = None,
) -> dict:
    """Run the full base-vs-projected pipeline and assemble the report.

    Giant components of both the base graph and the projected
    community network are profiled; the component census describes the
    full projected graph (isolated communities included).
    """
    config = config or ReportConfig()
    t0 = time.perf_counter()

    base_labeling = connected_components(g)
    base_giant, _ = extract_giant(g, base_labeling)
    base = network_section(base_giant, dataset_label, config)
    base["giant"] = {
        "nodes": base_giant.node_count,
        "links": base_giant.edge_count,
        "node_fraction_of_input": base_giant.node_count / g.node_count,
    }

    pg = project(cover, threshold=config.threshold)
    census = component_census(pg)
    comm_degree_hist = community_degree_histogram(pg)
    proj_giant, _ = extract_giant(pg.graph)
    projected = network_section(proj_giant, dataset_label + "*", config)
    projected["giant"] = {
        "nodes": proj_giant.node_count,
        "links": proj_giant.edge_count,
        "node_fraction_of_input":
            proj_giant.node_count / pg.graph.node_count,
    }

    membership = membership_histogram(cover)
    overlap = overlap_size_histogram(cover)
    comm_size = community_size_histogram(cover)
    # community-degree fits exclude isolated communities (degree 0);
    # the histogram itself keeps them.
    positive_degrees = {k: c for k, c in comm_degree_hist.bins.items() if k > 0}

    report = {
        "schema_version": SCHEMA_VERSION,
        "dataset": dataset_label,
        "config": config.to_dict(),
        "load": {
            "graph": load.to_dict(),
            "cover": cover_summary.to_dict(),
        },
        "base": base,
        "projected": projected,
        "projection": {
            "threshold": pg.threshold,
            "max_membership": pg.max_membership,
            "census": census.to_dict(),
            "histograms": {
                "community_degree": _histogram_dict(comm_degree_hist),
            },
            "fits": {
                "community_degree": fit_table(
                    _sample_from_hist(positive_degrees)),
            },
        },
        "cover": {
            "summary": cover_summary.to_dict(),
            "histograms": {
                "membership": _histogram_dict(membership),
                "overlap_size": _histogram_dict(overlap),
                "community_size": _histogram_dict(comm_size),
            },
            "fits": {
                "membership": fit_table(membership),
                "overlap_size": fit_table(overlap),
                "community_size": fit_table(comm_size),
            },
        },
        "provenance": {
            "graph_path": graph_path,
            "cover_path": cover_path,
            "seed": config.seed,
            "tool_version": __version__,
            "generated_at": datetime.now(timezone.utc).isoformat(
                timespec="seconds"),
            "wall_clock_seconds": None,  # patched below
        },
    }
    report["provenance"]["wall_clock_seconds"] = time.perf_counter() - t0
    return report


def report_json(report: dict) -> str:
    """Canonical serialization: sorted keys, two-space indent."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def write_report(report: dict, path) -> Path:
    path = Path(path)
    path.write_text(report_json(report))
    return path


def strip_provenance(report: dict) -> dict:
    """Copy of the report without the run-specific provenance block."""
    return {k: v for k, v in report.items() if k != "provenance"}


# --------------------------------------------------------------------------
# figure data


def _sorted_items(hist: dict[str, object]):
    return [(int(k), hist[k]) for k in sorted(hist, key=int)]


def figure_csv_lines(report: dict) -> dict[str, list[str]]:
    """CSV payloads for the six figure data files, keyed by file name."""
    out: dict[str, list[str]] = {}

    lines = ["network,degree,count\n"]
    for section in ("base", "projected"):
        label = report[section]["label"]
        for k, c in _sorted_items(report[section]["histograms"]["degree"]):
            lines.append(f"{label},{k},{c}\n")
    out["fig1_degree.csv"] = lines

    lines = ["network,degree,avg_clustering,node_count\n"]
    for section in ("base", "projected"):
        label = report[section]["label"]
        curve = report[section]["histograms"]["clustering_by_degree"]
        for k, (mean, count) in _sorted_items(curve):
            lines.append(f"{label},{k},{mean!r},{count}\n")
    out["fig2_clustering_by_degree.csv"] = lines

    lines = ["network,distance,pair_count,cdf\n"]
    for section in ("base", "projected"):
        label = report[section]["label"]
        hop = report[section]["hop"]
        for d, c in _sorted_items(hop["pair_counts"]):
            cdf = hop["cumulative"][str(d)]
            lines.append(f"{label},{d},{c!r},{cdf!r}\n")
    out["fig3_hop_distance.csv"] = lines

    singles = (
        ("fig4_membership.csv", "membership",
         report["cover"]["histograms"]["membership"]),
        ("fig5_overlap_size.csv", "overlap_size",
         report["cover"]["histograms"]["overlap_size"]),
        ("fig6_community_degree.csv", "degree",
         report["projection"]["histograms"]["community_degree"]),
    )
    for name, column, hist in singles:
        lines = [f"{column},count\n"]
        for k, c in _sorted_items(hist):
            lines.append(f"{k},{c}\n")
        out[name] = lines
    return out


def write_figures(report: dict, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, lines in figure_csv_lines(report).items():
        path = out_dir / name
        path.write_text("".join(lines))
        written.append(path)
    return written


# --------------------------------------------------------------------------
# fit-table CSV (two-decimal KS columns, one row per histogram)


def fit_table_csv_lines(tables: dict[str, dict]) -> list[str]:
    """Rows of two-decimal KS values, one column per family.

    ``tables`` maps a row label to a ``fit_table`` result.  Families that
    were inapplicable print as empty cells.
    """
    header = "sample," + ",".join(f.abbreviation for f in FAMILIES) + "\n"
    lines = [header]
    for label, table in tables.items():
        by_family = {r["family"]: r for r in table["results"]}
        cells = []
        for fam in FAMILIES:
            r = by_family.get(fam.value)
            if r is None or r["ks"] is None:
                cells.append("")
            else:
                cells.append(f"{r['ks']:.2f}")
        lines.append(f"{label}," + ",".join(cells) + "\n")
    return lines
