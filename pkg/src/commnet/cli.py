"""Command-line surface: load -> project -> metrics -> fit -> report.

Subcommands
-----------
stats    topology profile of one edge list (JSON + histogram CSVs)
project  overlap projection of a cover (weighted edge list + census)
fit      ranked distribution fits for a sample or histogram file
report   full paired base-vs-projected analysis with figure data

Exit codes: 0 success, 1 computation error, 2 input/usage error.  All
outputs of a run are written only after the computation has succeeded,
so a failing run leaves no partial files behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .cover import CoverParseError, load_cover
from .distfit import FitError, WeightedSample
from .graph import (
    EdgeListError,
    GraphInvariantError,
    connected_components,
    extract_giant,
    load_edge_list,
    write_edge_list,
)
from .metrics import MetricError
from .project import component_census, project
from .report import (
    SCHEMA_VERSION,
    ReportConfig,
    build_report,
    figure_csv_lines,
    fit_table,
    fit_table_csv_lines,
    network_section,
    report_json,
)
from .svg import write_report_figures

_DEFAULT_THREADS = min(8, os.cpu_count() or 1)


class InputError(ValueError):
    """Malformed or insufficient user input (exit code 2)."""


# --------------------------------------------------------------------------
# output staging: compute everything, then write atomically-ish


def _write_outputs(outputs: dict[Path, str]) -> None:
    """Write all staged files; on failure remove what was written."""
    written: list[Path] = []
    try:
        for path, text in outputs.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
            written.append(path)
    except OSError:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        raise


def _config_from_args(args) -> ReportConfig:
    sources = None if getattr(args, "exact_hops", False) \
        else args.sample_sources
    return ReportConfig(
        threshold=getattr(args, "threshold", 1),
        sample_sources=sources,
        seed=args.seed,
        threads=args.threads,
        scan_powerlaw=not getattr(args, "no_scan", False),
    )


def _provenance(**paths) -> dict:
    from datetime import datetime, timezone

    prov = {"tool_version": __version__,
            "generated_at": datetime.now(timezone.utc).isoformat(
                timespec="seconds")}
    prov.update(paths)
    return prov


# --------------------------------------------------------------------------
# stats


def cmd_stats(args) -> int:
    g, load = load_edge_list(args.graph)
    config = _config_from_args(args)
    label = args.label or Path(args.graph).stem

    labeling = connected_components(g)
    giant, _ = extract_giant(g, labeling)
    section = network_section(giant, label, config)
    section["giant"] = {
        "nodes": giant.node_count,
        "links": giant.edge_count,
        "node_fraction_of_input": giant.node_count / g.node_count,
    }
    fragment = {
        "schema_version": SCHEMA_VERSION,
        "dataset": label,
        "config": config.to_dict(),
        "load": {"graph": load.to_dict()},
        "base": section,
        "provenance": _provenance(graph_path=str(args.graph),
                                  seed=config.seed),
    }

    out = Path(args.out)
    outputs = {out / "stats.json": report_json(fragment)}

    hist = section["histograms"]["degree"]
    lines = ["degree,count\n"] + [
        f"{k},{hist[k]}\n" for k in sorted(hist, key=int)]
    outputs[out / "degree.csv"] = "".join(lines)

    curve = section["histograms"]["clustering_by_degree"]
    lines = ["degree,avg_clustering,node_count\n"] + [
        f"{k},{curve[k][0]!r},{curve[k][1]}\n"
        for k in sorted(curve, key=int)]
    outputs[out / "clustering_by_degree.csv"] = "".join(lines)

    if section["hop"] is not None:
        hop = section["hop"]
        lines = ["distance,pair_count,cdf\n"] + [
            f"{d},{hop['pair_counts'][d]!r},{hop['cumulative'][d]!r}\n"
            for d in sorted(hop["pair_counts"], key=int)]
        outputs[out / "hop_distance.csv"] = "".join(lines)

    _write_outputs(outputs)
    print(f"wrote {len(outputs)} files to {out}")
    return 0


# --------------------------------------------------------------------------
# project


def cmd_project(args) -> int:
    g, _ = load_edge_list(args.graph)
    cover, cover_summary = load_cover(args.cover, g)
    pg = project(cover, threshold=args.threshold)
    census = component_census(pg)

    out = Path(args.out)
    import io

    buf = io.StringIO()
    write_edge_list(pg.graph, buf, weights=pg.edge_weights)
    census_doc = {
        "schema_version": SCHEMA_VERSION,
        "threshold": pg.threshold,
        "max_membership": pg.max_membership,
        "communities": cover.community_count,
        "links": pg.graph.edge_count,
        "census": census.to_dict(),
        "cover": cover_summary.to_dict(),
        "provenance": _provenance(graph_path=str(args.graph),
                                  cover_path=str(args.cover)),
    }
    outputs = {
        out / "projected_edges.txt": buf.getvalue(),
        out / "census.json": report_json(census_doc),
    }
    _write_outputs(outputs)
    print(f"projected {cover.community_count} communities -> "
          f"{pg.graph.edge_count} links; wrote {len(outputs)} files to {out}")
    return 0


# --------------------------------------------------------------------------
# fit


def _read_fit_input(path, kind: str) -> WeightedSample:
    """Parse a raw-sample or histogram file into a weighted sample.

    ``kind`` is ``values``, ``histogram``, or ``auto``.  Histogram files
    are CSV with an optional header and rows ``value,count``; raw files
    hold whitespace-separated numbers, ``#`` starts a comment.
    """
    text = Path(path).read_text()
    rows: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rows.append(line.replace(",", " ").split())
    if not rows:
        raise InputError(f"{path}: no data rows")

    if kind == "auto":
        first_data = rows[0]
        has_header = not _is_number(first_data[0])
        body = rows[1:] if has_header else rows
        kind = "histogram" if (body and all(len(r) == 2 for r in body)
                               and ("," in text.splitlines()[0] or
                                    has_header)) else "values"
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    if not rows:
        raise InputError(f"{path}: no numeric rows")

    try:
        if kind == "histogram":
            if any(len(r) != 2 for r in rows):
                raise InputError(
                    f"{path}: histogram rows must be value,count")
            values = [float(r[0]) for r in rows]
            counts = [float(r[1]) for r in rows]
            return WeightedSample.from_counts(values, counts)
        values = [float(tok) for r in rows for tok in r]
        return WeightedSample.from_values(values)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def cmd_fit(args) -> int:
    sample = _read_fit_input(args.input, args.kind)
    if sample.total < 5:
        raise InputError(
            f"need at least 5 samples, got {sample.total:g}")
    table = fit_table(sample)
    label = Path(args.input).stem
    doc = {
        "schema_version": SCHEMA_VERSION,
        "input": str(args.input),
        "fits": {label: table},
        "provenance": _provenance(input_path=str(args.input)),
    }
    csv_text = "".join(fit_table_csv_lines({label: table}))
    if args.out is None:
        if args.format == "csv":
            sys.stdout.write(csv_text)
        else:
            sys.stdout.write(report_json(doc))
        return 0
    out = Path(args.out)
    outputs = {out / "fit.json": report_json(doc)}
    if args.format == "csv":
        outputs[out / "fit.csv"] = csv_text
    _write_outputs(outputs)
    print(f"wrote {len(outputs)} files to {out}")
    return 0


# --------------------------------------------------------------------------
# report


def cmd_report(args) -> int:
    g, load = load_edge_list(args.graph)
    cover, cover_summary = load_cover(args.cover, g)
    config = _config_from_args(args)
    label = args.label or Path(args.graph).stem

    report = build_report(g, load, cover, cover_summary, config=config,
                          dataset_label=label,
                          graph_path=str(args.graph),
                          cover_path=str(args.cover))

    out = Path(args.out)
    outputs = {out / "report.json": report_json(report)}
    for name, lines in figure_csv_lines(report).items():
        outputs[out / name] = "".join(lines)

    tables = {
        f"{label}_degree": report["base"]["fits"]["degree"],
        f"{label}*_degree": report["projected"]["fits"]["degree"],
        f"{label}_clustering_by_degree":
            report["base"]["fits"]["clustering_by_degree"],
        f"{label}*_clustering_by_degree":
            report["projected"]["fits"]["clustering_by_degree"],
        f"{label}_hop": report["base"]["fits"]["hop"],
        f"{label}*_hop": report["projected"]["fits"]["hop"],
        "membership": report["cover"]["fits"]["membership"],
        "overlap_size": report["cover"]["fits"]["overlap_size"],
        "community_size": report["cover"]["fits"]["community_size"],
        "community_degree":
            report["projection"]["fits"]["community_degree"],
    }
    outputs[out / "fit_tables.csv"] = "".join(fit_table_csv_lines(tables))

    _write_outputs(outputs)
    if args.svg:
        write_report_figures(report, out / "figures")
    print(f"wrote report and {len(outputs) - 1} data files to {out}")
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commnet",
        description="Topology analysis of networks and the overlapping "
                    "community networks projected from their covers.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sampling(p):
        p.add_argument("--sample-sources", type=int, default=3000,
                       metavar="N",
                       help="BFS sources for sampled hop distances "
                            "(default 3000; capped at the node count)")
        p.add_argument("--exact-hops", action="store_true",
                       help="exact hop distribution (BFS from every node)")
        p.add_argument("--seed", type=int, default=0,
                       help="PRNG seed for source sampling (default 0)")
        p.add_argument("--threads", type=int, default=_DEFAULT_THREADS,
                       help="worker threads for BFS sweeps "
                            f"(default {_DEFAULT_THREADS})")
        p.add_argument("--no-scan", action="store_true",
                       help="skip the power-law cutoff scan sidecar")

    p = sub.add_parser("stats", help="topology profile of one edge list")
    p.add_argument("graph", help="edge list file (optionally .gz)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--label", default=None, help="dataset label")
    add_sampling(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("project",
                       help="project a cover onto its community network")
    p.add_argument("graph", help="edge list file")
    p.add_argument("cover", help="community file (one community per line)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--threshold", type=int, default=1,
                   help="minimum shared members for a link (default 1)")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("fit", help="ranked distribution fits for a sample")
    p.add_argument("input",
                   help="raw sample file or value,count histogram CSV")
    p.add_argument("--kind", choices=("auto", "values", "histogram"),
                   default="auto", help="input interpretation")
    p.add_argument("--out", default=None,
                   help="output directory (default: print to stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="output format (default json)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("report",
                       help="full base-vs-projected analysis report")
    p.add_argument("graph", help="edge list file")
    p.add_argument("cover", help="community file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--label", default=None, help="dataset label")
    p.add_argument("--threshold", type=int, default=1,
                   help="minimum shared members for a link (default 1)")
    p.add_argument("--svg", action="store_true",
                   help="also write log-log scatter SVGs")
    add_sampling(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "sample_sources", 1) < 1:
        parser.error("--sample-sources must be >= 1")
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be >= 1")
    if getattr(args, "threshold", 1) < 1:
        parser.error("--threshold must be >= 1")
    try:
        return args.func(args)
    except (EdgeListError, CoverParseError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MetricError, FitError, GraphInvariantError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
