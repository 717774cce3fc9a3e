"""Minimal SVG log-log scatter writer.

Figure CSVs are the primary artifact; these plots are a zero-dependency
convenience for eyeballing distributions.  Only strictly positive points
can appear on log-log axes, so non-positive coordinates are dropped.
"""

from __future__ import annotations

import math
from pathlib import Path

_MARGIN_LEFT = 56
_MARGIN_RIGHT = 16
_MARGIN_TOP = 28
_MARGIN_BOTTOM = 44

_SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _decades(lo: float, hi: float) -> list[int]:
    return list(range(math.floor(lo), math.ceil(hi) + 1))


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def loglog_scatter_svg(
    series: dict[str, list[tuple[float, float]]],
    *,
    title: str = "",
    x_label: str = "x",
    y_label: str = "y",
    width: int = 480,
    height: int = 360,
) -> str:
    """Render named point series on shared log-log axes as an SVG string.

    ``series`` maps a legend label to (x, y) pairs; points with a
    non-positive coordinate are skipped.  Raises ValueError when nothing
    remains to plot.
    """
    cleaned = {
        name: [(math.log10(x), math.log10(y))
               for x, y in pts if x > 0 and y > 0]
        for name, pts in series.items()
    }
    cleaned = {name: pts for name, pts in cleaned.items() if pts}
    if not cleaned:
        raise ValueError("no positive points to plot")

    all_pts = [p for pts in cleaned.values() for p in pts]
    lx = [p[0] for p in all_pts]
    ly = [p[1] for p in all_pts]
    x0, x1 = min(lx), max(lx)
    y0, y1 = min(ly), max(ly)
    # pad degenerate ranges so a single decade still renders
    if x1 - x0 < 1e-9:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 - y0 < 1e-9:
        y0, y1 = y0 - 0.5, y1 + 0.5

    plot_w = width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = height - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(v: float) -> float:
        return _MARGIN_LEFT + (v - x0) / (x1 - x0) * plot_w

    def sy(v: float) -> float:
        return _MARGIN_TOP + (y1 - v) / (y1 - y0) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{_MARGIN_LEFT}" y="{_MARGIN_TOP}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#333"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{title}</text>')

    for d in _decades(x0, x1):
        if not x0 <= d <= x1:
            continue
        px = sx(d)
        parts.append(
            f'<line x1="{px:.1f}" y1="{_MARGIN_TOP}" x2="{px:.1f}" '
            f'y2="{_MARGIN_TOP + plot_h}" stroke="#ddd"/>')
        parts.append(
            f'<text x="{px:.1f}" y="{_MARGIN_TOP + plot_h + 16}" '
            f'text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">1e{d}</text>')
    for d in _decades(y0, y1):
        if not y0 <= d <= y1:
            continue
        py = sy(d)
        parts.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{py:.1f}" '
            f'x2="{_MARGIN_LEFT + plot_w}" y2="{py:.1f}" stroke="#ddd"/>')
        parts.append(
            f'<text x="{_MARGIN_LEFT - 6}" y="{py + 4:.1f}" '
            f'text-anchor="end" font-family="sans-serif" '
            f'font-size="11">1e{d}</text>')

    parts.append(
        f'<text x="{_MARGIN_LEFT + plot_w / 2:.1f}" y="{height - 8}" '
        f'text-anchor="middle" font-family="sans-serif" '
        f'font-size="12">{x_label}</text>')
    parts.append(
        f'<text x="14" y="{_MARGIN_TOP + plot_h / 2:.1f}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 14 {_MARGIN_TOP + plot_h / 2:.1f})">'
        f'{y_label}</text>')

    for i, (name, pts) in enumerate(cleaned.items()):
        color = _SERIES_COLORS[i % len(_SERIES_COLORS)]
        for px, py in pts:
            parts.append(
                f'<circle cx="{sx(px):.2f}" cy="{sy(py):.2f}" r="2.4" '
                f'fill="{color}" fill-opacity="0.7"/>')
        ly_pos = _MARGIN_TOP + 14 + 14 * i
        lx_pos = _MARGIN_LEFT + plot_w - 8
        parts.append(
            f'<circle cx="{lx_pos - 52}" cy="{ly_pos - 4}" r="3" '
            f'fill="{color}"/>')
        parts.append(
            f'<text x="{lx_pos - 44}" y="{ly_pos}" font-family="sans-serif" '
            f'font-size="11">{name}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_loglog_scatter(series, path, **kwargs) -> Path:
    path = Path(path)
    path.write_text(loglog_scatter_svg(series, **kwargs))
    return path


# --------------------------------------------------------------------------
# figure plots straight from a report dict


def report_figure_series(report: dict) -> dict[str, dict]:
    """Per-figure plot specs (series + labels) for a report dict."""

    def hist_points(hist: dict[str, object]) -> list[tuple[float, float]]:
        return [(float(k), float(hist[k])) for k in sorted(hist, key=int)]

    figures: dict[str, dict] = {}
    base, proj = report["base"], report["projected"]

    figures["fig1_degree"] = {
        "series": {
            base["label"]: hist_points(base["histograms"]["degree"]),
            proj["label"]: hist_points(proj["histograms"]["degree"]),
        },
        "title": "Degree distribution",
        "x_label": "degree", "y_label": "count",
    }
    figures["fig2_clustering_by_degree"] = {
        "series": {
            sec["label"]: [
                (float(k), float(v[0])) for k, v in sorted(
                    sec["histograms"]["clustering_by_degree"].items(),
                    key=lambda kv: int(kv[0]))
            ]
            for sec in (base, proj)
        },
        "title": "Clustering coefficient by degree",
        "x_label": "degree", "y_label": "avg clustering",
    }
    figures["fig3_hop_distance"] = {
        "series": {
            sec["label"]: hist_points(sec["hop"]["pair_counts"])
            for sec in (base, proj) if sec["hop"] is not None
        },
        "title": "Hop distance distribution",
        "x_label": "distance", "y_label": "pair count",
    }
    cover_h = report["cover"]["histograms"]
    figures["fig4_membership"] = {
        "series": {"membership": hist_points(cover_h["membership"])},
        "title": "Membership distribution",
        "x_label": "memberships", "y_label": "count",
    }
    figures["fig5_overlap_size"] = {
        "series": {"overlap": hist_points(cover_h["overlap_size"])},
        "title": "Overlap size distribution",
        "x_label": "overlap size", "y_label": "count",
    }
    figures["fig6_community_degree"] = {
        "series": {
            "community degree": hist_points(
                report["projection"]["histograms"]["community_degree"]),
        },
        "title": "Community degree distribution",
        "x_label": "degree", "y_label": "count",
    }
    return figures


def write_report_figures(report: dict, out_dir) -> list[Path]:
    """Write one SVG per figure; figures with no positive data are
    skipped rather than failing the run."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, spec in report_figure_series(report).items():
        try:
            svg = loglog_scatter_svg(spec["series"], title=spec["title"],
                                     x_label=spec["x_label"],
                                     y_label=spec["y_label"])
        except ValueError:
            continue
        path = out_dir / f"{stem}.svg"
        path.write_text(svg)
        written.append(path)
    return written
