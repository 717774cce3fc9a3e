"""Topological analysis of networks and their overlapping-community
projections."""

__version__ = "0.1.0"

from .graph import (
    Graph,
    LoadSummary,
    ComponentLabeling,
    EdgeListError,
    parse_edge_list,
    load_edge_list,
    write_edge_list,
    connected_components,
    extract_giant,
    density,
    density_directed_convention,
)
from .cover import (
    CommunityCover,
    CoverParseError,
    CoverSummary,
    IntegerHistogram,
    parse_cover,
    load_cover,
    membership_histogram,
    community_size_histogram,
    overlap_size_histogram,
)
from .project import (
    ProjectedGraph,
    ComponentCensus,
    project,
    component_census,
    community_degree_histogram,
)
from .metrics import (
    GlobalSummary,
    HopDistribution,
    ClusteringByDegree,
    MetricError,
    local_clustering,
    average_local_clustering,
    transitivity,
    clustering_by_degree,
    hop_distribution,
    diameter,
    assortativity,
    global_summary,
)
from .distfit import (
    Family,
    FitResult,
    FitError,
    WeightedSample,
    fit,
    fit_all,
    ks_statistic,
    powerlaw_xmin_scan,
)
from .report import (
    ReportConfig,
    SCHEMA_VERSION,
    build_report,
    network_section,
    fit_table,
    report_json,
    write_report,
    write_figures,
)

__all__ = [name for name in dir() if not name.startswith("_")]
