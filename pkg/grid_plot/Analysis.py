"""
Analysis - Graph and table reports over one or more cases

- degree_report: bus degree distributions grouped by network size class
- voltage_stats: voltage magnitude statistics per bus voltage level
- merge_solution: overwrite record fields with externally computed solution
  values (voltages, prices, flows) before analysing or plotting them

Size classes follow bus counts: small below 1,000 buses, medium from 1,000 to
10,000, large above 10,000.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Sequence

import pandas as pd

from grid_plot.errors import CaseParseError, EmptyInputError, UnknownComponentTypeError
from grid_plot.Network import Case, MultiNetwork, Network, id_sort_key
from grid_plot.PlotSpec import PlotSpec
from grid_plot.PowerDataFrame import AGGREGATES, group_aggregate, to_tables
from grid_plot.PowerGraph import GraphConfig, build_graph

try:
    from grid_plot.config import VEGA_RUNTIME
except ImportError:
    VEGA_RUNTIME = {"schema": "https://vega.github.io/schema/vega-lite/v5.json"}

logger = logging.getLogger(__name__)

SIZE_CLASSES = ("small", "medium", "large")
SMALL_LIMIT = 1000
LARGE_LIMIT = 10000


def size_class(bus_count: int) -> str:
    if bus_count < SMALL_LIMIT:
        return "small"
    if bus_count <= LARGE_LIMIT:
        return "medium"
    return "large"


@dataclass
class DegreeReport:
    """
    Attributes:
        histograms: case name -> degree -> bus count
        bus_counts: case name -> number of buses
        size_classes: case name -> size class
        distributions: size class -> degree -> fraction of that class's buses
        max_degrees: size class -> highest degree seen in the class
    """

    histograms: Dict[str, Dict[int, int]] = field(default_factory=dict)
    bus_counts: Dict[str, int] = field(default_factory=dict)
    size_classes: Dict[str, str] = field(default_factory=dict)
    distributions: Dict[str, Dict[int, float]] = field(default_factory=dict)
    max_degrees: Dict[str, int] = field(default_factory=dict)

    @property
    def cases(self) -> List[str]:
        return list(self.histograms)


def _unique_name(name: str, taken: Mapping[str, Any], position: int) -> str:
    base = name or f"case{position}"
    candidate, suffix = base, 2
    while candidate in taken:
        candidate = f"{base}_{suffix}"
        suffix += 1
    return candidate


def degree_report(cases: Sequence[Network]) -> DegreeReport:
    """
    Degree distributions of the bus/branch graphs of several cases.

    Raises:
        EmptyInputError: No cases given
    """
    if not cases:
        raise EmptyInputError("degree_report needs at least one case")
    report = DegreeReport()
    totals: Dict[str, Dict[int, int]] = {}

    for position, net in enumerate(cases, start=1):
        name = _unique_name(net.name, report.histograms, position)
        graph = build_graph(net, GraphConfig.bus_only())
        histogram = graph.degree_histogram()
        buses = graph.number_of_nodes
        klass = size_class(buses)
        report.histograms[name] = histogram
        report.bus_counts[name] = buses
        report.size_classes[name] = klass
        bucket = totals.setdefault(klass, {})
        for degree, count in histogram.items():
            bucket[degree] = bucket.get(degree, 0) + count
        logger.debug("%s: %d buses (%s), max degree %s", name, buses, klass, max(histogram, default=None))

    for klass in SIZE_CLASSES:
        bucket = totals.get(klass)
        if not bucket:
            continue
        total = sum(bucket.values())
        report.distributions[klass] = {d: bucket[d] / total for d in sorted(bucket)}
        report.max_degrees[klass] = max(bucket)
    return report


def degree_report_table(report: DegreeReport) -> pd.DataFrame:
    """One row per (case, degree) with the bus count."""
    rows = [
        {"case": name, "size_class": report.size_classes[name], "degree": degree, "count": count}
        for name in report.cases
        for degree, count in sorted(report.histograms[name].items())
    ]
    frame = pd.DataFrame(rows, columns=["case", "size_class", "degree", "count"])
    return frame.astype({"case": "string", "size_class": "string", "degree": "Int64", "count": "Int64"})


def degree_report_spec(report: DegreeReport, width: int = 500, height: int = 300) -> PlotSpec:
    """Grouped bar chart of the per-class degree distributions."""
    values = [
        {"size_class": klass, "degree": degree, "fraction": fraction}
        for klass, distribution in report.distributions.items()
        for degree, fraction in distribution.items()
    ]
    return PlotSpec({
        "$schema": VEGA_RUNTIME["schema"],
        "width": width,
        "height": height,
        "data": {"values": values},
        "mark": {"type": "bar"},
        "encoding": {
            "x": {"field": "degree", "type": "ordinal", "title": "Bus degree"},
            "xOffset": {"field": "size_class", "type": "nominal", "sort": list(SIZE_CLASSES)},
            "y": {"field": "fraction", "type": "quantitative", "title": "Fraction of buses"},
            "color": {"field": "size_class", "type": "nominal", "sort": list(SIZE_CLASSES),
                      "legend": {"title": "Network size"}},
            "tooltip": [
                {"field": "size_class", "type": "nominal"},
                {"field": "degree", "type": "ordinal"},
                {"field": "fraction", "type": "quantitative", "format": ".3f"},
            ],
        },
    })


def voltage_stats(net: Case) -> pd.DataFrame:
    """Count, mean, sample std, min and max of bus "vm" per "base_kv", ascending."""
    tables = to_tables(net)
    if "bus" not in tables:
        raise UnknownComponentTypeError("bus")
    return group_aggregate(tables["bus"], "base_kv", [("vm", fn) for fn in AGGREGATES])


def _component_updates(solution: Mapping[str, Any]) -> Dict[tuple, Dict[str, Any]]:
    updates: Dict[tuple, Dict[str, Any]] = {}
    for ctype, records in solution.items():
        if not isinstance(records, Mapping) or not all(isinstance(r, Mapping) for r in records.values()):
            continue
        for cid in sorted(records, key=lambda i: id_sort_key(str(i))):
            updates[(ctype, str(cid))] = dict(records[cid])
    return updates


def merge_solution(net: Case, solution: Mapping[str, Any]) -> Case:
    """
    Overwrite record fields with solution values.

    The solution maps component type -> id -> fields, either bare or under a
    "solution" key; multi-network solutions use an "nw" map. Top-level
    scalars (objective value, solver status, ...) are ignored.

    Raises:
        UnknownComponentTypeError, UnknownIdError: The solution names a
            component the case does not have
    """
    inner = solution.get("solution", solution)
    if not isinstance(inner, Mapping):
        raise CaseParseError("solution must be a JSON object")

    if isinstance(net, MultiNetwork):
        if "nw" in inner and isinstance(inner["nw"], Mapping):
            networks = dict(net.networks)
            for nw_id, nw_solution in inner["nw"].items():
                key = str(nw_id)
                if key not in networks:
                    raise CaseParseError(f"solution refers to unknown network '{key}'")
                networks[key] = networks[key].with_records(_component_updates(nw_solution))
            return MultiNetwork(dict(net.metadata), networks)
        updates = _component_updates(inner)
        union = net.union()
        for ref in updates:
            union.get_component(ref)
        return net.with_records(updates)

    return net.with_records(_component_updates(inner))
