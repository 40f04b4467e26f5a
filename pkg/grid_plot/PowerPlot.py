"""
PowerPlot - Layered Vega-Lite plots of power networks

powerplot() runs the whole plotting pipeline on a case:

1. Lay out the graph (known coordinates are kept when `fixed` is set)
2. Convert the laid-out case into tables
3. Emit one Vega-Lite layer per component type

Layer order is: one group layer per edge type (line sub-layer, then an
optional flow-direction wedge sub-layer), a dashed connector layer, then one
circle layer per node and connected component type. Each layer carries its
rows inline and a tooltip listing every column of its component table.

Multi-network cases gain an "nw" selector parameter and a filter on every
layer, so one figure steps through the networks.

Example:
    ```python
    from grid_plot.PowerPlot import ComponentStyle, PlotOptions, powerplot

    opts = PlotOptions(
        connected_components=[],
        styles={"bus": ComponentStyle(size=100, data="lam_p", data_type="quantitative")},
    )
    spec = powerplot(net, opts)
    spec.save("lmp.html")
    ```
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from grid_plot.errors import PlotError, UnknownDataFieldError
from grid_plot.layouts.LayoutConfig import LayoutConfig, LayoutStats
from grid_plot.LayoutKernel import LayoutKernel
from grid_plot.Network import Case, MultiNetwork, Network, bus_field, bus_key, endpoint_fields
from grid_plot.PlotSpec import PlotSpec
from grid_plot.PowerDataFrame import TableSet, is_numeric_column, to_tables
from grid_plot.PowerGraph import (
    DEFAULT_CONNECTED_COMPONENTS,
    DEFAULT_EDGE_COMPONENTS,
    DEFAULT_NODE_COMPONENTS,
    GraphConfig,
)

try:
    from grid_plot.config import VEGA_RUNTIME
except ImportError:
    VEGA_RUNTIME = {"schema": "https://vega.github.io/schema/vega-lite/v5.json"}

logger = logging.getLogger(__name__)

DEFAULT_COLORS = {
    "bus": "#1f77b4",
    "gen": "#ff7f0e",
    "load": "#d62728",
    "branch": "#2ca02c",
}
EXTRA_COLORS = ("#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")
CONNECTOR_COLOR = "#b3b3b3"
CONNECTOR_DASH = [6, 4]
DEFAULT_SIZES = {"bus": 100.0, "node": 70.0, "edge": 2.0, "connector": 1.5, "wedge": 80.0}
INACTIVE_OPACITY = 0.3
DATA_TYPES = ("quantitative", "ordinal", "nominal")
NETWORK_INPUTS = ("select", "radio", "range")
NW_PARAM = "nw_select"


@dataclass
class ComponentStyle:
    """
    Styling of one component type.

    Attributes:
        size: Circle area for nodes, stroke width for edges
        color: One color or a list used as the color scale range
        data: Field encoded by color
        data_type: quantitative, ordinal or nominal
        show_flow: Draw flow-direction wedges (edge types only)
    """

    size: Optional[float] = None
    color: Union[str, Sequence[str], None] = None
    data: Optional[str] = None
    data_type: str = "nominal"
    show_flow: bool = False

    def __post_init__(self) -> None:
        if self.data_type not in DATA_TYPES:
            raise PlotError(f"data_type must be one of {', '.join(DATA_TYPES)}, got '{self.data_type}'")
        if self.color is not None and not isinstance(self.color, str):
            self.color = list(self.color)
            if not self.color:
                raise PlotError("color list must not be empty")
        if self.size is not None and not self.size > 0:
            raise PlotError(f"size must be positive, got {self.size}")

    @property
    def colors(self) -> Optional[List[str]]:
        if self.color is None:
            return None
        return [self.color] if isinstance(self.color, str) else list(self.color)


@dataclass
class PlotOptions:
    width: int = 500
    height: int = 500
    node_components: Sequence[str] = DEFAULT_NODE_COMPONENTS
    connected_components: Sequence[str] = DEFAULT_CONNECTED_COMPONENTS
    edge_components: Sequence[str] = DEFAULT_EDGE_COMPONENTS
    styles: Dict[str, ComponentStyle] = field(default_factory=dict)
    layout: LayoutConfig = field(default_factory=LayoutConfig)
    fixed: bool = False
    network_input: str = "select"

    def __post_init__(self) -> None:
        self.node_components = tuple(self.node_components)
        self.connected_components = tuple(self.connected_components)
        self.edge_components = tuple(self.edge_components)
        if self.width <= 0 or self.height <= 0:
            raise PlotError("width and height must be positive")
        if self.network_input not in NETWORK_INPUTS:
            raise PlotError(f"network_input must be one of {', '.join(NETWORK_INPUTS)}")
        included = set(self.node_components) | set(self.connected_components) | set(self.edge_components)
        for ctype, style in self.styles.items():
            if ctype not in included:
                raise PlotError(f"style given for '{ctype}', which is not plotted")
            if style.show_flow and ctype not in self.edge_components:
                raise PlotError(f"show_flow applies to edge types only, not '{ctype}'")

    def graph_config(self) -> GraphConfig:
        return GraphConfig(
            node_components=self.node_components,
            connected_components=self.connected_components,
            edge_components=self.edge_components,
        )

    def style(self, ctype: str) -> ComponentStyle:
        return self.styles.get(ctype, ComponentStyle())


# Helpers

def escape_field(name: str) -> str:
    """Vega-Lite field reference for a column name containing '.', '[' or ']'."""
    return name.replace("\\", "\\\\").replace(".", "\\.").replace("[", "\\[").replace("]", "\\]")


def _py(value: Any) -> Any:
    if value is None or value is pd.NA:
        return None
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return None if math.isnan(value) else float(value)
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def table_rows(table: pd.DataFrame) -> List[Dict[str, Any]]:
    return [{k: _py(v) for k, v in row.items()} for row in table.astype(object).to_dict("records")]


def tooltip(table: pd.DataFrame) -> List[Dict[str, str]]:
    return [
        {"field": escape_field(str(c)), "type": "quantitative" if is_numeric_column(table[c]) else "nominal"}
        for c in table.columns
    ]


def status_test(ctype: str, columns: Sequence[str]) -> Optional[str]:
    if ctype == "bus":
        return "datum['bus_type'] == 4" if "bus_type" in columns else None
    statuses = sorted(c for c in columns if c == "status" or str(c).endswith("_status"))
    return f"datum['{statuses[0]}'] == 0" if statuses else None


def opacity_encoding(ctype: str, columns: Sequence[str]) -> Dict[str, Any]:
    test = status_test(ctype, columns)
    if test is None:
        return {"value": 1}
    return {"condition": {"test": test, "value": INACTIVE_OPACITY}, "value": 1}


def position(field_name: str) -> Dict[str, Any]:
    return {"field": field_name, "type": "quantitative", "axis": None, "scale": {"zero": False}}


class _Palette:
    def __init__(self) -> None:
        self._assigned: Dict[str, str] = {}

    def color(self, ctype: str) -> str:
        if ctype in DEFAULT_COLORS:
            return DEFAULT_COLORS[ctype]
        if ctype not in self._assigned:
            self._assigned[ctype] = EXTRA_COLORS[len(self._assigned) % len(EXTRA_COLORS)]
        return self._assigned[ctype]


def color_encoding(ctype: str, style: ComponentStyle, table: pd.DataFrame, palette: _Palette) -> Dict[str, Any]:
    colors = style.colors
    if style.data is None:
        return {
            "field": "ComponentType",
            "type": "nominal",
            "scale": {"range": colors or [palette.color(ctype)]},
            "legend": {"title": ctype},
        }
    if style.data not in table.columns:
        raise UnknownDataFieldError(ctype, style.data)
    encoding: Dict[str, Any] = {
        "field": escape_field(style.data),
        "type": style.data_type,
        "legend": {"title": style.data},
    }
    scale: Dict[str, Any] = {}
    if style.data_type == "quantitative":
        if not is_numeric_column(table[style.data]):
            raise PlotError(f"{ctype} field '{style.data}' is not numeric")
        values = table[style.data].dropna()
        if len(values):
            scale["domain"] = [float(values.min()), float(values.max())]
    if colors and len(colors) > 1:
        scale["range"] = colors
    elif colors:
        scale["range"] = [colors[0], colors[0]] if style.data_type == "quantitative" else colors
    elif style.data_type == "quantitative":
        scale["scheme"] = "viridis"
    if scale:
        encoding["scale"] = scale
    return encoding


# Pipeline

def _networks(case: Case) -> List[Tuple[Optional[str], Network]]:
    if isinstance(case, MultiNetwork):
        return [(nw_id, case.networks[nw_id]) for nw_id in case.nw_ids]
    return [(None, case)]


def _coords(net: Network, ref: Tuple[str, str]) -> Optional[Tuple[float, float]]:
    record = net.components.get(ref[0], {}).get(ref[1])
    if record is None:
        return None
    x, y = record.get("xcoord_1"), record.get("ycoord_1")
    if isinstance(x, (int, float)) and isinstance(y, (int, float)):
        return float(x), float(y)
    return None


def _edge_rows(case: Case, ctype: str, table: pd.DataFrame, flow: bool) -> List[Dict[str, Any]]:
    nets = dict(_networks(case))
    rows = []
    for row in table_rows(table):
        net = nets[row.get("nw")]
        record = net.components[ctype][str(row["index"])]
        ends = endpoint_fields(record)
        if ends is None:
            continue
        a = _coords(net, ("bus", str(bus_key(record[ends[0]]))))
        b = _coords(net, ("bus", str(bus_key(record[ends[1]]))))
        if a is None or b is None:
            continue
        row.update({"x1": a[0], "y1": a[1], "x2": b[0], "y2": b[1]})
        if flow:
            angle = math.degrees(math.atan2(b[1] - a[1], b[0] - a[0]))
            pf = record.get("pf")
            if isinstance(pf, (int, float)) and pf < 0:
                angle += 180.0
            row.update({"xm": (a[0] + b[0]) / 2.0, "ym": (a[1] + b[1]) / 2.0, "flow_angle": angle % 360.0})
        rows.append(row)
    return rows


def _connector_rows(case: Case, connected: Sequence[str]) -> List[Dict[str, Any]]:
    rows = []
    for nw_id, net in _networks(case):
        for ctype in connected:
            for cid in net.sorted_ids(ctype):
                record = net.components[ctype][cid]
                attach = bus_field(ctype, record)
                if attach is None:
                    continue
                a = _coords(net, (ctype, cid))
                b = _coords(net, ("bus", str(bus_key(record[attach]))))
                if a is None or b is None:
                    continue
                row: Dict[str, Any] = {
                    "ComponentType": "connector",
                    "source_type": ctype,
                    "source_id": cid,
                    "x1": a[0], "y1": a[1], "x2": b[0], "y2": b[1],
                }
                if nw_id is not None:
                    row["nw"] = nw_id
                rows.append(row)
    rows.sort(key=lambda r: (r["source_type"], int(r["source_id"]) if r["source_id"].isdigit() else 0,
                             r["source_id"], r.get("nw", "")))
    return rows


def _edge_layer(ctype: str, table: pd.DataFrame, rows: List[Dict[str, Any]], style: ComponentStyle,
                palette: _Palette) -> Dict[str, Any]:
    color = color_encoding(ctype, style, table, palette)
    line = {
        "mark": {"type": "rule"},
        "encoding": {
            "x": position("x1"),
            "y": position("y1"),
            "x2": {"field": "x2"},
            "y2": {"field": "y2"},
            "color": color,
            "size": {"value": style.size or DEFAULT_SIZES["edge"]},
            "opacity": opacity_encoding(ctype, list(table.columns)),
            "tooltip": tooltip(table),
        },
    }
    sublayers = [line]
    if style.show_flow:
        sublayers.append({
            "mark": {"type": "point", "shape": "wedge", "filled": True},
            "transform": [{"calculate": "(450 - datum.flow_angle) % 360", "as": "wedge_angle"}],
            "encoding": {
                "x": position("xm"),
                "y": position("ym"),
                "angle": {"field": "wedge_angle", "type": "quantitative",
                          "scale": {"domain": [0, 360], "range": [0, 360]}},
                "color": color,
                "size": {"value": DEFAULT_SIZES["wedge"]},
                "tooltip": tooltip(table),
            },
        })
    return {"name": ctype, "data": {"values": rows}, "layer": sublayers}


def _connector_layer(rows: List[Dict[str, Any]]) -> Dict[str, Any]:
    return {
        "name": "connector",
        "data": {"values": rows},
        "mark": {"type": "rule", "strokeDash": list(CONNECTOR_DASH)},
        "encoding": {
            "x": position("x1"),
            "y": position("y1"),
            "x2": {"field": "x2"},
            "y2": {"field": "y2"},
            "color": {"value": CONNECTOR_COLOR},
            "size": {"value": DEFAULT_SIZES["connector"]},
        },
    }


def _node_layer(ctype: str, table: pd.DataFrame, style: ComponentStyle, palette: _Palette) -> Dict[str, Any]:
    size = style.size or (DEFAULT_SIZES["bus"] if ctype == "bus" else DEFAULT_SIZES["node"])
    return {
        "name": ctype,
        "data": {"values": table_rows(table)},
        "mark": {"type": "circle"},
        "encoding": {
            "x": position("xcoord_1"),
            "y": position("ycoord_1"),
            "color": color_encoding(ctype, style, table, palette),
            "size": {"value": size},
            "opacity": opacity_encoding(ctype, list(table.columns)),
            "tooltip": tooltip(table),
        },
    }


def network_param(nw_ids: List[str], network_input: str) -> Dict[str, Any]:
    if network_input == "range":
        numeric = [int(i) for i in nw_ids]
        bind = {"input": "range", "min": min(numeric), "max": max(numeric), "step": 1, "name": "Network: "}
        return {"name": NW_PARAM, "value": numeric[0], "bind": bind}
    bind = {"input": network_input, "options": list(nw_ids), "name": "Network: "}
    return {"name": NW_PARAM, "value": nw_ids[0], "bind": bind}


def build_spec(case: Case, tables: TableSet, opts: PlotOptions) -> PlotSpec:
    """Assemble the layered spec from an already laid-out case and its tables."""
    present = [t for t in tables.component_types if len(tables[t]) > 0]
    edge_types = [t for t in opts.edge_components if t in present]
    node_types = [t for t in list(opts.node_components) + list(opts.connected_components) if t in present]
    connected = [t for t in opts.connected_components if t in present]
    palette = _Palette()

    layers: List[Dict[str, Any]] = []
    for ctype in edge_types:
        style = opts.style(ctype)
        rows = _edge_rows(case, ctype, tables[ctype], style.show_flow)
        layers.append(_edge_layer(ctype, tables[ctype], rows, style, palette))
    connector_rows = _connector_rows(case, connected)
    if connector_rows:
        layers.append(_connector_layer(connector_rows))
    for ctype in node_types:
        layers.append(_node_layer(ctype, tables[ctype], opts.style(ctype), palette))

    tree: Dict[str, Any] = {
        "$schema": VEGA_RUNTIME["schema"],
        "width": opts.width,
        "height": opts.height,
        "config": {"view": {"stroke": None}},
        "resolve": {"scale": {"color": "independent", "size": "independent"}},
        "layer": layers,
    }
    if isinstance(case, MultiNetwork):
        nw_ids = case.nw_ids
        if opts.network_input == "range" and not all(i.lstrip("-").isdigit() for i in nw_ids):
            raise PlotError("a range selector needs integer network ids")
        tree["params"] = [network_param(nw_ids, opts.network_input)]
        test = "datum.nw == toString(nw_select)" if opts.network_input == "range" else f"datum.nw == {NW_PARAM}"
        for layer in layers:
            layer["transform"] = [{"filter": test}] + layer.get("transform", [])
    return PlotSpec(tree)


def plot_case(
    case: Case, opts: Optional[PlotOptions] = None, kernel: Optional[LayoutKernel] = None
) -> Tuple[PlotSpec, LayoutStats, Case]:
    """powerplot() that also returns the layout statistics and the laid-out case."""
    opts = opts or PlotOptions()
    kernel = kernel or LayoutKernel()
    for ctype, style in opts.styles.items():
        if style.data is not None and not _has_field(case, ctype, style.data):
            raise UnknownDataFieldError(ctype, style.data)
    layout = opts.layout.replace(fixed=opts.fixed or opts.layout.fixed)
    laid, stats = kernel.layout_network(case, layout, opts.graph_config())
    spec = build_spec(laid, to_tables(laid), opts)
    logger.debug("plot: %d layers", len(spec.layers))
    return spec, stats, laid


def _has_field(case: Case, ctype: str, field_name: str) -> bool:
    return any(
        field_name in record
        for _, net in _networks(case)
        for record in net.records(ctype).values()
    )


def powerplot(case: Case, opts: Optional[PlotOptions] = None, kernel: Optional[LayoutKernel] = None) -> PlotSpec:
    """
    Plot a network or multi-network case.

    Args:
        case: Validated Network or MultiNetwork
        opts: Plot options (defaults: 500x500, buses with gens/loads/shunts/
            storage attached, branch/dcline/switch/transformer edges)
        kernel: LayoutKernel to run the layout with

    Returns:
        PlotSpec conforming to the Vega-Lite v5 schema

    Raises:
        UnknownDataFieldError: A style encodes a field the component lacks
    """
    spec, _, _ = plot_case(case, opts, kernel)
    return spec
