from .Network import ComponentRef, MultiNetwork, Network, from_json, load_case, save_case, to_json, validate
from .PowerGraph import GraphConfig, PowerGraph, build_graph
from .LayoutKernel import LayoutKernel, layout_graph, layout_network
from .IGraphLayout import IGraphLayout
from .layouts import LayoutAlgorithm, LayoutConfig, LayoutStats
from .PowerDataFrame import TableSet, group_aggregate, to_tables, top_k
from .PlotSpec import PlotSpec, validate_spec
from .PowerPlot import ComponentStyle, PlotOptions, powerplot
from .Analysis import degree_report, merge_solution, voltage_stats
from .parsers import parse_matpower, pglib

__version__ = "0.1.0"

__all__ = [
    'ComponentRef',
    'Network',
    'MultiNetwork',
    'from_json',
    'to_json',
    'load_case',
    'save_case',
    'validate',
    'GraphConfig',
    'PowerGraph',
    'build_graph',
    'LayoutKernel',
    'IGraphLayout',
    'LayoutAlgorithm',
    'LayoutConfig',
    'LayoutStats',
    'layout_graph',
    'layout_network',
    'TableSet',
    'to_tables',
    'group_aggregate',
    'top_k',
    'PlotSpec',
    'validate_spec',
    'ComponentStyle',
    'PlotOptions',
    'powerplot',
    'degree_report',
    'voltage_stats',
    'merge_solution',
    'parse_matpower',
    'pglib',
]
