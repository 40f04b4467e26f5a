#!/usr/bin/env python3
"""
Command-line interface for grid_plot.

Exit codes: 0 success, 2 unreadable case, 3 bad flags or unknown
columns/fields, 4 layout failure or unwritable output.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from grid_plot.Analysis import degree_report, degree_report_spec, degree_report_table, merge_solution, voltage_stats
from grid_plot.errors import (
    CaseParseError,
    CliUsageError,
    GraphConfigError,
    GraphError,
    LayoutConfigError,
    LayoutError,
    PlotError,
    SpecValidationError,
    TableError,
    UnknownComponentTypeError,
    UnknownIdError,
    UnknownLayoutError,
)
from grid_plot.layouts.LayoutConfig import LayoutConfig
from grid_plot.LayoutKernel import LayoutKernel
from grid_plot.Network import Case, MultiNetwork, endpoint_fields, load_case, save_case
from grid_plot.PowerDataFrame import AGGREGATES, group_aggregate, to_csv_text, to_tables, top_k, write_csv
from grid_plot.PowerGraph import DEFAULT_EDGE_COMPONENTS
from grid_plot.PowerPlot import NETWORK_INPUTS, ComponentStyle, PlotOptions, plot_case

try:
    from grid_plot.config import GRIDPLOT_LOGGING_ENABLED, GRIDPLOT_SEED
except ImportError:
    GRIDPLOT_SEED = 1
    GRIDPLOT_LOGGING_ENABLED = True

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_USAGE = 3
EXIT_FAILURE = 4

ANALYZE_ACTIONS = ("degrees", "group", "top", "voltage")


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting on bad flags."""

    def error(self, message: str):  # type: ignore[override]
        raise CliUsageError(message)


def exit_code(error: BaseException) -> int:
    if isinstance(error, CaseParseError):
        return EXIT_PARSE
    if isinstance(error, SpecValidationError):
        return EXIT_FAILURE
    if isinstance(error, (CliUsageError, UnknownLayoutError, LayoutConfigError, GraphConfigError,
                          TableError, PlotError, UnknownComponentTypeError, UnknownIdError)):
        return EXIT_USAGE
    if isinstance(error, (LayoutError, GraphError, OSError)):
        return EXIT_FAILURE
    raise error


# Flag parsing

def split_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def parse_color_by(text: str) -> Tuple[str, str, str]:
    parts = text.split(":")
    if len(parts) == 2:
        parts.append("quantitative")
    if len(parts) != 3 or not all(parts):
        raise CliUsageError(f"--color-by expects TYPE:FIELD:DTYPE, got '{text}'")
    return parts[0], parts[1], parts[2]


def parse_size(text: str) -> Tuple[str, float]:
    ctype, sep, value = text.partition(":")
    try:
        size = float(value)
    except ValueError:
        size = float("nan")
    if not sep or not ctype or not size > 0:
        raise CliUsageError(f"--size expects TYPE:N with N > 0, got '{text}'")
    return ctype, size


def parse_aggs(text: str) -> List[Tuple[str, str]]:
    aggs = []
    for item in split_list(text):
        column, sep, fn = item.rpartition(":")
        if not sep or not column or fn not in AGGREGATES:
            raise CliUsageError(f"--agg expects COL:FN with FN in {', '.join(AGGREGATES)}, got '{item}'")
        aggs.append((column, fn))
    if not aggs:
        raise CliUsageError("--agg needs at least one COL:FN pair")
    return aggs


def classify_components(case: Case, names: Sequence[str]) -> Tuple[List[str], List[str], List[str]]:
    """Split component type names into node, connected and edge types."""
    net = case.union() if isinstance(case, MultiNetwork) else case
    node, connected, edge = [], [], []
    for name in dict.fromkeys(names):
        records = list(net.records(name).values()) if name in net.components else []
        if name == "bus":
            node.append(name)
        elif records and endpoint_fields(records[0]) is not None:
            edge.append(name)
        elif not records and name in DEFAULT_EDGE_COMPONENTS:
            edge.append(name)
        else:
            connected.append(name)
    return node, connected, edge


def layout_config(args: argparse.Namespace, algorithm: str) -> LayoutConfig:
    return LayoutConfig(
        algorithm=algorithm,
        iterations=args.iterations,
        C=args.C,
        K=args.K,
        seed=args.seed,
        fixed=args.fixed,
    )


def plot_options(args: argparse.Namespace, case: Case) -> PlotOptions:
    styles: Dict[str, Dict[str, Any]] = {}
    for ctype, field_name, data_type in map(parse_color_by, args.color_by):
        styles.setdefault(ctype, {}).update(data=field_name, data_type=data_type)
    for ctype, size in map(parse_size, args.size):
        styles.setdefault(ctype, {})["size"] = size

    kinds: Dict[str, Any] = {}
    if args.components:
        node, connected, edge = classify_components(case, split_list(args.components))
        kinds = {"node_components": node, "connected_components": connected, "edge_components": edge}
    if args.flow:
        for ctype in kinds.get("edge_components", DEFAULT_EDGE_COMPONENTS):
            styles.setdefault(ctype, {})["show_flow"] = True

    return PlotOptions(
        width=args.width,
        height=args.height,
        styles={ctype: ComponentStyle(**kw) for ctype, kw in styles.items()},
        layout=layout_config(args, args.layout),
        fixed=args.fixed,
        network_input=args.network_input,
        **kinds,
    )


def read_solution(path: str) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, ValueError) as e:
        raise CaseParseError(f"cannot read solution {path}: {e}") from e
    if not isinstance(data, dict):
        raise CaseParseError(f"solution {path} is not a JSON object")
    return data


def load_with_solution(path: str, solution: Optional[str]) -> Case:
    case = load_case(path)
    return merge_solution(case, read_solution(solution)) if solution else case


# Subcommands

def cmd_plot(args: argparse.Namespace) -> int:
    case = load_with_solution(args.case, args.solution)
    out = Path(args.out or Path(args.case).with_suffix(".html").name)
    if out.suffix.lower() not in (".html", ".json"):
        raise CliUsageError(f"--out must end in .html, .vl.json or .json, got '{out}'")
    opts = plot_options(args, case)
    spec, stats, _ = plot_case(case, opts, LayoutKernel())
    print(f"Time to compute layout [sec]: {stats.elapsed_seconds:.6f}")
    spec.validate()
    spec.save(out)
    print(f"Wrote {out}")
    return EXIT_OK


def cmd_layout(args: argparse.Namespace) -> int:
    case = load_case(args.case)
    laid, stats = LayoutKernel().layout_network(case, layout_config(args, args.algorithm))
    print(f"Time to compute layout [sec]: {stats.elapsed_seconds:.6f}")
    save_case(laid, args.out)
    print(f"Wrote {args.out}")
    return EXIT_OK


def cmd_convert(args: argparse.Namespace) -> int:
    case = load_case(args.case)
    if args.to == "json":
        save_case(case, args.out)
        print(f"Wrote {args.out}")
    else:
        for path in write_csv(to_tables(case), args.out):
            print(f"Wrote {path}")
    return EXIT_OK


def _split_analyze(items: Sequence[str]) -> Tuple[List[str], str]:
    for position, item in enumerate(items):
        if item in ANALYZE_ACTIONS:
            if position == 0 or position != len(items) - 1:
                raise CliUsageError(f"usage: analyze CASE [CASE ...] {{{','.join(ANALYZE_ACTIONS)}}} [options]")
            return list(items[:position]), item
    raise CliUsageError(f"analyze needs an action: one of {', '.join(ANALYZE_ACTIONS)}")


def _per_case(frames: List[Tuple[str, pd.DataFrame]]) -> pd.DataFrame:
    if len(frames) == 1:
        return frames[0][1]
    labelled = []
    for name, frame in frames:
        frame = frame.copy()
        frame.insert(0, "case", pd.array([name] * len(frame), dtype="string"))
        labelled.append(frame)
    return pd.concat(labelled, ignore_index=True)


def _require(args: argparse.Namespace, action: str, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise CliUsageError(f"analyze {action} needs {', '.join(missing)}")


def cmd_analyze(args: argparse.Namespace) -> int:
    paths, action = _split_analyze(args.items)
    cases = [(Path(p).stem, load_with_solution(p, args.solution)) for p in paths]

    if action == "degrees":
        nets = []
        for name, case in cases:
            if isinstance(case, MultiNetwork):
                raise CliUsageError(f"degrees needs single-network cases; {name} is a multi-network")
            nets.append(case)
        report = degree_report(nets)
        summary = pd.DataFrame({
            "case": report.cases,
            "size_class": [report.size_classes[c] for c in report.cases],
            "buses": [report.bus_counts[c] for c in report.cases],
            "max_degree": [max(report.histograms[c], default=0) for c in report.cases],
        })
        sys.stdout.write(summary.to_csv(index=False))
        if args.out:
            out = Path(args.out)
            if out.suffix.lower() == ".csv":
                with open(out, "w", encoding="utf-8", newline="") as handle:
                    handle.write(to_csv_text(degree_report_table(report)))
            elif out.suffix.lower() == ".json":
                spec = degree_report_spec(report)
                spec.validate()
                spec.save(out)
            else:
                raise CliUsageError(f"--out must end in .csv or .vl.json, got '{out}'")
        return EXIT_OK

    if action == "voltage":
        result = _per_case([(name, voltage_stats(case)) for name, case in cases])
    elif action == "group":
        _require(args, action, "component", "by", "agg")
        aggs = parse_aggs(args.agg)
        result = _per_case([
            (name, group_aggregate(to_tables(case)[args.component], args.by, aggs)) for name, case in cases
        ])
    else:
        _require(args, action, "component", "col")
        result = _per_case([
            (name, top_k(to_tables(case)[args.component], args.col, args.k, descending=not args.ascending))
            for name, case in cases
        ])
    sys.stdout.write(to_csv_text(result))
    return EXIT_OK


# Parser

def _add_layout_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--C", type=float, default=0.2, help="SFDP repulsion scale (default: 0.2)")
    parser.add_argument("--K", type=float, default=1.0, help="SFDP natural edge length (default: 1.0)")
    parser.add_argument("--iterations", type=int, default=100, help="Spring/SFDP iterations (default: 100)")
    parser.add_argument("--seed", type=int, default=GRIDPLOT_SEED, help=f"Layout seed (default: {GRIDPLOT_SEED})")
    parser.add_argument("--fixed", action="store_true", help="Keep coordinates already in the case")


def build_parser() -> CliParser:
    parser = CliParser(
        prog="grid-plot",
        description="grid-plot - layouts, plots and reports for power network cases",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  grid-plot plot case39.m --out fig.html                         # Interactive HTML figure
  grid-plot plot case39.m --components bus,branch --out a.vl.json # Buses and branches only
  grid-plot layout case39.m --algorithm sfdp --C 0.1 --K 0.9 --out laid.json
  grid-plot plot laid.json --fixed --out fig.html                # Reuse saved coordinates
  grid-plot convert case39.m --to csv --out tables/
  grid-plot analyze case.m group --component bus --by base_kv --agg vm:mean,vm:std
  grid-plot analyze case.m top --component gen --col pmax -k 5
        """,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    plot = sub.add_parser("plot", help="Lay out a case and write a Vega-Lite spec or HTML page")
    plot.add_argument("case", help="Case file (.m or .json)")
    plot.add_argument("--layout", default="kk", help="kk, spring, sfdp, spectral, shell or grid (default: kk)")
    plot.add_argument("--out", help="Output file, .html or .vl.json (default: <case>.html)")
    plot.add_argument("--components", help="Comma-separated component types to draw")
    plot.add_argument("--color-by", action="append", default=[], metavar="TYPE:FIELD:DTYPE",
                      help="Color a component type by a data field (repeatable)")
    plot.add_argument("--size", action="append", default=[], metavar="TYPE:N",
                      help="Marker size or line width of a component type (repeatable)")
    plot.add_argument("--flow", action="store_true", help="Draw flow-direction wedges on edges")
    plot.add_argument("--width", type=int, default=500, help="Plot width (default: 500)")
    plot.add_argument("--height", type=int, default=500, help="Plot height (default: 500)")
    plot.add_argument("--network-input", choices=NETWORK_INPUTS, default="select",
                      help="Multi-network selector widget (default: select)")
    plot.add_argument("--solution", help="Solution JSON merged into the case before plotting")
    _add_layout_flags(plot)
    plot.set_defaults(handler=cmd_plot)

    layout = sub.add_parser("layout", help="Compute coordinates and save them into the case JSON")
    layout.add_argument("case", help="Case file (.m or .json)")
    layout.add_argument("--algorithm", default="kk", help="kk, spring, sfdp, spectral, shell or grid (default: kk)")
    layout.add_argument("--out", required=True, help="Output case JSON")
    _add_layout_flags(layout)
    layout.set_defaults(handler=cmd_layout)

    convert = sub.add_parser("convert", help="Convert a case to JSON or per-component CSV files")
    convert.add_argument("case", help="Case file (.m or .json)")
    convert.add_argument("--to", choices=["json", "csv"], default="json", help="Output format (default: json)")
    convert.add_argument("--out", required=True, help="Output file (json) or directory (csv)")
    convert.set_defaults(handler=cmd_convert)

    analyze = sub.add_parser("analyze", help="Degree, aggregate and ranking reports")
    analyze.add_argument("items", nargs="+", metavar="CASE... ACTION",
                         help=f"Case files followed by one of {', '.join(ANALYZE_ACTIONS)}")
    analyze.add_argument("--component", help="Component type (group, top)")
    analyze.add_argument("--by", help="Grouping column (group)")
    analyze.add_argument("--agg", help="COL:FN,... with FN in count, mean, std, min, max (group)")
    analyze.add_argument("--col", help="Ranking column (top)")
    analyze.add_argument("-k", type=int, default=5, help="Number of rows (top, default: 5)")
    analyze.add_argument("--ascending", action="store_true", help="Smallest first (top)")
    analyze.add_argument("--out", help="Degree report output, .csv or .vl.json (degrees)")
    analyze.add_argument("--solution", help="Solution JSON merged into every case")
    analyze.set_defaults(handler=cmd_analyze)
    return parser


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else (logging.INFO if GRIDPLOT_LOGGING_ENABLED else logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.verbose)
        return args.handler(args)
    except Exception as e:
        code = exit_code(e)
        print(f"Error: {e}", file=sys.stderr)
        logger.debug("command failed", exc_info=True)
        return code


def main():
    """Main CLI entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
