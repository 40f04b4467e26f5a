"""
Exception hierarchy for grid_plot.

Every error raised by the library derives from GridPlotError and also from the
builtin that matches its meaning, so ``except ValueError`` keeps working for
callers that do not care about the specific type.
"""

from typing import Optional


class GridPlotError(Exception):
    """Base class for all grid_plot errors."""


# Ingest

class CaseParseError(GridPlotError, ValueError):
    """A case file could not be read or parsed."""


class CaseSyntaxError(CaseParseError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class RaggedMatrixError(CaseParseError):
    def __init__(self, name: str, widths: Optional[list] = None):
        self.name = name
        self.widths = widths or []
        super().__init__(f"matrix '{name}' has rows of different widths {sorted(set(self.widths))}")


class NonFiniteValueError(CaseParseError):
    """NaN or infinite number found in case data."""


class UnsupportedFormatError(CaseParseError):
    """File extension is neither .m nor .json."""


class DanglingBusRefError(CaseParseError):
    def __init__(self, component_type: str, component_id: str, bus: str):
        self.component_type = component_type
        self.component_id = component_id
        self.bus = bus
        super().__init__(f"{component_type} {component_id} references missing bus {bus}")


# Lookup

class UnknownComponentTypeError(GridPlotError, KeyError):
    def __init__(self, component_type: str):
        self.component_type = component_type
        super().__init__(f"unknown component type '{component_type}'")

    def __str__(self) -> str:
        return self.args[0]


class UnknownIdError(GridPlotError, KeyError):
    def __init__(self, component_type: str, component_id: str):
        self.component_type = component_type
        self.component_id = component_id
        super().__init__(f"no {component_type} with id '{component_id}'")

    def __str__(self) -> str:
        return self.args[0]


# Graph

class GraphError(GridPlotError, ValueError):
    """Base class for graph construction and query errors."""


class GraphConfigError(GraphError):
    """Inconsistent GraphConfig component lists."""


class MissingEndpointError(GraphError):
    def __init__(self, component_type: str, component_id: str, bus: str):
        self.component_type = component_type
        self.component_id = component_id
        self.bus = bus
        super().__init__(f"{component_type} {component_id} attaches to bus {bus}, which is not in the graph")


class EmptyGraphError(GraphError):
    def __init__(self, message: str = "graph has no nodes"):
        super().__init__(message)


class UnknownNodeError(GraphError, KeyError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"node {node} is not in the graph")

    def __str__(self) -> str:
        return self.args[0]


# Layout

class LayoutError(GridPlotError, RuntimeError):
    """A layout algorithm failed to produce coordinates."""


class LayoutConfigError(LayoutError, ValueError):
    """LayoutConfig parameter out of range."""


class UnknownLayoutError(LayoutError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown layout algorithm '{name}'")

    def __str__(self) -> str:
        return self.args[0]


# Tables

class TableError(GridPlotError, ValueError):
    """Base class for tabular query errors."""


class UnknownColumnError(TableError, KeyError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"unknown column '{column}'")

    def __str__(self) -> str:
        return self.args[0]


class NonNumericAggregateError(TableError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"column '{column}' is not numeric")


# Plotting

class PlotError(GridPlotError, ValueError):
    """Base class for plot specification errors."""


class UnknownDataFieldError(PlotError):
    def __init__(self, component_type: str, field: str):
        self.component_type = component_type
        self.field = field
        super().__init__(f"{component_type} has no data field '{field}'")


class PathNotFoundError(PlotError, KeyError):
    def __init__(self, path: list):
        self.path = list(path)
        super().__init__(f"path {self.path} not found in plot spec")

    def __str__(self) -> str:
        return self.args[0]


class SpecValidationError(PlotError):
    """Emitted spec does not conform to the Vega-Lite schema."""


# Analysis and CLI

class EmptyInputError(GridPlotError, ValueError):
    """An analysis received no cases."""


class CliUsageError(GridPlotError):
    """Malformed command-line flags."""
