"""
PowerDataFrame - Tabular view of a network

Converts a Network (or MultiNetwork) into pandas DataFrames: one single-row
metadata table and one table per component type. Each component table has
the columns "index" and "ComponentType" ("nw" as well for multi-network
cases) followed by the union of the field names of that type's records,
sorted. Missing values are nulls; nullable dtypes (Int64, Float64, boolean,
string) keep them intact. List and map values become canonical JSON strings.

Example:
    ```python
    from grid_plot.PowerDataFrame import to_tables, top_k, group_aggregate

    tables = to_tables(net)
    gens = tables["gen"]
    largest = top_k(gens, "pmax", 5)
    by_kv = group_aggregate(tables["bus"], "base_kv", [("vm", "mean"), ("vm", "std")])
    ```
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from grid_plot.errors import (
    NonNumericAggregateError,
    TableError,
    UnknownColumnError,
    UnknownComponentTypeError,
)
from grid_plot.Network import Case, MultiNetwork, Network, id_sort_key

logger = logging.getLogger(__name__)

LEADING_COLUMNS = ("index", "ComponentType", "nw")
AGGREGATES = ("count", "mean", "std", "min", "max")


@dataclass
class TableSet:
    metadata: pd.DataFrame
    components: Dict[str, pd.DataFrame] = field(default_factory=dict)

    def __getitem__(self, component_type: str) -> pd.DataFrame:
        if component_type not in self.components:
            raise UnknownComponentTypeError(component_type)
        return self.components[component_type]

    def __contains__(self, component_type: object) -> bool:
        return component_type in self.components

    @property
    def component_types(self) -> List[str]:
        return sorted(self.components)


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _cell(value: Any) -> Any:
    return canonical_json(value) if isinstance(value, (list, dict)) else value


def _column(values: Sequence[Any]) -> pd.Series:
    present = [v for v in values if v is not None]
    if present and all(isinstance(v, bool) for v in present):
        return pd.Series(values, dtype="boolean")
    if present and all(isinstance(v, int) and not isinstance(v, bool) for v in present):
        return pd.Series(values, dtype="Int64")
    if present and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in present):
        return pd.Series([None if v is None else float(v) for v in values], dtype="Float64")
    text = [None if v is None else (v if isinstance(v, str) else canonical_json(v)) for v in values]
    return pd.Series(text, dtype="string")


def _frame(rows: List[Dict[str, Any]], leading: Sequence[str]) -> pd.DataFrame:
    names = set().union(*(row.keys() for row in rows)) if rows else set(leading)
    ordered = [c for c in leading if c in names] + sorted(names - set(leading))
    data = {name: _column([row.get(name) for row in rows]) for name in ordered}
    return pd.DataFrame(data, columns=ordered).reset_index(drop=True)


def _rows(net: Network, component_type: str, nw: Union[str, None] = None) -> List[Dict[str, Any]]:
    rows = []
    for cid in net.sorted_ids(component_type):
        record = net.components[component_type][cid]
        row = {k: _cell(v) for k, v in record.items()}
        row["ComponentType"] = component_type
        if nw is not None:
            row["nw"] = nw
        rows.append(row)
    return rows


def _row_key(row: Mapping[str, Any]) -> Tuple:
    index = row.get("index")
    index_key = (0, index) if isinstance(index, int) else (1, 0)
    return index_key + id_sort_key(str(row.get("nw", "")))


def to_tables(case: Case) -> TableSet:
    """
    Build the metadata table and one table per component type.

    Rows are ordered by ascending "index" (then ascending network id for
    multi-network cases).
    """
    metadata = pd.DataFrame([{k: _cell(v) for k, v in case.metadata.items()}])

    if isinstance(case, MultiNetwork):
        by_type: Dict[str, List[Dict[str, Any]]] = {}
        for nw_id in case.nw_ids:
            net = case.networks[nw_id]
            for ctype in net.component_types:
                by_type.setdefault(ctype, []).extend(_rows(net, ctype, nw_id))
        components = {
            ctype: _frame(sorted(rows, key=_row_key), LEADING_COLUMNS) for ctype, rows in by_type.items()
        }
    else:
        components = {
            ctype: _frame(sorted(_rows(case, ctype), key=_row_key), LEADING_COLUMNS)
            for ctype in case.component_types
        }
    return TableSet(metadata, components)


def _require(table: pd.DataFrame, columns: Iterable[str]) -> None:
    for column in columns:
        if column not in table.columns:
            raise UnknownColumnError(column)


def is_numeric_column(series: pd.Series) -> bool:
    return pd.api.types.is_numeric_dtype(series) and not pd.api.types.is_bool_dtype(series)


def group_aggregate(table: pd.DataFrame, by: str, aggs: Sequence[Tuple[str, str]]) -> pd.DataFrame:
    """
    Aggregate columns per distinct value of `by`.

    Args:
        table: Component table
        by: Grouping column; null keys are dropped
        aggs: (column, function) pairs, function one of count, mean, std, min, max

    Returns:
        One row per group in ascending key order with columns `by` and
        "<column>_<function>". count is the number of rows in the group, so the
        counts sum to the rows with a non-null key; mean, std, min and max skip
        null values, and std is the sample standard deviation (null below two
        values).

    Raises:
        UnknownColumnError: `by` or an aggregated column is missing
        NonNumericAggregateError: An aggregated column is not numeric
    """
    _require(table, [by] + [column for column, _ in aggs])
    for column, fn in aggs:
        if fn not in AGGREGATES:
            raise TableError(f"unknown aggregate '{fn}', expected one of {', '.join(AGGREGATES)}")
        if not is_numeric_column(table[column]):
            raise NonNumericAggregateError(column)

    keyed = table[table[by].notna()]
    values = pd.DataFrame({
        column: keyed[column].astype("Float64").to_numpy(dtype=float, na_value=np.nan)
        for column in dict.fromkeys(column for column, _ in aggs)
    })
    values["__key__"] = keyed[by].to_numpy(dtype=object)
    grouped = values.groupby("__key__", sort=True)

    keys = sorted(grouped.groups.keys())
    out = pd.DataFrame({by: pd.Series(keys, dtype=table[by].dtype)})
    for column, fn in aggs:
        if fn == "count":
            result = grouped.size().reindex(keys)
            out[f"{column}_{fn}"] = pd.array(result.to_numpy(), dtype="Int64")
        else:
            series = grouped[column]
            result = (series.std(ddof=1) if fn == "std" else series.agg(fn)).reindex(keys)
            out[f"{column}_{fn}"] = pd.array(result.to_numpy(dtype=float), dtype="Float64")
    return out.reset_index(drop=True)


def top_k(table: pd.DataFrame, col: str, k: int, descending: bool = True) -> pd.DataFrame:
    """The k rows with the largest (or smallest) `col`; ties by ascending "index"."""
    _require(table, [col])
    if not is_numeric_column(table[col]):
        raise NonNumericAggregateError(col)
    if k < 0:
        raise TableError(f"k must be >= 0, got {k}")
    keys = [col, "index"] if "index" in table.columns and col != "index" else [col]
    ascending = [not descending] + [True] * (len(keys) - 1)
    ordered = table.sort_values(keys, ascending=ascending, kind="mergesort", na_position="last")
    return ordered.head(k).reset_index(drop=True)


def to_csv_text(table: pd.DataFrame) -> str:
    return table.to_csv(index=False, na_rep="", lineterminator="\r\n")


def write_csv(tables: TableSet, directory: Union[str, Path]) -> List[Path]:
    """Write metadata.csv and one <type>.csv per component table."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, table in [("metadata", tables.metadata)] + sorted(tables.components.items()):
        path = directory / f"{name}.csv"
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(to_csv_text(table))
        written.append(path)
        logger.debug("wrote %s (%d rows)", path, len(table))
    return written
