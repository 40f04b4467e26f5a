"""
MatPower case file parser.

Reads the literal matrices of a MatPower case function (format version 2)
and maps them to named-field, per-unit component records:

    function mpc = case9
    mpc.version = '2';
    mpc.baseMVA = 100;
    mpc.bus = [
        1  3  0  0  0  0  1  1  0  345  1  1.1  0.9;
        ...
    ];

Only literal values are understood; MATLAB expressions are not evaluated.
Power quantities (MW, MVAr, MVA) are divided by baseMVA exactly once, here,
and angles are converted from degrees to radians.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from grid_plot.errors import (
    CaseParseError,
    CaseSyntaxError,
    DanglingBusRefError,
    NonFiniteValueError,
    RaggedMatrixError,
)
from grid_plot.Network import ComponentRecord, Network, Value, bus_key

logger = logging.getLogger(__name__)

_FUNCTION_RE = re.compile(r"^function\s+(?:\w+\s*=\s*)?(\w+)")
_ASSIGN_RE = re.compile(r"^mpc\.(\w+)\s*=\s*(.*)$")
_QUOTED_RE = re.compile(r"'((?:[^']|'')*)'")

REQUIRED_MATRICES = ("bus", "gen", "branch")
MIN_WIDTH = {"bus": 13, "gen": 10, "branch": 13, "dcline": 17}
KNOWN = {"version", "baseMVA", "bus", "gen", "branch", "gencost", "dcline", "bus_name"}

# (column, field, kind); kind: "pu" per-unit power, "rad" angle, "int", None as-is
BUS_COLUMNS: Sequence[Tuple[int, str, Optional[str]]] = (
    (0, "bus_i", "int"),
    (1, "bus_type", "int"),
    (6, "area", "int"),
    (7, "vm", None),
    (8, "va", "rad"),
    (9, "base_kv", None),
    (10, "zone", "int"),
    (11, "vmax", None),
    (12, "vmin", None),
    (13, "lam_p", None),
    (14, "lam_q", None),
    (15, "mu_vmax", None),
    (16, "mu_vmin", None),
)

GEN_COLUMNS: Sequence[Tuple[int, str, Optional[str]]] = (
    (1, "pg", "pu"),
    (2, "qg", "pu"),
    (3, "qmax", "pu"),
    (4, "qmin", "pu"),
    (5, "vg", None),
    (6, "mbase", None),
    (7, "gen_status", "int"),
    (8, "pmax", "pu"),
    (9, "pmin", "pu"),
    (10, "pc1", "pu"),
    (11, "pc2", "pu"),
    (12, "qc1min", "pu"),
    (13, "qc1max", "pu"),
    (14, "qc2min", "pu"),
    (15, "qc2max", "pu"),
    (16, "ramp_agc", "pu"),
    (17, "ramp_10", "pu"),
    (18, "ramp_30", "pu"),
    (19, "ramp_q", "pu"),
    (20, "apf", None),
    (21, "mu_pmax", None),
    (22, "mu_pmin", None),
    (23, "mu_qmax", None),
    (24, "mu_qmin", None),
)

BRANCH_COLUMNS: Sequence[Tuple[int, str, Optional[str]]] = (
    (2, "br_r", None),
    (3, "br_x", None),
    (5, "rate_a", "pu"),
    (6, "rate_b", "pu"),
    (7, "rate_c", "pu"),
    (10, "br_status", "int"),
    (11, "angmin", "rad"),
    (12, "angmax", "rad"),
    (13, "pf", "pu"),
    (14, "qf", "pu"),
    (15, "pt", "pu"),
    (16, "qt", "pu"),
    (17, "mu_sf", None),
    (18, "mu_st", None),
    (19, "mu_angmin", None),
    (20, "mu_angmax", None),
)

DCLINE_COLUMNS: Sequence[Tuple[int, str, Optional[str]]] = (
    (2, "br_status", "int"),
    (3, "pf", "pu"),
    (4, "pt", "pu"),
    (5, "qf", "pu"),
    (6, "qt", "pu"),
    (7, "vf", None),
    (8, "vt", None),
    (9, "pmin", "pu"),
    (10, "pmax", "pu"),
    (11, "qminf", "pu"),
    (12, "qmaxf", "pu"),
    (13, "qmint", "pu"),
    (14, "qmaxt", "pu"),
    (15, "loss0", "pu"),
    (16, "loss1", None),
)


@dataclass
class RawMatpowerCase:
    """
    Literal content of a MatPower case file.

    Attributes:
        base_mva: System MVA base
        matrices: name -> 2-D float array (rows x columns)
        string_tables: name -> strings of a cell array such as bus_name
        version: Format version string
        name: Function name of the case
        scalars: Any other `mpc.<name> = value;` assignments
    """

    base_mva: float
    matrices: Dict[str, np.ndarray]
    string_tables: Dict[str, List[str]] = field(default_factory=dict)
    version: str = "2"
    name: str = ""
    scalars: Dict[str, Value] = field(default_factory=dict)

    def rows(self, name: str) -> int:
        matrix = self.matrices.get(name)
        return 0 if matrix is None else int(matrix.shape[0])


# Lexing

def _strip_comment(line: str) -> str:
    """Drop a trailing % comment, ignoring % inside quoted strings."""
    in_str = False
    for pos, ch in enumerate(line):
        if ch == "'":
            if not in_str and pos > 0 and (line[pos - 1].isalnum() or line[pos - 1] in ")]}_."):
                continue  # transpose operator
            in_str = not in_str
        elif ch == "%" and not in_str:
            return line[:pos]
    return line


def _find_close(text: str, close: str) -> int:
    in_str = False
    for pos, ch in enumerate(text):
        if ch == "'":
            in_str = not in_str
        elif ch == close and not in_str:
            return pos
    return -1


def _number(token: str, line: int, name: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise CaseSyntaxError(line, f"'{token}' in mpc.{name} is not a number") from None
    if not math.isfinite(value):
        raise NonFiniteValueError(f"line {line}: non-finite value '{token}' in mpc.{name}")
    return value


def _split_rows(body: List[Tuple[int, str]]) -> List[Tuple[int, str]]:
    """Rows end at ';' or a newline; a line ending in '...' continues on the next."""
    rows = []
    pending, start = "", 0
    for line, text in body:
        stripped = text.rstrip()
        if stripped.endswith("..."):
            pending += " " + stripped[:-3]
            start = start or line
            continue
        text, line = pending + " " + text, start or line
        pending, start = "", 0
        for segment in text.split(";"):
            if segment.strip():
                rows.append((line, segment.strip()))
    if pending.strip():
        rows.append((start, pending.strip()))
    return rows


def _parse_matrix(name: str, body: List[Tuple[int, str]]) -> np.ndarray:
    values: List[List[float]] = []
    for line, row in _split_rows(body):
        tokens = [t for t in re.split(r"[\s,]+", row.replace("...", " ")) if t]
        values.append([_number(t, line, name) for t in tokens])
    if not values:
        return np.zeros((0, 0))
    widths = [len(r) for r in values]
    if len(set(widths)) > 1:
        raise RaggedMatrixError(name, widths)
    return np.array(values, dtype=float)


def _parse_cell(body: List[Tuple[int, str]]) -> List[str]:
    strings: List[str] = []
    for _, row in _split_rows(body):
        quoted = _QUOTED_RE.findall(row)
        if quoted:
            strings.extend(s.replace("''", "'").strip() for s in quoted)
        else:
            strings.extend(t for t in re.split(r"[\s,]+", row) if t)
    return strings


def _parse_scalar(name: str, text: str, line: int) -> Value:
    text = text.strip().rstrip(";").strip()
    quoted = _QUOTED_RE.fullmatch(text)
    if quoted:
        return quoted.group(1).replace("''", "'")
    value = _number(text, line, name)
    return int(value) if value.is_integer() and "." not in text and "e" not in text.lower() else value


def parse_matpower(text: str) -> RawMatpowerCase:
    """
    Parse the text of a MatPower `.m` case.

    Args:
        text: Full file content

    Returns:
        RawMatpowerCase with every literal `mpc.<name>` assignment captured

    Raises:
        CaseSyntaxError: A row or value cannot be read (carries the line number)
        RaggedMatrixError: Rows of one matrix differ in width
        NonFiniteValueError: NaN or Inf in the data
        CaseParseError: bus/gen/branch missing or baseMVA not positive
    """
    lines = [_strip_comment(raw) for raw in text.splitlines()]
    name = ""
    matrices: Dict[str, np.ndarray] = {}
    cells: Dict[str, List[str]] = {}
    scalars: Dict[str, Value] = {}

    i = 0
    while i < len(lines):
        stripped = lines[i].strip()
        lineno = i + 1
        if not stripped:
            i += 1
            continue

        function = _FUNCTION_RE.match(stripped)
        if function:
            name = function.group(1)
            i += 1
            continue

        assign = _ASSIGN_RE.match(stripped)
        if not assign:
            logger.debug("line %d: skipping statement %r", lineno, stripped)
            i += 1
            continue

        key, rhs = assign.group(1), assign.group(2).strip()
        if rhs[:1] in ("[", "{"):
            close = "]" if rhs[0] == "[" else "}"
            start = lineno
            body: List[Tuple[int, str]] = []
            rest = rhs[1:]
            pos = _find_close(rest, close)
            while pos < 0:
                body.append((lineno, rest))
                i += 1
                if i >= len(lines):
                    raise CaseSyntaxError(start, f"mpc.{key} is never closed with '{close}'")
                rest = lines[i]
                lineno = i + 1
                pos = _find_close(rest, close)
            body.append((lineno, rest[:pos]))
            trailing = rest[pos + 1:].strip()
            if trailing and not trailing.startswith(";"):
                raise CaseSyntaxError(lineno, f"unexpected '{trailing}' after mpc.{key}")
            if close == "]":
                matrices[key] = _parse_matrix(key, body)
            else:
                cells[key] = _parse_cell(body)
        else:
            if not rhs:
                raise CaseSyntaxError(lineno, f"mpc.{key} has no value")
            scalars[key] = _parse_scalar(key, rhs, lineno)
        i += 1

    for required in REQUIRED_MATRICES:
        if required not in matrices:
            raise CaseParseError(f"case has no mpc.{required} matrix")
    for matrix_name, min_width in MIN_WIDTH.items():
        matrix = matrices.get(matrix_name)
        if matrix is not None and matrix.shape[0] and matrix.shape[1] < min_width:
            raise CaseParseError(
                f"mpc.{matrix_name} has {matrix.shape[1]} columns, at least {min_width} required"
            )

    base_mva = scalars.pop("baseMVA", None)
    if not isinstance(base_mva, (int, float)) or isinstance(base_mva, bool) or base_mva <= 0:
        raise CaseParseError(f"mpc.baseMVA must be a positive number, got {base_mva!r}")
    version = str(scalars.pop("version", "2"))

    logger.debug("parsed case %r: %s", name, {k: m.shape for k, m in matrices.items()})
    return RawMatpowerCase(
        base_mva=float(base_mva),
        matrices=matrices,
        string_tables=cells,
        version=version,
        name=name,
        scalars=scalars,
    )


# Mapping to named records

def _int(value: float, what: str) -> int:
    if not float(value).is_integer():
        raise CaseParseError(f"{what} must be an integer, got {value}")
    return int(value)


def _map_row(row: np.ndarray, columns: Sequence[Tuple[int, str, Optional[str]]],
             base_mva: float, what: str) -> ComponentRecord:
    record: ComponentRecord = {}
    for col, name, kind in columns:
        if col >= row.shape[0]:
            continue
        value = float(row[col])
        if kind == "pu":
            record[name] = value / base_mva
        elif kind == "rad":
            record[name] = math.radians(value)
        elif kind == "int":
            record[name] = _int(value, f"{what} {name}")
        else:
            record[name] = value
    return record


def _gencost_fields(row: np.ndarray) -> ComponentRecord:
    model = _int(row[0], "gencost model")
    ncost = _int(row[3], "gencost ncost")
    width = 2 * ncost if model == 1 else ncost
    return {
        "model": model,
        "startup": float(row[1]),
        "shutdown": float(row[2]),
        "ncost": ncost,
        "cost": [float(v) for v in row[4:4 + width]],
    }


def _check_bus(buses: Dict[str, ComponentRecord], ctype: str, cid: int, bus: int) -> None:
    if bus_key(bus) not in buses:
        raise DanglingBusRefError(ctype, str(cid), str(bus))


def to_network(raw: RawMatpowerCase) -> Network:
    """
    Map a RawMatpowerCase to a per-unit Network.

    Loads and shunts stored on bus rows become their own "load" and "shunt"
    components (one per bus with a nonzero value, ids in bus order from 1).
    gencost rows are attached to their generators without interpretation.
    Unrecognized matrices and scalars are kept in the metadata.

    Raises:
        DanglingBusRefError: A gen, branch or dcline references a missing bus
    """
    base = raw.base_mva
    buses: Dict[str, ComponentRecord] = {}
    loads: Dict[str, ComponentRecord] = {}
    shunts: Dict[str, ComponentRecord] = {}
    names = raw.string_tables.get("bus_name", [])

    for pos, row in enumerate(raw.matrices["bus"]):
        record = _map_row(row, BUS_COLUMNS, base, "bus")
        bus_id = record["bus_i"]
        record["index"] = bus_id
        if pos < len(names):
            record["name"] = names[pos]
        if str(bus_id) in buses:
            raise CaseParseError(f"bus {bus_id} is defined twice")
        buses[str(bus_id)] = record

        pd, qd, gs, bs = (float(v) for v in row[2:6])
        if pd != 0.0 or qd != 0.0:
            lid = len(loads) + 1
            loads[str(lid)] = {"index": lid, "load_bus": bus_id, "pd": pd / base, "qd": qd / base, "status": 1}
        if gs != 0.0 or bs != 0.0:
            sid = len(shunts) + 1
            shunts[str(sid)] = {"index": sid, "shunt_bus": bus_id, "gs": gs / base, "bs": bs / base, "status": 1}

    gens: Dict[str, ComponentRecord] = {}
    gencost = raw.matrices.get("gencost")
    for pos, row in enumerate(raw.matrices["gen"]):
        gid = pos + 1
        record = _map_row(row, GEN_COLUMNS, base, "gen")
        bus = _int(row[0], "gen bus")
        _check_bus(buses, "gen", gid, bus)
        record.update({"index": gid, "gen_bus": bus})
        if gencost is not None and pos < gencost.shape[0]:
            record.update(_gencost_fields(gencost[pos]))
        gens[str(gid)] = record

    branches: Dict[str, ComponentRecord] = {}
    for pos, row in enumerate(raw.matrices["branch"]):
        bid = pos + 1
        record = _map_row(row, BRANCH_COLUMNS, base, "branch")
        f_bus, t_bus = _int(row[0], "branch fbus"), _int(row[1], "branch tbus")
        _check_bus(buses, "branch", bid, f_bus)
        _check_bus(buses, "branch", bid, t_bus)
        ratio, shift = float(row[8]), float(row[9])
        record.update({
            "index": bid,
            "f_bus": f_bus,
            "t_bus": t_bus,
            "b_fr": float(row[4]) / 2.0,
            "b_to": float(row[4]) / 2.0,
            "g_fr": 0.0,
            "g_to": 0.0,
            "tap": ratio if ratio != 0.0 else 1.0,
            "shift": math.radians(shift),
            "transformer": ratio != 0.0 or shift != 0.0,
        })
        branches[str(bid)] = record

    components: Dict[str, Dict[str, ComponentRecord]] = {"bus": buses, "gen": gens, "branch": branches}
    if loads:
        components["load"] = loads
    if shunts:
        components["shunt"] = shunts

    dcline = raw.matrices.get("dcline")
    if dcline is not None and dcline.shape[0]:
        dclines: Dict[str, ComponentRecord] = {}
        for pos, row in enumerate(dcline):
            did = pos + 1
            record = _map_row(row, DCLINE_COLUMNS, base, "dcline")
            f_bus, t_bus = _int(row[0], "dcline fbus"), _int(row[1], "dcline tbus")
            _check_bus(buses, "dcline", did, f_bus)
            _check_bus(buses, "dcline", did, t_bus)
            record.update({"index": did, "f_bus": f_bus, "t_bus": t_bus})
            dclines[str(did)] = record
        components["dcline"] = dclines

    metadata: Dict[str, Value] = {
        "name": raw.name,
        "baseMVA": base,
        "per_unit": True,
        "source_type": "matpower",
        "source_version": raw.version,
    }
    for key, matrix in raw.matrices.items():
        if key not in KNOWN:
            metadata[key] = matrix.tolist()
    for key, strings in raw.string_tables.items():
        if key not in KNOWN:
            metadata[key] = list(strings)
    for key, value in raw.scalars.items():
        metadata.setdefault(key, value)

    logger.debug(
        "case %r: %s", raw.name, {ctype: len(records) for ctype, records in components.items()}
    )
    return Network(metadata, components)


def read_matpower(text: str) -> Network:
    """parse_matpower followed by to_network."""
    return to_network(parse_matpower(text))
