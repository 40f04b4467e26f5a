"""
Network - In-memory case model

This module holds the nested component model every other part of grid_plot
builds on. A case is a map of metadata plus one map per component type
("bus", "gen", "branch", or any custom type such as "hydro") from id strings
to field records:

    {
        "baseMVA": 100.0,
        "per_unit": true,
        "bus": {"1": {"index": 1, "vmax": 1.1, "base_kv": 220.0}, ...},
        "gen": {"1": {"index": 1, "gen_bus": 1, "pg": 2.5}, ...}
    }

Multi-network cases wrap several of these under an "nw" key with the
metadata flag "multinetwork" set to true.

Component type and field names are open strings. The only fields the model
interprets are "index", the bus references ("f_bus"/"t_bus",
"source"/"target", "<type>_bus") and status fields; everything else is passed
through untouched.

Example:
    ```python
    from grid_plot.Network import load_case, validate, ComponentRef

    net = load_case("case39.m")
    assert validate(net) == []
    bus = net.get_component(ComponentRef("bus", "1"))
    ```
"""

import copy
import json
import math
import numbers
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, NamedTuple, Optional, Tuple, Union

from grid_plot.errors import (
    CaseParseError,
    NonFiniteValueError,
    UnknownComponentTypeError,
    UnknownIdError,
    UnsupportedFormatError,
)

Value = Union[float, int, str, bool, List[Any], Dict[str, Any]]
ComponentRecord = Dict[str, Value]

COORD_FIELDS = ("xcoord_1", "ycoord_1")
INACTIVE_BUS_TYPE = 4


class ComponentRef(NamedTuple):
    """Points from a graph index or table row back to a component."""

    component_type: str
    id: str


def id_sort_key(component_id: str) -> Tuple[int, int, str]:
    """Numeric ids sort numerically, anything else after them lexicographically."""
    try:
        return (0, int(component_id), "")
    except ValueError:
        return (1, 0, component_id)


def bus_key(value: Any) -> Optional[str]:
    """Normalize a bus reference value (1, 1.0, numpy.int64(1) or "1") to its id string."""
    if isinstance(value, bool):
        return None
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real) and float(value).is_integer():
        return str(int(value))
    if isinstance(value, str):
        return value
    return None


def endpoint_fields(record: Mapping[str, Any]) -> Optional[Tuple[str, str]]:
    if "f_bus" in record and "t_bus" in record:
        return ("f_bus", "t_bus")
    if "source" in record and "target" in record:
        return ("source", "target")
    return None


def bus_field(component_type: str, record: Mapping[str, Any]) -> Optional[str]:
    """Name of the field attaching a connected component to its bus, if any."""
    if component_type == "bus" or endpoint_fields(record) is not None:
        return None
    own = f"{component_type}_bus"
    if own in record:
        return own
    if "bus" in record:
        return "bus"
    for key in sorted(record):
        if key.endswith("_bus") and key not in ("f_bus", "t_bus"):
            return key
    return None


def status_fields(record: Mapping[str, Any]) -> List[str]:
    return sorted(k for k in record if k == "status" or k.endswith("_status"))


def is_active(component_type: str, record: Mapping[str, Any]) -> bool:
    if component_type == "bus":
        return record.get("bus_type") != INACTIVE_BUS_TYPE
    return all(record.get(f) != 0 for f in status_fields(record))


# Violations are data, not errors

@dataclass(frozen=True)
class Violation:
    ref: ComponentRef
    message: str = field(default="", compare=False)


class MissingIndex(Violation):
    pass


class IndexMismatch(Violation):
    pass


class DanglingBusRef(Violation):
    pass


class BadStatus(Violation):
    pass


class SelfLoop(Violation):
    pass


@dataclass(frozen=True)
class Network:
    """
    A single network case.

    Attributes:
        metadata: Top-level values (name, baseMVA, per_unit, source_type, ...)
        components: component type -> id -> record
    """

    metadata: Dict[str, Value] = field(default_factory=dict)
    components: Dict[str, Dict[str, ComponentRecord]] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return str(self.metadata.get("name", ""))

    @property
    def base_mva(self) -> Optional[float]:
        value = self.metadata.get("baseMVA", self.metadata.get("base_mva"))
        return float(value) if isinstance(value, (int, float)) else None

    @property
    def per_unit(self) -> bool:
        return bool(self.metadata.get("per_unit", False))

    @property
    def component_types(self) -> List[str]:
        return sorted(self.components)

    def records(self, component_type: str) -> Dict[str, ComponentRecord]:
        """Records of one type, empty when the type is absent."""
        return self.components.get(component_type, {})

    def sorted_ids(self, component_type: str) -> List[str]:
        return sorted(self.records(component_type), key=id_sort_key)

    def count(self, component_type: str) -> int:
        return len(self.records(component_type))

    def iter_records(self) -> Iterator[Tuple[ComponentRef, ComponentRecord]]:
        for ctype in self.component_types:
            for cid in self.sorted_ids(ctype):
                yield ComponentRef(ctype, cid), self.components[ctype][cid]

    def get_component(self, ref: Tuple[str, str]) -> ComponentRecord:
        return get_component(self, ref)

    def with_records(self, updates: Mapping[Tuple[str, str], Mapping[str, Value]]) -> "Network":
        """Return a copy where each referenced record has the given fields overwritten."""
        components = copy.deepcopy(self.components)
        for ref, fields in updates.items():
            ctype, cid = ref
            if ctype not in components:
                raise UnknownComponentTypeError(ctype)
            if cid not in components[ctype]:
                raise UnknownIdError(ctype, cid)
            components[ctype][cid].update(copy.deepcopy(dict(fields)))
        return Network(copy.deepcopy(self.metadata), components)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = copy.deepcopy(self.metadata)
        data.update(copy.deepcopy(self.components))
        return data


@dataclass(frozen=True)
class MultiNetwork:
    """Several indexed networks (time steps, scenarios, repair stages) in one case."""

    metadata: Dict[str, Value] = field(default_factory=dict)
    networks: Dict[str, Network] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.networks:
            raise CaseParseError("multi-network case contains no networks")

    @property
    def name(self) -> str:
        return str(self.metadata.get("name", ""))

    @property
    def nw_ids(self) -> List[str]:
        return sorted(self.networks, key=id_sort_key)

    def union(self) -> Network:
        return union_network(self)

    def with_records(self, updates: Mapping[Tuple[str, str], Mapping[str, Value]]) -> "MultiNetwork":
        """Apply the same record updates to every network that holds the record."""
        networks = {}
        for nw_id, net in self.networks.items():
            local = {ref: fields for ref, fields in updates.items()
                     if ref[0] in net.components and ref[1] in net.components[ref[0]]}
            networks[nw_id] = net.with_records(local)
        return MultiNetwork(copy.deepcopy(self.metadata), networks)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = copy.deepcopy(self.metadata)
        data["multinetwork"] = True
        data["nw"] = {nw_id: net.to_dict() for nw_id, net in self.networks.items()}
        return data


Case = Union[Network, MultiNetwork]


def get_component(net: Network, ref: Tuple[str, str]) -> ComponentRecord:
    """Look up one component record by (type, id)."""
    ctype, cid = ref
    if ctype not in net.components:
        raise UnknownComponentTypeError(ctype)
    records = net.components[ctype]
    if cid not in records:
        raise UnknownIdError(ctype, cid)
    return records[cid]


def validate(net: Network) -> List[Violation]:
    """
    Check the reference and status rules of a network.

    Returns an empty list when every record has a consistent integer "index",
    every bus reference resolves, and every status field is 0 or 1.
    """
    violations: List[Violation] = []
    buses = net.records("bus")

    for ref, record in net.iter_records():
        index = record.get("index")
        if not isinstance(index, int) or isinstance(index, bool):
            violations.append(MissingIndex(ref, f"{ref} has no integer 'index'"))
        else:
            try:
                matches = int(ref.id) == index
            except ValueError:
                matches = False
            if not matches:
                violations.append(IndexMismatch(ref, f"{ref} id does not match index {index}"))

        for status in status_fields(record):
            value = record[status]
            if isinstance(value, bool) or value not in (0, 1):
                violations.append(BadStatus(ref, f"{ref} has {status}={value!r}"))

        ends = endpoint_fields(record)
        if ends is not None:
            keys = [bus_key(record[f]) for f in ends]
            for f, key in zip(ends, keys):
                if key is None or key not in buses:
                    violations.append(DanglingBusRef(ref, f"{ref} {f}={record[f]!r} is not a bus"))
            if keys[0] is not None and keys[0] == keys[1]:
                violations.append(SelfLoop(ref, f"{ref} connects bus {keys[0]} to itself"))
            continue

        attach = bus_field(ref.component_type, record)
        if attach is not None:
            key = bus_key(record[attach])
            if key is None or key not in buses:
                violations.append(DanglingBusRef(ref, f"{ref} {attach}={record[attach]!r} is not a bus"))

    return violations


def union_network(multi: MultiNetwork) -> Network:
    """Every component that appears in any network; the first occurrence wins."""
    components: Dict[str, Dict[str, ComponentRecord]] = {}
    first = multi.networks[multi.nw_ids[0]]
    for nw_id in multi.nw_ids:
        for ctype, records in multi.networks[nw_id].components.items():
            bucket = components.setdefault(ctype, {})
            for cid, record in records.items():
                if cid not in bucket:
                    bucket[cid] = copy.deepcopy(record)
    return Network(copy.deepcopy(first.metadata), components)


# JSON ingest and egress

def _reject_constant(token: str) -> Any:
    raise NonFiniteValueError(f"non-finite number '{token}' in case data")


def _finite_float(token: str) -> float:
    value = float(token)
    if not math.isfinite(value):
        raise NonFiniteValueError(f"number '{token}' overflows to a non-finite value")
    return value


def _check_finite(value: Any, where: str = "") -> None:
    if isinstance(value, float) and not math.isfinite(value):
        raise NonFiniteValueError(f"non-finite number at {where or 'top level'}")
    if isinstance(value, dict):
        for k, v in value.items():
            _check_finite(v, f"{where}/{k}")
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _check_finite(v, f"{where}/{i}")


def _is_component_map(value: Any) -> bool:
    return isinstance(value, dict) and all(
        isinstance(record, dict) and "index" in record for record in value.values()
    )


def _network_from_dict(data: Mapping[str, Any]) -> Network:
    metadata: Dict[str, Value] = {}
    components: Dict[str, Dict[str, ComponentRecord]] = {}
    for key, value in data.items():
        if _is_component_map(value):
            components[key] = copy.deepcopy(value)
        else:
            metadata[key] = copy.deepcopy(value)
    return Network(metadata, components)


def from_dict(data: Mapping[str, Any]) -> Case:
    """Build a Network or MultiNetwork from an already decoded JSON object."""
    if not isinstance(data, Mapping):
        raise CaseParseError("case JSON must be an object")
    _check_finite(dict(data))
    if data.get("multinetwork") is True and "nw" in data:
        nws = data["nw"]
        if not isinstance(nws, Mapping):
            raise CaseParseError("'nw' must map network ids to networks")
        metadata = {k: copy.deepcopy(v) for k, v in data.items() if k not in ("nw", "multinetwork")}
        networks = {str(nw_id): _network_from_dict(sub) for nw_id, sub in nws.items()}
        return MultiNetwork(metadata, networks)
    return _network_from_dict(data)


def from_json(source: Union[str, bytes, Mapping[str, Any]]) -> Case:
    """Parse case JSON text (or a decoded object), rejecting NaN and Infinity."""
    if isinstance(source, Mapping):
        return from_dict(source)
    try:
        data = json.loads(source, parse_float=_finite_float, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise CaseParseError(f"invalid JSON at line {e.lineno}: {e.msg}") from e
    return from_dict(data)


def to_json(case: Case) -> str:
    """Canonical JSON: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(case.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def load_case(path: Union[str, Path]) -> Case:
    """Read a `.m` MatPower file or a `.json` case file."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in (".m", ".json"):
        raise UnsupportedFormatError(f"unsupported case file extension '{path.suffix}' ({path})")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise CaseParseError(f"cannot read case file {path}: {e}") from e
    if suffix == ".json":
        return from_json(text)
    from grid_plot.parsers.matpower import parse_matpower, to_network

    return to_network(parse_matpower(text))


def save_case(case: Case, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(to_json(case), encoding="utf-8")
    return path
