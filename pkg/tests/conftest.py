"""
Pytest configuration and common fixtures for grid_plot tests.
"""

import os
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence, Tuple

import pytest

from grid_plot.errors import CaseParseError
from grid_plot.Network import MultiNetwork, Network, load_case
from grid_plot.parsers.matpower import read_matpower
from grid_plot.parsers.pglib import pglib
from grid_plot.PlotSpec import _validator, vega_lite_schema

DATA_DIR = Path(__file__).parent / "data"


def make_network(
    n_buses: int,
    branches: Iterable[Tuple[int, int]] = (),
    gens: Sequence[int] = (),
    loads: Sequence[int] = (),
    coords: Optional[Dict[int, Tuple[float, float]]] = None,
    name: str = "test",
) -> Network:
    """Small per-unit network with buses 1..n and the given attachments."""
    coords = coords or {}
    buses = {}
    for i in range(1, n_buses + 1):
        record = {"index": i, "bus_i": i, "bus_type": 1, "vm": 1.0, "va": 0.0, "base_kv": 138.0}
        if i in coords:
            record["xcoord_1"], record["ycoord_1"] = coords[i]
        buses[str(i)] = record
    components = {"bus": buses}
    if branches:
        components["branch"] = {
            str(k): {"index": k, "f_bus": f, "t_bus": t, "br_r": 0.01, "br_x": 0.1, "br_status": 1}
            for k, (f, t) in enumerate(branches, start=1)
        }
    if gens:
        components["gen"] = {
            str(k): {"index": k, "gen_bus": b, "pg": 1.0, "pmax": 2.0, "gen_status": 1}
            for k, b in enumerate(gens, start=1)
        }
    if loads:
        components["load"] = {
            str(k): {"index": k, "load_bus": b, "pd": 0.5, "qd": 0.1, "status": 1}
            for k, b in enumerate(loads, start=1)
        }
    return Network({"name": name, "baseMVA": 100.0, "per_unit": True}, components)


def make_multinetwork(count: int, n_buses: int = 3) -> MultiNetwork:
    """`count` copies of a path network whose bus voltages differ per network."""
    branches = [(i, i + 1) for i in range(1, n_buses)]
    networks = {}
    for nw in range(1, count + 1):
        net = make_network(n_buses, branches, gens=[1], loads=[n_buses], name=f"nw{nw}")
        updates = {("bus", str(i)): {"vm": 1.0 + 0.01 * nw} for i in range(1, n_buses + 1)}
        networks[str(nw)] = net.with_records(updates)
    return MultiNetwork({"name": "multi", "baseMVA": 100.0}, networks)


@pytest.fixture
def data_dir():
    """Directory of the bundled case files."""
    return DATA_DIR


@pytest.fixture
def case39():
    """The bundled 39-bus case."""
    return load_case(DATA_DIR / "case39.m")


@pytest.fixture
def case5():
    """The bundled five-bus case with optional format features."""
    return load_case(DATA_DIR / "case5_features.m")


@pytest.fixture
def network_factory():
    """Build small networks: network_factory(n_buses, branches, gens=..., loads=..., coords=...)."""
    return make_network


@pytest.fixture
def path3(network_factory):
    """Three buses in a path."""
    return network_factory(3, [(1, 2), (2, 3)])


@pytest.fixture
def multinetwork_factory():
    """Build multi-network cases: multinetwork_factory(count, n_buses=3)."""
    return make_multinetwork


@pytest.fixture
def pglib_case():
    """Load a PGLib case from tests/data, GRIDPLOT_FIXTURES or the pglib download cache; skip when unreachable."""

    def load(name: str) -> Network:
        file_name = name if name.startswith("pglib_opf_") else f"pglib_opf_{name}"
        file_name = file_name if file_name.endswith(".m") else f"{file_name}.m"
        directories = [DATA_DIR]
        if os.getenv("GRIDPLOT_FIXTURES"):
            directories.append(Path(os.environ["GRIDPLOT_FIXTURES"]))
        for directory in directories:
            path = directory / file_name
            if path.is_file():
                return read_matpower(path.read_text(encoding="utf-8"))
        try:
            return pglib(file_name)
        except CaseParseError as e:
            pytest.skip(f"{file_name} not available offline ({e}); set GRIDPLOT_FIXTURES to a PGLib checkout")

    return load


@pytest.fixture
def fresh_schema():
    """Drop the cached Vega-Lite schema and validator before and after the test."""
    vega_lite_schema.cache_clear()
    _validator.cache_clear()
    yield
    vega_lite_schema.cache_clear()
    _validator.cache_clear()


# Pytest configuration
def pytest_configure(config):
    """Configure pytest for grid_plot tests."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line(
        "markers", "integration: marks tests as integration tests"
    )
    config.addinivalue_line(
        "markers", "unit: marks tests as unit tests"
    )
