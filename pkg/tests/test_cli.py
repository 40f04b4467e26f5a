"""
Tests for the grid-plot command line.
"""

import importlib
import json
from unittest.mock import patch

import pytest

from grid_plot.cli import EXIT_FAILURE, EXIT_OK, EXIT_PARSE, EXIT_USAGE, run
from grid_plot.Network import load_case

FAST = ["--layout", "sfdp", "--iterations", "30"]


@pytest.fixture
def case39_path(data_dir):
    return str(data_dir / "case39.m")


class TestPlot:
    """Test cases for the plot command."""

    @pytest.mark.unit
    def test_writes_spec(self, case39_path, tmp_path, capsys):
        """plot writes a Vega-Lite spec and reports the layout time."""
        out = tmp_path / "fig.vl.json"
        assert run(["plot", case39_path, *FAST, "--out", str(out)]) == EXIT_OK
        assert "Time to compute layout [sec]:" in capsys.readouterr().out
        spec = json.loads(out.read_text(encoding="utf-8"))
        assert [layer["name"] for layer in spec["layer"]] == ["branch", "connector", "bus", "gen", "load"]

    @pytest.mark.unit
    def test_deterministic(self, case39_path, tmp_path):
        """The same seed gives byte-identical output."""
        first, second = tmp_path / "a.vl.json", tmp_path / "b.vl.json"
        for out in (first, second):
            assert run(["plot", case39_path, *FAST, "--seed", "7", "--out", str(out)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    @pytest.mark.unit
    def test_html(self, case39_path, tmp_path):
        """.html outputs are standalone pages."""
        out = tmp_path / "fig.html"
        assert run(["plot", case39_path, *FAST, "--components", "bus,branch", "--out", str(out)]) == EXIT_OK
        assert out.read_text(encoding="utf-8").startswith("<!DOCTYPE html>")

    @pytest.mark.unit
    def test_styles(self, case39_path, tmp_path):
        """--color-by, --size and --flow reach the spec."""
        out = tmp_path / "fig.vl.json"
        argv = ["plot", case39_path, *FAST, "--color-by", "bus:vm", "--size", "bus:60", "--flow", "--out", str(out)]
        assert run(argv) == EXIT_OK
        layers = {layer["name"]: layer for layer in json.loads(out.read_text(encoding="utf-8"))["layer"]}
        assert layers["bus"]["encoding"]["color"]["field"] == "vm"
        assert layers["bus"]["encoding"]["size"] == {"value": 60.0}
        assert len(layers["branch"]["layer"]) == 2

    @pytest.mark.unit
    @pytest.mark.parametrize("extra", [
        ["--out", "fig.png"],
        ["--layout", "circular"],
        ["--color-by", "bus:lam_p"],
        ["--size", "bus:-1"],
        ["--bogus"],
    ])
    def test_usage_errors(self, case39_path, tmp_path, extra, monkeypatch):
        """Bad flags, layouts, fields and extensions exit with 3."""
        monkeypatch.chdir(tmp_path)
        assert run(["plot", case39_path, "--iterations", "5", *extra]) == EXIT_USAGE

    @pytest.mark.unit
    def test_unreadable_case(self, tmp_path):
        """Missing or malformed cases exit with 2."""
        assert run(["plot", str(tmp_path / "none.m")]) == EXIT_PARSE
        bad = tmp_path / "bad.m"
        bad.write_text("mpc.bus = [1 2 3;\n", encoding="utf-8")
        assert run(["plot", str(bad)]) == EXIT_PARSE

    @pytest.mark.unit
    def test_unwritable_output(self, case39_path, tmp_path):
        """Writing into a missing directory exits with 4."""
        out = tmp_path / "missing" / "fig.html"
        assert run(["plot", case39_path, *FAST, "--out", str(out)]) == EXIT_FAILURE

    @pytest.mark.unit
    def test_missing_schema(self, case39_path, tmp_path, fresh_schema, capsys):
        """Without a loadable Vega-Lite schema, plot reports the failure and exits with 4."""
        out = tmp_path / "fig.vl.json"
        with patch.object(importlib.import_module("grid_plot.PlotSpec").pkgutil, "get_data", side_effect=ModuleNotFoundError("altair.vegalite.v5")):
            assert run(["plot", case39_path, *FAST, "--out", str(out)]) == EXIT_FAILURE
        assert "Vega-Lite schema" in capsys.readouterr().err
        assert not out.exists()


class TestLayoutAndConvert:
    """Test cases for the layout and convert commands."""

    @pytest.mark.unit
    def test_layout_then_fixed_plot(self, case39_path, tmp_path):
        """Saved coordinates are reused verbatim by a fixed plot."""
        laid_path = tmp_path / "laid.json"
        argv = ["layout", case39_path, "--algorithm", "sfdp", "--iterations", "30", "--out", str(laid_path)]
        assert run(argv) == EXIT_OK
        laid = load_case(laid_path)
        bus = laid.get_component(("bus", "1"))
        assert "xcoord_1" in bus and "ycoord_1" in bus

        out = tmp_path / "fig.vl.json"
        assert run(["plot", str(laid_path), "--fixed", "--out", str(out)]) == EXIT_OK
        layers = {layer["name"]: layer for layer in json.loads(out.read_text(encoding="utf-8"))["layer"]}
        first = next(row for row in layers["bus"]["data"]["values"] if row["index"] == 1)
        assert (first["xcoord_1"], first["ycoord_1"]) == (bus["xcoord_1"], bus["ycoord_1"])

    @pytest.mark.unit
    def test_layout_needs_out(self, case39_path):
        """--out is required."""
        assert run(["layout", case39_path]) == EXIT_USAGE

    @pytest.mark.unit
    def test_convert_json(self, case39_path, tmp_path):
        """JSON conversion keeps every record."""
        out = tmp_path / "case39.json"
        assert run(["convert", case39_path, "--out", str(out)]) == EXIT_OK
        assert load_case(out).count("branch") == 46

    @pytest.mark.unit
    def test_convert_csv(self, case39_path, tmp_path):
        """CSV conversion writes one file per table."""
        out = tmp_path / "tables"
        assert run(["convert", case39_path, "--to", "csv", "--out", str(out)]) == EXIT_OK
        assert sorted(p.name for p in out.iterdir()) == ["branch.csv", "bus.csv", "gen.csv", "load.csv", "metadata.csv"]
        lines = [line for line in (out / "gen.csv").read_bytes().split(b"\r\n") if line]
        assert len(lines) == 1 + 10


class TestAnalyze:
    """Test cases for the analyze command."""

    @pytest.mark.unit
    def test_degrees(self, case39_path, tmp_path, capsys):
        """The degree summary lists class, bus count and maximum degree."""
        out = tmp_path / "degrees.vl.json"
        assert run(["analyze", case39_path, "degrees", "--out", str(out)]) == EXIT_OK
        assert "case39,small,39,5" in capsys.readouterr().out
        assert json.loads(out.read_text(encoding="utf-8"))["mark"] == {"type": "bar"}

    @pytest.mark.unit
    def test_voltage(self, case39_path, capsys):
        """Voltage statistics are printed as CSV."""
        assert run(["analyze", case39_path, "voltage"]) == EXIT_OK
        header = capsys.readouterr().out.split("\r\n")[0]
        assert header == "base_kv,vm_count,vm_mean,vm_std,vm_min,vm_max"

    @pytest.mark.unit
    def test_group(self, case39_path, capsys):
        """Grouped aggregates over a chosen component table."""
        argv = ["analyze", case39_path, "group", "--component", "gen", "--by", "gen_status", "--agg", "pmax:count"]
        assert run(argv) == EXIT_OK
        assert capsys.readouterr().out.split("\r\n")[:2] == ["gen_status,pmax_count", "1,10"]

    @pytest.mark.unit
    def test_top(self, case39_path, capsys):
        """top prints k rows plus a header."""
        argv = ["analyze", case39_path, "top", "--component", "gen", "--col", "pmax", "-k", "3"]
        assert run(argv) == EXIT_OK
        lines = [line for line in capsys.readouterr().out.split("\r\n") if line]
        assert len(lines) == 4

    @pytest.mark.unit
    def test_two_cases(self, case39_path, capsys):
        """Several cases get a leading case column."""
        assert run(["analyze", case39_path, case39_path, "voltage"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("case,base_kv,")

    @pytest.mark.unit
    @pytest.mark.parametrize("argv", [
        ["voltage"],
        ["CASE"],
        ["CASE", "group", "--component", "gen", "--by", "gen_bus"],
        ["CASE", "group", "--component", "gen", "--by", "gen_bus", "--agg", "pmax:median"],
        ["CASE", "top", "--component", "gen", "--col", "nope"],
    ])
    def test_usage_errors(self, case39_path, argv):
        """Missing actions, options and columns exit with 3."""
        argv = [case39_path if item == "CASE" else item for item in argv]
        assert run(["analyze", *argv]) == EXIT_USAGE
