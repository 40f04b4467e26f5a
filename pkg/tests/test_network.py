"""
Tests for the case model: lookup, validation, JSON ingest/egress and
record updates.
"""

import json

import numpy as np
import pytest

from grid_plot.errors import (
    CaseParseError,
    NonFiniteValueError,
    UnknownComponentTypeError,
    UnknownIdError,
    UnsupportedFormatError,
)
from grid_plot.Network import (
    BadStatus,
    ComponentRef,
    DanglingBusRef,
    IndexMismatch,
    MissingIndex,
    MultiNetwork,
    Network,
    SelfLoop,
    bus_field,
    bus_key,
    from_json,
    get_component,
    id_sort_key,
    is_active,
    load_case,
    save_case,
    to_json,
    union_network,
    validate,
)


class TestLookup:
    """Test cases for component lookup."""

    @pytest.mark.unit
    def test_get_component(self, case39):
        """A bus is found by type and id."""
        record = get_component(case39, ComponentRef("bus", "1"))
        assert record["index"] == 1
        assert record["base_kv"] == 345.0

    @pytest.mark.unit
    def test_unknown_type(self, case39):
        """A type absent from the case raises UnknownComponentTypeError."""
        with pytest.raises(UnknownComponentTypeError):
            get_component(case39, ("storage", "1"))

    @pytest.mark.unit
    def test_unknown_id(self, case39):
        """An id absent from an existing type raises UnknownIdError."""
        with pytest.raises(UnknownIdError):
            case39.get_component(("bus", "999"))

    @pytest.mark.unit
    @pytest.mark.parametrize("value", [7, 7.0, "7", np.int64(7), np.int32(7), np.uint16(7), np.float64(7.0)])
    def test_bus_key_accepts_integral_values(self, value):
        """Python and numpy integers and whole floats all name bus "7"."""
        assert bus_key(value) == "7"

    @pytest.mark.unit
    @pytest.mark.parametrize("value", [True, 7.5, None, float("nan"), [7]])
    def test_bus_key_rejects_other_values(self, value):
        """Booleans, fractional numbers and non-scalars are not bus references."""
        assert bus_key(value) is None

    @pytest.mark.unit
    def test_lookup_errors_are_key_errors(self, case39):
        """Callers catching KeyError still catch lookup failures."""
        with pytest.raises(KeyError):
            case39.get_component(("bus", "999"))

    @pytest.mark.unit
    def test_sorted_ids_numeric(self):
        """Numeric ids sort numerically, other ids after them."""
        net = Network({}, {"x": {k: {"index": 0} for k in ["10", "2", "b", "1", "a"]}})
        assert net.sorted_ids("x") == ["1", "2", "10", "a", "b"]
        assert id_sort_key("7") < id_sort_key("a")

    @pytest.mark.unit
    def test_bus_field_resolution(self):
        """Attachment fields resolve by <type>_bus, then bus, then any *_bus."""
        assert bus_field("gen", {"gen_bus": 1, "bus": 2}) == "gen_bus"
        assert bus_field("hydro", {"bus": 3}) == "bus"
        assert bus_field("hydro", {"plant_bus": 3}) == "plant_bus"
        assert bus_field("branch", {"f_bus": 1, "t_bus": 2}) is None

    @pytest.mark.unit
    def test_is_active(self):
        """Buses are inactive with bus_type 4, others with any zero status."""
        assert not is_active("bus", {"bus_type": 4})
        assert is_active("bus", {"bus_type": 1})
        assert not is_active("branch", {"br_status": 0})
        assert is_active("load", {"status": 1})


class TestValidate:
    """Test cases for the validation rules."""

    @pytest.mark.unit
    def test_bundled_cases_valid(self, case39, case5):
        """The bundled cases have no violations."""
        assert validate(case39) == []
        assert validate(case5) == []

    @pytest.mark.unit
    def test_dangling_bus(self, network_factory):
        """A branch to a missing bus is reported, not raised."""
        net = network_factory(2, [(1, 2)])
        net = net.with_records({("branch", "1"): {"t_bus": 9}})
        violations = validate(net)
        assert violations == [DanglingBusRef(ComponentRef("branch", "1"))]

    @pytest.mark.unit
    def test_dangling_connected_component(self, network_factory):
        """A gen attached to a missing bus is reported."""
        net = network_factory(2, [(1, 2)], gens=[1]).with_records({("gen", "1"): {"gen_bus": 5}})
        assert DanglingBusRef(ComponentRef("gen", "1")) in validate(net)

    @pytest.mark.unit
    def test_index_rules(self):
        """Missing and mismatching indices are reported."""
        net = Network({}, {"bus": {"1": {"index": 1}, "2": {"index": 3}, "3": {"name": "x", "index": "3"}}})
        violations = validate(net)
        assert IndexMismatch(ComponentRef("bus", "2")) in violations
        assert MissingIndex(ComponentRef("bus", "3")) in violations

    @pytest.mark.unit
    def test_bad_status(self, network_factory):
        """Status fields must be 0 or 1."""
        net = network_factory(2, [(1, 2)]).with_records({("branch", "1"): {"br_status": 2}})
        assert validate(net) == [BadStatus(ComponentRef("branch", "1"))]

    @pytest.mark.unit
    def test_self_loop(self, network_factory):
        """An edge whose endpoints coincide is reported."""
        net = network_factory(2, [(1, 1)])
        assert SelfLoop(ComponentRef("branch", "1")) in validate(net)


class TestJson:
    """Test cases for JSON ingest and egress."""

    @pytest.mark.unit
    def test_round_trip_matpower(self, case39):
        """MatPower -> Network -> JSON -> Network is structurally identical."""
        again = from_json(to_json(case39))
        assert again == case39

    @pytest.mark.unit
    def test_round_trip_features(self, case5):
        """Lists, strings and booleans survive the JSON round trip."""
        again = from_json(to_json(case5))
        assert again == case5
        assert again.get_component(("gen", "4"))["cost"] == [0.0, 0.0, 200.0, 4000.0]

    @pytest.mark.unit
    def test_canonical_text(self, path3):
        """Output has sorted keys, 2-space indentation and a trailing newline."""
        text = to_json(path3)
        assert text.endswith("}\n")
        assert text == json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n"

    @pytest.mark.unit
    def test_custom_type_passthrough(self):
        """Unknown component types and fields are kept."""
        text = json.dumps({
            "baseMVA": 10.0,
            "bus": {"1": {"index": 1}},
            "hydro": {"1": {"index": 1, "hydro_bus": 1, "reservoir": "upper"}},
        })
        net = from_json(text)
        assert net.get_component(("hydro", "1"))["reservoir"] == "upper"
        assert net.metadata == {"baseMVA": 10.0}

    @pytest.mark.unit
    @pytest.mark.parametrize("text", ['{"a": NaN}', '{"a": Infinity}', '{"a": -Infinity}', '{"a": 1e999}'])
    def test_non_finite_rejected(self, text):
        """NaN, Infinity and overflowing literals are rejected."""
        with pytest.raises(NonFiniteValueError):
            from_json(text)

    @pytest.mark.unit
    def test_malformed_json(self):
        """Malformed JSON raises CaseParseError."""
        with pytest.raises(CaseParseError):
            from_json('{"bus": ')

    @pytest.mark.unit
    def test_multinetwork_detection(self, multinetwork_factory):
        """multinetwork=true with an nw map yields a MultiNetwork."""
        multi = multinetwork_factory(3)
        again = from_json(to_json(multi))
        assert isinstance(again, MultiNetwork)
        assert again.nw_ids == ["1", "2", "3"]
        assert again == multi

    @pytest.mark.unit
    def test_empty_multinetwork(self):
        """A multi-network without networks is rejected."""
        with pytest.raises(CaseParseError):
            from_json('{"multinetwork": true, "nw": {}}')


class TestFiles:
    """Test cases for load_case and save_case."""

    @pytest.mark.unit
    def test_save_and_load(self, case39, tmp_path):
        """A saved case loads back unchanged."""
        path = save_case(case39, tmp_path / "case39.json")
        assert load_case(path) == case39

    @pytest.mark.unit
    def test_unsupported_extension(self, tmp_path):
        """Only .m and .json are accepted."""
        path = tmp_path / "case.raw"
        path.write_text("x")
        with pytest.raises(UnsupportedFormatError):
            load_case(path)

    @pytest.mark.unit
    def test_missing_file(self, tmp_path):
        """A missing file is a parse error."""
        with pytest.raises(CaseParseError):
            load_case(tmp_path / "missing.m")


class TestUpdates:
    """Test cases for record updates and unions."""

    @pytest.mark.unit
    def test_with_records_copies(self, path3):
        """with_records leaves the original untouched."""
        updated = path3.with_records({("bus", "2"): {"vm": 1.05}})
        assert updated.get_component(("bus", "2"))["vm"] == 1.05
        assert path3.get_component(("bus", "2"))["vm"] == 1.0

    @pytest.mark.unit
    def test_with_records_unknown(self, path3):
        """Updates to missing records raise."""
        with pytest.raises(UnknownIdError):
            path3.with_records({("bus", "9"): {"vm": 1.0}})
        with pytest.raises(UnknownComponentTypeError):
            path3.with_records({("storage", "1"): {"ps": 1.0}})

    @pytest.mark.unit
    def test_union_first_wins(self, multinetwork_factory):
        """The union keeps the first network's version of shared records."""
        multi = multinetwork_factory(2)
        union = union_network(multi)
        assert union.get_component(("bus", "1"))["vm"] == pytest.approx(1.01)
        assert union.count("bus") == 3

    @pytest.mark.unit
    def test_multinetwork_with_records(self, multinetwork_factory):
        """Updates apply to every network holding the record."""
        multi = multinetwork_factory(2).with_records({("bus", "1"): {"xcoord_1": 0.0, "ycoord_1": 1.0}})
        for nw in multi.nw_ids:
            assert multi.networks[nw].get_component(("bus", "1"))["ycoord_1"] == 1.0
