"""
Unit tests for command-line state specs
"""
import json

import numpy as np
import pytest

from gmelab.cli.state_spec import build_state, parse_state_spec, state_to_dense
from gmelab.core.exceptions import DimensionError, StateSpecError, ValidationError
from gmelab.models.schemas import ConstructorStateSpec, DenseStateSpec
from gmelab.services.states import ghz, isotropic, star_pen


class TestParse:
    """Text forms of --state"""

    def test_isotropic(self):
        spec = parse_state_spec("isotropic:0.5")
        assert spec == ConstructorStateSpec(name="isotropic", params=[0.5])

    def test_bell_takes_no_parameters(self):
        assert parse_state_spec("bell").params == []

    def test_star(self):
        rho = build_state(parse_state_spec("star_pen:3,0.4"))
        assert np.array_equal(rho.matrix, star_pen(3, 0.4).matrix)

    def test_pen_edges(self):
        spec = parse_state_spec("pen:3:1-2=0.5,1-3=0.4")
        assert spec.name == "pen"
        assert [(e.i, e.j, e.p) for e in spec.edges] == [(1, 2, 0.5), (1, 3, 0.4)]
        assert build_state(spec).dim == 16

    @pytest.mark.parametrize(
        "text",
        ["werner:0.5", "isotropic", "isotropic:0.1,0.2", "isotropic:abc", "pen:3", "pen:3:1=0.5", "pen:x:1-2=0.5"],
    )
    def test_malformed(self, text):
        with pytest.raises(StateSpecError):
            parse_state_spec(text)

    def test_missing_file(self, temp_dir):
        with pytest.raises(StateSpecError):
            parse_state_spec(f"@{temp_dir / 'missing.json'}")

    def test_constructor_file(self, temp_dir):
        path = temp_dir / "ghz.json"
        path.write_text(json.dumps({"name": "ghz", "params": [3]}), encoding="utf-8")
        rho = build_state(parse_state_spec(f"@{path}"))
        assert np.array_equal(rho.matrix, ghz(3).matrix)

    def test_invalid_json_file(self, temp_dir):
        path = temp_dir / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(StateSpecError):
            parse_state_spec(str(path))


class TestBuild:

    def test_constructor_precondition(self):
        with pytest.raises(ValidationError):
            build_state(parse_state_spec("isotropic:1.5"))

    def test_non_integer_party_count(self):
        with pytest.raises(StateSpecError):
            build_state(parse_state_spec("ghz:2.5"))

    def test_copies_override(self):
        rho = build_state(parse_state_spec("isotropic:0.5"), copy_count=2)
        assert rho.dim == 16

    def test_copies_field(self):
        rho = build_state(ConstructorStateSpec(name="isotropic", params=[0.5], copies=3))
        assert rho.dim == 64

    def test_copy_cap(self):
        with pytest.raises(DimensionError):
            build_state(parse_state_spec("star_pen:3,0.4"), copy_count=3)


class TestDense:
    """Dense JSON export and re-import"""

    def test_round_trip_is_bit_exact(self, temp_dir):
        rho = star_pen(3, 0.37)
        path = temp_dir / "state.json"
        path.write_text(state_to_dense(rho).model_dump_json(by_alias=True), encoding="utf-8")
        back = build_state(parse_state_spec(f"@{path}"))
        assert np.array_equal(back.matrix, rho.matrix)
        assert back.layout == rho.layout

    def test_copy_alias(self):
        payload = state_to_dense(isotropic(0.5)).model_dump(by_alias=True)
        assert payload["layout"][0]["copy"] == 1
        assert "copy_index" not in payload["layout"][0]

    def test_wrong_entry_count(self):
        spec = DenseStateSpec(layout=[{"dimension": 2, "party": 1}], entries=[[1.0, 0.0]])
        with pytest.raises(StateSpecError):
            build_state(spec)

    def test_not_a_state(self):
        spec = DenseStateSpec(
            layout=[{"dimension": 2, "party": 1}],
            entries=[[1.5, 0.0], [0.0, 0.0], [0.0, 0.0], [-0.5, 0.0]],
        )
        with pytest.raises(ValidationError):
            build_state(spec)
