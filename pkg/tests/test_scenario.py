import json

import pytest

from weyl_equidist.errors import ValidationError
from weyl_equidist.scenario import ScenarioParseError, builtin_names, load_scenario, scenario_from_dict


def test_builtins_load():
    names = builtin_names()
    assert {"a1_root_z2", "a1_weight_z2", "a2_root_z3", "torus_t2"} <= set(names)
    for n in names:
        s = load_scenario(f"builtin:{n}")
        assert s.name == n
        s.action()


def test_roundtrip(tmp_path):
    s = load_scenario("builtin:a2_root_z3")
    p = tmp_path / "s.json"
    p.write_text(json.dumps(s.to_dict()))
    assert load_scenario(str(p)) == s


def test_defaults():
    s = scenario_from_dict({"cartan_type": "A1"})
    assert (s.name, s.lattice, s.galois_generators, s.m_min, s.m_max) == ("A1", "root", (), 1, 1)


def test_custom_lattice():
    s = scenario_from_dict({"cartan_type": "A1", "lattice": [[2]], "galois_generators": [[[-1]]]})
    assert s.datum().lattice_rank == 1
    assert s.action().order() == 2


@pytest.mark.parametrize(
    "data",
    [
        [],
        {},
        {"cartan_type": 3},
        {"cartan_type": "A1", "lattice": "coroot"},
        {"cartan_type": "A1", "lattice": [1]},
        {"cartan_type": "A1", "galois_generators": [[-1]]},
        {"cartan_type": "A1", "m_min": "1"},
        {"cartan_type": "A1", "m_max": 2.5},
        {"cartan_type": "A1", "name": 7},
    ],
)
def test_parse_errors(data):
    with pytest.raises(ScenarioParseError):
        scenario_from_dict(data)


def test_bad_json(tmp_path):
    p = tmp_path / "s.json"
    p.write_text("{")
    with pytest.raises(ScenarioParseError):
        load_scenario(str(p))


def test_m_range_validation():
    with pytest.raises(ValidationError):
        scenario_from_dict({"cartan_type": "A1", "m_min": 3, "m_max": 2})
