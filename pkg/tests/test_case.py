"""Case parsing, serialization round-trips, load growth, and validation."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridplan.case import (
    Branch,
    Bus,
    CandidateLine,
    Case,
    CaseError,
    Generator,
    Horizon,
    LoadProfile,
    grow_load,
    load_case,
    parse_case,
    render_case,
    validate_case,
)

MINIMAL = """
{
  "buses": [{"id": "a", "reference": true}, {"id": "b"}],
  "generators": [{"id": "g", "bus": "a", "p_max": 10, "cost": 3}],
  "branches": [{"id": "k", "from": "a", "to": "b", "x": 0.002, "rate": 5}]
}
"""


def test_parse_minimal_applies_defaults():
    case = parse_case(MINIMAL)
    assert case.horizon == Horizon()
    assert case.angle_bound == 0.6
    assert case.branches[0].switchable is True
    assert case.generators[0].p_min == 0.0
    assert case.candidates == ()
    assert case.load_profile.get("b", 1, 1) == 0.0


def test_parse_reports_json_position():
    with pytest.raises(CaseError, match=r"line 1, column 2"):
        parse_case("{oops")


def test_parse_missing_field_named():
    with pytest.raises(CaseError, match="missing required field 'rate'"):
        parse_case(MINIMAL.replace('"rate": 5', '"rating": 5'))


def test_parse_unknown_bus_reference():
    with pytest.raises(CaseError, match="unknown bus reference 'z'"):
        parse_case(MINIMAL.replace('"from": "a"', '"from": "z"'))


def test_parse_dense_load_shape_checked():
    doc = MINIMAL.rstrip().rstrip("}") + ', "load": {"b": [[1, 2]]}}'
    with pytest.raises(CaseError, match="4x24"):
        parse_case(doc)


def test_load_case_round_trip(tmp_path, bundled):
    for name in ("defer_build", "eight_bus"):
        case = bundled(name)
        path = tmp_path / f"{name}.json"
        path.write_text(render_case(case))
        assert load_case(path) == case


def test_render_parse_round_trip_exact(bundled):
    case = bundled("tri_switch")
    assert parse_case(render_case(case)) == case


def test_grow_load_compounds_over_full_epochs():
    # 2 percent over one five-year epoch: 100 * 1.02**5
    assert grow_load(100.0, 0.02, 5, 2) == 110.40808032
    assert grow_load(100.0, 0.02, 5, 1) == 100.0
    assert grow_load(100.0, 0.02, 5, 3) == 100.0 * 1.02 ** 10
    with pytest.raises(ValueError):
        grow_load(100.0, 0.02, 5, 0)


@given(
    base=st.floats(0.0, 1e4),
    rate=st.floats(0.0, 0.2),
    n_ye=st.integers(1, 10),
    e=st.integers(1, 5),
)
@settings(max_examples=60, deadline=None)
def test_grow_load_monotone_in_epoch(base, rate, n_ye, e):
    assert grow_load(base, rate, n_ye, e + 1) >= grow_load(base, rate, n_ye, e)


def test_load_profile_array_round_trip():
    profile = LoadProfile.from_arrays({"b": [[0.0, 2.5], [1.0, 0.0]]})
    assert profile.get("b", 2, 1) == 2.5
    assert profile.get("b", 1, 1) == 0.0
    assert profile.to_arrays(2, 2) == {"b": [[0.0, 2.5], [1.0, 0.0]]}


def _valid_case():
    return parse_case(MINIMAL)


def test_validate_accepts_valid_case():
    report = validate_case(_valid_case())
    assert report.ok
    assert str(report) == "case is valid"


def test_validate_flags_fatal_findings():
    case = _valid_case()
    bad = Case(
        buses=case.buses,
        generators=(Generator("g", "a", p_max=10, cost=-1),),
        branches=(Branch("k", "a", "b", x=-0.002, rate=5),
                  Branch("k", "a", "b", x=0.002, rate=5)),
        candidates=(CandidateLine("c", "a", "a", x=0.002, rate=0, capital_cost=-3),),
        horizon=Horizon(n_epochs=0, load_growth=-0.1),
        load_profile=LoadProfile({("b", 1, 1): -5.0}),
        angle_bound=0.0,
    )
    report = validate_case(bad)
    text = str(report)
    assert not report.ok
    for fragment in (
        "duplicate branch id 'k'",
        "negative cost",
        "nonpositive reactance",
        "connects bus 'a' to itself",
        "nonpositive rate",
        "negative capital cost",
        "must be >= 1",
        "load growth must be >= 0",
        "angle bound must be > 0",
        "negative load",
    ):
        assert fragment in text, fragment


def test_validate_requires_one_reference_bus():
    case = _valid_case()
    twice = Case(
        buses=(Bus("a", is_reference=True), Bus("b", is_reference=True)),
        generators=case.generators,
        branches=case.branches,
        candidates=(),
        horizon=case.horizon,
        load_profile=case.load_profile,
    )
    report = validate_case(twice)
    assert "exactly one reference bus required, found 2" in str(report)


def test_bundled_cases_all_valid(bundled):
    from conftest import ALL_CASES

    assert len(ALL_CASES) >= 5
    for name in ALL_CASES:
        case = bundled(name)
        report = validate_case(case)
        assert report.ok, f"{name}: {report}"
        assert case.name == name
        assert case.description
        assert parse_case(render_case(case)) == case
