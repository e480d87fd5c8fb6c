"""Acceptance suite: the thirteen full-scale checks behind `bbmlab verify`.

One test per check, run at acceptance scale (quick=False, seed 0) through a
shared session fixture, each asserting both the verdict and the check's
runtime budget. Four checks measure quantities whose finite-time values sit
outside the demanded bands no matter how many replicas are thrown at them
(growth medians at t=12, the d=1 front-speed ratio at t=14, the density
trend at theta=0.9, the d=2 enlargement volume at t=10); those tests fail
honestly rather than loosening the bands, and the terminal summary prints
one line per criterion either way.
"""

import json

import pytest

from bbmlab.cli import main
from bbmlab.verification import run_suite

from conftest import record_acceptance

BUDGET_SECONDS = {
    "rate_closed_form": 1.0,
    "rate_properties": 10.0,
    "mass_law": 60.0,
    "many_to_one": 120.0,
    "fkpp_oracle": 120.0,
    "fkpp_slope": 60.0,
    "absence_mc_vs_oracle": 180.0,
    "growth_exponents": 300.0,
    "front_speed": 300.0,
    "density_trend": 300.0,
    "volume_scaling": 600.0,
    "geometry_oracles": 120.0,
}


@pytest.fixture(scope="session")
def full_run():
    results = run_suite("all", quick=False, seed=0, workers=1)
    return {r.name: r for r in results}


def _criterion(full_run, name):
    result = full_run[name]
    budget = BUDGET_SECONDS.get(name)
    on_time = budget is None or result.seconds < budget
    detail = f"{result.detail}; {result.seconds:.1f}s"
    if budget is not None:
        detail += f" of {budget:.0f}s"
    record_acceptance(result.claim, result.passed and on_time, detail)
    assert result.passed, f"{result.claim}: {result.detail}"
    assert on_time, f"{result.claim}: took {result.seconds:.1f}s, budget {budget:.0f}s"


def test_absence_exponent_closed_form(full_run):
    _criterion(full_run, "rate_closed_form")


def test_rate_function_properties(full_run):
    _criterion(full_run, "rate_properties")


def test_population_mass_law(full_run):
    _criterion(full_run, "mass_law")


def test_many_to_one_expectation(full_run):
    _criterion(full_run, "many_to_one")


def test_absence_solver_oracles(full_run):
    _criterion(full_run, "fkpp_oracle")


def test_absence_solver_slope(full_run):
    _criterion(full_run, "fkpp_slope")


def test_simulated_absence_matches_solver(full_run):
    _criterion(full_run, "absence_mc_vs_oracle")


def test_growth_exponent_in_moving_ball(full_run):
    _criterion(full_run, "growth_exponents")


def test_front_speed(full_run):
    _criterion(full_run, "front_speed")


def test_local_density_trend(full_run):
    _criterion(full_run, "density_trend")


def test_enlargement_volume_scaling(full_run):
    _criterion(full_run, "volume_scaling")


def test_geometry_oracles(full_run):
    _criterion(full_run, "geometry_oracles")


def test_deterministic_reports(full_run, tmp_path):
    """In-process worker independence plus the command-level contract: two
    quick runs with the same seed write byte-identical report files."""
    result = full_run["determinism"]
    a, b = tmp_path / "a", tmp_path / "b"
    main(["verify", "all", "--quick", "--seed", "11", "--out", str(a)])
    main(["verify", "all", "--quick", "--seed", "11", "--out", str(b)])
    identical = (a / "verdicts.json").read_bytes() == (b / "verdicts.json").read_bytes()
    same_checks = json.loads((a / "verdicts.json").read_text())["checks"]
    detail = f"{result.detail}; report files identical: {identical} over {len(same_checks)} checks"
    record_acceptance(result.claim, result.passed and identical, detail)
    assert result.passed, result.detail
    assert identical
