"""Verification-suite registry tests (the checks themselves run elsewhere)."""

import pytest

from bbmlab.verification import SUITES, check_names, run_suite


def test_suite_names():
    assert SUITES == ("rate", "sim", "geometry", "fkpp", "all")


def test_registry_covers_thirteen_checks():
    names = check_names("all")
    assert len(names) == 13
    assert len(set(names)) == 13
    for suite in ("rate", "sim", "geometry", "fkpp"):
        subset = check_names(suite)
        assert subset
        assert set(subset) <= set(names)
    pooled = set()
    for suite in ("rate", "sim", "geometry", "fkpp"):
        pooled |= set(check_names(suite))
    assert pooled == set(names)


def test_unknown_suite_rejected():
    with pytest.raises(ValueError, match="suite"):
        run_suite("everything")
    with pytest.raises(ValueError, match="suite"):
        check_names("everything")


def test_rate_suite_runs_and_stamps_timing():
    results = run_suite("rate", quick=True, seed=0)
    assert [r.name for r in results] == list(check_names("rate"))
    for r in results:
        assert r.passed
        assert r.seconds >= 0.0
        assert r.claim and r.detail
