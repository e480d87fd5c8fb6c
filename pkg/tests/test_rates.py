"""Rate-function tests: closed forms, an independent dense-grid oracle,
convexity, monotonicity, and the parameter-shift identity."""

import math

import numpy as np
import pytest

from bbmlab.rates import (
    RateParams,
    absence_rate_closed_form,
    growth_exponent,
    minimize,
    objective,
    rho_bar,
    volume_constant,
)

# Independent minimizer value at (theta, k, a, d) = (0.2, 0.1, 0.1, 2),
# computed with 50-digit arithmetic and a separate golden-section
# implementation before this module existed.
FROZEN_RATE_VALUE = 0.514761153333


def _random_params(rng, allow_zero_s=False):
    theta = rng.uniform(0.0, 0.95)
    d = int(rng.integers(1, 4))
    beta = rng.uniform(0.5, 2.0)
    if allow_zero_s:
        s_total = 0.0
    else:
        s_total = 0.8 * (1.0 - theta**2) * rng.uniform(0.05, 1.0)
    v = rng.uniform(0.0, 1.0)
    k = s_total * v / d
    a = s_total * (1.0 - v)
    return RateParams(theta=theta, k=k, a=a, d=d, beta=beta)


def test_closed_form_on_theta_grid():
    worst = 0.0
    for theta in np.linspace(0.0, 0.99, 200):
        value = minimize(RateParams(theta=float(theta))).value
        worst = max(worst, abs(value - absence_rate_closed_form(float(theta))))
    assert worst < 1e-9


def test_known_points():
    assert minimize(RateParams(theta=0.0)).value == pytest.approx(2.0 * (math.sqrt(2.0) - 1.0), abs=1e-12)
    assert minimize(RateParams(theta=0.5)).value == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-12)


def test_frozen_oracle_value():
    res = minimize(RateParams(theta=0.2, k=0.1, a=0.1, d=2))
    assert abs(res.value - FROZEN_RATE_VALUE) < 1e-9


def test_dense_grid_oracle():
    """Brute-force minimum over a 200k-point rho grid brackets the reported one."""
    rng = np.random.default_rng(42)
    for _ in range(25):
        p = _random_params(rng)
        res = minimize(p)
        upper = rho_bar(p)
        grid = np.linspace(upper * 1e-6, upper, 200_001)
        s = p.s
        inner = (1.0 - grid) ** 2 - s * (1.0 - grid)
        vals = grid + (np.sqrt(inner) - p.theta) ** 2 / grid
        i = int(np.argmin(vals))
        step = grid[1] - grid[0]
        assert vals[i] >= res.value - 1e-12
        assert vals[i] - res.value < 1e-7
        assert abs(grid[i] - res.rho_hat) < 2.0 * step + 1e-9


def test_shift_identity():
    rng = np.random.default_rng(7)
    for _ in range(300):
        p = _random_params(rng)
        shifted = RateParams(theta=p.theta, k=0.0, a=p.a + p.k * p.d, d=p.d, beta=p.beta)
        assert abs(minimize(p).value - minimize(shifted).value) < 1e-9


def test_strict_monotonicity():
    """Value and minimizer both strictly decrease in theta, k, and a."""
    rng = np.random.default_rng(11)
    delta = 1e-3
    for _ in range(100):
        p = _random_params(rng)
        if p.theta + delta >= 0.95 or p.s + 2 * delta >= 1.0 - (p.theta + delta) ** 2:
            continue
        base = minimize(p)
        for bumped in (
            RateParams(p.theta + delta, p.k, p.a, p.d, p.beta),
            RateParams(p.theta, p.k + delta / p.d, p.a, p.d, p.beta),
            RateParams(p.theta, p.k, p.a + delta, p.d, p.beta),
        ):
            res = minimize(bumped)
            assert res.value < base.value
            assert res.rho_hat < base.rho_hat


def test_midpoint_convexity():
    rng = np.random.default_rng(23)
    for _ in range(200):
        p = _random_params(rng)
        upper = rho_bar(p)
        x1, x2 = sorted(rng.uniform(1e-3 * upper, upper, size=2))
        if x2 - x1 < 1e-4:
            continue
        mid = objective(0.5 * (x1 + x2), p)
        assert mid < 0.5 * (objective(x1, p) + objective(x2, p)) - 0.0


def test_minimizer_is_interior_stationary_point():
    rng = np.random.default_rng(31)
    for _ in range(50):
        p = _random_params(rng)
        res = minimize(p)
        assert 0.0 < res.rho_hat <= res.rho_bar + 1e-12
        h = 1e-6 * res.rho_bar
        if res.rho_hat + h < res.rho_bar:
            slope = (objective(res.rho_hat + h, p) - objective(res.rho_hat - h, p)) / (2 * h)
            assert abs(slope) < 1e-4


def test_rho_bar_formula():
    rng = np.random.default_rng(5)
    for _ in range(50):
        p = _random_params(rng)
        expect = 1.0 - 0.5 * p.s - math.sqrt(0.25 * p.s**2 + p.theta**2)
        assert rho_bar(p) == pytest.approx(expect, abs=1e-14)


def test_domain_errors_name_the_inequality():
    with pytest.raises(ValueError, match="0 <= theta < 1"):
        RateParams(theta=1.0)
    with pytest.raises(ValueError, match="0 <= theta < 1"):
        RateParams(theta=-0.1)
    with pytest.raises(ValueError, match="k >= 0"):
        RateParams(theta=0.1, k=-0.2)
    with pytest.raises(ValueError, match="a >= 0"):
        RateParams(theta=0.1, a=-0.2)
    with pytest.raises(ValueError, match=r"a \+ k\*d < 1 - theta\^2"):
        RateParams(theta=0.5, k=0.4, d=2)
    with pytest.raises(ValueError, match="beta > 0"):
        RateParams(theta=0.1, beta=0.0)
    with pytest.raises(ValueError, match="d >= 1"):
        RateParams(theta=0.1, d=0)


def test_growth_exponent_formula():
    p = RateParams(theta=0.3, k=0.05, a=0.0, d=2, beta=1.5)
    assert growth_exponent(p) == pytest.approx(1.5 * (1.0 - 0.09 - 0.1), abs=1e-14)


def test_volume_constant_formula():
    omega = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}
    for d in (1, 2, 3):
        for beta, k in ((1.0, 0.0), (0.5, 0.1), (2.0, 0.2)):
            expect = (2.0 * beta * (1.0 - k * d)) ** (d / 2.0) * omega[d]
            assert volume_constant(beta, k, d) == pytest.approx(expect, rel=1e-12)
