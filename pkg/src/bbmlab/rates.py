"""Large-deviation rate function for mass shortfall in a moving, shrinking ball.

For a dyadic branching Brownian motion with branching rate beta, the
probability that the ball of radius r0*exp(-beta*k*t) around
theta*sqrt(2*beta)*t*e holds fewer than exp(a*beta*t) particles decays at
exponential rate beta*I(theta, k, a), where

    I(theta, k, a) = inf over rho in (0, rho_bar] of
        rho + (sqrt((1 - rho)^2 - (a + k d)(1 - rho)) - theta)^2 / rho

and rho_bar is the largest rho with (1-rho)^2 - (a+kd)(1-rho) = theta^2.
Everything here is in the beta-free time scale; growth_exponent and the
reporting layers multiply by beta where a physical rate is wanted.

The objective depends on (k, a, d) only through s = a + k*d, which makes the
shift identity I(theta, k, a) = I(theta, 0, a + k*d) hold by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import unit_ball_volume

_RHO_FLOOR = 1e-12
_GOLDEN_WIDTH = 1e-8
_BISECT_WIDTH = 1e-13
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RateParams:
    """Event parameters: speed theta, shrink rate k, mass level a, dimension d."""

    theta: float
    k: float = 0.0
    a: float = 0.0
    d: int = 1
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not self.beta > 0:
            raise ValueError(f"beta must satisfy beta > 0, got {self.beta}")
        if self.d < 1:
            raise ValueError(f"d must satisfy d >= 1, got {self.d}")
        if not 0.0 <= self.theta < 1.0:
            raise ValueError(f"theta must satisfy 0 <= theta < 1, got {self.theta}")
        if not self.k >= 0.0:
            raise ValueError(f"k must satisfy k >= 0, got {self.k}")
        if not self.a >= 0.0:
            raise ValueError(f"a must satisfy a >= 0, got {self.a}")
        s = self.a + self.k * self.d
        if not s < 1.0 - self.theta**2:
            raise ValueError(
                f"a + k*d must satisfy a + k*d < 1 - theta^2, got {s} >= {1.0 - self.theta ** 2}"
            )

    @property
    def s(self) -> float:
        """Combined shrink/level parameter a + k*d."""
        return self.a + self.k * self.d


@dataclass(frozen=True)
class RateResult:
    """Minimizer and value of the rate objective."""

    value: float
    rho_hat: float
    rho_bar: float
    params: RateParams


def rho_bar(p: RateParams) -> float:
    """Right end of the feasible interval: 1 - s/2 - sqrt(s^2/4 + theta^2)."""
    s = p.s
    return 1.0 - 0.5 * s - math.sqrt(0.25 * s * s + p.theta * p.theta)


def objective(rho: float, p: RateParams) -> float:
    """rho + (sqrt((1-rho)^2 - s(1-rho)) - theta)^2 / rho on (0, rho_bar]."""
    rb = rho_bar(p)
    if not 0.0 < rho <= rb * (1.0 + 1e-12):
        raise ValueError(f"rho must lie in (0, rho_bar={rb}], got {rho}")
    s = p.s
    u = 1.0 - rho
    rad = u * u - s * u
    if rad < 0.0:
        # cannot occur for rho <= rho_bar; tiny negatives are roundoff at the endpoint
        if rad < -1e-9:
            raise ValueError(f"radicand (1-rho)^2 - s(1-rho) is negative at rho={rho}")
        rad = 0.0
    return rho + (math.sqrt(rad) - p.theta) ** 2 / rho


def _objective_derivative(rho: float, p: RateParams) -> float:
    """d/drho of the objective; finite on (0, rho_bar] including the endpoint."""
    s = p.s
    u = 1.0 - rho
    g = max(u * u - s * u, 0.0)
    dg = s - 2.0 * u
    if p.theta == 0.0:
        num = g
        dnum = dg
    else:
        h = math.sqrt(g)
        num = (h - p.theta) ** 2
        dnum = (1.0 - p.theta / h) * dg if h > 0.0 else 0.0
    return 1.0 + (dnum * rho - num) / (rho * rho)


def minimize(p: RateParams) -> RateResult:
    """Locate the unique minimizer of the objective on (0, rho_bar].

    Golden-section search brackets the minimum; the bracket is then refined
    by bisecting the sign of the derivative. The objective is strictly convex
    on the interval, diverges at 0+, and when its derivative is still
    negative at rho_bar the minimizer sits at the endpoint itself.
    """
    rb = rho_bar(p)
    lo = min(_RHO_FLOOR, 0.5 * rb)
    a, b = lo, rb
    c = b - _INV_PHI * (b - a)
    e = a + _INV_PHI * (b - a)
    fc = objective(c, p)
    fe = objective(e, p)
    while b - a > _GOLDEN_WIDTH:
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - _INV_PHI * (b - a)
            fc = objective(c, p)
        else:
            a, c, fc = c, e, fe
            e = a + _INV_PHI * (b - a)
            fe = objective(e, p)
    pad = 10.0 * _GOLDEN_WIDTH
    left = max(lo, a - pad)
    right = min(rb, b + pad)
    if _objective_derivative(right, p) <= 0.0:
        # no interior sign change: pinned at the right end
        rho_hat = rb if right == rb else right
    elif _objective_derivative(left, p) >= 0.0:
        rho_hat = left
    else:
        while right - left > _BISECT_WIDTH:
            mid = 0.5 * (left + right)
            if _objective_derivative(mid, p) < 0.0:
                left = mid
            else:
                right = mid
        rho_hat = 0.5 * (left + right)
    return RateResult(value=objective(rho_hat, p), rho_hat=rho_hat, rho_bar=rb, params=p)


def absence_rate_closed_form(theta: float) -> float:
    """I(theta, 0, 0) in closed form: 2*(sqrt(2) - 1)*(1 - theta)."""
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"theta must satisfy 0 <= theta < 1, got {theta}")
    return 2.0 * (math.sqrt(2.0) - 1.0) * (1.0 - theta)


def growth_exponent(p: RateParams) -> float:
    """Almost-sure exponential growth rate of the mass in the moving ball.

    (1/t) log Z_t(B_t) -> beta * (1 - theta^2 - k*d); the level parameter a
    plays no role here.
    """
    return p.beta * (1.0 - p.theta**2 - p.k * p.d)


def volume_constant(beta: float, k: float, d: int) -> float:
    """Limit of vol(union of r_t-balls around the population) / t^d.

    Equals (2*beta*(1 - k*d))^(d/2) * omega_d for 0 <= k <= 1/d.
    """
    if not beta > 0:
        raise ValueError(f"beta must satisfy beta > 0, got {beta}")
    if d < 1:
        raise ValueError(f"d must satisfy d >= 1, got {d}")
    if not 0.0 <= k <= 1.0 / d:
        raise ValueError(f"k must satisfy 0 <= k <= 1/d, got {k}")
    return (2.0 * beta * (1.0 - k * d)) ** (d / 2.0) * unit_ball_volume(d)
