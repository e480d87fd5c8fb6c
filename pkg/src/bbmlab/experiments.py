"""Monte Carlo experiments connecting the simulator to the limit predictions.

Each experiment fans a batch of independent replicas across a worker pool,
aggregates per-time estimates, and renders a verdict against a reference
value computed from the rate function or from geometry. References are never
hard-coded here. Estimates are deterministic functions of the experiment
configuration alone: replica i always runs with seed replica_seed(master, i),
so the report is identical for one worker or many.

Tolerances are engineering defaults (the limit theorems carry no finite-time
error bars); they live in the config, and the resolved values are echoed in
every report.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import chisquare

from .fkpp import FkppConfig, absence_moving, default_domain, solve_absence
from .geometry import (
    DENSE,
    INDETERMINATE,
    NOT_DENSE,
    Ball,
    FloatA,
    MovingBallSpec,
    ball_at,
    gaussian_ball_prob,
    is_r_dense,
    union_volume,
)
from .rates import RateParams, growth_exponent, minimize, volume_constant
from .sim import SimConfig, mass_in_ball, max_radius, replica_seed, simulate

_MASK64 = (1 << 64) - 1
_PROBE_KEY = 0x5F3759DF  # stream tag for probe sampling, distinct from sim keys
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared experiment plumbing.

    sim is a template: horizon and snapshot_times are overridden per replica
    (horizon becomes t_grid[-1], snapshots the whole grid) and the seed is
    derived from master_seed. tolerances is a sequence of (name, value)
    pairs; names an experiment does not know are ignored, so one config can
    drive several experiments.
    """

    sim: SimConfig
    replicas: int
    t_grid: tuple[float, ...]
    master_seed: int
    ball: MovingBallSpec | None = None
    workers: int = 1
    tolerances: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        if self.replicas < 2:
            raise ValueError(f"replicas must satisfy replicas >= 2, got {self.replicas}")
        grid = tuple(float(t) for t in self.t_grid)
        if not grid:
            raise ValueError("t_grid must be nonempty")
        if any(not t > 0 for t in grid):
            raise ValueError(f"t_grid times must satisfy t > 0, got {grid}")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"t_grid must be strictly increasing, got {grid}")
        object.__setattr__(self, "t_grid", grid)
        if not isinstance(self.master_seed, (int, np.integer)) or self.master_seed < 0:
            raise ValueError(f"master_seed must be a nonnegative integer, got {self.master_seed}")
        if self.workers < 1:
            raise ValueError(f"workers must satisfy workers >= 1, got {self.workers}")
        if self.ball is not None:
            if self.ball.beta != self.sim.beta:
                raise ValueError(
                    f"ball.beta must match sim.beta, got {self.ball.beta} vs {self.sim.beta}"
                )
            if self.ball.d != self.sim.d:
                raise ValueError(f"ball.d must match sim.d, got {self.ball.d} vs {self.sim.d}")
        tols = tuple((str(name), float(val)) for name, val in self.tolerances)
        object.__setattr__(self, "tolerances", tols)


@dataclass(frozen=True)
class ExperimentReport:
    """Outcome of one experiment.

    Every estimate dict carries either an "se" entry or an "exact" flag.
    verdict is "pass", "fail" or "indeterminate". Treat instances (and the
    dicts inside) as read-only.
    """

    name: str
    inputs: dict[str, object]
    estimates: tuple[dict[str, object], ...]
    reference: float | None
    fit: dict[str, object] | None
    verdict: str
    notes: tuple[str, ...]
    master_seed: int
    runtime_seconds: float

    def to_json(self) -> str:
        payload = {
            "name": self.name,
            "inputs": self.inputs,
            "estimates": list(self.estimates),
            "reference": self.reference,
            "fit": self.fit,
            "verdict": self.verdict,
            "notes": list(self.notes),
            "master_seed": self.master_seed,
            "runtime_seconds": self.runtime_seconds,
        }
        return json.dumps(payload, indent=2)

    def estimates_csv(self) -> str:
        """Flat per-estimate table; columns appear in first-seen order."""
        cols: list[str] = []
        for entry in self.estimates:
            for key in entry:
                if key not in cols:
                    cols.append(key)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for entry in self.estimates:
            writer.writerow([repr(entry[k]) if k in entry else "" for k in cols])
        return buf.getvalue()

    def save(self, out_dir: str | Path, stem: str | None = None) -> tuple[Path, Path]:
        """Write <stem>.json and <stem>_estimates.csv; returns both paths."""
        base = Path(out_dir)
        base.mkdir(parents=True, exist_ok=True)
        stem = stem or self.name
        json_path = base / f"{stem}.json"
        csv_path = base / f"{stem}_estimates.csv"
        json_path.write_text(self.to_json() + "\n")
        csv_path.write_text(self.estimates_csv())
        return json_path, csv_path


# ---------------------------------------------------------------------------
# plumbing


def _require_ball(cfg: ExperimentConfig) -> MovingBallSpec:
    if cfg.ball is None:
        raise ValueError("this experiment needs cfg.ball")
    return cfg.ball


def _replica_cfg(cfg: ExperimentConfig, index: int) -> SimConfig:
    return replace(
        cfg.sim,
        horizon=cfg.t_grid[-1],
        snapshot_times=cfg.t_grid,
        seed=replica_seed(cfg.master_seed, index),
    )


def _map_replicas(worker: Callable, args: list, workers: int) -> list:
    """Run the worker over all replica argument tuples, order preserved."""
    if workers <= 1:
        return [worker(a) for a in args]
    chunk = max(1, len(args) // (workers * 16))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, args, chunksize=chunk))


def _resolve(cfg: ExperimentConfig, defaults: dict[str, float]) -> dict[str, float]:
    out = dict(defaults)
    for name, val in cfg.tolerances:
        if name in out:
            out[name] = val
    return out


def _base_inputs(cfg: ExperimentConfig) -> dict[str, object]:
    sim = cfg.sim
    out: dict[str, object] = {
        "beta": sim.beta,
        "d": sim.d,
        "replicas": cfg.replicas,
        "t_grid": list(cfg.t_grid),
        "workers": cfg.workers,
        "particle_cap": sim.particle_cap,
    }
    if sim.range_grid_dt is not None:
        out["range_grid_dt"] = sim.range_grid_dt
    if cfg.ball is not None:
        out["theta"] = cfg.ball.theta
        out["k"] = cfg.ball.k
        out["r0"] = cfg.ball.r0
    return out


def _within(value: float, reference: float, rel_tol: float) -> bool:
    return abs(value - reference) <= rel_tol * abs(reference)


def _binom_se(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def _median_with_se(values: Iterable[float]) -> tuple[float, float]:
    """Median with an order-statistic standard error.

    The 95% binomial band around the central ranks is mapped back to a
    +-1.96 sigma width. Conservative for small samples; infinite for n = 1.
    """
    v = np.sort(np.asarray(list(values), dtype=float))
    n = v.size
    if n == 0:
        raise ValueError("median of an empty sample")
    med = float(np.median(v))
    if n == 1:
        return med, math.inf
    half = 0.5 * _Z95 * math.sqrt(n)
    j = max(0, int(math.floor(0.5 * (n - 1) - half)))
    k = min(n - 1, int(math.ceil(0.5 * (n - 1) + half)))
    return med, float((v[k] - v[j]) / (2.0 * _Z95))


def _affine_fit(ts: Sequence[float], ys: Sequence[float]) -> dict[str, object] | None:
    """Least-squares slope + intercept; the intercept absorbs o(t) constants.

    slope_se comes from the usual residual variance estimate and needs at
    least three points; with exactly two it is None.
    """
    t = np.asarray(ts, dtype=float)
    y = np.asarray(ys, dtype=float)
    if t.size < 2:
        return None
    a = np.vstack([t, np.ones_like(t)]).T
    coef, _, _, _ = np.linalg.lstsq(a, y, rcond=None)
    fit: dict[str, object] = {
        "slope": float(coef[0]),
        "intercept": float(coef[1]),
        "n_points": int(t.size),
        "slope_se": None,
    }
    if t.size >= 3:
        resid = y - a @ coef
        s2 = float(resid @ resid) / (t.size - 2)
        cov = s2 * np.linalg.inv(a.T @ a)
        fit["slope_se"] = float(math.sqrt(max(float(cov[0, 0]), 0.0)))
    return fit


def _report(
    name: str,
    cfg_inputs: dict[str, object],
    entries: list[dict[str, object]],
    reference: float | None,
    fit: dict[str, object] | None,
    verdict: str,
    notes: list[str],
    master_seed: int,
    start: float,
) -> ExperimentReport:
    return ExperimentReport(
        name=name,
        inputs=cfg_inputs,
        estimates=tuple(entries),
        reference=reference,
        fit=fit,
        verdict=verdict,
        notes=tuple(notes),
        master_seed=master_seed,
        runtime_seconds=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# replica workers (module level so process pools can pickle them)


def _mass_replica(args: tuple[SimConfig, MovingBallSpec]) -> tuple[tuple[int, ...], tuple[bool, ...]]:
    sim_cfg, spec = args
    run = simulate(sim_cfg)
    masses = []
    valid = []
    for t in sim_cfg.snapshot_times:
        snap = run.snapshot_at(t)
        masses.append(mass_in_ball(snap, ball_at(spec, t)))
        valid.append(not snap.truncated)
    return tuple(masses), tuple(valid)


def _density_replica(args: tuple[SimConfig, MovingBallSpec]) -> tuple[tuple[str, ...], tuple[bool, ...]]:
    sim_cfg, spec = args
    run = simulate(sim_cfg)
    speed = spec.theta * math.sqrt(2.0 * spec.beta)
    flags = []
    valid = []
    for t in sim_cfg.snapshot_times:
        snap = run.snapshot_at(t)
        region = Ball(np.zeros(spec.d), speed * t)
        check = is_r_dense(snap.positions, region, ball_at(spec, t).radius)
        flags.append(check.verdict)
        valid.append(not snap.truncated)
    return tuple(flags), tuple(valid)


def _volume_replica(
    args: tuple[SimConfig, MovingBallSpec, int, float],
) -> tuple[tuple[float, ...], tuple[bool, ...], float]:
    sim_cfg, spec, vol_seed_base, rel_err = args
    run = simulate(sim_cfg)
    scaled = []
    valid = []
    worst_rel = 0.0
    for j, t in enumerate(sim_cfg.snapshot_times):
        snap = run.snapshot_at(t)
        ok = not snap.truncated
        valid.append(ok)
        if not ok:
            scaled.append(math.nan)
            continue
        vol, se = union_volume(
            snap.positions,
            ball_at(spec, t).radius,
            rel_err_target=rel_err,
            seed=replica_seed(vol_seed_base, j),
        )
        scaled.append(vol / t**sim_cfg.d)
        if vol > 0:
            worst_rel = max(worst_rel, se / vol)
    return tuple(scaled), tuple(valid), worst_rel


def _speed_replica(args: tuple[SimConfig]) -> tuple[tuple[float, ...], tuple[bool, ...], float]:
    (sim_cfg,) = args
    run = simulate(sim_cfg)
    radii = []
    valid = []
    for t in sim_cfg.snapshot_times:
        snap = run.snapshot_at(t)
        radii.append(max_radius(snap))
        valid.append(not snap.truncated)
    range_max = -1.0
    if run.range_sample is not None:
        for pts in run.range_sample.points_by_time:
            if pts.shape[0]:
                range_max = max(range_max, float(np.sqrt(np.einsum("ij,ij->i", pts, pts).max())))
    return tuple(radii), tuple(valid), range_max


def _range_replica(args: tuple[SimConfig, FloatA, float]) -> tuple[tuple[float, ...], bool]:
    sim_cfg, probes, eps = args
    run = simulate(sim_cfg)
    sample = run.range_sample
    covered_at = np.full(probes.shape[0], math.inf)
    # The initial configuration is one particle at the origin, so the range
    # contains the origin from time zero even though the recording grid
    # starts at the first grid step.
    covered_at[np.linalg.norm(probes, axis=1) <= eps] = 0.0
    for tg, pts in zip(sample.times, sample.points_by_time):
        alive = np.isinf(covered_at)
        if not alive.any():
            break
        if pts.shape[0] == 0:
            continue
        dist, _ = cKDTree(pts).query(probes[alive], k=1, distance_upper_bound=eps * (1.0 + 1e-12))
        covered_at[np.flatnonzero(alive)[dist <= eps]] = tg
    fractions = tuple(
        float(np.mean(covered_at <= t * (1.0 + 1e-12))) for t in sim_cfg.snapshot_times
    )
    return fractions, run.truncated


def _count_replica(sim_cfg: SimConfig) -> tuple[int, bool]:
    run = simulate(sim_cfg)
    snap = run.snapshots[0]
    return snap.count, snap.truncated


# ---------------------------------------------------------------------------
# experiments


def absence_ld_experiment(cfg: ExperimentConfig, a: float = 0.0) -> ExperimentReport:
    """Estimate P(Z_t(B_t) < e^{beta a t}) on the grid and fit its decay slope.

    The verdict compares the affine-fit slope of -log p against
    beta * I(theta, k, a). In d = 1 with a = 0 and a fixed radius the PDE
    oracle supplies the exact curve; estimates then carry an "fkpp" column
    and the verdict also requires pointwise agreement within three standard
    errors plus an absolute slack.
    """
    spec = _require_ball(cfg)
    params = RateParams(theta=spec.theta, k=spec.k, a=a, d=spec.d, beta=spec.beta)
    tol = _resolve(cfg, {"slope": 0.25, "fkpp_slack": 5e-3})
    start = time.perf_counter()
    results = _map_replicas(
        _mass_replica, [(_replica_cfg(cfg, i), spec) for i in range(cfg.replicas)], cfg.workers
    )
    fkpp_curve = None
    if spec.d == 1 and a == 0.0 and spec.k == 0.0:
        fkpp_curve = _fkpp_absence_curve(spec, cfg.t_grid)
    thresholds = [math.exp(spec.beta * a * t) for t in cfg.t_grid]
    entries: list[dict[str, object]] = []
    notes: list[str] = []
    fit_ts: list[float] = []
    fit_ys: list[float] = []
    fkpp_ok = True
    for j, t in enumerate(cfg.t_grid):
        used = [r[0][j] for r in results if r[1][j]]
        n_used = len(used)
        if n_used < cfg.replicas:
            notes.append(f"t={t:g}: {cfg.replicas - n_used} truncated replicas excluded")
        if n_used == 0:
            notes.append(f"t={t:g}: no usable replicas")
            continue
        events = sum(1 for m in used if m < thresholds[j])
        p = events / n_used
        se = _binom_se(p, n_used)
        entry: dict[str, object] = {
            "t": t,
            "p_hat": p,
            "se": se,
            "events": events,
            "replicas_used": n_used,
        }
        if fkpp_curve is not None:
            ref_p = fkpp_curve[j]
            entry["fkpp"] = ref_p
            allowed = 3.0 * se + tol["fkpp_slack"]
            if abs(p - ref_p) > allowed:
                fkpp_ok = False
                notes.append(
                    f"t={t:g}: p_hat is {abs(p - ref_p):.3g} from the FKPP curve"
                    f" (allowed {allowed:.3g})"
                )
        entries.append(entry)
        if events == 0:
            notes.append(f"t={t:g}: zero events, excluded from the slope fit")
            continue
        if events < 10:
            notes.append(f"t={t:g}: only {events} events, estimate is thin")
        fit_ts.append(t)
        fit_ys.append(-math.log(p))
    fit = _affine_fit(fit_ts, fit_ys)
    reference = spec.beta * minimize(params).value
    if fit is None:
        verdict = "indeterminate"
        notes.append("fewer than two fit points, no slope estimate")
    else:
        verdict = "pass" if _within(fit["slope"], reference, tol["slope"]) and fkpp_ok else "fail"
    inputs = _base_inputs(cfg)
    inputs["a"] = a
    inputs["tolerances"] = tol
    return _report(
        "absence_ld", inputs, entries, reference, fit, verdict, notes, cfg.master_seed, start
    )


def _fkpp_absence_curve(spec: MovingBallSpec, t_grid: tuple[float, ...]) -> list[float]:
    horizon = t_grid[-1]
    half = default_domain(spec.beta, spec.r0, horizon, theta_max=spec.theta)
    sol = solve_absence(
        FkppConfig(beta=spec.beta, r=spec.r0, domain_halfwidth=half, horizon=horizon)
    )
    return [absence_moving(sol, spec.theta, t) for t in t_grid]


def growth_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Per-replica exponents (1/t) log Z_t(B_t), median against beta (1 - theta^2 - k d).

    Replicas with zero mass cannot contribute a logarithm; they are excluded
    and their fraction reported. A majority of zeros at the final time makes
    the verdict indeterminate.
    """
    spec = _require_ball(cfg)
    params = RateParams(theta=spec.theta, k=spec.k, a=0.0, d=spec.d, beta=spec.beta)
    tol = _resolve(cfg, {"growth": 0.15})
    start = time.perf_counter()
    results = _map_replicas(
        _mass_replica, [(_replica_cfg(cfg, i), spec) for i in range(cfg.replicas)], cfg.workers
    )
    entries: list[dict[str, object]] = []
    notes: list[str] = []
    final_median: float | None = None
    final_majority_zero = False
    for j, t in enumerate(cfg.t_grid):
        used = [r[0][j] for r in results if r[1][j]]
        n_used = len(used)
        if n_used < cfg.replicas:
            notes.append(f"t={t:g}: {cfg.replicas - n_used} truncated replicas excluded")
        if n_used == 0:
            notes.append(f"t={t:g}: no usable replicas")
            continue
        masses = np.asarray(used, dtype=float)
        zeros = int(np.count_nonzero(masses == 0))
        zero_fraction = zeros / n_used
        entry: dict[str, object] = {
            "t": t,
            "zero_fraction": zero_fraction,
            "replicas_used": n_used,
        }
        if zeros < n_used:
            med, se = _median_with_se(np.log(masses[masses > 0]) / t)
            entry["median_exponent"] = med
            entry["se"] = se
        else:
            notes.append(f"t={t:g}: every usable replica had zero mass")
        entries.append(entry)
        if j == len(cfg.t_grid) - 1:
            final_median = entry.get("median_exponent")  # type: ignore[assignment]
            final_majority_zero = zero_fraction > 0.5
    reference = growth_exponent(params)
    if final_median is None or final_majority_zero:
        verdict = "indeterminate"
        notes.append("zero-mass replicas dominate the final time")
    else:
        verdict = "pass" if _within(final_median, reference, tol["growth"]) else "fail"
    inputs = _base_inputs(cfg)
    inputs["tolerances"] = tol
    return _report(
        "growth", inputs, entries, reference, None, verdict, notes, cfg.master_seed, start
    )


def many_to_one_check(cfg: ExperimentConfig) -> ExperimentReport:
    """First-moment identity E Z_t(B_t) = e^{beta t} P(W_t in B_t).

    W is a single Brownian particle from the origin; the right side comes
    from gaussian_ball_prob. Passes when every grid time agrees within the
    sigma tolerance (default three standard errors).
    """
    spec = _require_ball(cfg)
    tol = _resolve(cfg, {"sigma": 3.0})
    start = time.perf_counter()
    results = _map_replicas(
        _mass_replica, [(_replica_cfg(cfg, i), spec) for i in range(cfg.replicas)], cfg.workers
    )
    origin = np.zeros(spec.d)
    entries: list[dict[str, object]] = []
    notes: list[str] = []
    ok = True
    reference = None
    for j, t in enumerate(cfg.t_grid):
        used = [r[0][j] for r in results if r[1][j]]
        n_used = len(used)
        if n_used < cfg.replicas:
            notes.append(f"t={t:g}: {cfg.replicas - n_used} truncated replicas excluded")
        if n_used == 0:
            notes.append(f"t={t:g}: no usable replicas")
            ok = False
            continue
        masses = np.asarray(used, dtype=float)
        mean = float(masses.mean())
        se = float(masses.std(ddof=1)) / math.sqrt(n_used) if n_used > 1 else math.inf
        ref = math.exp(spec.beta * t) * gaussian_ball_prob(t, origin, ball_at(spec, t))
        if se > 0:
            deviation = abs(mean - ref) / se
        else:
            deviation = 0.0 if mean == ref else math.inf
        entries.append(
            {
                "t": t,
                "mean_mass": mean,
                "se": se,
                "reference": ref,
                "deviation_sigma": deviation,
            }
        )
        if deviation > tol["sigma"]:
            ok = False
            notes.append(f"t={t:g}: mean mass is {deviation:.2f} sigma from the identity")
        reference = ref
    verdict = "pass" if ok and entries else "fail"
    inputs = _base_inputs(cfg)
    inputs["tolerances"] = tol
    return _report(
        "many_to_one", inputs, entries, reference, None, verdict, notes, cfg.master_seed, start
    )


def _density_flags(cfg: ExperimentConfig) -> list[tuple[tuple[str, ...], tuple[bool, ...]]]:
    """Shared replica pass for the density and coverage experiments.

    Both experiments see the same per-replica verdict strings from the same
    seeds, which is what makes their events complementary by construction.
    """
    spec = _require_ball(cfg)
    if not 0.0 < spec.theta < 1.0:
        raise ValueError(f"theta must satisfy 0 < theta < 1, got {spec.theta}")
    bound = (1.0 - spec.theta**2) / spec.d
    if not spec.k < bound:
        raise ValueError(f"k must satisfy k < (1 - theta^2)/d = {bound:.6g}, got {spec.k}")
    return _map_replicas(
        _density_replica, [(_replica_cfg(cfg, i), spec) for i in range(cfg.replicas)], cfg.workers
    )


def density_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """P(the population fails to be r_t-dense in B(0, theta sqrt(2 beta) t)).

    The failure probability decays at the same exponential rate as absence
    of mass in the moving ball; the fitted slope is compared against
    beta * I(theta, k, 0). Indeterminate probe checks are tallied separately
    and never counted as failures.
    """
    spec = _require_ball(cfg)
    tol = _resolve(cfg, {"slope": 0.30})
    start = time.perf_counter()
    results = _density_flags(cfg)
    entries: list[dict[str, object]] = []
    notes: list[str] = []
    fit_ts: list[float] = []
    fit_ys: list[float] = []
    for j, t in enumerate(cfg.t_grid):
        flags = [r[0][j] for r in results if r[1][j]]
        n_used = len(flags)
        if n_used < cfg.replicas:
            notes.append(f"t={t:g}: {cfg.replicas - n_used} truncated replicas excluded")
        if n_used == 0:
            notes.append(f"t={t:g}: no usable replicas")
            continue
        failures = flags.count(NOT_DENSE)
        undecided = flags.count(INDETERMINATE)
        p = failures / n_used
        entry: dict[str, object] = {
            "t": t,
            "p_not_dense": p,
            "se": _binom_se(p, n_used),
            "indeterminate_fraction": undecided / n_used,
            "replicas_used": n_used,
        }
        entries.append(entry)
        if undecided:
            notes.append(f"t={t:g}: {undecided} indeterminate density checks")
        if failures == 0:
            notes.append(f"t={t:g}: zero failure events, excluded from the slope fit")
            continue
        if failures < 10:
            notes.append(f"t={t:g}: only {failures} failure events, estimate is thin")
        fit_ts.append(t)
        fit_ys.append(-math.log(p))
    params = RateParams(theta=spec.theta, k=spec.k, a=0.0, d=spec.d, beta=spec.beta)
    reference = spec.beta * minimize(params).value
    fit = _affine_fit(fit_ts, fit_ys)
    if fit is None:
        verdict = "indeterminate"
        notes.append("fewer than two fit points, no slope estimate")
    else:
        verdict = "pass" if _within(fit["slope"], reference, tol["slope"]) else "fail"
    inputs = _base_inputs(cfg)
    inputs["tolerances"] = tol
    return _report(
        "density", inputs, entries, reference, fit, verdict, notes, cfg.master_seed, start
    )


def coverage_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Fraction of replicas whose enlarged population covers B(0, theta sqrt(2 beta) t).

    The covering event is the exact complement of the density experiment's
    failure event (same replicas, same seeds, same probe checks). The verdict
    requires the coverage fraction to be non-decreasing along the grid up to
    the slack_sigma statistical allowance.
    """
    tol = _resolve(cfg, {"slack_sigma": 2.0})
    start = time.perf_counter()
    results = _density_flags(cfg)
    entries: list[dict[str, object]] = []
    notes: list[str] = []
    for j, t in enumerate(cfg.t_grid):
        flags = [r[0][j] for r in results if r[1][j]]
        n_used = len(flags)
        if n_used < cfg.replicas:
            notes.append(f"t={t:g}: {cfg.replicas - n_used} truncated replicas excluded")
        if n_used == 0:
            notes.append(f"t={t:g}: no usable replicas")
            continue
        covered = flags.count(DENSE)
        undecided = flags.count(INDETERMINATE)
        frac = covered / n_used
        entries.append(
            {
                "t": t,
                "coverage_fraction": frac,
                "se": _binom_se(frac, n_used),
                "indeterminate_fraction": undecided / n_used,
                "replicas_used": n_used,
            }
        )
        if undecided:
            notes.append(f"t={t:g}: {undecided} indeterminate density checks")
    ok = bool(entries)
    for prev, cur in zip(entries, entries[1:]):
        slack = tol["slack_sigma"] * math.hypot(prev["se"], cur["se"])  # type: ignore[arg-type]
        if cur["coverage_fraction"] < prev["coverage_fraction"] - slack:  # type: ignore[operator]
            ok = False
            notes.append(
                f"coverage fraction drops from t={prev['t']:g} to t={cur['t']:g}"
                " beyond the statistical slack"
            )
    if entries:
        notes.append(f"final coverage fraction {entries[-1]['coverage_fraction']:.4g}")
    verdict = "pass" if ok else "fail"
    inputs = _base_inputs(cfg)
    inputs["tolerances"] = tol
    return _report(
        "coverage", inputs, entries, 1.0, None, verdict, notes, cfg.master_seed, start
    )


def enlargement_volume_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """vol(union of r_t-balls around the population) / t^d against its limit.

    Volumes come from the geometry module's union sampler with a relative
    error target per value; the worst realized relative error is noted.
    Convergence is slow, so the verdict asks for the final-time median to be
    inside the volume tolerance and no farther from the limit than the
    first-time median (trend toward the constant). A zero limit (k = 1/d)
    only requires the scaled volume to be decreasing.
    """
    spec = _require_ball(cfg)
    reference = volume_constant(spec.beta, spec.k, spec.d)
    tol = _resolve(cfg, {"volume": 0.30, "volume_mc_rel_err": 0.01})
    start = time.perf_counter()
    args = [
        (_replica_cfg(cfg, i), spec, replica_seed(cfg.master_seed, i), tol["volume_mc_rel_err"])
        for i in range(cfg.replicas)
    ]
    results = _map_replicas(_volume_replica, args, cfg.workers)
    entries: list[dict[str, object]] = []
    notes: list[str] = []
    for j, t in enumerate(cfg.t_grid):
        vals = [r[0][j] for r in results if r[1][j]]
        n_used = len(vals)
        if n_used < cfg.replicas:
            notes.append(f"t={t:g}: {cfg.replicas - n_used} truncated replicas excluded")
        if n_used == 0:
            notes.append(f"t={t:g}: no usable replicas")
            continue
        med, se = _median_with_se(vals)
        entries.append(
            {"t": t, "median_scaled_volume": med, "se": se, "replicas_used": n_used}
        )
    worst_rel = max((r[2] for r in results), default=0.0)
    notes.append(f"worst Monte Carlo relative volume error {worst_rel:.2e}")
    if not entries:
        verdict = "indeterminate"
    else:
        final = entries[-1]
        first = entries[0]
        slack = 2.0 * math.hypot(first["se"], final["se"])  # type: ignore[arg-type]
        if reference > 0:
            ok = _within(final["median_scaled_volume"], reference, tol["volume"])  # type: ignore[arg-type]
            if len(entries) >= 2:
                ok = ok and (
                    abs(final["median_scaled_volume"] - reference)  # type: ignore[operator]
                    <= abs(first["median_scaled_volume"] - reference) + slack  # type: ignore[operator]
                )
            verdict = "pass" if ok else "fail"
        else:
            if len(entries) < 2:
                verdict = "indeterminate"
                notes.append("zero limit needs at least two grid times to see the decrease")
            else:
                decreasing = (
                    final["median_scaled_volume"]  # type: ignore[operator]
                    <= first["median_scaled_volume"] + slack  # type: ignore[operator]
                )
                verdict = "pass" if decreasing else "fail"
                notes.append(
                    f"zero limit: scaled volume moved from {first['median_scaled_volume']:.4g}"
                    f" to {final['median_scaled_volume']:.4g}"
                )
    inputs = _base_inputs(cfg)
    inputs["tolerances"] = tol
    return _report(
        "enlargement_volume", inputs, entries, reference, None, verdict, notes, cfg.master_seed, start
    )


def speed_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Median front speed M_t / t against sqrt(2 beta).

    With range recording enabled and the final time on the recording grid,
    also asserts per replica that the final max radius is contained in the
    recorded range (a growing union can only be larger).
    """
    tol = _resolve(cfg, {"speed": 0.10})
    reference = math.sqrt(2.0 * cfg.sim.beta)
    start = time.perf_counter()
    results = _map_replicas(
        _speed_replica, [(_replica_cfg(cfg, i),) for i in range(cfg.replicas)], cfg.workers
    )
    entries: list[dict[str, object]] = []
    notes: list[str] = []
    for j, t in enumerate(cfg.t_grid):
        vals = [r[0][j] / t for r in results if r[1][j]]
        n_used = len(vals)
        if n_used < cfg.replicas:
            notes.append(f"t={t:g}: {cfg.replicas - n_used} truncated replicas excluded")
        if n_used == 0:
            notes.append(f"t={t:g}: no usable replicas")
            continue
        med, se = _median_with_se(vals)
        entries.append({"t": t, "median_speed": med, "se": se, "replicas_used": n_used})
    containment_ok = True
    grid_dt = cfg.sim.range_grid_dt
    if grid_dt is not None:
        horizon = cfg.t_grid[-1]
        if abs(horizon / grid_dt - round(horizon / grid_dt)) < 1e-9:
            bad = sum(
                1 for r in results if r[1][-1] and r[0][-1] > r[2] + 1e-9
            )
            if bad:
                containment_ok = False
                notes.append(f"{bad} replicas had a max radius outside the recorded range")
            else:
                notes.append("max radius contained in the recorded range in every replica")
        else:
            notes.append("final time is off the recording grid, containment not checked")
    if not entries:
        verdict = "indeterminate"
    else:
        final = entries[-1]["median_speed"]
        verdict = "pass" if _within(final, reference, tol["speed"]) and containment_ok else "fail"  # type: ignore[arg-type]
    inputs = _base_inputs(cfg)
    inputs["tolerances"] = tol
    return _report(
        "speed", inputs, entries, reference, None, verdict, notes, cfg.master_seed, start
    )


def _range_probes(master_seed: int, d: int, n: int = 100) -> FloatA:
    """The origin plus n-1 points drawn once, uniformly from the unit ball."""
    rng = np.random.Generator(np.random.Philox(key=[master_seed & _MASK64, _PROBE_KEY]))
    z = rng.standard_normal((n - 1, d))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    radii = rng.random(n - 1) ** (1.0 / d)
    return np.vstack([np.zeros(d), z * radii[:, None]])


def range_density_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Coverage of fixed probes in B(0, 1) by the recorded range.

    One hundred probes (the origin plus 99 uniform draws keyed by the master
    seed) are tested against the discretized range R(t): a probe counts as
    covered once some recorded position lies within epsilon. Per replica the
    covered set only grows, so the mean fraction is non-decreasing by
    construction; in d <= 2 it must reach exactly 1 at the final time.
    """
    if cfg.sim.range_grid_dt is None:
        raise ValueError("range recording must be enabled: set sim.range_grid_dt")
    tol = _resolve(cfg, {"epsilon": 0.1})
    start = time.perf_counter()
    probes = _range_probes(cfg.master_seed, cfg.sim.d)
    results = _map_replicas(
        _range_replica,
        [(_replica_cfg(cfg, i), probes, tol["epsilon"]) for i in range(cfg.replicas)],
        cfg.workers,
    )
    notes: list[str] = []
    used = [r[0] for r in results if not r[1]]
    if len(used) < cfg.replicas:
        notes.append(f"{cfg.replicas - len(used)} truncated replicas excluded")
    if not used:
        inputs = _base_inputs(cfg)
        inputs["tolerances"] = tol
        notes.append("no usable replicas")
        return _report(
            "range_density", inputs, [], 1.0, None, "indeterminate", notes, cfg.master_seed, start
        )
    arr = np.asarray(used)
    entries: list[dict[str, object]] = []
    for j, t in enumerate(cfg.t_grid):
        col = arr[:, j]
        se = float(col.std(ddof=1)) / math.sqrt(col.size) if col.size > 1 else math.inf
        entries.append(
            {
                "t": t,
                "mean_fraction": float(col.mean()),
                "se": se,
                "replicas_used": int(col.size),
            }
        )
    monotone = bool(np.all(arr[:, 1:] >= arr[:, :-1])) if arr.shape[1] > 1 else True
    if not monotone:
        notes.append("coverage fraction decreased within a replica, which should be impossible")
    notes.append("origin probe covered at time zero by the initial configuration")
    final_one = bool(np.all(arr[:, -1] == 1.0))
    if cfg.sim.d <= 2:
        verdict = "pass" if monotone and final_one else "fail"
        if not final_one:
            notes.append("some probes stayed uncovered at the final time")
    else:
        verdict = "pass" if monotone else "fail"
        notes.append(f"d={cfg.sim.d}: full coverage not required, final fraction reported")
    inputs = _base_inputs(cfg)
    inputs["tolerances"] = tol
    return _report(
        "range_density", inputs, entries, 1.0, None, verdict, notes, cfg.master_seed, start
    )


def mass_distribution_test(beta: float, t: float, replicas: int, seed: int) -> ExperimentReport:
    """Goodness of fit of N_t against the geometric law with success e^{-beta t}.

    Tail-binned chi-square (every bin keeps an expected count of at least
    five) plus direct checks of P(N > k) at k in {1, 5, 10} and of the mean
    against e^{beta t}. When the binning degenerates to a single cell (t very
    small or very large for the replica count) the chi-square is skipped and
    the verdict rests on the direct checks.
    """
    if replicas < 10_000:
        raise ValueError(f"replicas must satisfy replicas >= 10000, got {replicas}")
    start = time.perf_counter()
    counts = np.empty(replicas, dtype=np.int64)
    kept = 0
    truncated = 0
    for i in range(replicas):
        scfg = SimConfig(beta=beta, d=1, horizon=t, snapshot_times=(t,), seed=replica_seed(seed, i))
        n_i, trunc = _count_replica(scfg)
        if trunc:
            truncated += 1
            continue
        counts[kept] = n_i
        kept += 1
    counts = counts[:kept]
    n = kept
    notes: list[str] = []
    if truncated:
        notes.append(f"{truncated} truncated replicas excluded")
    p_one = math.exp(-beta * t)
    q = 1.0 - p_one
    sigma_ok = True
    entries: list[dict[str, object]] = []
    for k in (1, 5, 10):
        emp = float(np.mean(counts > k))
        ref = q**k
        se = _binom_se(ref, n)
        entries.append({"quantity": f"P(N>{k})", "value": emp, "se": se, "reference": ref})
        if abs(emp - ref) > 3.0 * se:
            sigma_ok = False
            notes.append(f"P(N>{k}) off by more than three standard errors")
    mean = float(counts.mean())
    mean_se = float(counts.std(ddof=1)) / math.sqrt(n)
    mean_ref = math.exp(beta * t)
    entries.append({"quantity": "mean", "value": mean, "se": mean_se, "reference": mean_ref})
    if abs(mean - mean_ref) > 3.0 * mean_se:
        sigma_ok = False
        notes.append("mean mass off by more than three standard errors")
    # chi-square binning: cells 1..K-1 individually, one tail cell N >= K,
    # grown while each individual cell keeps expected count >= 5 (the tail
    # then holds at least 5/p_one >= 5 automatically).
    big = 1
    while big < 1_000_000 and n * p_one * q**big >= 5.0:
        big += 1
    fit: dict[str, object] | None = None
    if big >= 2:
        observed = np.bincount(np.minimum(counts, big), minlength=big + 1)[1:]
        expected = np.array(
            [n * p_one * q ** (k - 1) for k in range(1, big)] + [n * q ** (big - 1)]
        )
        stat, pvalue = chisquare(observed, expected)
        fit = {
            "chi2": float(stat),
            "dof": int(big - 1),
            "pvalue": float(pvalue),
            "bins": int(big),
        }
        chi_ok = pvalue >= 0.01
        if not chi_ok:
            notes.append(f"chi-square p-value {pvalue:.4g} below 0.01")
    else:
        chi_ok = True
        notes.append("binning degenerate, chi-square skipped")
    verdict = "pass" if sigma_ok and chi_ok else "fail"
    inputs: dict[str, object] = {
        "beta": beta,
        "t": t,
        "replicas": replicas,
        "seed": seed,
        "tolerances": {"pvalue": 0.01, "sigma": 3.0},
    }
    return _report(
        "mass_distribution", inputs, entries, mean_ref, fit, verdict, notes, seed, start
    )
