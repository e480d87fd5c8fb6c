"""Event-driven simulator for strictly dyadic branching Brownian motion.

Every particle carries an Exp(beta) lifetime and splits into exactly two
offspring at its death position; between events each coordinate diffuses as
an independent standard Brownian motion. There is no time discretization:
particles are advanced by exact Gaussian increments between birth, the
requested observation times and death, so snapshots carry no integration
bias.

Randomness is counter-based. Each particle owns a private Philox stream
whose counter encodes the particle's genealogy index (root 1, children of g
are 2g and 2g+1), so the realization is a function of (seed, config) alone
and is independent of traversal order. Draw order within a particle is its
lifetime first, then its Gaussian increments.

Range recording, when enabled, stores positions on a uniform time grid and
therefore under-approximates the continuous range: excursions between grid
times are not seen.
"""

from __future__ import annotations

import csv
import heapq
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from .geometry import Ball, FloatA

_KEY_CONST = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1
_G_LIMIT = 1 << 128  # genealogy indices must fit the two counter words


@dataclass(frozen=True)
class SimConfig:
    """Run parameters. snapshot_times must lie in (0, horizon]."""

    beta: float
    d: int = 1
    horizon: float = 1.0
    snapshot_times: tuple[float, ...] = ()
    seed: int = 0
    particle_cap: int = 5_000_000
    range_grid_dt: float | None = None

    def __post_init__(self) -> None:
        if not self.beta > 0:
            raise ValueError(f"beta must satisfy beta > 0, got {self.beta}")
        if self.d < 1:
            raise ValueError(f"d must satisfy d >= 1, got {self.d}")
        if not self.horizon > 0:
            raise ValueError(f"horizon must satisfy horizon > 0, got {self.horizon}")
        times = tuple(sorted(float(t) for t in self.snapshot_times))
        if len(set(times)) != len(times):
            raise ValueError("snapshot_times must be distinct")
        for t in times:
            if not 0.0 < t <= self.horizon:
                raise ValueError(f"snapshot times must lie in (0, horizon], got {t}")
        object.__setattr__(self, "snapshot_times", times)
        if self.particle_cap < 1:
            raise ValueError(f"particle_cap must satisfy particle_cap >= 1, got {self.particle_cap}")
        if self.range_grid_dt is not None and not self.range_grid_dt > 0:
            raise ValueError(f"range_grid_dt must satisfy range_grid_dt > 0, got {self.range_grid_dt}")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed}")


@dataclass
class ParticleSnapshot:
    """Particle positions at one observation time; positions has shape (n, d).

    truncated means the population cap stopped the run before this time, so
    the recorded positions are an incomplete census.
    """

    time: float
    positions: FloatA
    truncated: bool = False

    @property
    def count(self) -> int:
        return self.positions.shape[0]


@dataclass
class RangeSample:
    """Positions recorded on the uniform grid; one array per grid time."""

    grid_dt: float
    times: FloatA
    points_by_time: list[FloatA]

    def points_up_to(self, t: float) -> FloatA:
        """All recorded positions at grid times <= t (the discretized range)."""
        k = int(np.searchsorted(self.times, t * (1.0 + 1e-12), side="right"))
        if k == 0:
            return np.zeros((0, self.points_by_time[0].shape[1] if self.points_by_time else 1))
        return np.concatenate(self.points_by_time[:k], axis=0)

    @property
    def points(self) -> FloatA:
        return self.points_up_to(float(self.times[-1])) if len(self.times) else np.zeros((0, 1))


@dataclass
class SimulationRun:
    config: SimConfig
    snapshots: list[ParticleSnapshot]
    range_sample: RangeSample | None
    truncated: bool
    branch_count: int

    def snapshot_at(self, t: float) -> ParticleSnapshot:
        for snap in self.snapshots:
            if snap.time == t:
                return snap
        raise KeyError(f"no snapshot at time {t}")


def simulate(cfg: SimConfig, *, branching: bool = True) -> SimulationRun:
    """Run one realization. Deterministic given (cfg.seed, cfg).

    branching=False is a validation hook that suppresses splitting, leaving
    a single Brownian particle.
    """
    d = cfg.d
    beta = cfg.beta
    horizon = cfg.horizon
    cap = cfg.particle_cap

    snap_times = np.asarray(cfg.snapshot_times, dtype=float)
    if cfg.range_grid_dt is not None:
        n_grid = int(math.floor(horizon / cfg.range_grid_dt * (1.0 + 1e-12)))
        grid_times = cfg.range_grid_dt * np.arange(1, n_grid + 1)
        grid_times = grid_times[grid_times <= horizon * (1.0 + 1e-12)]
    else:
        grid_times = np.zeros(0)
    times = np.unique(np.concatenate([snap_times, grid_times]))
    times_list = times.tolist()
    n_times = len(times_list)
    buckets: list[list[FloatA]] = [[] for _ in range(n_times)]

    bg = np.random.Philox(key=[int(cfg.seed) & _MASK64, _KEY_CONST])
    gen = np.random.Generator(bg)
    template = bg.state
    t_counter = template["state"]["counter"]
    # Counter words 0/1 and the buffer flags never vary between particles; the
    # generator never writes back into this dict, so set them once. Only the
    # genealogy words (2, 3) change per particle.
    t_counter[0] = 0
    t_counter[1] = 0
    template["buffer_pos"] = 4
    template["has_uint32"] = 0
    template["uinteger"] = 0

    draw_exp = gen.standard_exponential
    draw_normal = gen.standard_normal
    inf = math.inf
    sqrt = math.sqrt

    def _emit(g: int, t0: float, x0: FloatA) -> tuple[bool, float, FloatA | None]:
        """Advance one particle from birth to death or horizon, recording crossings."""
        if g >= _G_LIMIT:
            raise RuntimeError("genealogy index exceeds the counter key space")
        t_counter[2] = g & _MASK64
        t_counter[3] = g >> 64
        bg.state = template
        td = t0 + draw_exp() / beta if branching else inf
        dies = td <= horizon
        t_end = td if dies else horizon
        i0 = bisect_right(times_list, t0)
        i1 = bisect_right(times_list, t_end)
        mm = i1 - i0
        if mm == 0:
            if not dies:
                return False, 0.0, None
            return True, td, x0 + draw_normal(d) * sqrt(td - t0)
        n = mm + 1 if dies else mm
        steps = np.empty(n)
        seq = times[i0:i1]
        steps[0] = seq[0] - t0
        if mm > 1:
            steps[1:mm] = seq[1:] - seq[:-1]
        if dies:
            steps[mm] = td - seq[-1]
        z = draw_normal((n, d))
        np.sqrt(steps, out=steps)
        z *= steps[:, None]
        pos = z.cumsum(axis=0)
        pos += x0
        for j in range(mm):
            buckets[i0 + j].append(pos[j])
        if dies:
            return True, td, pos[n - 1]
        return False, 0.0, None

    heap: list[tuple[float, int, FloatA]] = []
    heappush = heapq.heappush
    heappop = heapq.heappop
    live = 1
    branches = 0
    trunc_time: float | None = None

    dies, td, xd = _emit(1, 0.0, np.zeros(d))
    if dies:
        heap.append((td, 1, xd))
    while heap:
        td, g, xd = heappop(heap)
        if live + 1 > cap:
            trunc_time = td
            break
        live += 1
        branches += 1
        cg = 2 * g
        c_dies, c_td, c_xd = _emit(cg, td, xd)
        if c_dies:
            heappush(heap, (c_td, cg, c_xd))
        cg += 1
        c_dies, c_td, c_xd = _emit(cg, td, xd)
        if c_dies:
            heappush(heap, (c_td, cg, c_xd))

    def _stack(idx: int) -> FloatA:
        rows = buckets[idx]
        if not rows:
            return np.zeros((0, d))
        return np.vstack(rows)

    snapshots = []
    for t in cfg.snapshot_times:
        idx = int(np.searchsorted(times, t))
        snapshots.append(
            ParticleSnapshot(
                time=t,
                positions=_stack(idx),
                truncated=trunc_time is not None and t > trunc_time,
            )
        )
    range_sample = None
    if cfg.range_grid_dt is not None:
        pts = []
        for t in grid_times:
            idx = int(np.searchsorted(times, t))
            pts.append(_stack(idx))
        range_sample = RangeSample(cfg.range_grid_dt, grid_times, pts)
    return SimulationRun(
        config=cfg,
        snapshots=snapshots,
        range_sample=range_sample,
        truncated=trunc_time is not None,
        branch_count=branches,
    )


def mass_in_ball(snapshot: ParticleSnapshot, ball: Ball) -> int:
    """Number of particles strictly inside the ball."""
    if snapshot.count == 0:
        return 0
    if snapshot.positions.shape[1] != ball.d:
        raise ValueError(
            f"snapshot dimension {snapshot.positions.shape[1]} != ball dimension {ball.d}"
        )
    return int(np.count_nonzero(ball.contains(snapshot.positions)))


def max_radius(snapshot: ParticleSnapshot) -> float:
    """Largest particle norm in the snapshot."""
    if snapshot.count == 0:
        raise ValueError("snapshot holds no particles")
    return float(np.sqrt(np.einsum("ij,ij->i", snapshot.positions, snapshot.positions).max()))


def export_snapshots(
    out: IO[str],
    snapshots: Iterable[ParticleSnapshot],
    replica_id: int = 0,
    header: bool = True,
) -> int:
    """Write snapshots as CSV rows (replica_id, time, particle_index, x1..xd).

    particle_index enumerates rows within one snapshot. Returns the number of
    data rows written. The format is stable; see the README.
    """
    writer = csv.writer(out, lineterminator="\n")
    rows = 0
    wrote_header = not header
    for snap in snapshots:
        d = snap.positions.shape[1]
        if not wrote_header:
            writer.writerow(["replica_id", "time", "particle_index"] + [f"x{i+1}" for i in range(d)])
            wrote_header = True
        for i in range(snap.count):
            writer.writerow(
                [replica_id, repr(snap.time), i] + [repr(float(v)) for v in snap.positions[i]]
            )
            rows += 1
    return rows


def replica_seed(master_seed: int, index: int) -> int:
    """Stable per-replica engine seed derived from a master seed."""
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])
