"""Command-line front end: rate-function queries, raw simulation, verification.

Three subcommands:

  rate      print rho_bar, rho_hat, the rate value, and beta times the rate
            for one parameter point, or sweep one parameter into a CSV table
  simulate  run one branching replica and export particle snapshots as CSV
  verify    run the deterministic acceptance checks and write a verdict report

Every file-writing run leaves a ``manifest.json`` next to its outputs with the
fully resolved configuration, the master seed, tool version, and timestamps.
Configuration precedence is flags, then ``--config`` file entries, then
built-in defaults. The config file is plain ``key = value`` text, one entry
per line, ``#`` comments allowed; keys match the long flag names. The
``BBMLAB_WORKERS`` environment variable sets the default worker count.

The verify report (``verdicts.json``) contains no timings, so two runs with
the same seed produce byte-identical report files; timings go to the
manifest instead.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .rates import RateParams, minimize
from .sim import SimConfig, export_snapshots, max_radius, simulate
from .verification import SUITES, run_suite

__all__ = ["RunManifest", "main"]


@dataclass
class RunManifest:
    """Record of one CLI run, written adjacent to the run's outputs."""

    command: str
    config: dict
    master_seed: int | None
    version: str
    started: str
    finished: str
    outputs: list[str]
    extra: dict = field(default_factory=dict)


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _write_manifest(out_dir: Path, manifest: RunManifest) -> Path:
    path = out_dir / "manifest.json"
    with open(path, "w") as fh:
        json.dump(asdict(manifest), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _read_config_file(path: str) -> dict[str, str]:
    """Parse a key = value config file. Unknown keys are rejected later."""
    entries: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            entries[key.strip().replace("-", "_")] = value.strip()
    return entries


def _resolve(args: argparse.Namespace, cfg: dict[str, str], key: str, default, cast):
    """Apply the precedence rule: command-line flag, config file, default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in cfg:
        try:
            return cast(cfg[key])
        except ValueError:
            raise SystemExit(f"config file: bad value for {key}: {cfg[key]!r}")
    return default


def _default_workers() -> int:
    env = os.environ.get("BBMLAB_WORKERS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _draw_seed() -> int:
    """Fresh seed for runs that did not pass one; recorded in the manifest."""
    return int(np.random.SeedSequence().entropy % (2**31))


# ---------------------------------------------------------------------------
# rate


def _parse_sweep(text: str) -> tuple[str, np.ndarray]:
    """Parse 'name=start:stop:step' into the swept parameter and its grid."""
    name, eq, rng = text.partition("=")
    parts = rng.split(":")
    if not eq or len(parts) != 3 or name not in ("theta", "k", "a"):
        raise SystemExit(f"--sweep expects theta|k|a=start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(v) for v in parts)
    except ValueError:
        raise SystemExit(f"--sweep expects numeric start:stop:step, got {rng!r}")
    if step <= 0 or stop < start:
        raise SystemExit("--sweep needs step > 0 and stop >= start")
    return name, np.arange(start, stop + 0.5 * step, step)


def cmd_rate(args: argparse.Namespace, cfg: dict[str, str]) -> int:
    theta = _resolve(args, cfg, "theta", 0.0, float)
    k = _resolve(args, cfg, "k", 0.0, float)
    a = _resolve(args, cfg, "a", 0.0, float)
    beta = _resolve(args, cfg, "beta", 1.0, float)
    d = _resolve(args, cfg, "d", 1, int)
    sweep = _resolve(args, cfg, "sweep", None, str)
    out_dir = Path(_resolve(args, cfg, "out", ".", str))

    def one_row(params: RateParams) -> tuple:
        res = minimize(params)
        return (
            params.theta,
            params.k,
            params.a,
            params.beta,
            params.d,
            res.rho_bar,
            res.rho_hat,
            res.value,
            params.beta * res.value,
        )

    started = _utc_now()
    try:
        if sweep is None:
            row = one_row(RateParams(theta=theta, k=k, a=a, d=d, beta=beta))
            for label, value in zip(("rho_bar", "rho_hat", "rate", "beta*rate"), row[5:]):
                print(f"{label:10s} {value:.9f}")
            return 0
        name, grid = _parse_sweep(sweep)
        base = {"theta": theta, "k": k, "a": a}
        lines = ["theta,k,a,beta,d,rho_bar,rho_hat,rate,beta_rate"]
        for value in grid:
            base[name] = float(value)
            row = one_row(RateParams(base["theta"], base["k"], base["a"], d, beta))
            lines.append(",".join(f"{v:.9f}" if isinstance(v, float) else str(v) for v in row))
    except ValueError as exc:
        print(f"rate: domain error: {exc}", file=sys.stderr)
        return 2

    table = "\n".join(lines) + "\n"
    sys.stdout.write(table)
    if args.out is not None or "out" in cfg:
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / "rate_sweep.csv"
        csv_path.write_text(table)
        manifest = RunManifest(
            command="rate",
            config={"theta": theta, "k": k, "a": a, "beta": beta, "d": d, "sweep": sweep},
            master_seed=None,
            version=__version__,
            started=started,
            finished=_utc_now(),
            outputs=[str(csv_path)],
        )
        _write_manifest(out_dir, manifest)
    return 0


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args: argparse.Namespace, cfg: dict[str, str]) -> int:
    beta = _resolve(args, cfg, "beta", 1.0, float)
    d = _resolve(args, cfg, "d", 1, int)
    horizon = _resolve(args, cfg, "t", 1.0, float)
    cap = _resolve(args, cfg, "cap", 5_000_000, int)
    seed = _resolve(args, cfg, "seed", None, int)
    out_dir = Path(_resolve(args, cfg, "out", ".", str))
    snap_text = _resolve(args, cfg, "snapshots", None, str)

    drawn = seed is None
    if drawn:
        seed = _draw_seed()
    if snap_text:
        try:
            snapshot_times = tuple(sorted(float(v) for v in snap_text.split(",")))
        except ValueError:
            raise SystemExit(f"--snapshots expects comma-separated times, got {snap_text!r}")
    else:
        snapshot_times = (horizon,)

    started = _utc_now()
    try:
        sim_cfg = SimConfig(
            beta=beta,
            d=d,
            horizon=horizon,
            snapshot_times=snapshot_times,
            seed=seed,
            particle_cap=cap,
        )
    except ValueError as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return 2

    result = simulate(sim_cfg)
    truncated = result.truncated
    if truncated:
        flagged = [s.time for s in result.snapshots if s.truncated]
        first = min(flagged) if flagged else horizon
        print(
            f"warning: particle cap {cap} reached; snapshots from t={first:g} on are truncated",
            file=sys.stderr,
        )

    if args.summary:
        print(f"{'time':>8s} {'N_t':>10s} {'M_t':>12s}")
        for snap in result.snapshots:
            flag = " (truncated)" if snap.truncated else ""
            print(f"{snap.time:8.3f} {snap.count:10d} {max_radius(snap):12.6f}{flag}")

    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "snapshots.csv"
    buf = io.StringIO()
    export_snapshots(buf, result.snapshots)
    csv_path.write_text(buf.getvalue())

    manifest = RunManifest(
        command="simulate",
        config={
            "beta": beta,
            "d": d,
            "t": horizon,
            "snapshots": list(snapshot_times),
            "cap": cap,
            "seed_drawn": drawn,
        },
        master_seed=seed,
        version=__version__,
        started=started,
        finished=_utc_now(),
        outputs=[str(csv_path)],
        extra={"truncated": truncated, "branch_count": result.branch_count},
    )
    _write_manifest(out_dir, manifest)
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args: argparse.Namespace, cfg: dict[str, str]) -> int:
    suite = args.suite or cfg.get("suite", "all")
    quick = bool(args.quick or cfg.get("quick", "").lower() in ("1", "true", "yes"))
    seed = _resolve(args, cfg, "seed", None, int)
    workers = _resolve(args, cfg, "workers", _default_workers(), int)
    out_dir = Path(_resolve(args, cfg, "out", ".", str))

    drawn = seed is None
    if drawn:
        seed = _draw_seed()

    started = _utc_now()
    t0 = time.perf_counter()
    results = run_suite(suite, quick=quick, seed=seed, workers=workers)
    total = time.perf_counter() - t0

    width = max(len(r.name) for r in results)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"{mark}  {r.name:{width}s}  {r.claim}")
        print(f"      {' ' * width}  {r.detail}  [{r.seconds:.2f}s]")
    n_pass = sum(r.passed for r in results)
    print(f"\n{n_pass}/{len(results)} checks passed ({total:.1f}s, suite={suite}, "
          f"quick={quick}, seed={seed}, workers={workers})")

    out_dir.mkdir(parents=True, exist_ok=True)
    report = {
        "suite": suite,
        "quick": quick,
        "seed": seed,
        "passed": n_pass == len(results),
        "checks": [
            {"name": r.name, "claim": r.claim, "passed": r.passed, "detail": r.detail}
            for r in results
        ],
    }
    verdict_path = out_dir / "verdicts.json"
    with open(verdict_path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")

    manifest = RunManifest(
        command="verify",
        config={"suite": suite, "quick": quick, "workers": workers, "seed_drawn": drawn},
        master_seed=seed,
        version=__version__,
        started=started,
        finished=_utc_now(),
        outputs=[str(verdict_path)],
        extra={
            "total_seconds": round(total, 3),
            "check_seconds": {r.name: round(r.seconds, 3) for r in results},
        },
    )
    _write_manifest(out_dir, manifest)

    if n_pass < len(results):
        for r in results:
            if not r.passed:
                print(f"failed: {r.claim}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bbmlab",
        description="Branching Brownian motion laboratory: rates, simulation, verification.",
    )
    parser.add_argument("--version", action="version", version=f"bbmlab {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key = value config file; flags take precedence")
        p.add_argument("--seed", type=int, help="master seed (drawn and recorded if absent)")
        p.add_argument("--out", help="output directory (default: current directory)")

    p_rate = sub.add_parser("rate", help="rate function at one point, or a parameter sweep")
    p_rate.add_argument("--theta", type=float, help="ball speed fraction, 0 <= theta < 1")
    p_rate.add_argument("--k", type=float, help="per-axis shrink exponent, k >= 0")
    p_rate.add_argument("--a", type=float, help="mass-level exponent, a >= 0")
    p_rate.add_argument("--beta", type=float, help="branching rate (default 1)")
    p_rate.add_argument("--d", type=int, help="dimension (default 1)")
    p_rate.add_argument("--sweep", help="sweep one parameter: theta|k|a=start:stop:step")
    common(p_rate)
    p_rate.set_defaults(func=cmd_rate)

    p_sim = sub.add_parser("simulate", help="run one replica and export snapshots")
    p_sim.add_argument("--beta", type=float, help="branching rate (default 1)")
    p_sim.add_argument("--d", type=int, help="dimension (default 1)")
    p_sim.add_argument("--t", type=float, help="time horizon (default 1)")
    p_sim.add_argument("--snapshots", help="comma-separated snapshot times (default: horizon)")
    p_sim.add_argument("--cap", type=int, help="particle cap (default 5e6)")
    p_sim.add_argument("--summary", action="store_true", help="print N_t and M_t per snapshot")
    common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run the acceptance checks")
    p_ver.add_argument("suite", nargs="?", choices=SUITES, help="check suite (default: all)")
    p_ver.add_argument("--quick", action="store_true", help="reduced-replica smoke run")
    p_ver.add_argument("--workers", type=int, help="replica parallelism (default: BBMLAB_WORKERS or 1)")
    common(p_ver)
    p_ver.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = _read_config_file(args.config) if args.config else {}
    return args.func(args, cfg)


if __name__ == "__main__":
    sys.exit(main())
