"""Local density of the support inside a growing ball, two speeds side by side.

At theta=0.5 the region sits well inside the front and P(not dense) falls
quickly. At theta=0.9 the region's edge outruns the front's logarithmic
delay at every horizon reachable by simulation, so the probability climbs
instead; the coverage column stays exactly complementary throughout.
"""

import argparse

from bbmlab.experiments import ExperimentConfig, coverage_experiment, density_experiment
from bbmlab.geometry import MovingBallSpec
from bbmlab.sim import SimConfig


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--replicas", type=int, default=800)
    ap.add_argument("--seed", type=int, default=50)
    args = ap.parse_args()

    for theta in (0.5, 0.9):
        sim = SimConfig(beta=1.0, d=1, horizon=6.0, seed=0)
        ball = MovingBallSpec(beta=1.0, theta=theta, k=0.0, r0=1.0, d=1)
        cfg = ExperimentConfig(sim=sim, replicas=args.replicas, t_grid=(2.0, 4.0, 6.0),
                               master_seed=args.seed, ball=ball)
        dens = density_experiment(cfg)
        cov = coverage_experiment(cfg)
        print(f"theta={theta}: region B(0, {theta}*sqrt(2)*t), probe radius r(t)")
        print(f"{'t':>4} {'P(not dense)':>13} {'coverage':>9} {'indet':>7} {'sum':>5}")
        for ed, ec in zip(dens.estimates, cov.estimates):
            total = ed["p_not_dense"] + ec["coverage_fraction"] + ed["indeterminate_fraction"]
            print(f"{ed['t']:4.0f} {ed['p_not_dense']:13.4f} {ec['coverage_fraction']:9.4f} "
                  f"{ed['indeterminate_fraction']:7.4f} {total:5.3f}")
        print()


if __name__ == "__main__":
    main()
