"""Volume of the radius-r enlargement of the support, scaled by t^d.

The scaled volume climbs toward (2 beta (1 - k d))^(d/2) omega_d as the
population fills its limiting ball. In d=1 the approach is fast enough to
watch; in d=2 it is far slower, which is worth seeing once.
"""

import argparse
import statistics

from bbmlab.geometry import union_volume
from bbmlab.rates import volume_constant
from bbmlab.sim import SimConfig, replica_seed, simulate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--t", type=float, default=10.0)
    ap.add_argument("--replicas", type=int, default=9)
    ap.add_argument("--seed", type=int, default=40)
    args = ap.parse_args()

    times = tuple(float(t) for t in range(2, int(args.t) + 1, 2))
    limit = volume_constant(args.beta, 0.0, args.d)
    print(f"median vol(support + B(0,1)) / t^{args.d}, beta={args.beta}, d={args.d}; "
          f"limit {limit:.4f}")
    print(f"{'t':>4} {'scaled volume':>14}")
    for t in times:
        scaled = []
        for i in range(args.replicas):
            cfg = SimConfig(beta=args.beta, d=args.d, horizon=t, snapshot_times=(t,),
                            seed=replica_seed(args.seed, i))
            snap = simulate(cfg).snapshots[0]
            vol, _ = union_volume(snap.positions, 1.0, rel_err_target=0.01, seed=args.seed + i)
            scaled.append(vol / t**args.d)
        print(f"{t:4.0f} {statistics.median(scaled):14.4f}")


if __name__ == "__main__":
    main()
