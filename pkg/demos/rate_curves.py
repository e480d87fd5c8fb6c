"""Print the absence rate I(theta, k, a) across theta for a few shrink rates.

The k=0 column can be compared against the closed form 2(sqrt(2)-1)(1-theta)
printed alongside. Everything here is deterministic.
"""

import argparse

import numpy as np

from bbmlab.rates import RateParams, absence_rate_closed_form, minimize


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--steps", type=int, default=12)
    args = ap.parse_args()

    ks = (0.0, 0.1, 0.2)
    header = "theta    closed    " + "  ".join(f"I(k={k})" for k in ks)
    print(header)
    print("-" * len(header))
    for theta in np.linspace(0.0, 0.88, args.steps):
        row = [f"{theta:5.2f}", f"{absence_rate_closed_form(float(theta)):9.6f}"]
        for k in ks:
            p = RateParams(theta=float(theta), k=k, a=0.0, d=args.d)
            row.append(f"{minimize(p).value:8.6f}")
        print("  ".join(row))
    print("\nEvery column decreases in theta, and rows decrease left to right")
    print("(larger k shrinks the target, making absence easier).")


if __name__ == "__main__":
    main()
