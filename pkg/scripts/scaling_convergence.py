"""Exponent of sup|U_bar - U_A| versus delta_* as the mesh is refined.

Usage: python3 scripts/scaling_convergence.py [--layer tracked|mesh] [h ...]
"""

import argparse
import time

from glimmreact.quasi1d import LAYERS, scaling_study

DELTAS = (0.04, 0.02, 0.01)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--layer", choices=LAYERS, default="tracked")
    ap.add_argument("h", nargs="*", type=float, default=[2e-3, 1e-3, 5e-4, 2.5e-4])
    args = ap.parse_args(argv)
    print("h, " + ", ".join(f"sup(delta={d})" for d in DELTAS) + ", exponent, seconds")
    for h in args.h:
        t = time.time()
        res = scaling_study(DELTAS, h, layer=args.layer)
        sups = ", ".join(f"{r[2]:.4e}" for r in res.rows)
        print(f"{h:g}, {sups}, {res.exponent:.3f}, {time.time() - t:.0f}", flush=True)


if __name__ == "__main__":
    main()
