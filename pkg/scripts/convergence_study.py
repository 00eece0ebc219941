#!/usr/bin/env python3
"""Strang-splitting self-convergence study on a smooth Gaussian pulse.

Halves dt repeatedly and prints successive differences and observed orders;
the scheme should settle near order 2.

Usage: python scripts/convergence_study.py [--T 0.5] [--levels 6]
"""
import argparse
import math
import sys

import numpy as np

from cgl_lab.evolve import EvolveSpec, evolve
from cgl_lab.grid import Field, make_grid
from cgl_lab.params import TrigParams


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=0.5)
    ap.add_argument("--dt0", type=float, default=0.04)
    ap.add_argument("--levels", type=int, default=6)
    ap.add_argument("--theta", type=float, default=0.3)
    ap.add_argument("--gamma", type=float, default=0.2)
    ap.add_argument("--k", type=float, default=-0.1)
    ap.add_argument("--sigma", type=float, default=2.0)
    args = ap.parse_args(argv)

    g = make_grid("periodic", L=60.0, N=256)
    x = g.nodes - g.center
    u0 = Field(1.2 * np.exp(-(x / 3.0) ** 2 + 0.3j * x), g)
    p = TrigParams(theta=args.theta, gamma=args.gamma, k=args.k, nu=1.0,
                   sigma=args.sigma)

    finals = []
    dts = [args.dt0 / 2 ** i for i in range(args.levels)]
    for dt in dts:
        spec = EvolveSpec(params=p, dt=dt, T=args.T, monitor_stride=10 ** 9)
        finals.append(evolve(u0, spec).final.samples)

    print(f"{'dt':>10} {'|u_dt - u_dt/2|':>18} {'order':>8}")
    prev_err = None
    for i in range(len(dts) - 1):
        err = float(np.max(np.abs(finals[i] - finals[i + 1])))
        order = math.log2(prev_err / err) if prev_err else float("nan")
        print(f"{dts[i]:10.5f} {err:18.6e} {order:8.3f}")
        prev_err = err
    return 0


if __name__ == "__main__":
    sys.exit(main())
