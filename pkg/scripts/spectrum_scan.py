#!/usr/bin/env python3
"""Scan the linearized spectrum of constructed bound-states over theta.

Writes a CSV with one row per (theta, sigma, k): the kernel residuals, the
spectral abscissa away from the symmetry kernel, and whether the sufficient
smallness condition (1+sigma)*sup|phi|^sigma < -k holds.

Usage: python scripts/spectrum_scan.py [--N 512] [--L 80] [--out scan.csv]
"""
import argparse
import sys

import numpy as np

from cgl_lab.boundstate import construct_bound_state
from cgl_lab.errors import CGLLabError
from cgl_lab.grid import make_grid
from cgl_lab.spectra import kernel_check, stability_report


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=512)
    ap.add_argument("--L", type=float, default=80.0)
    ap.add_argument("--omega", type=float, default=1.0)
    ap.add_argument("--out", default="spectrum_scan.csv")
    args = ap.parse_args(argv)

    grid = make_grid("dirichlet", args.L, args.N)
    thetas = np.linspace(-1.2, 1.2, 13)
    cases = [(s, k) for s in (0.5, 1.0, 2.0) for k in (0.0, -1.0, -5.0)]

    with open(args.out, "w") as fh:
        fh.write("theta,sigma,k,gamma,kernel_dim,res_gauge,res_translation,"
                 "abscissa_excl_kernel,condition_1_9,status\n")
        for theta in thetas:
            for sigma, k in cases:
                try:
                    bs = construct_bound_state(theta, args.omega, k, sigma, grid)
                    rg, rt = kernel_check(bs)
                    rep = stability_report(bs)
                except CGLLabError as exc:
                    fh.write(f"{theta:.6g},{sigma},{k},,,,,,,"
                             f"{type(exc).__name__}\n")
                    continue
                fh.write(f"{theta:.6g},{sigma},{k},{bs.gamma:.12g},"
                         f"{rep.kernel_dim},{rg:.3g},{rt:.3g},"
                         f"{rep.abscissa_excl_kernel:.6g},"
                         f"{rep.condition_1_9},ok\n")
            print(f"theta={theta:+.3f} done")
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
