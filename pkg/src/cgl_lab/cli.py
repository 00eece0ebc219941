"""Command-line interface: cgl-lab {run, boundstate, evolve, spectrum, continuation}.

Every subcommand accepts either coefficient spelling: Cartesian
(--a --alpha --b --beta --k --sigma) or trigonometric
(--theta --gamma --k --omega --nu --sigma).  The CGL_LAB_THREADS environment
variable caps parallelism when running a batch of scenario files.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .boundstate import (
    amplitude,
    construct_bound_state,
    residual,
    sup_norm_paper_display,
)
from .continuation import branch_derivative_check, continue_branch
from .errors import CGLLabError, NotEnoughPoints, ParseError
from .evolve import EvolveSpec, evolve
from .experiments import (
    _initial_field,
    git_describe,
    run_scenario,
    write_monitors_csv,
)
from .grid import make_grid, save_field_csv
from .params import CGLParams, TrigParams, to_trig
from .spectra import stability_report


def _add_param_flags(p: argparse.ArgumentParser):
    p.add_argument("--a", type=float, help="diffusion coefficient (Cartesian spelling)")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--b", type=float)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--theta", type=float, help="linear angle (trig spelling)")
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--k", type=float, default=0.0)
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=2.0)


def _add_grid_flags(p: argparse.ArgumentParser, kind="periodic", L=60.0, N=2048):
    p.add_argument("--grid-kind", choices=["periodic", "dirichlet"], default=kind)
    p.add_argument("--L", type=float, default=L)
    p.add_argument("--N", type=int, default=N)


def _params_from_args(args):
    if args.a is not None:
        return CGLParams(a=args.a, alpha=args.alpha, b=args.b if args.b is not None else 0.0,
                         beta=args.beta, k=args.k, sigma=args.sigma)
    theta = args.theta if args.theta is not None else 0.0
    return TrigParams(theta=theta, gamma=args.gamma, k=args.k, omega=args.omega,
                      nu=args.nu, sigma=args.sigma)


def _trig_from_args(args) -> TrigParams:
    p = _params_from_args(args)
    if isinstance(p, TrigParams):
        return p
    trig, _ = to_trig(p)
    return TrigParams(theta=trig.theta, gamma=trig.gamma, k=trig.k,
                      omega=args.omega, nu=trig.nu, sigma=trig.sigma)


def _write_json(payload: dict, path):
    payload = dict(payload)
    payload["build"] = git_describe()
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _maybe_svg(path, plot_fn):
    if path is None:
        return
    import matplotlib

    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    plot_fn(ax)
    fig.savefig(path)
    plt.close(fig)


def cmd_boundstate(args) -> int:
    grid = make_grid(args.grid_kind, args.L, args.N)
    tp = _trig_from_args(args)
    bs = construct_bound_state(tp.theta, tp.omega, tp.k, tp.sigma, grid)
    res = residual(bs)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "profile.csv")
    with open(csv_path, "w") as fh:
        fh.write("x,abs_phi,re_phi,im_phi,psi,phase\n")
        for x, u, p in zip(grid.nodes, bs.phi.samples, bs.psi):
            fh.write(f"{x:.17g},{abs(u):.17g},{u.real:.17g},{u.imag:.17g},"
                     f"{p:.17g},{math.atan2(u.imag, u.real):.17g}\n")
    _write_json({
        "d": bs.d, "gamma": bs.gamma, "epsilon": bs.epsilon, "eta": bs.eta,
        "residual": res, "edge_decay": float(max(bs.psi[0], bs.psi[-1])),
        "sup_norm": amplitude(bs.epsilon, bs.eta, bs.sigma),
        "sup_norm_paper_display": sup_norm_paper_display(bs.epsilon, bs.eta, bs.sigma),
        "theta": bs.theta, "omega": bs.omega, "k": bs.k, "sigma": bs.sigma,
    }, os.path.join(args.out, "summary.json"))
    _maybe_svg(args.svg, lambda ax: (
        ax.plot(grid.nodes, np.abs(bs.phi.samples), label="|phi|"),
        ax.plot(grid.nodes, np.angle(bs.phi.samples), label="phase"),
        ax.legend(), ax.set_xlabel("x")))
    print(f"bound-state: d={bs.d:.6g} gamma={bs.gamma:.6g} eps={bs.epsilon:.6g} "
          f"eta={bs.eta:.6g} residual={res:.3g}")
    return 0


def cmd_evolve(args) -> int:
    grid = make_grid(args.grid_kind, args.L, args.N)
    params = _params_from_args(args)
    init = _parse_initial(args.initial, params, grid)
    spec = EvolveSpec(params=params, dt=args.dt, T=args.T, frame=args.frame,
                      monitor_stride=args.monitor_stride,
                      blowup_cap=args.blowup_cap,
                      monitors=tuple(args.monitors.split(",")), p=args.p)
    traj = evolve(init, spec)
    os.makedirs(args.out, exist_ok=True)
    write_monitors_csv(traj, os.path.join(args.out, "monitors.csv"))
    if traj.final is not None and args.save_final:
        save_field_csv(traj.final, os.path.join(args.out, "final.csv"))
    _write_json({"outcome": traj.outcome, "t_end": traj.t_end},
                os.path.join(args.out, "summary.json"))
    print(f"evolve: outcome={traj.outcome} t_end={traj.t_end:.6g}")
    return 0


def _parse_initial(text: str, params, grid):
    from .grid import Field, load_field_csv

    if text == "boundstate":
        tp = params if isinstance(params, TrigParams) else None
        if tp is None:
            raise ParseError("--initial boundstate needs the trig spelling")
        bs = construct_bound_state(tp.theta, tp.omega, tp.k, tp.sigma, grid)
        return bs.phi
    if text.startswith("eigenmode:"):
        n = int(text.split(":", 1)[1])
        return _initial_field({"type": "eigenmode", "n": n}, grid, 0)
    if text.startswith("gaussian:"):
        amp, width = (float(v) for v in text.split(":", 1)[1].split(","))
        return _initial_field({"type": "gaussian", "amp": amp, "width": width}, grid, 0)
    if text.startswith("file:"):
        return load_field_csv(text.split(":", 1)[1])
    raise ParseError(f"cannot parse initial data spec {text!r}")


def cmd_spectrum(args) -> int:
    grid = make_grid(args.grid_kind, args.L, args.N)
    tp = _trig_from_args(args)
    bs = construct_bound_state(tp.theta, tp.omega, tp.k, tp.sigma, grid)
    report = stability_report(bs, kernel_tol=args.kernel_tol)
    os.makedirs(args.out, exist_ok=True)
    eig_path = os.path.join(args.out, "eigenvalues.csv")
    eigs = np.sort_complex(report.eigenvalues)
    with open(eig_path, "w") as fh:
        fh.write("re,im\n")
        for lam in eigs:
            fh.write(f"{lam.real:.17g},{lam.imag:.17g}\n")
    _write_json({
        "kernel_dim": report.kernel_dim,
        "abscissa_excl_kernel": report.abscissa_excl_kernel,
        "essential_bound": report.essential_bound,
        "condition_1_9": report.condition_1_9,
        "lower_bound_check": report.lower_bound_check,
        "sup_norm": report.sup_norm,
    }, os.path.join(args.out, "report.json"))
    _maybe_svg(args.svg, lambda ax: (
        ax.scatter(eigs.real, eigs.imag, s=4),
        ax.set_xlabel("Re"), ax.set_ylabel("Im")))
    print(f"spectrum: kernel_dim={report.kernel_dim} "
          f"abscissa={report.abscissa_excl_kernel:.6g} "
          f"condition_1_9={report.condition_1_9}")
    return 0


def cmd_continuation(args) -> int:
    grid = make_grid("dirichlet", args.L, args.N)
    branch = continue_branch(grid, args.n, args.theta or 0.0, args.gamma,
                             args.sigma, args.mu_max, args.steps)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "branch.csv")
    with open(csv_path, "w") as fh:
        fh.write("mu,omega,k,residual,v_norm\n")
        for p in branch.points:
            from .grid import norm

            fh.write(f"{p.mu:.17g},{p.omega:.17g},{p.k:.17g},"
                     f"{p.residual:.17g},{norm(p.v, 'L2'):.17g}\n")
    summary = {
        "lambda": branch.lam, "n": branch.eig_index,
        "k_range": [branch.points[-1].k, branch.points[0].k],
        "points": len(branch.points),
    }
    try:
        dk_err, domega_err = branch_derivative_check(branch)
        summary["dk_slope_rel_err"] = dk_err
        summary["domega_slope_rel_err"] = domega_err
    except NotEnoughPoints:
        pass
    _write_json(summary, os.path.join(args.out, "summary.json"))
    print(f"continuation: {len(branch.points)} points, "
          f"k from {branch.points[0].k:.6g} to {branch.points[-1].k:.6g}")
    return 0


def cmd_run(args) -> int:
    paths = args.scenario
    threads = int(os.environ.get("CGL_LAB_THREADS", "1"))
    codes = []

    def one(path):
        try:
            result = run_scenario(path)
            print(f"{path}: {result.verdict} ({result.reason})")
            return result.exit_code
        except ParseError as exc:
            print(f"{path}: parse error: {exc}", file=sys.stderr)
            return 1
        except CGLLabError as exc:
            print(f"{path}: error: {exc}", file=sys.stderr)
            return 1

    if threads > 1 and len(paths) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            codes = list(pool.map(one, paths))
    else:
        codes = [one(p) for p in paths]
    return max(codes)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cgl-lab",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"cgl-lab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run scenario files")
    p.add_argument("scenario", nargs="+")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("boundstate", help="construct the explicit bound-state")
    _add_param_flags(p)
    _add_grid_flags(p)
    p.add_argument("--out", default="out/boundstate")
    p.add_argument("--svg", default=None, help="write an SVG plot of |phi| and phase")
    p.set_defaults(fn=cmd_boundstate)

    p = sub.add_parser("evolve", help="time-step the equation")
    _add_param_flags(p)
    _add_grid_flags(p)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--frame", choices=["lab", "rotating"], default="lab")
    p.add_argument("--monitor-stride", type=int, default=1)
    p.add_argument("--blowup-cap", type=float, default=1e6)
    p.add_argument("--monitors", default="L2,H1,Linf")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--initial", default="gaussian:1,1",
                   help="boundstate | eigenmode:n | gaussian:amp,width | file:path")
    p.add_argument("--save-final", action="store_true")
    p.add_argument("--out", default="out/evolve")
    p.set_defaults(fn=cmd_evolve)

    p = sub.add_parser("spectrum", help="linearized spectrum around a bound-state")
    _add_param_flags(p)
    _add_grid_flags(p)
    p.add_argument("--kernel-tol", type=float, default=1e-4)
    p.add_argument("--out", default="out/spectrum")
    p.add_argument("--svg", default=None, help="write an SVG scatter of the spectrum")
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("continuation", help="Newton continuation from an eigenpair")
    _add_param_flags(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--mu-max", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--L", type=float, default=math.pi)
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--out", default="out/continuation")
    p.set_defaults(fn=cmd_continuation)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CGLLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
