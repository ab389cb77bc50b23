"""Command-line front end.

Subcommands: section, unfold, simulate, ratio, sweep. Distribution inputs
are JSON files in the measures schema or the --delta shorthand; tabulated
results go to CSV with header r,tail,cdf,density (density blank where not
computed). Optional --plot renders a matplotlib figure next to each CSV.

Exit codes: 1 for validation problems, 2 for numerical nonconvergence;
a machine-readable error object goes to stderr either way.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .geometry import Curvature, SpaceParams
from .measures import AtomMixture, load_distribution, save_distribution
from .quadrature import QuadratureError, QuadratureSpec
from .section import (BallProcess, intensity_ratio, section_distribution,
                      section_profile)
from .simulate import SimulationConfig, simulate_sections
from .unfold import UnfoldInconsistencyError, UnfoldInput, unfold_profile

_WORKERS_ENV = "CURVEDWICKSELL_WORKERS"


def _fmt(x):
    return format(float(x), ".12g")


def _write_csv(path, grid, tails, densities=None):
    lines = ["r,tail,cdf,density"]
    for i, r in enumerate(grid):
        dens = "" if densities is None else _fmt(densities[i])
        lines.append(f"{_fmt(r)},{_fmt(tails[i])},{_fmt(1.0 - tails[i])},"
                     f"{dens}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _add_space_args(p):
    p.add_argument("--d", type=int, required=True, help="ambient dimension")
    p.add_argument("--k", type=float, default=None,
                   help="sectional curvature")


def _add_dist_args(p):
    p.add_argument("--dist", help="distribution JSON (measures schema)")
    p.add_argument("--delta", type=float,
                   help="shorthand for a point mass at the given radius")


def _add_grid_args(p):
    p.add_argument("--grid-min", type=float, required=True)
    p.add_argument("--grid-max", type=float, required=True)
    p.add_argument("--grid-n", type=int, required=True)


def _add_quad_args(p):
    p.add_argument("--abs-tol", type=float, default=1e-9)
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.add_argument("--max-subdivisions", type=int, default=200)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="curvedwicksell",
        description="Section and unfolding operators for ball processes in "
                    "constant-curvature spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ratio", help="print the induced intensity ratio")
    _add_space_args(p)
    _add_dist_args(p)
    _add_quad_args(p)

    p = sub.add_parser("section", help="forward slice-law tail/density table")
    _add_space_args(p)
    _add_dist_args(p)
    _add_grid_args(p)
    _add_quad_args(p)
    p.add_argument("--intensity", type=float, default=1.0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--emit-dist",
                   help="also write the slice law as a density JSON "
                        "(refined grid, suitable for unfolding)")
    p.add_argument("--plot", action="store_true",
                   help="render a PNG next to the CSV")

    p = sub.add_parser("unfold", help="recover the ball-radius tail table")
    _add_space_args(p)
    _add_dist_args(p)
    _add_grid_args(p)
    _add_quad_args(p)
    p.add_argument("--ratio", type=float, required=True,
                   help="intensity ratio N_{d-1}/N_d")
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("simulate", help="Monte Carlo slice sample")
    _add_space_args(p)
    _add_dist_args(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n-samples", type=int, required=True)
    p.add_argument("--slab-halfwidth", type=float, required=True)
    p.add_argument("--workers", type=int,
                   default=int(os.environ.get(_WORKERS_ENV, "1")))
    p.add_argument("--out", required=True,
                   help="output JSON (measures sample schema)")

    p = sub.add_parser("sweep", help="section curves across curvatures")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k-list", required=True,
                   help="comma-separated curvature values")
    _add_dist_args(p)
    _add_grid_args(p)
    _add_quad_args(p)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--plot", action="store_true")
    return parser


def _load_dist(args):
    if (args.dist is None) == (args.delta is None):
        raise ValueError("exactly one of --dist or --delta is required")
    if args.delta is not None:
        return AtomMixture.delta(args.delta)
    return load_distribution(args.dist)


def _quad(args):
    return QuadratureSpec(abs_tol=args.abs_tol, rel_tol=args.rel_tol,
                          max_subdivisions=args.max_subdivisions)


def _grid(args):
    if args.grid_n < 2:
        raise ValueError("grid needs at least 2 points")
    return np.linspace(args.grid_min, args.grid_max, args.grid_n)


def _process(args, k=None):
    curv = Curvature(args.k if k is None else k)
    space = SpaceParams(curv, args.d)
    intensity = getattr(args, "intensity", 1.0)
    return BallProcess(space, intensity, _load_dist(args))


def _cmd_ratio(args):
    proc = _process(args)
    print(_fmt(intensity_ratio(proc, _quad(args))))
    return 0


def _cmd_section(args):
    proc = _process(args)
    quad = _quad(args)
    profile = section_profile(proc, _grid(args), quad)
    _write_csv(args.out, profile.grid, profile.tail_values,
               profile.density_values)
    if args.emit_dist:
        save_distribution(section_distribution(proc, quad), args.emit_dist)
    print(json.dumps({"intensity_ratio": intensity_ratio(proc, quad),
                      "induced_intensity": profile.intensity}))
    if args.plot:
        from .report import save_profile_figure
        save_profile_figure(os.path.splitext(args.out)[0] + ".png",
                            profile.grid, profile.tail_values,
                            profile.density_values,
                            title=f"section d={args.d} k={args.k:g}")
    return 0


def _cmd_unfold(args):
    space = SpaceParams(Curvature(args.k), args.d)
    inp = UnfoldInput(space, args.ratio, _load_dist(args))
    profile, max_adj = unfold_profile(inp, _grid(args), _quad(args))
    _write_csv(args.out, profile.grid, profile.tail_values)
    print(json.dumps({"max_isotonic_adjustment": max_adj}))
    if args.plot:
        from .report import save_profile_figure
        save_profile_figure(os.path.splitext(args.out)[0] + ".png",
                            profile.grid, profile.tail_values,
                            title=f"unfold d={args.d} k={args.k:g}")
    return 0


def _cmd_simulate(args):
    proc = _process(args)
    cfg = SimulationConfig(seed=args.seed, n_samples=args.n_samples,
                           slab_halfwidth=args.slab_halfwidth,
                           workers=args.workers)
    result = simulate_sections(proc, cfg)
    save_distribution(result.slice_sample, args.out)
    print(json.dumps({"ratio_estimate": result.ratio_estimate,
                      "std_err": result.std_err}))
    return 0


def _cmd_sweep(args):
    k_values = [float(v) for v in args.k_list.split(",") if v.strip() != ""]
    quad = _quad(args)
    grid = _grid(args)
    os.makedirs(args.out_dir, exist_ok=True)
    dist = _load_dist(args)

    def run(k):
        space = SpaceParams(Curvature(k), args.d)
        return section_profile(BallProcess(space, 1.0, dist), grid, quad)

    flat = run(0.0)
    rows = []
    curves = {0.0: flat.density_values}
    for k in k_values:
        profile = flat if k == 0.0 else run(k)
        name = os.path.join(args.out_dir, f"section_k{k:+g}.csv")
        _write_csv(name, profile.grid, profile.tail_values,
                   profile.density_values)
        dist_to_flat = float(np.max(np.abs(profile.tail_values
                                           - flat.tail_values)))
        rows.append((k, dist_to_flat))
        curves[k] = profile.density_values
    summary = os.path.join(args.out_dir, "summary.csv")
    with open(summary, "w", newline="") as fh:
        fh.write("k,sup_distance_to_flat\n")
        for k, dval in sorted(rows):
            fh.write(f"{_fmt(k)},{_fmt(dval)}\n")
    if args.plot:
        from .report import save_sweep_figure
        save_sweep_figure(os.path.join(args.out_dir, "sweep.png"),
                          grid, curves, title=f"slice densities, d={args.d}")
    return 0


_COMMANDS = {
    "ratio": _cmd_ratio,
    "section": _cmd_section,
    "unfold": _cmd_unfold,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (QuadratureError,) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 2
    except (UnfoldInconsistencyError, ValueError, OSError,
            json.JSONDecodeError, KeyError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
