"""Command-line front end.

Every model flag defaults to the configuration of the first figure
(g=0.5, beta=2, Omega=1, w1=w2=100, t=1, f=sin), so a bare subcommand runs
that case. ``--config PATH`` reads ``key = value`` lines whose keys are flag
names; flags given on the command line win.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from ._fmt import fmt
from .deform import ModelParams, parse_deformation
from .dynamics import DEFAULT_EPS_TRUNC, amplitude_excited, amplitude_ground, evolve
from .errors import DJCMError, WeakCouplingWarning
from .moments import photon_number_dist, witness_csv, witness_record
from .oracle import OdeSettings, propagate_levels, propagate_state, trajectory_csv
from .phasespace import GridSpec, eval_grid
from .sweep import AXES, WITNESSES, SweepSpec, default_figure_specs, figure_panels, run_sweep

SUBCOMMANDS = ("evolve", "pnd", "mandel", "antibunch", "squeeze", "wigner", "husimi", "sweep", "figures", "validate")


class _UsageError(Exception):
    pass


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _deformation(text: str):
    try:
        return parse_deformation(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _model_parent():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model")
    g.add_argument("--f", type=_deformation, default="sin", help="deformation: identity|sin|invsin|ln|poly:c0,c1,...")
    g.add_argument("--g", type=float, default=0.5, help="coupling constant")
    g.add_argument("--beta", type=_complex, default="2", help="coherent amplitude, e.g. 2 or 1+0.5j")
    g.add_argument("--omega", type=float, default=1.0, help="field frequency")
    g.add_argument("--w1", type=float, default=100.0, help="ground level frequency")
    g.add_argument("--w2", type=float, default=100.0, help="excited level frequency")
    g.add_argument("--t", type=float, default=1.0, help="evolution time")
    g.add_argument("--eps", type=float, default=DEFAULT_EPS_TRUNC, help="neglected Poisson tail mass")
    g.add_argument("--engine", choices=("closed-form", "oracle"), default="closed-form")
    g.add_argument("--dt", type=float, default=1e-4, help="RK4 step for --engine oracle")
    return p


def _output_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("-o", "--output", default="-", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", help="key = value file of flag defaults")
    return p


def _time_flags(p):
    p.add_argument("--t-start", type=float, help="with --t-stop: sweep time instead of using --t")
    p.add_argument("--t-stop", type=float)
    p.add_argument("--t-count", type=int, default=11)


def _grid_flags(p):
    p.add_argument("--re-min", type=float, default=-3.0)
    p.add_argument("--re-max", type=float, default=3.0)
    p.add_argument("--im-min", type=float, default=-3.0)
    p.add_argument("--im-max", type=float, default=3.0)
    p.add_argument("--n-re", type=int, default=121)
    p.add_argument("--n-im", type=int, default=121)
    p.add_argument("--long", action="store_true", help="write re,im,value rows instead of a matrix")


def build_parser() -> argparse.ArgumentParser:
    model, out = _model_parent(), _output_parent()
    parser = argparse.ArgumentParser(
        prog="djcm",
        description="Deformed Jaynes-Cummings field state: evolution and nonclassicality witnesses.",
        epilog="subcommands: " + ", ".join(SUBCOMMANDS),
    )
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(SUBCOMMANDS) + "}")
    sub.required = True
    parents = [model, out]

    sub.add_parser("evolve", parents=parents, help="write the truncated field state as JSON")
    p = sub.add_parser("pnd", parents=parents, help="manifold weights p(n) = |C2[n]|^2 + |C1[n]|^2")
    p.add_argument("--n-max", type=int, default=20)
    for name, text in (
        ("mandel", "Mandel Q parameter"),
        ("antibunch", "antibunching d1"),
        ("squeeze", "quadrature squeezing s_x, s_p"),
    ):
        _time_flags(sub.add_parser(name, parents=parents, help=f"{text} (full witness record rows)"))
    p = sub.add_parser("wigner", parents=parents, help="Wigner function on a grid")
    _grid_flags(p)
    p.add_argument("--terms", choices=("full", "diagonal"), default="full")
    _grid_flags(sub.add_parser("husimi", parents=parents, help="Husimi Q function on a grid"))

    p = sub.add_parser("sweep", parents=parents, help="witnesses along one parameter axis")
    p.add_argument("--axis", choices=AXES, default="time")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, default=10.0)
    p.add_argument("--count", type=int, default=201)
    p.add_argument("--witness", default="mandel", help=f"comma list from {','.join(WITNESSES)}")
    p.add_argument("--kinds", default="sin,invsin,ln", help="comma list of deformations")
    p.add_argument("--n", type=int, default=5, help="manifold index for pnd")
    p.add_argument("--point", type=_complex, default="1", help="phase-space point for wigner/husimi")

    p = sub.add_parser("figures", parents=[out], help="write fig1.csv ... fig6.csv")
    p.add_argument("--outdir", default=".")
    p.add_argument("--all-panels", type=_bool, nargs="?", const=True, default=False,
                   help="also write every panel and the phase-space grids")

    p = sub.add_parser("validate", parents=parents, help="closed form vs RK4 oracle, max deviation")
    p.add_argument("--t-end", type=float, default=5.0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--sample-every", type=int, default=100)
    p.add_argument("--dump-manifold", type=int, help="also write this manifold's RK4 trajectory")
    p.add_argument("--dump", help="trajectory CSV path for --dump-manifold")
    return parser


def _read_config(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read config {path}: {exc}")
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = val
    return values


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = _read_config(known.config)
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    used = set()
    for sp in sub_action.choices.values():
        dests = {a.dest for a in sp._actions}
        mine = {k: v for k, v in values.items() if k in dests}
        sp.set_defaults(**mine)
        used |= set(mine)
    unknown = set(values) - used
    if unknown:
        raise _UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")


def _params(args) -> ModelParams:
    return ModelParams(g=args.g, omega=args.omega, w1=args.w1, w2=args.w2, beta=args.beta, deformation=args.f)


def _state(args, params, t, n_levels=None):
    if args.engine == "oracle":
        return propagate_state(params, OdeSettings(t_end=t, dt=args.dt), args.eps, n_levels=n_levels)
    return evolve(params, t, args.eps, n_levels=n_levels)


def _write(args, text: str):
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)


def _times(args):
    if args.t_start is None and args.t_stop is None:
        return [args.t]
    if args.t_start is None or args.t_stop is None:
        raise _UsageError("--t-start and --t-stop go together")
    if args.t_count < 1:
        raise _UsageError("--t-count must be positive")
    return list(np.linspace(args.t_start, args.t_stop, args.t_count))


def _cmd_evolve(args):
    _write(args, _state(args, _params(args), args.t).to_json() + "\n")


def _cmd_pnd(args):
    if args.n_max < 0:
        raise _UsageError("--n-max must be non-negative")
    state = _state(args, _params(args), args.t, n_levels=args.n_max + 1)
    rows = [(n, photon_number_dist(state, n)) for n in range(args.n_max + 1)]
    if args.format == "json":
        _write(args, json.dumps({"t": state.t, "n": [r[0] for r in rows], "p_n": [r[1] for r in rows]}) + "\n")
    else:
        _write(args, "n,p_n\n" + "".join(f"{n},{fmt(p)}\n" for n, p in rows))


def _cmd_witness(args):
    params = _params(args)
    records = [witness_record(_state(args, params, t)) for t in _times(args)]
    if args.format == "json":
        _write(args, json.dumps([r.__dict__ for r in records]) + "\n")
    else:
        _write(args, witness_csv(records))


def _cmd_grid(args, kind):
    spec = GridSpec(args.re_min, args.re_max, args.im_min, args.im_max, args.n_re, args.n_im)
    state = _state(args, _params(args), args.t)
    field = eval_grid(state, spec, kind, terms=getattr(args, "terms", "full"))
    if args.format == "json":
        doc = {
            "kind": kind,
            "window": [spec.re_min, spec.re_max, spec.im_min, spec.im_max],
            "resolution": [spec.n_re, spec.n_im],
            "integral": field.integral,
            "values": field.values.tolist(),
        }
        _write(args, json.dumps(doc) + "\n")
    else:
        _write(args, field.to_csv(long=args.long))


def _cmd_sweep(args):
    spec = SweepSpec(
        axis=args.axis,
        start=args.start,
        stop=args.stop,
        count=args.count,
        witnesses=tuple(w.strip() for w in args.witness.split(",") if w.strip()),
        params=_params(args),
        t=args.t,
        n=args.n,
        point=args.point,
        deformations=tuple(parse_deformation(k) for k in args.kinds.split(",") if k.strip()),
        eps_trunc=args.eps,
        engine=args.engine,
        dt=args.dt,
    )
    table = run_sweep(spec)
    _write(args, table.to_json() + "\n" if args.format == "json" else table.to_csv())


def _cmd_figures(args):
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    ext = args.format
    for i, spec in enumerate(default_figure_specs(), 1):
        table = run_sweep(spec)
        (outdir / f"fig{i}.{ext}").write_text(table.to_json() + "\n" if ext == "json" else table.to_csv())
    if not args.all_panels:
        return
    for name, spec in figure_panels().items():
        table = run_sweep(spec)
        (outdir / f"{name}.{ext}").write_text(table.to_json() + "\n" if ext == "json" else table.to_csv())
    base = default_figure_specs()[0].params
    grid = GridSpec()
    for kind in default_figure_specs()[0].deformations:
        state = evolve(base.replace(deformation=kind), 1.0)
        for fig, which in (("fig3", "wigner"), ("fig6", "husimi")):
            field = eval_grid(state, grid, which)
            (outdir / f"{fig}_phase_{which}_{kind.token}.csv").write_text(field.to_csv())


def _cmd_validate(args):
    params = _params(args)
    settings = OdeSettings(t_end=args.t_end, dt=args.dt)
    N = evolve(params, 0.0, args.eps).N
    n = np.arange(N)
    traj = propagate_levels(params, n, settings, sample_every=args.sample_every)
    t = traj.t[:, None]
    dev = max(
        float(np.max(np.abs(amplitude_excited(params, n[None, :], t) - traj.c2))),
        float(np.max(np.abs(amplitude_ground(params, n[None, :], t) - traj.c1))),
    )
    print(f"deformation {params.deformation.token}: {N} manifolds, t_end {fmt(args.t_end)}, dt {fmt(args.dt)}")
    print(f"max deviation: {dev:.3e}")
    if args.dump_manifold is not None:
        if not 0 <= args.dump_manifold < N:
            raise _UsageError(f"--dump-manifold must lie in [0, {N})")
        from .oracle import Trajectory

        k = args.dump_manifold
        one = Trajectory(t=traj.t, c2=traj.c2[:, k], c1=traj.c1[:, k])
        text = trajectory_csv(one)
        if args.dump:
            Path(args.dump).write_text(text)
        else:
            sys.stdout.write(text)
    if dev > args.tol:
        print(f"error: deviation exceeds tolerance {args.tol:g}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"djcm: error: {exc}", file=sys.stderr)
        return 2

    if args.output != "-" and args.command != "figures":
        parent = Path(args.output).resolve().parent
        if not parent.is_dir():
            print(f"djcm: error: output directory {parent} does not exist", file=sys.stderr)
            return 2
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WeakCouplingWarning)
            if args.command == "evolve":
                rc = _cmd_evolve(args)
            elif args.command == "pnd":
                rc = _cmd_pnd(args)
            elif args.command in ("mandel", "antibunch", "squeeze"):
                rc = _cmd_witness(args)
            elif args.command in ("wigner", "husimi"):
                rc = _cmd_grid(args, args.command)
            elif args.command == "sweep":
                rc = _cmd_sweep(args)
            elif args.command == "figures":
                rc = _cmd_figures(args)
            else:
                rc = _cmd_validate(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"djcm: error: {exc}", file=sys.stderr)
        return 2
    except (DJCMError, ArithmeticError) as exc:
        print(f"djcm: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"djcm: error: {exc}", file=sys.stderr)
        return 1
    return int(rc or 0)


if __name__ == "__main__":
    sys.exit(main())
