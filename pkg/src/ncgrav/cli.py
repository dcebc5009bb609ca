"""Command-line front end: machine-readable tables and the self-check suite.

Exit codes: 0 success, 1 verification/solver failure, 2 IO or config error.
All floats are printed as %.12e so identical configs give byte-identical CSV.
Physical constants default to Planck units (lam = c = hbar = G = 1) and can
be overridden per subcommand, or via a config file of key=value lines
(flags override the file).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import dispersion as D
from . import effective as E
from . import geometry as G
from . import spectrum as S
from . import verify as V

FMT = "%.12e"


def _fail(msg, code):
    print("error: %s" % msg, file=sys.stderr)
    raise SystemExit(code)


def _write_output(path, text):
    try:
        if path in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(path, "w") as fh:
                fh.write(text)
    except OSError as exc:
        _fail("cannot write %s: %s" % (path, exc), 2)


def _render_table(header, rows, fmt):
    """rows of floats (nan allowed); csv or a json array of objects."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([FMT % v if isinstance(v, float) else str(v)
                        for v in row])
        return buf.getvalue()
    data = [dict(zip(header, [None if isinstance(v, float) and math.isnan(v)
                              else v for v in row])) for row in rows]
    return json.dumps(data, indent=2) + "\n"


def _add_common(sub, constants=True):
    sub.add_argument("--output", "-o", default="-",
                     help="output path, - for stdout (default)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    if constants:
        sub.add_argument("--lam", type=float, default=1.0)
        sub.add_argument("--c", type=float, default=1.0)
        sub.add_argument("--hbar", type=float, default=1.0)
        sub.add_argument("--G", type=float, default=1.0)


def _check_constants(args):
    for name in ("lam", "c", "hbar", "G"):
        if hasattr(args, name) and getattr(args, name) <= 0:
            _fail("%s must be positive" % name, 2)


def cmd_figure1(args):
    try:
        data = E.figure1_data(x_max=args.xmax, n_points=args.n)
    except ValueError as exc:
        _fail(str(exc), 2)
    header = ["x", "mI_over_mp", "mG_over_mp", "V0_over_mpc2"]
    rows = [[float(v) for v in row] for row in data]
    _write_output(args.output, _render_table(header, rows, args.format))
    return 0


def cmd_dispersion(args):
    if args.omega_min < 0 or args.omega_max <= args.omega_min or args.n < 2:
        _fail("need 0 <= omega-min < omega-max and n >= 2", 2)
    omegas = np.linspace(args.omega_min, args.omega_max, args.n)
    header = ["omega", "k", "vg", "residual", "evanescent"]
    rows = []
    nan = float("nan")
    for omega in omegas:
        omega = float(omega)
        try:
            k = D.solve_k(omega, args.m, args.lam, args.c, args.hbar)
        except D.EvanescentModeError:
            rows.append([omega, nan, nan, nan, 1])
            continue
        try:
            vg = D.group_velocity(omega, args.m, args.lam, args.c, args.hbar)
        except D.EvanescentModeError:
            # the omega = 0 massless limit: k = 0 and vg -> c
            vg = args.c if args.m == 0 else nan
        res = D.shell_residual(omega, k, args.m, args.lam, args.c, args.hbar)
        rows.append([omega, k, vg, res, 0])
    _write_output(args.output, _render_table(header, rows, args.format))
    return 0


def cmd_spectrum(args):
    units = E.PlanckUnits(lam=args.lam, c=args.c, hbar=args.hbar, G=args.G)
    if args.x <= 0 or args.M <= 0:
        _fail("x and M must be positive", 2)
    pars = E.effective_params(args.x * units.m_p, units)
    try:
        states = S.solve_radial(pars.m_I, pars.m_G, pars.V0, args.M, args.G,
                                args.hbar, l=args.l, n_states=args.n_states,
                                check_grid=True)
    except S.GridConvergenceError as exc:
        _fail(str(exc), 1)
    except ValueError as exc:
        _fail(str(exc), 2)
    oracle = {s.n: s.E for s in S.bohr_oracle(
        pars.m_I, pars.m_G, pars.V0, args.M, args.G, args.hbar,
        n_max=args.l + args.n_states) if s.l == 0}
    header = ["n", "l", "E_numeric", "E_oracle", "rel_err", "V0"]
    rows = []
    for s in states:
        depth = abs(oracle[s.n] - pars.V0)
        rows.append([s.n, s.l, s.E, oracle[s.n],
                     abs(s.E - oracle[s.n]) / depth, pars.V0])
    _write_output(args.output, _render_table(header, rows, args.format))
    return 0


def cmd_mu_nu(args):
    if args.gamma is not None:
        if args.gamma <= 0:
            _fail("gamma must be positive", 2)
        beta, mu, nu = G.mu_nu_newton(args.gamma, args.c)
    elif args.n is not None:
        try:
            mu, nu = G.mu_nu_closed(args.n)
        except ValueError as exc:
            _fail(str(exc), 2)
        beta = G.RadialProfile.power_law(args.n)
    else:
        _fail("pass either --n (power law) or --gamma (weak field)", 2)
    if args.rmin <= 0 or args.rmax <= args.rmin or args.nodes < 2:
        _fail("need 0 < rmin < rmax and nodes >= 2", 2)
    r = G.default_log_grid(args.rmin, args.rmax, args.nodes)
    res_mu, res_nu = G.ode_residuals(beta, mu, nu, r)
    header = ["r", "beta", "mu", "nu", "res_mu", "res_nu"]
    rows = [[float(ri), float(beta(ri)), float(mu(ri)), float(nu(ri)),
             float(rm), float(rn)]
            for ri, rm, rn in zip(r, res_mu, res_nu)]
    _write_output(args.output, _render_table(header, rows, args.format))
    return 0


def cmd_dark_energy(args):
    units = E.PlanckUnits(lam=args.lam, c=args.c, hbar=args.hbar, G=args.G)
    try:
        rep = E.dark_energy_estimate(args.m_universe, args.r_universe, units)
    except ValueError as exc:
        _fail(str(exc), 2)
    if args.format == "json":
        text = json.dumps(rep, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for key, val in rep.items():
            w.writerow([key, FMT % val if isinstance(val, float) else val])
        text = buf.getvalue()
    _write_output(args.output, text)
    return 0


def cmd_verify(args):
    level = "full" if args.full else "fast"
    rep = V.run(level)
    for c in rep["checks"]:
        print("%s %-42s %s" % ("PASS" if c["ok"] else "FAIL",
                               c["name"], c["measured"]))
    print("%d checks, %d failed (%s level, %.1f s)"
          % (rep["n_checks"], rep["n_failed"], level, rep["seconds"]))
    if args.report:
        _write_output(args.report, json.dumps(rep, indent=2) + "\n")
    return 0 if rep["n_failed"] == 0 else 1


def build_parser():
    p = argparse.ArgumentParser(
        prog="ncgrav",
        description="Quantum-spacetime wave operators: tables and self-checks")
    p.add_argument("--config", help="file of key=value lines; flags override")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("figure1",
                       help="effective mass / potential table vs x")
    s.add_argument("--xmax", type=float, default=10.0)
    s.add_argument("--n", type=int, default=500)
    _add_common(s, constants=False)
    s.set_defaults(func=cmd_figure1)

    s = sub.add_parser("dispersion", help="deformed mass-shell sweep")
    s.add_argument("--omega-min", type=float, default=0.0)
    s.add_argument("--omega-max", type=float, default=2.0)
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--m", type=float, default=0.0)
    _add_common(s)
    s.set_defaults(func=cmd_dispersion)

    s = sub.add_parser("spectrum",
                       help="bound states, numeric vs closed-form oracle")
    s.add_argument("--x", type=float, required=True,
                   help="particle mass over the Planck mass")
    s.add_argument("--M", type=float, default=1.0, help="central mass")
    s.add_argument("--l", type=int, default=0)
    s.add_argument("--n-states", type=int, default=3)
    _add_common(s)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("mu-nu", help="metric coefficient profiles + residuals")
    s.add_argument("--n", type=float, help="beta = 1/r^n power law")
    s.add_argument("--gamma", type=float, help="weak-field length 2GM/c^2")
    s.add_argument("--rmin", type=float, default=0.5)
    s.add_argument("--rmax", type=float, default=50.0)
    s.add_argument("--nodes", type=int, default=200)
    _add_common(s)
    s.set_defaults(func=cmd_mu_nu)

    s = sub.add_parser("dark-energy", help="constant-term density estimate")
    s.add_argument("--m-universe", type=float, default=1e53)
    s.add_argument("--r-universe", type=float, default=1e26)
    _add_common(s)
    s.set_defaults(func=cmd_dark_energy)

    s = sub.add_parser("verify", help="run the named invariant registry")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--fast", action="store_true", default=True)
    g.add_argument("--full", action="store_true", default=False)
    s.add_argument("--report", help="also write the JSON report here")
    s.set_defaults(func=cmd_verify)
    return p


def _load_config(path):
    out = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    _fail("%s:%d: expected key=value" % (path, lineno), 2)
                key, val = (s.strip() for s in line.split("=", 1))
                out[key.replace("-", "_")] = val
    except OSError as exc:
        _fail("cannot read config: %s" % exc, 2)
    return out


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        # splice config entries in as flags right after the subcommand token;
        # explicit flags come later in argv so they win (argparse last-wins)
        extra = []
        for key, val in _load_config(args.config).items():
            flag = "--" + key.replace("_", "-")
            if val.lower() in ("true", "false"):
                if val.lower() == "true":
                    extra.append(flag)
            else:
                extra.extend([flag, val])
        pos = argv.index(args.subcommand) + 1
        args = parser.parse_args(argv[:pos] + extra + argv[pos:])
    _check_constants(args)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
