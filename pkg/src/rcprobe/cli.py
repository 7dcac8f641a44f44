"""Command-line interface: single points, sweeps, phase diagrams, fits.

Subcommands
  snr           one exact-diagonalization SNR point (model units, omega = 1)
  sweep         run a config-driven grid -> CSV/JSON
  dicke         large-N phase diagnosis at one (epsilon, gbar, beta*omega)
  map-spectral  numerical check of the bath-mapping equivalence relation
  fit           scaling exponent theta of S ~ T^theta from a sweep CSV
  reproduce     run a shipped figure config by id (e.g. fig2a)

Exit codes: 0 success, 2 config error, 3 convergence failure,
4 numerical domain error.
"""

import argparse
import json
import sys
from importlib import resources

import numpy as np

from . import sweep as sweepmod
from .dicke import DickeParams, dicke_solution, hp_excitations
from .errors import (
    BracketError,
    ConfigError,
    ConvergenceError,
    NumericalDomainError,
    QuadratureError,
    RcprobeError,
)
from .operators import ProbeParams
from .rcmap import OhmicResidual, verify_equivalence
from .thermal import snr_exact
from .units import convert_units

EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_DOMAIN = 4


def _add_common(sp):
    sp.add_argument("--out", default=None, help="output path (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--jobs", type=int, default=1)


def build_parser():
    ap = argparse.ArgumentParser(prog="rcprobe", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("snr", help="single exact SNR point")
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--beta-omega", type=float, required=True)
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--noise", choices=("auto", "projective", "susceptibility"),
                   default="auto")
    p.add_argument("--sector", choices=("full", "maximal"), default="full")
    p.add_argument("--fd-step", type=float, default=None)
    p.add_argument("--ghz", nargs=3, type=float, metavar=("EPS", "OMEGA", "G"),
                   default=None,
                   help="physical frequencies in GHz; --beta-omega is then read "
                        "as a temperature in mK")

    p = sub.add_parser("sweep", help="run a config-driven sweep")
    p.add_argument("--config", required=True)
    _add_common(p)

    p = sub.add_parser("dicke", help="Dicke phase diagnosis at one point")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--gbar", type=float, required=True)
    p.add_argument("--beta-omega", type=float, required=True)
    p.add_argument("--N", type=int, default=1)

    p = sub.add_parser("map-spectral", help="bath-mapping equivalence report")
    p.add_argument("--gamma", type=float, default=0.05)
    p.add_argument("--g", type=float, default=0.5)
    p.add_argument("--cutoff-ratios", type=float, nargs="+",
                   default=[1e2, 1e3, 1e4])
    p.add_argument("--grid-points", type=int, default=12)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("fit", help="fit theta of S ~ T^theta from a sweep CSV")
    p.add_argument("--input", required=True, help="CSV produced by `sweep`")
    p.add_argument("--window", type=float, nargs=2, required=True,
                   metavar=("BW_MIN", "BW_MAX"))

    p = sub.add_parser("reproduce", help="run a shipped figure config")
    p.add_argument("figure_id", help="e.g. fig2a, fig3b, figS0")
    _add_common(p)
    return ap


def _emit(rows, fmt, out):
    text = sweepmod.emit_csv(rows) if fmt == "csv" else sweepmod.emit_json(rows)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_snr(args):
    if args.ghz:
        eps, om, g = args.ghz
        ru = convert_units(eps, om, g, args.beta_omega)
        p = ProbeParams(args.N, ru.epsilon, 1.0, ru.g)
        beta = ru.beta_omega
    else:
        p = ProbeParams(args.N, args.epsilon, 1.0, args.g)
        beta = args.beta_omega
    pt = snr_exact(p, beta, fd_step=args.fd_step, n_max=args.n_max,
                   noise=args.noise, sector=args.sector)
    print(json.dumps({
        "beta_omega": beta, "snr": pt.snr, "snr_weak": pt.snr_weak,
        "delta_snr": pt.delta_snr, "ratio": pt.snr / pt.snr_weak,
        "n_max": args.n_max,
    }, indent=2))
    return 0


def _cmd_sweep(args):
    cfg = sweepmod.load_config(args.config)
    rows = sweepmod.run_sweep(cfg, jobs=args.jobs)
    _emit(rows, args.format, args.out)
    return 0


def _cmd_dicke(args):
    p = DickeParams(epsilon=args.epsilon, omega=1.0, gbar=args.gbar, N=args.N)
    sol = dicke_solution(p, args.beta_omega)
    normal, sup = hp_excitations(p)
    print(json.dumps({
        "phase": sol.phase,
        "Tc": sol.Tc if np.isfinite(sol.Tc) else None,
        "eta": sol.eta, "z0": sol.z0, "lnZ_per_N": sol.lnZ / p.N,
        "snr_per_N": sol.snr_per_N,
        "hp_normal": [None if np.isnan(v) else v for v in normal],
        "hp_superradiant": [None if np.isnan(v) else v for v in sup],
    }, indent=2))
    return 0


def _cmd_map_spectral(args):
    grid = np.linspace(0.1, 3.0, args.grid_points)
    report = []
    for ratio in args.cutoff_ratios:
        res = OhmicResidual(gamma=args.gamma, omega_c=ratio)
        worst = verify_equivalence(res, 1.0, args.g, grid,
                                   quadrature_tol=args.tol)
        report.append({"omega_c_over_omega0": ratio, "max_residual": worst})
    print(json.dumps(report, indent=2))
    return 0


def _cmd_fit(args):
    with open(args.input, encoding="utf-8") as fh:
        rows = sweepmod.parse_csv(fh.read())
    fit = sweepmod.fit_scaling(rows, tuple(args.window))
    print(json.dumps({
        "theta": fit.theta, "stderr": fit.stderr,
        "window": list(fit.window), "r_squared": fit.r_squared,
    }, indent=2))
    return 0


def figure_config_text(figure_id):
    ref = resources.files("rcprobe") / "figures" / f"{figure_id}.cfg"
    if not ref.is_file():
        available = sorted(
            p.name[:-4] for p in (resources.files("rcprobe") / "figures").iterdir()
            if p.name.endswith(".cfg")
        )
        raise ConfigError(f"unknown figure id {figure_id!r}; available: {available}")
    return ref.read_text(encoding="utf-8")


def _cmd_reproduce(args):
    cfg = sweepmod.parse_config_text(figure_config_text(args.figure_id))
    rows = sweepmod.run_sweep(cfg, jobs=args.jobs)
    _emit(rows, args.format, args.out)
    return 0


_DISPATCH = {
    "snr": _cmd_snr,
    "sweep": _cmd_sweep,
    "dicke": _cmd_dicke,
    "map-spectral": _cmd_map_spectral,
    "fit": _cmd_fit,
    "reproduce": _cmd_reproduce,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (NumericalDomainError, BracketError, QuadratureError) as exc:
        print(f"numerical domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (RcprobeError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG if isinstance(exc, FileNotFoundError) else 1


if __name__ == "__main__":
    sys.exit(main())
