"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numeric-domain error
(singular geometry, normalization failure, out-of-range angles).
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from typing import Sequence

import numpy as np

from . import chsh, onephoton, twophoton
from ._io import complex_matrix, csv_text, dumps
from ._linalg import purity
from .config import OnePhotonConfig, TwoPhotonConfig, load_json, parse_mixture
from .errors import ConfigurationError, DomainError
from .modes import Direction, LocalFrame
from .polarizer import Polarizer, jones_matrix, state_overlap, w_matrix
from .scatter import ScatterModel

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def _angle(args, value: float) -> float:
    return math.radians(value) if getattr(args, "degrees", False) else value


def _thetas(spec: str, degrees: bool) -> np.ndarray:
    """``start:stop:count`` with both ends included."""
    try:
        start, stop, count = spec.split(":")
        start, stop, n = float(start), float(stop), int(count)
    except ValueError:
        raise ConfigurationError(f"--thetas expects start:stop:count, got {spec!r}") from None
    if n < 1:
        raise ConfigurationError("--thetas count must be >= 1")
    if degrees:
        start, stop = math.radians(start), math.radians(stop)
    return np.linspace(start, stop, n)


def _cmd_jones(args) -> str:
    d = Direction(_angle(args, args.theta), _angle(args, args.phi))
    return dumps(jones_matrix(Polarizer(_angle(args, args.beta)), d).t) + "\n"


def _cmd_wmatrix(args) -> str:
    d = Direction(_angle(args, args.theta), _angle(args, args.phi))
    return dumps(w_matrix(d).w) + "\n"


def _cmd_overlap(args) -> str:
    d = Direction(_angle(args, args.theta), _angle(args, args.phi))
    return dumps(state_overlap(_angle(args, args.alpha), _angle(args, args.beta), d)) + "\n"


def _one_photon_config(args) -> OnePhotonConfig:
    cfg = OnePhotonConfig.from_dict(load_json(args.config)) if args.config else OnePhotonConfig()
    grid = cfg.modes
    if args.aperture is not None:
        grid = replace(grid, aperture=_angle(args, args.aperture))
    if args.n_theta is not None:
        grid = replace(grid, n_theta=args.n_theta)
    if args.n_phi is not None:
        grid = replace(grid, n_phi=args.n_phi)
    model = dict(cfg.model)
    if args.seed is not None:
        model["seed"] = args.seed
    return replace(cfg, modes=grid, model=model)


def _cmd_one_photon(args) -> str:
    cfg = _one_photon_config(args)
    modes = cfg.modes.build()
    state = onephoton.scatter_single(cfg.input_vector(), cfg.scatter_model(modes), modes)
    frame = cfg.axis_frame()
    rho = onephoton.effective_density(state, frame).rho
    out = {
        "n_modes": len(modes),
        "rho_eff": complex_matrix(rho),
        "stokes": onephoton.stokes_parameters(state, frame),
        "purity": purity(rho),
    }
    return dumps(out) + "\n"


def _cmd_two_photon(args) -> str:
    cfg = TwoPhotonConfig.from_dict(load_json(args.config)) if args.config else TwoPhotonConfig()
    if args.seed_a is not None:
        cfg = replace(cfg, model_a={**cfg.model_a, "seed": args.seed_a})
    if args.seed_b is not None:
        cfg = replace(cfg, model_b={**cfg.model_b, "seed": args.seed_b})
    modes_a, modes_b = cfg.modes_a.build(), cfg.modes_b.build()
    init = twophoton.BellInitial(*cfg.coefficients())
    ps = twophoton.scatter_pair(
        init,
        ScatterModel.from_dict(cfg.model_a, modes_a),
        ScatterModel.from_dict(cfg.model_b, modes_b),
        modes_a,
        modes_b,
    )
    axis_a, axis_b = LocalFrame.from_dict(cfg.axis_a), LocalFrame.from_dict(cfg.axis_b)
    rho = twophoton.effective_density_2(ps, axis_a, axis_b).rho
    s = twophoton.two_photon_stokes(ps, axis_a, axis_b)
    out = {
        "n_pairs": len(modes_a) * len(modes_b),
        "rho2eff": complex_matrix(rho),
        "stokes": s / s[0, 0],
        "purity": purity(rho),
    }
    return dumps(out) + "\n"


def _state(args) -> int:
    if args.state not in (1, 2, 3, 4):
        raise ConfigurationError("--state must be 1..4")
    return args.state


def _cmd_chsh_curve(args) -> str:
    i = _state(args)
    rows = [(t, chsh.closed_form_b(t, i), chsh.fixed_angle_value(i, t)) for t in _thetas(args.thetas, args.degrees)]
    return csv_text(["theta", "B_closed", "B_numeric"], rows)


def _cmd_chsh_optmap(args) -> str:
    i = _state(args)
    theta = _angle(args, args.theta)
    ext = chsh.optimize_settings(twophoton.bell_density(i), theta, 0.0, args.grid_step, args.refine_tol)
    return csv_text(["beta", "delta", "value"], ext)


def _cmd_chsh_betaopt(args) -> str:
    i = _state(args)
    rows = []
    for t in _thetas(args.thetas, args.degrees):
        ext = chsh.optimize_settings(twophoton.bell_density(i), t, 0.0, args.grid_step, args.refine_tol)
        best = chsh.best_extremum(ext, sign=+1)
        rows.append((t, chsh._wrap(chsh.beta_optimal(t, i)), best.beta))
    return csv_text(["theta", "beta_closed", "beta_numeric"], rows)


def _cmd_chsh_degrade(args) -> str:
    entries = parse_mixture(load_json(args.mixture), degrees=args.degrees)
    mixture = twophoton.momentum_mixture(
        [
            twophoton.MixtureTerm(e.weight, twophoton.bell_density(e.state), e.theta_a, e.theta_b, e.phi_a, e.phi_b)
            for e in entries
        ]
    )
    best = chsh.best_extremum(chsh.optimize_settings(mixture, grid_step=args.grid_step, refine_tol=args.refine_tol))
    return dumps({"max_value": abs(best.value), "beta": best.beta, "delta": best.delta}) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="multimode-bell", description=__doc__.splitlines()[0])
    p.add_argument("-o", "--output", help="write to this file instead of standard output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def angles(sp, *names):
        for n in names:
            sp.add_argument(f"--{n}", type=float, default=0.0, help=f"{n} angle (radians unless --degrees)")
        sp.add_argument("--degrees", action="store_true", help="read angles in degrees")

    sp = sub.add_parser("jones", help="Jones matrix of a z-axis polarizer seen at tilt (theta, phi)")
    angles(sp, "beta", "theta", "phi")
    sp.set_defaults(func=_cmd_jones)

    sp = sub.add_parser("wmatrix", help="non-unitary W matrix at incidence (theta, phi)")
    angles(sp, "theta", "phi")
    sp.set_defaults(func=_cmd_wmatrix)

    sp = sub.add_parser("overlap", help="overlap <psi(alpha)|psi(beta)> at incidence (theta, phi)")
    angles(sp, "alpha", "beta", "theta", "phi")
    sp.set_defaults(func=_cmd_overlap)

    op = sub.add_parser("one-photon", help="one-photon multi-mode computations")
    op_sub = op.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = op_sub.add_parser("rho-eff", help="effective density matrix and Stokes vector as JSON")
    sp.add_argument("--config", help="JSON run config")
    sp.add_argument("--aperture", type=float)
    sp.add_argument("--n-theta", type=int)
    sp.add_argument("--n-phi", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--degrees", action="store_true", help="read --aperture in degrees")
    sp.set_defaults(func=_cmd_one_photon)

    tp = sub.add_parser("two-photon", help="two-photon multi-mode computations")
    tp_sub = tp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = tp_sub.add_parser("rho2eff", help="4x4 effective density matrix as JSON")
    sp.add_argument("--config", help="JSON run config")
    sp.add_argument("--seed-a", type=int)
    sp.add_argument("--seed-b", type=int)
    sp.set_defaults(func=_cmd_two_photon)

    cp = sub.add_parser("chsh", help="Bell-CHSH curves and optimization")
    c_sub = cp.add_subparsers(dest="action", required=True, parser_class=_Parser)

    def search(sp):
        sp.add_argument("--grid-step", type=float, default=chsh.DEFAULT_GRID_STEP)
        sp.add_argument("--refine-tol", type=float, default=chsh.DEFAULT_REFINE_TOL)
        sp.add_argument("--degrees", action="store_true", help="read angles in degrees")

    sp = c_sub.add_parser("curve", help="CSV theta,B_closed,B_numeric at fixed theta=0-optimal angles")
    sp.add_argument("--state", type=int, default=4)
    sp.add_argument("--thetas", default="0:1.5707963267948966:50")
    sp.add_argument("--degrees", action="store_true")
    sp.set_defaults(func=_cmd_chsh_curve)

    sp = c_sub.add_parser("optmap", help="CSV beta,delta,value of the maximal-violation points")
    sp.add_argument("--state", type=int, default=4)
    sp.add_argument("--theta", type=float, default=0.0)
    search(sp)
    sp.set_defaults(func=_cmd_chsh_optmap)

    sp = c_sub.add_parser("betaopt", help="CSV theta,beta_closed,beta_numeric")
    sp.add_argument("--state", type=int, default=4)
    sp.add_argument("--thetas", default="0:1.4:15")
    search(sp)
    sp.set_defaults(func=_cmd_chsh_betaopt)

    sp = c_sub.add_parser("degrade", help="best |<B>| for a momentum mixture, JSON")
    sp.add_argument("--mixture", required=True, help="JSON list of {weight, theta_a, theta_b, state}")
    search(sp)
    sp.set_defaults(func=_cmd_chsh_degrade)
    return p


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    try:
        args = build_parser().parse_args(argv)
        text = args.func(args)
    except DomainError as exc:
        print(f"multimode-bell: numeric domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConfigurationError, KeyError, TypeError, ValueError) as exc:
        print(f"multimode-bell: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
