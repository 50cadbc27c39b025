"""Command-line entry point: ``becscat <command> [options]``.

Exit status is 0 on success, 2 when a ground-state solve does not converge
and 1 for configuration or I/O errors.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

import numpy as np

from . import __version__
from .born_scattering import form_factor_table, tf_form_factor_table
from .errors import BecScatError, NonConvergenceError
from .grid import origin_slope
from .harness import (
    FIGURES,
    Dataset,
    SweepConfig,
    emit_all,
    run_all,
    sigma_curves,
    solve_states,
)
from .thomas_fermi import cutoff_radius_from_mu, tf_chemical_potential

log = logging.getLogger("becscat")


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON file with SweepConfig fields")
    parser.add_argument("--gamma", type=float, nargs="+", help="interaction parameter(s) Gamma")
    parser.add_argument("--k", type=float, nargs="+", help="projectile wave number(s), 1/a_w")
    parser.add_argument("--q-max", type=float, help="largest momentum transfer, 1/a_w")
    parser.add_argument("--n-q", type=int, help="momentum-transfer nodes")
    parser.add_argument("--grid-n", type=int, help="radial grid nodes")
    parser.add_argument("--r-max", type=float, help="radial box size, a_w")
    parser.add_argument("--dtau", type=float, help="initial imaginary-time step")
    parser.add_argument("--tol-residual", type=float, help="GPE residual threshold")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), help="dataset file format")
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="becscat",
        description="Condensate ground states and first-Born elastic cross sections.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "ground-state": "solve the radial GPE and compare with Thomas-Fermi",
        "form-factor": "tabulate s(q) for numerical and TF densities",
        "cross-section": "total elastic cross sections sigma(k)",
        "figure1": "order parameters and mu(Gamma)",
        "figure2": "sigma versus Gamma at fixed k",
        "figure3": "sigma(k) and the universal scaled curve",
        "figure4": "dsigma/dOmega versus q",
        "all": "every figure dataset",
    }
    for name, text in helps.items():
        _common(sub.add_parser(name, help=text, description=text))
    return parser


def config_from_args(args: argparse.Namespace) -> SweepConfig:
    """Config file first, then command-line flags on top."""
    base = SweepConfig.from_json(args.config) if args.config else SweepConfig()
    updates = {}
    if args.gamma:
        updates["figure4_gammas" if args.command == "figure4" else "gammas"] = tuple(args.gamma)
    if args.k:
        updates["ks"] = tuple(args.k)
    for flag, key in (("q_max", "q_max"), ("n_q", "n_q"), ("grid_n", "grid_n"), ("r_max", "r_max"),
                      ("format", "format"), ("out", "output_dir")):
        value = getattr(args, flag)
        if value is not None:
            updates[key] = value
    solver = base.solver
    if args.dtau is not None:
        solver = dataclasses.replace(
            solver, dtau_initial=args.dtau, dtau_min=min(solver.dtau_min, args.dtau)
        )
    if args.tol_residual is not None:
        solver = dataclasses.replace(solver, tol_residual=args.tol_residual)
    updates["solver"] = solver
    return dataclasses.replace(base, **updates)


def _ground_state(config: SweepConfig) -> dict:
    states = solve_states(config.gammas, config)
    print(f"{'gamma':>10} {'mu':>14} {'mu_TF':>12} {'R_mu':>9} {'residual':>10} {'steps':>7}")
    datasets = {}
    for gamma in config.gammas:
        st = states[gamma]
        print(f"{gamma:>10g} {st.mu:>14.10f} {tf_chemical_potential(gamma):>12.6f} "
              f"{cutoff_radius_from_mu(st.mu):>9.5f} {st.residual:>10.2e} {st.steps_taken:>7d}")
        r, u = st.profile.r, st.profile.u
        psi = np.empty_like(u)
        psi[1:] = u[1:] / r[1:]
        psi[0] = origin_slope(st.profile)
        psi /= np.sqrt(4.0 * np.pi)
        datasets[f"ground_state_gamma_{gamma:g}"] = Dataset(
            f"ground_state_gamma_{gamma:g}",
            {"r": r, "u": u, "psi": psi},
            {"r": "a_w", "u": "a_w^-1/2", "psi": "a_w^-3/2"},
            {
                "code_version": __version__, "config": config.to_dict(), "gamma": gamma,
                "mu": st.mu, "kinetic": st.energy.kinetic, "trap": st.energy.trap,
                "interaction": st.energy.interaction, "residual": st.residual,
                "steps_taken": st.steps_taken,
            },
        )
    return datasets


def _form_factor(config: SweepConfig) -> dict:
    states = solve_states(config.gammas, config)
    cols = {"gamma": [], "q": [], "s_num": [], "s_tf": []}
    for gamma in config.gammas:
        num = form_factor_table(states[gamma].profile, config.q_max, config.n_q)
        tf = tf_form_factor_table(gamma, config.q_max, config.n_q)
        cols["gamma"].append(np.full(num.q_nodes.size, gamma))
        cols["q"].append(num.q_nodes)
        cols["s_num"].append(num.s_values)
        cols["s_tf"].append(tf.s_values)
    ds = Dataset(
        "form_factor",
        {k: np.concatenate(v) for k, v in cols.items()},
        {"gamma": "1", "q": "1/a_w", "s_num": "1", "s_tf": "1"},
        {"code_version": __version__, "config": config.to_dict()},
    )
    return {"form_factor": ds}


def _cross_section(config: SweepConfig) -> dict:
    states = solve_states(config.gammas, config)
    ks = np.array(sorted(config.ks))
    cols = {"gamma": [], "k": [], "sigma_num": [], "sigma_tf": []}
    print(f"{'gamma':>10} {'k':>8} {'sigma_num':>14} {'sigma_TF':>14}")
    for gamma in config.gammas:
        num, tf = sigma_curves(states[gamma], ks)
        for k, a, b in zip(ks, num.values, tf.values):
            print(f"{gamma:>10g} {k:>8g} {a:>14.6e} {b:>14.6e}")
        cols["gamma"].append(np.full(ks.size, gamma))
        cols["k"].append(ks)
        cols["sigma_num"].append(num.values)
        cols["sigma_tf"].append(tf.values)
    ds = Dataset(
        "cross_section",
        {k: np.concatenate(v) for k, v in cols.items()},
        {"gamma": "1", "k": "1/a_w", "sigma_num": "a_w^2", "sigma_tf": "a_w^2"},
        {"code_version": __version__, "config": config.to_dict()},
    )
    return {"cross_section": ds}


def run(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    single = {"ground-state": _ground_state, "form-factor": _form_factor, "cross-section": _cross_section}
    if args.command in single:
        datasets = single[args.command](config)
        if args.out is None:
            return 0
    elif args.command == "all":
        datasets = run_all(config)
    else:
        datasets = FIGURES[args.command](config)
    for path in emit_all(datasets, config):
        print(path)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BecScatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
