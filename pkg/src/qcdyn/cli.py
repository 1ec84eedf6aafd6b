"""Command-line front end emitting CSV/JSON artifacts.

Subcommands
-----------
dynamics        correlation measures along a dephasing trajectory (CSV)
surface         transition coherence level over the weight simplex (CSV)
freezing-index  qubit-versus-qutrit freezing comparison (CSV)
tomo            simulated tomography of a dephased state (JSON)

All times are in microseconds.  Exit codes: 0 success, 2 usage error,
3 numerical failure.  Runs are deterministic for a fixed seed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .channels import DephasingSchedule, dephase_local, lambda_of_time
from .correlations import (
    discord_geo_analytic,
    discord_mi,
    discord_trace_norm_numeric,
    negativity,
    qubit_geo_analytic,
    transition_lambda,
)
from .freezing import MEASURES, compare_freezing, sweep_dynamics
from .linalg import ConvergenceError, DensityMatrix, fidelity
from .states import (
    BellParams2,
    BellParams3,
    PolarizationModel,
    bell_diagonal_qutrit,
    prepare_bell_diagonal_circuit,
)
from .tomography import default_settings, mle_reconstruct, simulate_counts

DYNAMICS_HEADER = "t_us,lambda,d1,d2,discord_geo,discord_geo_numeric,discord_mi,negativity"


def _fmt(value) -> str:
    if value is None:
        return ""
    return f"{float(value):.12g}"


def _write_text(path: str, text: str) -> None:
    with open(path, "w", newline="") as handle:
        handle.write(text)


def _parse_polarization(spec: str, parser: argparse.ArgumentParser) -> PolarizationModel:
    try:
        p_e, p_n = (float(tok) for tok in spec.split(","))
        return PolarizationModel(p_e, p_n)
    except (ValueError, TypeError):
        parser.error(f"--polarization expects 'p_e,p_n' with values in [0, 1], got {spec!r}")


def cmd_dynamics(args, parser) -> int:
    measures = tuple(tok.strip() for tok in args.measures.split(",") if tok.strip())
    if not measures or any(m not in MEASURES for m in measures):
        parser.error(f"--measures must be a comma list from {','.join(MEASURES)}")
    qubit = args.b0 is not None
    if qubit and (args.c0 is not None or args.c2 is not None):
        parser.error("give either --b0 (qubit) or --c0/--c2 (qutrit), not both")
    if not qubit and (args.c0 is None or args.c2 is None):
        parser.error("qutrit dynamics needs both --c0 and --c2")
    if args.steps < 1:
        parser.error("--steps must be >= 1")
    if args.tmax <= 0:
        parser.error("--tmax must be positive")

    try:
        if qubit:
            params = BellParams2(args.b0, 1.0 - args.b0)
        else:
            c1 = 1.0 - args.c0 - args.c2
            params = BellParams3(args.c0, c1, args.c2)
        schedule = DephasingSchedule(args.t2star, args.stretch)
    except ValueError as exc:
        parser.error(str(exc))

    initial_state = None
    if args.polarization is not None:
        if qubit:
            parser.error("--polarization applies to the qutrit preparation circuit only")
        model = _parse_polarization(args.polarization, parser)
        if abs(args.c0 + args.c2 - 1.0) > 1e-9:
            parser.error("--polarization requires c0 + c2 = 1 (circuit family)")
        initial_state = prepare_bell_diagonal_circuit(args.c0, args.c2, model)

    t_grid = np.linspace(0.0, args.tmax, args.steps + 1)
    trace = sweep_dynamics(
        params,
        schedule,
        t_grid,
        measures=measures,
        seed=args.seed,
        initial_state=initial_state,
    )

    lines = [DYNAMICS_HEADER]
    for report in trace.samples:
        if report.geo is None:
            d1 = d2 = geo = None
        elif args.compat_uncorrected_d2 and not qubit:
            breakdown = discord_geo_analytic(params, report.lam, uncorrected=True)
            d1, d2, geo = breakdown.d1, breakdown.d2, breakdown.discord
        else:
            d1, d2, geo = report.geo.d1, report.geo.d2, report.geo.discord
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    report.time_us, report.lam, d1, d2, geo,
                    report.geo_numeric, report.mi_discord, report.negativity,
                )
            )
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_surface(args, parser) -> int:
    if args.resolution < 2:
        parser.error("--resolution must be >= 2")
    grid = np.linspace(0.0, 1.0, args.resolution)
    lines = ["c0,c2,lambda_star"]
    for c0 in grid:
        for c2 in grid:
            if c0 + c2 > 1.0 + 1e-12:
                continue
            params = BellParams3(c0, max(0.0, 1.0 - c0 - c2), c2)
            lam_star = transition_lambda(params, uncorrected=args.compat_uncorrected_d2)
            lines.append(",".join(_fmt(v) for v in (c0, c2, lam_star)))
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_freezing_index(args, parser) -> int:
    try:
        start, stop, step = (float(tok) for tok in args.grid.split(":"))
    except ValueError:
        parser.error(f"--grid expects start:stop:step, got {args.grid!r}")
    if step <= 0:
        parser.error("--grid step must be positive")
    values = np.arange(start, stop + step / 2.0, step)
    values = [v for v in values if 0.0 < v < 0.5]
    if not values:
        parser.error("--grid produced no parameters inside (0, 0.5)")
    rows = compare_freezing(values)
    lines = ["param,Q_qubit,Q_qutrit,interval_qubit,interval_qutrit,F_qubit,F_qutrit"]
    for row in rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    row.param, row.q_qubit, row.q_qutrit, row.interval_qubit,
                    row.interval_qutrit, row.f_qubit, row.f_qutrit,
                )
            )
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _matrix_payload(rho: DensityMatrix) -> dict:
    return {
        "dims": list(rho.dims),
        "re": [[round(float(v), 12) for v in row] for row in rho.matrix.real],
        "im": [[round(float(v), 12) for v in row] for row in rho.matrix.imag],
    }


def cmd_tomo(args, parser) -> int:
    if args.shots < 0:
        parser.error("--shots must be nonnegative (0 selects the noiseless path)")
    try:
        c1 = 1.0 - args.c0 - args.c2
        params = BellParams3(args.c0, c1, args.c2)
    except ValueError as exc:
        parser.error(str(exc))

    polarization = None
    if args.polarization is not None:
        polarization = _parse_polarization(args.polarization, parser)
        if abs(args.c0 + args.c2 - 1.0) > 1e-9:
            parser.error("--polarization requires c0 + c2 = 1 (circuit family)")
        prepared = prepare_bell_diagonal_circuit(args.c0, args.c2, polarization)
    else:
        prepared = bell_diagonal_qutrit(params)
    ideal = dephase_local(bell_diagonal_qutrit(params), 0, args.lam)
    truth = dephase_local(prepared, 0, args.lam)

    settings = default_settings((3, 3))
    records = simulate_counts(truth, settings, args.shots, args.seed)
    result = mle_reconstruct(records, (3, 3), truth=truth)
    rho_mle = result.rho_mle

    breakdown = discord_geo_analytic(params, args.lam)
    payload = {
        "config": {
            "c0": args.c0,
            "c2": args.c2,
            "lambda": args.lam,
            "shots": args.shots,
            "seed": args.seed,
            "polarization": None
            if polarization is None
            else {"p_e": polarization.p_e, "p_n": polarization.p_n},
        },
        "truth": {
            "fidelity_vs_ideal": round(fidelity(truth, ideal), 12),
            "matrix": _matrix_payload(truth),
        },
        "records": [
            {
                "projector_level": rec.setting.projector_level,
                "pre_rotations": [
                    {
                        "level_a": rot.level_a,
                        "level_b": rot.level_b,
                        "angle": round(rot.angle, 12),
                        "axis": rot.axis,
                    }
                    for rot in rec.setting.pre_rotations
                ],
                "expected_probability": round(rec.expected_probability, 12),
                "counts": rec.counts,
                "shots": rec.shots,
            }
            for rec in records
        ],
        "reconstruction": {
            "rho_mle": _matrix_payload(rho_mle),
            "log_likelihood": round(result.log_likelihood, 6),
            "iterations": result.iterations,
            "fidelity_vs_truth": round(result.fidelity_vs_truth, 12),
        },
        "correlations_of_rho_mle": {
            "lambda": args.lam,
            "d1_nominal": round(breakdown.d1, 12),
            "d2_nominal": round(breakdown.d2, 12),
            "discord_geo_nominal": round(breakdown.discord, 12),
            "discord_geo_numeric": round(
                discord_trace_norm_numeric(rho_mle, budget=5, seed=args.seed, refine_maxfev=0),
                12,
            ),
            "discord_mi": round(discord_mi(rho_mle, budget=6, seed=args.seed), 12),
            "negativity": round(negativity(rho_mle), 12),
        },
    }
    _write_text(args.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcdyn",
        description="Quantum-correlation dynamics under one-sided dephasing (times in microseconds).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    dyn = sub.add_parser("dynamics", help="sweep correlation measures along a trajectory")
    dyn.add_argument("--c0", type=float, help="qutrit weight of the first entangled state")
    dyn.add_argument("--c2", type=float, help="qutrit weight of the third entangled state")
    dyn.add_argument("--b0", type=float, help="qubit weight (selects the qubit family)")
    dyn.add_argument("--t2star", type=float, default=44.0, help="dephasing time in us (default 44)")
    dyn.add_argument("--stretch", type=float, default=2.0, help="stretch exponent n (default 2)")
    dyn.add_argument("--tmax", type=float, required=True, help="final time in us")
    dyn.add_argument("--steps", type=int, required=True, help="number of steps (rows = steps + 1)")
    dyn.add_argument(
        "--measures", default="geo,neg", help=f"comma list from: {','.join(MEASURES)}"
    )
    dyn.add_argument(
        "--polarization", help="p_e,p_n: route the initial state through the preparation circuit"
    )
    dyn.add_argument("--seed", type=int, default=42)
    dyn.add_argument("--out", required=True, help="output CSV path")
    dyn.add_argument(
        "--compat-uncorrected-d2", action="store_true",
        help="report d2 without the 1/3 normalization (main-text form)",
    )
    dyn.set_defaults(func=cmd_dynamics)

    surf = sub.add_parser("surface", help="transition level over the weight simplex")
    surf.add_argument("--resolution", type=int, default=61, help="grid points per axis (default 61)")
    surf.add_argument("--out", required=True, help="output CSV path")
    surf.add_argument("--compat-uncorrected-d2", action="store_true")
    surf.set_defaults(func=cmd_surface)

    fri = sub.add_parser("freezing-index", help="qubit-vs-qutrit freezing comparison")
    fri.add_argument("--grid", required=True, help="start:stop:step over the shared weight")
    fri.add_argument("--out", required=True, help="output CSV path")
    fri.set_defaults(func=cmd_freezing_index)

    tomo = sub.add_parser("tomo", help="simulate tomography of a dephased state")
    tomo.add_argument("--c0", type=float, required=True)
    tomo.add_argument("--c2", type=float, required=True)
    tomo.add_argument("--lambda", dest="lam", type=float, required=True)
    tomo.add_argument("--shots", type=int, required=True, help="shots per setting; 0 = noiseless")
    tomo.add_argument("--seed", type=int, default=42)
    tomo.add_argument("--polarization", help="p_e,p_n imperfect-polarization model")
    tomo.add_argument("--out", required=True, help="output JSON path")
    tomo.set_defaults(func=cmd_tomo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
