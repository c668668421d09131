"""Command-line driver: reproducible runs with JSON/CSV file output.

Subcommands
-----------
constants   geometric constants C_D, P_w of a weight spec
rearrange   radial rearrangement of a sampled function + symmetrization report
reduce      1-d reduction of a radial profile, identity residuals
optimize    maximize the exponential functional, report the value and profile
verify      end-to-end pipeline: rearrange -> reduce -> identity checks ->
            comparison of the d-dimensional functional with the 1-d maximum

Each subcommand validates its inputs, computes everything, and only then
writes one JSON report plus any CSV artifacts.  Fixed seeds make repeated
runs byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fixtures, moser, rearrange, reduction, weights


class CliError(Exception):
    """Validation failure; maps to exit code 2."""


def _parse_spec(args) -> weights.WeightSpec:
    if args.spec_json:
        try:
            text = Path(args.spec_json).read_text()
        except OSError as exc:
            raise CliError(f"cannot read weight spec: {exc}")
        try:
            return weights.WeightSpec.from_json(text)
        except (ValueError, KeyError) as exc:
            raise CliError(f"invalid weight spec: {exc}")
    if args.weight:
        return fixtures.WEIGHT_FIXTURES[args.weight]()
    if args.d is None or not args.active or not args.exponents:
        raise CliError("provide --spec-json, --weight, or --d/--active/--exponents")
    try:
        cone = weights.ConeSpec(dimension=args.d, active=tuple(args.active))
        return weights.WeightSpec(cone=cone, exponents=tuple(args.exponents))
    except ValueError as exc:
        if "exponents must be positive" in str(exc):
            raise CliError("exponents must be positive")
        raise CliError(str(exc))


def _load_input(args, spec) -> rearrange.GridFunction:
    if args.input:
        try:
            return rearrange.load_grid(args.input)
        except (OSError, ValueError, KeyError) as exc:
            raise CliError(f"malformed input grid: {exc}")
    if args.fixture:
        return fixtures.grid_fixture(args.fixture, spec, n=args.grid_nodes)
    raise CliError("provide --input PREFIX or --fixture NAME")


def _out_path(args, suffix: str) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out / f"{args.command}-{args.label}{suffix}"


def _write_json(path: Path, obj):
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    print(path)


def cmd_constants(args) -> int:
    spec = _parse_spec(args)
    consts = weights.compute_constants(spec, budget=args.budget, seed=args.seed)
    quad = weights.unit_ball_measure_quadrature(spec, budget=args.budget, seed=args.seed)
    report = json.loads(consts.to_json())
    report["C_D_quadrature"] = quad.value
    report["C_D_quadrature_error"] = quad.error_estimate
    _write_json(_out_path(args, ".json"), report)
    return 0


def cmd_rearrange(args) -> int:
    spec = _parse_spec(args)
    f = _load_input(args, spec)
    if not np.any(f.values != 0):
        raise CliError("zero function")
    consts = weights.compute_constants(spec)
    profile = rearrange.radial_rearrangement(f, spec, n=args.radial_nodes)
    equi = rearrange.equimeasurability_report(f, spec)
    ps = {}
    for p in (1.0, 2.0, spec.D):
        rep = rearrange.polya_szego_check(f, spec, p, consts=consts)
        ps[f"p={p:g}"] = {"lhs": rep.lhs, "rhs": rep.rhs, "holds": rep.holds}
    report = {
        "support_radius": profile.R,
        "equimeasurability_discrepancy": equi.discrepancy,
        "polya_szego": ps,
    }
    csv_path = _out_path(args, "-profile.csv")
    rearrange.save_profile(profile, str(csv_path))
    print(csv_path)
    _write_json(_out_path(args, ".json"), report)
    return 0


def cmd_reduce(args) -> int:
    spec = _parse_spec(args)
    if args.profile:
        try:
            u = rearrange.load_profile(args.profile)
        except (OSError, ValueError) as exc:
            raise CliError(f"malformed profile: {exc}")
    else:
        f = _load_input(args, spec)
        u = rearrange.radial_rearrangement(f, spec, n=args.radial_nodes)
    consts = weights.compute_constants(spec)
    if not 0.0 < args.beta <= 1.0:
        raise CliError("beta must lie in (0, 1]")
    report = reduction.verify_reduction(
        u, spec, consts, beta=args.beta, T=args.T, n=args.N
    )
    _write_json(_out_path(args, ".json"), json.loads(report.to_json()))
    return 0


def cmd_optimize(args) -> int:
    if args.q <= 1.0:
        raise CliError("q must exceed 1")
    if not 0.0 < args.beta <= 1.0:
        raise CliError("beta must lie in (0, 1]")
    if args.schedule:
        schedule = [int(n) for n in args.schedule.split(",")]
        result = moser.supremum_estimate(
            args.q, args.beta, schedule, T=args.T, max_iter=args.max_iter
        )
        report = result["report"]
        extra = {"A_estimate": result["A_estimate"], "monotone": result["monotone"]}
    else:
        problem = moser.MoserProblem(
            q=args.q, beta=args.beta, T=args.T, N=args.N, max_iter=args.max_iter
        )
        report = moser.optimize(problem)
        extra = {}
    obj = json.loads(report.to_json())
    obj.update(extra)
    csv_path = _out_path(args, "-profile.csv")
    reduction.save_onedprofile(report.profile, str(csv_path))
    print(csv_path)
    _write_json(_out_path(args, ".json"), obj)
    return 0 if report.converged else 1


def cmd_verify(args) -> int:
    spec = _parse_spec(args)
    f = _load_input(args, spec)
    if not np.any(f.values != 0):
        raise CliError("zero function")
    if not 0.0 < args.beta <= 1.0:
        raise CliError("beta must lie in (0, 1]")
    consts = weights.compute_constants(spec)
    u = rearrange.radial_rearrangement(f, spec, n=args.radial_nodes)
    red = reduction.verify_reduction(u, spec, consts, beta=args.beta, n=args.N)
    problem = moser.MoserProblem(
        q=consts.D, beta=args.beta, N=args.N, max_iter=args.max_iter
    )
    report = moser.optimize(problem)
    u_star, u_grid = moser.build_extremal(
        report, spec, consts, R=u.R, nodes_per_axis=args.grid_nodes * 2 + 1
    )
    grad_norm = rearrange.gradient_seminorm(u_grid, spec, consts.D)
    a = args.beta * reduction.critical_coefficient(consts)
    # polar-form quadrature of the d-dimensional exponential integral; a
    # uniform grid cannot resolve the concentration near the origin
    phi_star = reduction.profile_to_phi(u_star, consts, grid=report.profile.knots)
    nd_value, _, _, _ = reduction.exponential_identity(
        u_star, phi_star, spec, consts, a
    )
    obj = {
        "constants": json.loads(consts.to_json()),
        "reduction": json.loads(red.to_json()),
        "moser": json.loads(report.to_json()),
        "extremal": {
            "gradient_norm": grad_norm,
            "functional_nd": nd_value,
            "functional_1d": report.value,
            "relative_gap": abs(nd_value - report.value) / report.value,
        },
    }
    _write_json(_out_path(args, ".json"), obj)
    return 0


def _add_spec_flags(p: argparse.ArgumentParser):
    p.add_argument("--spec-json", help="path to a weight-spec JSON file")
    p.add_argument(
        "--weight", choices=sorted(fixtures.WEIGHT_FIXTURES), help="built-in weight"
    )
    p.add_argument("--d", type=int, help="ambient dimension d")
    p.add_argument(
        "--active", type=int, nargs="+", help="1-based active coordinate indices"
    )
    p.add_argument(
        "--exponents", type=float, nargs="+", help="weight exponents A_j (positive)"
    )


def _add_io_flags(p: argparse.ArgumentParser):
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--label", default="run", help="label used in output file names")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized quadrature")


def _add_input_flags(p: argparse.ArgumentParser):
    p.add_argument("--input", help="grid-function file prefix (.json + .csv)")
    p.add_argument(
        "--fixture", choices=sorted(fixtures.GRID_FIXTURES), help="built-in function"
    )
    p.add_argument("--grid-nodes", type=int, default=128, help="fixture nodes per axis")
    p.add_argument("--radial-nodes", type=int, default=512, help="profile resolution")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conemoser",
        description="Weighted rearrangement and exponential-functional maximization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="geometric constants C_D and P_w")
    _add_spec_flags(p)
    _add_io_flags(p)
    p.add_argument("--budget", type=int, default=1_000_000, help="quadrature nodes")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("rearrange", help="radial rearrangement + symmetrization report")
    _add_spec_flags(p)
    _add_io_flags(p)
    _add_input_flags(p)
    p.set_defaults(func=cmd_rearrange)

    p = sub.add_parser("reduce", help="1-d reduction identities of a radial profile")
    _add_spec_flags(p)
    _add_io_flags(p)
    _add_input_flags(p)
    p.add_argument("--profile", help="radial profile CSV (r,U)")
    p.add_argument("--beta", type=float, default=1.0, help="exponential coefficient ratio")
    p.add_argument("--T", type=float, default=None, help="truncation of the t-axis")
    p.add_argument("--N", type=int, default=2048, help="1-d grid size")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("optimize", help="maximize the 1-d exponential functional")
    _add_io_flags(p)
    p.add_argument("--q", type=float, required=True, help="constraint exponent q")
    p.add_argument("--beta", type=float, default=1.0, help="coefficient ratio in (0,1]")
    p.add_argument("--T", type=float, default=None, help="truncation of the t-axis")
    p.add_argument("--N", type=int, default=512, help="grid size")
    p.add_argument("--schedule", help="comma-separated N values for refinement")
    p.add_argument("--max-iter", type=int, default=100_000)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", help="end-to-end pipeline on one input function")
    _add_spec_flags(p)
    _add_io_flags(p)
    _add_input_flags(p)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--N", type=int, default=512, help="1-d grid size")
    p.add_argument("--max-iter", type=int, default=100_000)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
