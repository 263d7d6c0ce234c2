"""Command-line front end: melnikov-lab.

Subcommands emit plot-ready CSV tables or JSON documents:

  resonances   solve the resonance condition over an (m, n) range
  melnikov     subharmonic/homoclinic curve, quadrature vs closed form
  contour      complex contour integral, numeric vs residue closed form
  certify      nonintegrability certificate as JSON
  verify       stroboscopic-map fixed points and epsilon scaling

Exit codes: 0 success (empty results included), 2 usage error,
3 numerical non-convergence / unsolvable resonance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .certificate import build_certificate
from .contour import contour_integral_closed, contour_kernels, default_contour
from .melnikov import (
    NonConvergenceError,
    chaos_condition,
    closed_form_homoclinic,
    closed_form_subharmonic,
    enumerate_resonances,
    homoclinic_quadrature,
    simple_zeros,
    solve_resonance,
    subharmonic_quadrature,
)
from .pendulum import INNER, ROTATING_MINUS, ROTATING_PLUS, pendulum_system
from .poincare import IntegratorConfig, find_subharmonic, scaling_band

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

_FAMILIES = {
    "inner": INNER,
    "rotating+": ROTATING_PLUS,
    "rotating-": ROTATING_MINUS,
}


def _fmt(x) -> str:
    return f"{x:.16e}"


def _thread_count(args) -> int:
    env = os.environ.get("MELNIKOV_LAB_THREADS")
    if env:
        return max(1, int(env))
    if getattr(args, "threads", None):
        return max(1, args.threads)
    return os.cpu_count() or 1


def _pool_map(fn, items, args):
    workers = _thread_count(args)
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _emit(args, header, rows):
    out = io.StringIO()
    if args.format == "csv":
        writer = csv.writer(out)
        writer.writerow(header)
        writer.writerows(rows)
    else:
        records = [dict(zip(header, row)) for row in rows]
        out.write(json.dumps(records, indent=2))
        out.write("\n")
    text = out.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def _emit_json(args, document):
    text = json.dumps(document, indent=2, default=_json_default) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _theta_grid(args):
    return np.linspace(0.0, 2.0 * math.pi, args.theta_points, endpoint=False)


def cmd_resonances(args) -> int:
    family = _FAMILIES[args.family]
    found = enumerate_resonances(
        family, args.omega, (args.k_min, args.k_max), args.m_max, args.n_max
    )
    rows = []
    for r in found:
        rows.append(
            [
                r.family_tag,
                r.m,
                r.n,
                _fmt(r.modulus.k),
                _fmt(r.orbit.period),
                _fmt(r.residual()),
            ]
        )
    _emit(args, ["family", "m", "n", "k", "period", "omega_check"], rows)
    return EXIT_OK


def cmd_melnikov(args) -> int:
    sys_ = pendulum_system(args.beta, args.delta, args.omega)
    thetas = _theta_grid(args)
    if args.homoclinic:
        closed = closed_form_homoclinic(args.sign, args.beta, args.delta, args.omega)
        quad_fn = lambda th: homoclinic_quadrature(
            sys_, args.sign, float(th), phase_convention=args.hom_phase
        )
    else:
        r = solve_resonance(_FAMILIES[args.family], args.omega, args.m, args.n)
        if r is None:
            print(
                f"no resonance: inner family needs m/n > omega "
                f"(m={args.m}, n={args.n}, omega={args.omega})",
                file=sys.stderr,
            )
            return EXIT_NUMERIC
        closed = closed_form_subharmonic(r, args.beta, args.delta, j1_arg=args.j1_arg)
        quad_fn = lambda th: subharmonic_quadrature(sys_, r, float(th))

    quad_vals = _pool_map(quad_fn, thetas, args)
    rows = []
    sup = 0.0
    for th, qv in zip(thetas, quad_vals):
        cv = float(closed.evaluate(th))
        sup = max(sup, abs(qv - cv))
        rows.append([_fmt(th), _fmt(qv), _fmt(cv), _fmt(qv - cv)])
    _emit(args, ["theta", "quadrature", "closed_form", "difference"], rows)
    print(f"sup |quadrature - closed_form| = {_fmt(sup)}", file=sys.stderr)
    return EXIT_OK


def cmd_contour(args) -> int:
    r = solve_resonance(_FAMILIES[args.family], args.omega, args.m, args.n)
    if r is None:
        print("no resonance for the requested (family, omega, m, n)", file=sys.stderr)
        return EXIT_NUMERIC
    fractions = (0.05, 0.1, 0.2)
    specs = [default_contour(r, radius_fraction=f) for f in fractions]
    kernel_sets = _pool_map(lambda s: contour_kernels(r, s), specs, args)
    thetas = _theta_grid(args)
    rows = []
    for th in thetas:
        closed = contour_integral_closed(r, float(th), args.beta).value
        for spec, kernels in zip(specs, kernel_sets):
            numeric = args.beta * (
                kernels.cos_kernel * math.cos(th) - kernels.sin_kernel * math.sin(th)
            ) - args.delta * kernels.damping_kernel
            rows.append(
                [
                    _fmt(th),
                    _fmt(spec.radius),
                    _fmt(numeric.real),
                    _fmt(numeric.imag),
                    _fmt(closed.real),
                    _fmt(closed.imag),
                ]
            )
    _emit(
        args,
        ["theta", "radius", "re_numeric", "im_numeric", "re_closed", "im_closed"],
        rows,
    )
    return EXIT_OK


def cmd_certify(args) -> int:
    cert = build_certificate(
        args.beta,
        args.delta,
        args.omega,
        m_max=args.m_max,
        n_max=args.n_max,
        theta_points=args.theta_points,
        j1_arg=args.j1_arg,
        hom_phase=args.hom_phase,
    )
    _emit_json(args, cert)
    chaos = cert["chaos"]
    summary = [
        f"prop 4a: {cert['prop_4a']['status']}",
        f"prop 4b: {cert['prop_4b']['status']}",
        f"prop 4c: {cert['prop_4c']['status']}",
        f"chaos condition: {'holds' if chaos['condition_holds'] else 'fails'}"
        f" (ratio {chaos['ratio']:.6g})",
    ]
    print("; ".join(summary), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    r = solve_resonance(_FAMILIES[args.family], args.omega, args.m, args.n)
    if r is None:
        print("no resonance for the requested (family, omega, m, n)", file=sys.stderr)
        return EXIT_NUMERIC
    sys_ = pendulum_system(args.beta, args.delta, args.omega)
    if args.theta0 is not None:
        theta0 = args.theta0
        hypothesis_ok = True
    else:
        curve = closed_form_subharmonic(r, args.beta, args.delta)
        analysis = simple_zeros(curve)
        hypothesis_ok = analysis.has_simple_zero
        theta0 = analysis.zeros[0].theta if analysis.zeros else 0.0

    config = IntegratorConfig()
    records = []
    distances, eps_used = [], []
    for eps in args.eps:
        if eps == 0.0:
            records.append(
                {"eps": 0.0, "converged": True, "residual": 0.0, "distance": 0.0}
            )
            continue
        result = find_subharmonic(sys_, eps, r, theta0, config=config)
        rec = {
            "eps": eps,
            "converged": result.converged,
            "residual": result.residual,
            "distance": result.distance_to_unperturbed,
            "x1": result.point.x1,
            "x2": result.point.x2,
        }
        records.append(rec)
        if result.converged:
            distances.append(result.distance_to_unperturbed)
            eps_used.append(eps)
    in_band, ratios = scaling_band(eps_used, distances)
    scaling_ok = in_band and len(eps_used) == len([e for e in args.eps if e != 0.0])
    document = {
        "resonance": {
            "family": r.family_tag,
            "m": r.m,
            "n": r.n,
            "k": r.modulus.k,
            "omega": r.omega,
        },
        "theta0": theta0,
        "simple_zero_hypothesis": hypothesis_ok,
        "results": records,
        "scaling": {
            "ratios": ratios,
            "within_band": scaling_ok,
            "hypothesis_violated": not (hypothesis_ok and scaling_ok),
        },
    }
    _emit_json(args, document)
    return EXIT_OK


def _add_common(p):
    p.add_argument("--omega", type=float, default=1.0, help="forcing frequency > 0")
    p.add_argument("--beta", type=float, default=1.0, help="forcing amplitude >= 0")
    p.add_argument("--delta", type=float, default=0.0, help="damping >= 0")
    p.add_argument(
        "--family",
        choices=sorted(_FAMILIES),
        default="inner",
        help="orbit family for resonant computations",
    )
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--theta-points", type=int, default=64)
    p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="melnikov-lab",
        description="Melnikov analysis of the periodically forced damped pendulum",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resonances", help="enumerate resonant moduli")
    _add_common(p)
    p.add_argument("--m-max", type=int, default=9)
    p.add_argument("--n-max", type=int, default=1)
    p.add_argument("--k-min", type=float, default=1e-6)
    p.add_argument("--k-max", type=float, default=1.0 - 1e-15)
    p.set_defaults(func=cmd_resonances)

    p = sub.add_parser("melnikov", help="Melnikov curve, quadrature vs closed form")
    _add_common(p)
    p.add_argument("--homoclinic", action="store_true")
    p.add_argument("--sign", type=int, choices=(-1, 1), default=1)
    p.add_argument("--j1-arg", choices=("n", "m"), default="n")
    p.add_argument("--hom-phase", choices=("omega-t", "t"), default="omega-t")
    p.set_defaults(func=cmd_melnikov)

    p = sub.add_parser("contour", help="contour integral, numeric vs closed form")
    _add_common(p)
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("certify", help="emit a nonintegrability certificate")
    _add_common(p)
    p.set_defaults(format="json")
    p.add_argument("--m-max", type=int, default=9)
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--j1-arg", choices=("n", "m"), default="n")
    p.add_argument("--hom-phase", choices=("omega-t", "t"), default="omega-t")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="stroboscopic-map fixed points and scaling")
    _add_common(p)
    p.set_defaults(format="json")
    p.add_argument(
        "--eps",
        type=float,
        nargs="+",
        default=[1e-3, 5e-4, 2.5e-4],
        help="epsilon values for the scaling table",
    )
    p.add_argument("--theta0", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def _validate(args) -> None:
    if getattr(args, "omega", 1.0) <= 0:
        raise SystemExit(_usage_error("omega must be positive"))
    if getattr(args, "beta", 0.0) < 0 or getattr(args, "delta", 0.0) < 0:
        raise SystemExit(_usage_error("beta and delta must be nonnegative"))
    if getattr(args, "m", 1) < 1 or getattr(args, "n", 1) < 1:
        raise SystemExit(_usage_error("m and n must be positive"))
    if math.gcd(getattr(args, "m", 1), getattr(args, "n", 1)) != 1:
        raise SystemExit(_usage_error("m and n must be coprime"))
    if getattr(args, "theta_points", 1) < 1:
        raise SystemExit(_usage_error("theta-points must be positive"))


def _usage_error(message: str) -> int:
    print(f"melnikov-lab: error: {message}", file=sys.stderr)
    return EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args)
    try:
        return args.func(args)
    except NonConvergenceError as exc:
        print(f"melnikov-lab: non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
