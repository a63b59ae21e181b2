"""Command-line front end.

Subcommands reproduce the headline quantities as CSV/JSON tables or
minimal SVG plots: cross zeros, the sigma -> ratio curve, the
trial-function profiles, the finite-element bound verification, and the
boundary-maximum sweep.  Output is deterministic (9 significant digits).

Exit codes: 0 success, 2 usage error, 3 property violation in a
pure-math command, 4 bound violation in verify.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import RobinSpectralError
from .fem_solver import load_mesh, verify_domain, verify_mesh
from .ratio_analysis import DimensionSpec, dirichlet_ratio, ratio_curve
from .robin_zeros import CrossZeroQuery, cross_fn, cross_zero
from .trial import rayleigh_identity_residual, trial_profile

SCHEMA = "robin-spectral/1"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PROPERTY = 3
EXIT_BOUND = 4


def fmt(x: float) -> str:
    return f"{float(x):.9g}"


def jround(x: float) -> float:
    return float(fmt(x))


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as f:
            f.write(text)


# ---------------------------------------------------------------------------
# minimal SVG plotting


def svg_polyline(
    xs,
    ys,
    xlabel: str,
    ylabel: str,
    hline: float | None = None,
    logx: bool = False,
    width: int = 640,
    height: int = 420,
) -> str:
    import math

    margin = 60.0
    xs = [math.log10(x) for x in xs] if logx else list(xs)
    ys = list(ys)
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)
    if hline is not None:
        lo_y = min(lo_y, hline)
        hi_y = max(hi_y, hline)
    span_x = hi_x - lo_x or 1.0
    span_y = hi_y - lo_y or 1.0

    def px(x):
        return margin + (x - lo_x) / span_x * (width - 2 * margin)

    def py(y):
        return height - margin - (y - lo_y) / span_y * (height - 2 * margin)

    points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="black"/>',
        f'<polyline points="{points}" fill="none" stroke="steelblue" stroke-width="1.5"/>',
    ]
    if hline is not None:
        y = py(hline)
        parts.append(
            f'<line x1="{margin}" y1="{y:.2f}" x2="{width - margin}" y2="{y:.2f}" '
            f'stroke="gray" stroke-dasharray="6 4"/>'
        )
    parts.append(
        f'<text x="{width / 2:.0f}" y="{height - 15}" text-anchor="middle" '
        f'font-size="13">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{height / 2:.0f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {height / 2:.0f})">{ylabel}</text>'
    )
    parts.append("</svg>\n")
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# subcommands


def cmd_zeros(args) -> int:
    dim = DimensionSpec(args.dim)
    rows = []
    for m in range(1, args.count + 1):
        z = cross_zero(CrossZeroQuery(nu=dim.nu, l=args.l, sigma=args.sigma, m=m))
        rows.append((m, z.k, cross_fn(dim.nu, args.l, args.sigma, z.k)))
    if args.format == "json":
        payload = {
            "schema": SCHEMA,
            "command": "zeros",
            "dim": args.dim,
            "sigma": jround(args.sigma),
            "l": args.l,
            "zeros": [
                {"m": m, "k": jround(k), "residual": jround(res)} for m, k, res in rows
            ],
        }
        _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        lines = ["m,k,residual"]
        lines += [f"{m},{fmt(k)},{fmt(res)}" for m, k, res in rows]
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_ratio_curve(args) -> int:
    dim = DimensionSpec(args.dim)
    points = ratio_curve(dim, args.sigma_min, args.sigma_max, args.steps)
    ratios = [p.ratio for p in points]
    if args.format == "svg":
        text = svg_polyline(
            [p.sigma for p in points],
            ratios,
            xlabel="log10 sigma",
            ylabel="second/first eigenvalue ratio",
            hline=dirichlet_ratio(dim),
            logx=True,
        )
        _write(text, args.out)
    else:
        lines = ["sigma,alpha,beta,ratio,dalpha,dbeta"]
        lines += [
            ",".join(
                fmt(v) for v in (p.sigma, p.alpha, p.beta, p.ratio, p.dalpha, p.dbeta)
            )
            for p in points
        ]
        _write("\n".join(lines) + "\n", args.out)
    if any(a <= b for a, b in zip(ratios, ratios[1:])):
        print("ratio curve is not strictly decreasing", file=sys.stderr)
        return EXIT_PROPERTY
    return EXIT_OK


def cmd_trial(args) -> int:
    dim = DimensionSpec(args.dim)
    profile = trial_profile(dim, args.sigma, args.samples)
    residual = rayleigh_identity_residual(profile)
    if args.format == "svg":
        text = svg_polyline(
            profile.r.tolist(),
            profile.w.tolist(),
            xlabel="r",
            ylabel="trial factor w(r)",
        )
        _write(text, args.out)
    else:
        lines = ["r,w,q,B"]
        lines += [
            ",".join(fmt(v) for v in row)
            for row in zip(profile.r, profile.w, profile.q, profile.b)
        ]
        lines.append(f"# rayleigh_identity_residual = {fmt(residual)}")
        _write("\n".join(lines) + "\n", args.out)
    increasing = all(a < b for a, b in zip(profile.w, profile.w[1:]))
    decreasing = all(a > b for a, b in zip(profile.b, profile.b[1:]))
    inside = all(-1e-9 <= q <= 1.0 + 1e-9 for q in profile.q)
    if not (increasing and decreasing and inside):
        print("trial profile monotonicity violated", file=sys.stderr)
        return EXIT_PROPERTY
    return EXIT_OK


def cmd_verify(args) -> int:
    if (args.shape is None) == (args.mesh is None):
        print("verify needs exactly one of --shape or --mesh", file=sys.stderr)
        return EXIT_USAGE
    if args.mesh is not None:
        bundle = verify_mesh(load_mesh(args.mesh), args.sigma, label=f"mesh:{args.mesh}")
    else:
        bundle = verify_domain(args.shape, args.sigma, args.h)
    c = bundle.comparison
    payload = {
        "schema": SCHEMA,
        "command": "verify",
        "shape": bundle.shape,
        "sigma": jround(bundle.sigma),
        "h": jround(bundle.h),
        "mu1": jround(bundle.fine.mu1),
        "mu2": jround(bundle.fine.mu2),
        "ratio": jround(c.ratio),
        "bound": jround(c.bound),
        "regime": c.regime,
        "slack": jround(c.slack),
        "R": jround(c.ball_radius),
        "R_tilde": jround(c.r_tilde),
        "u1_boundary_max": jround(bundle.fine.u1_boundary_max),
        "chiti_regime": bundle.chiti.regime if bundle.chiti else "ambiguous",
        "chiti_hypothesis_ok": bundle.chiti.hypothesis_ok if bundle.chiti else None,
        "lemma31_max_violation": jround(bundle.lemma31.max_violation),
        "faber_krahn_ok": bundle.faber_krahn.holds,
        "eps_discr": {
            "mu1": jround(bundle.eps_mu1),
            "mu2": jround(bundle.eps_mu2),
            "ratio": jround(bundle.eps_ratio),
            "eigenfunction": jround(bundle.eigenfunction_eps),
            "slack": jround(c.tolerance),
        },
        "near_equality": c.near_equality,
        "bound_holds": c.holds,
    }
    _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK if c.holds else EXIT_BOUND


def cmd_sweep_boundary_max(args) -> int:
    sigmas = [float(s) for s in args.sigmas.split(",") if s.strip()]
    if not sigmas:
        print("no sigma values given", file=sys.stderr)
        return EXIT_USAGE
    from .fem_solver import eigen_report, shape_mesh

    mesh = shape_mesh(args.shape, args.h)
    lines = ["sigma,u_1pM,u_1M,R,R_tilde"]
    for sigma in sigmas:
        r = eigen_report(mesh, sigma)
        lines.append(
            ",".join(
                fmt(v)
                for v in (sigma, r.u1_boundary_max, r.u1_max, r.ball_radius, r.r_tilde)
            )
        )
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robin-spectral",
        description="Robin-Laplacian eigenvalue ratio toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeros", help="first cross zeros k_{nu+l,m}")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--l", type=int, choices=(0, 1), default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("ratio-curve", help="sigma -> eigenvalue ratio curve")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--sigma-min", type=float, default=1e-2)
    p.add_argument("--sigma-max", type=float, default=1e3)
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ratio_curve)

    p = sub.add_parser("trial", help="trial-function profiles w, q, B")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_trial)

    p = sub.add_parser("verify", help="finite-element ratio-bound verification")
    p.add_argument("--shape", help="disk | disk:R | square | rect:A,B | ellipse:A,B | perturbed:EPS,K")
    p.add_argument("--mesh", help="path to a 'robinmesh 1' file")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--h", type=float, default=0.05)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep-boundary-max", help="boundary maximum of u1 against sigma")
    p.add_argument("--shape", required=True)
    p.add_argument("--sigmas", default="1,10,100,1000")
    p.add_argument("--h", type=float, default=0.05)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep_boundary_max)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors already
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except RobinSpectralError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
