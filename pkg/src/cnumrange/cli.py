"""``cnr`` command-line front end.

Exit codes: 0 success (or the expected verification outcome), 1 verification
mismatch, 2 input or configuration error, 3 numeric failure.
"""

import argparse
import json
import sys
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .closedform import is_ellipse
from .coefficients import CoefficientVector, classify_regime, r_c_is_norm
from .errors import CNRError, ConfigError, NumericError, ParseError
from .linalg import INFINITE, OperatorModel, as_matrix, random_unitary
from .matio import read_matrix
from .numrange import boundary, is_symmetric, radius, region_from_support
from .oracle import hull_compare, sample_values
from .preserver import (
    CaseIIIMap,
    CaseIIMap,
    CaseIMap,
    HybridMap,
    TransposeMap,
    constant_sign,
    hashed_sign,
    rank_sign_rule,
    swap_unitary,
    verify_product_preservation,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(ConfigError):
    pass


def parse_ambient(text):
    if text is None:
        return None
    if text == "infinite":
        return INFINITE
    if text.startswith("finite:"):
        try:
            n = int(text[len("finite:"):])
        except ValueError:
            n = 0
        if n >= 1:
            return n
    raise UsageError(f"--ambient must be 'infinite' or 'finite:N', got {text!r}")


def _load_operator(args):
    if not args.matrix:
        raise UsageError("--matrix is required")
    block = as_matrix(read_matrix(args.matrix), square=True)
    ambient = parse_ambient(args.ambient)
    return OperatorModel(block, block.shape[0] if ambient is None else ambient)


def _coefficients(args):
    if not args.c:
        raise UsageError("--c is required")
    return CoefficientVector.parse(args.c)


# -- output -----------------------------------------------------------------------

def summary(region):
    ok, fit, residual = is_ellipse(region)
    return {
        "radius": radius(region),
        "degenerate": region.degenerate,
        "is_symmetric": is_symmetric(region),
        "is_ellipse": ok,
        "ellipse_residual": residual,
        "ellipse": fit.to_json() if ok else None,
    }


def support_csv(region):
    lines = ["theta,h"] + [f"{float(t)!r},{float(h)!r}" for t, h in zip(region.thetas, region.h)]
    return "\n".join(lines) + "\n"


def boundary_csv(region):
    pts = [complex(z) for z in region.vertices]
    pts.append(pts[0])
    return "x,y\n" + "".join(f"{z.real!r},{z.imag!r}\n" for z in pts)


def render_svg(region, ellipse=None, cloud=None, size=480):
    """Boundary polygon in an auto-scaled view; imaginary axis points up."""
    pts = np.asarray(region.vertices)
    everything = pts if cloud is None else np.concatenate([pts, cloud])
    xmin, xmax = everything.real.min(), everything.real.max()
    ymin, ymax = everything.imag.min(), everything.imag.max()
    span = max(xmax - xmin, ymax - ymin, 1e-9)
    margin = 0.05 * span
    xmin, xmax = xmin - margin, xmax + margin
    ymin, ymax = ymin - margin, ymax + margin

    def xy(z):
        return f"{z.real:.9g},{-z.imag:.9g}"

    stroke = span / 400
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{xmin:.9g} {-ymax:.9g} {xmax - xmin:.9g} {ymax - ymin:.9g}">',
        f'<g stroke-width="{stroke:.9g}">',
        f'<line x1="{xmin:.9g}" y1="0" x2="{xmax:.9g}" y2="0" stroke="#bbb"/>',
        f'<line x1="0" y1="{-ymax:.9g}" x2="0" y2="{-ymin:.9g}" stroke="#bbb"/>',
    ]
    if cloud is not None:
        r = 1.5 * stroke
        parts += [f'<circle cx="{z.real:.9g}" cy="{-z.imag:.9g}" r="{r:.9g}" fill="#9ab"/>'
                  for z in cloud]
    poly = " ".join(xy(z) for z in pts)
    parts.append(f'<polygon points="{escape(poly)}" fill="none" stroke="#c22"/>')
    if ellipse is not None:
        r = 4 * stroke
        for f in (ellipse.focus1, ellipse.focus2):
            parts.append(f'<circle cx="{f.real:.9g}" cy="{-f.imag:.9g}" r="{r:.9g}" fill="#226"/>')
    parts += ["</g>", "</svg>"]
    return "\n".join(parts) + "\n"


def _emit(args, text):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands -------------------------------------------------------------------------

def cmd_range(args):
    """Support samples (csv), a drawing (svg) or the summary (json).

    With ``--out`` and a csv/svg format the summary still goes to stdout, and
    csv output gains a sibling ``.boundary.csv`` with the closed polygon.
    """
    A = _load_operator(args)
    c = _coefficients(args)
    region = boundary(A, c, args.grid)
    info = summary(region)
    text = json.dumps(info, indent=2) + "\n"
    if args.format == "json":
        _emit(args, text)
        return EXIT_OK
    if args.format == "csv":
        _emit(args, support_csv(region))
        if args.out:
            out = Path(args.out)
            out.with_name(out.stem + ".boundary.csv").write_text(boundary_csv(region))
    else:
        cloud = sample_values(A, c, args.samples, args.seed).points if args.samples else None
        fit = is_ellipse(region)[1] if info["is_ellipse"] else None
        _emit(args, render_svg(region, fit, cloud))
    if args.out:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_classify(args):
    c = _coefficients(args)
    regime = classify_regime(c)
    info = {
        "c": list(c.entries),
        "regime": regime.name,
        "p": regime.p,
        "sum": c.total,
        "norm": r_c_is_norm(c),
    }
    if args.format == "json":
        sys.stdout.write(json.dumps(info) + "\n")
    else:
        sys.stdout.write(
            f"regime: {regime}\nsum: {c.total:g}\nr_c is a norm: {'yes' if info['norm'] else 'no'}\n"
        )
    return EXIT_OK


_REGIMES = {"CaseI": 1, "CaseII": 2, "CaseIII": 3}
_SIGN_RULES = {"+1": lambda p: constant_sign(1), "-1": lambda p: constant_sign(-1),
               "rank": rank_sign_rule}
_G_RULES = {"hash": hashed_sign, "+1": constant_sign(1), "-1": constant_sign(-1)}


def build_map(spec, c, seed):
    """Preserver map from a verification spec dictionary."""
    variant = spec.get("variant")
    n = int(spec.get("n", 3))
    source = spec.get("U", "random")
    if source == "random":
        U = random_unitary(n, seed)
    elif source == "identity":
        U = np.eye(n)
    elif source == "swap":
        U = swap_unitary(n)
    else:
        U = as_matrix(read_matrix(source), square=True)
    regime = classify_regime(c)
    if variant == "CaseI":
        return CaseIMap(U, int(spec.get("sign", 1)))
    if variant == "CaseII":
        rule = spec.get("sign_rule", "+1")
        if rule not in _SIGN_RULES:
            raise ConfigError(f"unknown sign_rule {rule!r}")
        return CaseIIMap(U, _SIGN_RULES[rule](regime.p or 1))
    if variant == "CaseIII":
        g = spec.get("g", "hash")
        if g not in _G_RULES:
            raise ConfigError(f"unknown g {g!r}")
        return CaseIIIMap(U, _G_RULES[g], bool(spec.get("use_i", False)))
    if variant == "Hybrid":
        return HybridMap(U)
    if variant == "Transpose":
        return TransposeMap(U)
    raise ConfigError(f"unknown variant {variant!r}")


def cmd_verify(args):
    c = _coefficients(args)
    if not args.spec:
        raise UsageError("--spec is required")
    try:
        spec = json.loads(Path(args.spec).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"verification spec is not valid JSON: {exc.msg}") from None
    expect = spec.get("expect", "pass")
    if expect not in ("pass", "fail"):
        raise ConfigError("expect must be 'pass' or 'fail'")
    variant = spec.get("variant")
    regime = classify_regime(c)
    if expect == "pass" and variant in _REGIMES and _REGIMES[variant] != regime.case:
        raise ConfigError(f"{variant} map cannot be expected to pass under {regime} coefficients")
    phi = build_map(spec, c, args.seed)
    report = verify_product_preservation(phi, c, args.trials, seed=args.seed, tol=args.tol,
                                         grid=args.grid)
    _emit(args, report.to_jsonl())
    observed = "pass" if report.all_passed else "fail"
    sys.stderr.write(f"{variant}: {len(report.failures)}/{len(report.results)} failures, "
                     f"expected {expect}, observed {observed}\n")
    return EXIT_OK if observed == expect else EXIT_MISMATCH


def cmd_oracle(args):
    A = _load_operator(args)
    c = _coefficients(args)
    if args.samples is None or args.samples < 1:
        raise UsageError("--samples must be a positive integer")
    region = boundary(A, c, args.grid)
    cloud = sample_values(A, c, args.samples, args.seed)
    inside, coverage = hull_compare(cloud, region, args.tol)
    info = {"samples": cloud.N, "seed": args.seed, "containment": inside, "coverage": coverage}
    _emit(args, json.dumps(info) + "\n")
    return EXIT_OK if inside else EXIT_MISMATCH


def _read_support(path):
    thetas, values = [], []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("theta"):
            continue
        try:
            t, h = (float(x) for x in line.split(","))
        except ValueError:
            raise ParseError("expected 'theta,h'", lineno, 1) from None
        thetas.append(t)
        values.append(h)
    return region_from_support(thetas, values)


def cmd_ellipse_fit(args):
    if args.support:
        region = _read_support(args.support)
    else:
        region = boundary(_load_operator(args), _coefficients(args), args.grid)
    ok, fit, residual = is_ellipse(region, args.fit_tol)
    info = {"is_ellipse": ok, "residual": residual, "ellipse": fit.to_json()}
    _emit(args, json.dumps(info) + "\n")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--c", help="comma-separated non-increasing weights, e.g. 1,0,-1")
    common.add_argument("--matrix", help="matrix file (JSON or CSV)")
    common.add_argument("--ambient", help="finite:N or infinite (default: matrix size)")
    common.add_argument("--grid", type=int, default=720, help="number of support angles")
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "svg", "json"), default="json")

    parser = argparse.ArgumentParser(prog="cnr", description="c-numerical range toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("range", parents=[common], help="compute W_c(A)").set_defaults(run=cmd_range)
    sub.add_parser("classify", parents=[common], help="classify c").set_defaults(run=cmd_classify)
    verify = sub.add_parser("verify", parents=[common], help="run a preserver verification")
    verify.add_argument("--spec", help="verification spec JSON")
    verify.add_argument("--trials", type=int, default=50)
    verify.set_defaults(run=cmd_verify)
    sub.add_parser("oracle", parents=[common], help="frame-sampling check").set_defaults(
        run=cmd_oracle)
    fit = sub.add_parser("ellipse-fit", parents=[common], help="fit an elliptical disc")
    fit.add_argument("--support", help="CSV of theta,h instead of a matrix")
    fit.add_argument("--fit-tol", type=float, default=1e-4)
    fit.set_defaults(run=cmd_ellipse_fit)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.run(args)
    except NumericError as exc:
        sys.stderr.write(f"cnr: numeric failure: {exc}\n")
        return EXIT_NUMERIC
    except (CNRError, OSError) as exc:
        sys.stderr.write(f"cnr: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
