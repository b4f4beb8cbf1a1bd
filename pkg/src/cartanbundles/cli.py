"""Command line: ``cartanbundles check cartan spec.json`` and friends.

Exit codes: 0 every check passed, 1 some check failed, 2 invalid input.
"""
from __future__ import annotations

import argparse
import ast
import json
import sys
from typing import Callable

import numpy as np

from . import catalog, groupoid, verify
from .cartan import (CartanBundle, CartanGauge, ChartBundle, Coefficients, cartan_to_gstructure,
                     curvature, semidirect_model, torsion)
from .errors import CartanError, SpecError
from .liegroups import MatrixLieGroup, named_group
from .numkit import Tolerances
from .report import REPORT_SCHEMA, CheckReport, dumps
from .sampling import Sampler

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


# -- expression grammar -----------------------------------------------------------

_ALLOWED_BIN = {ast.Add: np.add, ast.Sub: np.subtract, ast.Mult: np.multiply}


def coordinate_names(m: int) -> dict[str, int]:
    names = {f"x{i}": i for i in range(m)}
    if m <= 3:
        names.update({c: i for i, c in enumerate("xyz"[:m])})
    return names


def compile_expr(text, m: int, where: str = "expression") -> Callable[[np.ndarray], float]:
    """Compile ``+ - *``, parentheses, numbers and coordinate names into a callable."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        value = float(text)
        return lambda x: value
    if not isinstance(text, str):
        raise SpecError(f"{where}: expected a number or an expression string")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise SpecError(f"{where}: cannot parse {text!r} ({exc.msg})") from None
    names = coordinate_names(m)

    def build(node):
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            value = float(node.value)
            return lambda x: value
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise SpecError(f"{where}: unknown coordinate {node.id!r}")
            i = names[node.id]
            return lambda x: x[i]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = build(node.operand)
            sign = -1.0 if isinstance(node.op, ast.USub) else 1.0
            return lambda x: sign * inner(x)
        if isinstance(node, ast.BinOp) and type(node.op) in _ALLOWED_BIN:
            op = _ALLOWED_BIN[type(node.op)]
            left, right = build(node.left), build(node.right)
            return lambda x: op(left(x), right(x))
        raise SpecError(f"{where}: unsupported syntax in {text!r}")

    return build(tree)


# -- spec parsing -------------------------------------------------------------------

def _matrix(value, where: str, shape=None) -> np.ndarray:
    try:
        a = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise SpecError(f"{where}: expected a matrix of numbers") from None
    if a.ndim != 2 or not np.all(np.isfinite(a)):
        raise SpecError(f"{where}: expected a finite row-major 2-d array")
    if shape is not None and a.shape != tuple(shape):
        raise SpecError(f"{where}: expected shape {tuple(shape)}, got {a.shape}")
    return a


def _field(spec: dict, key: str, where: str = ""):
    if not isinstance(spec, dict) or key not in spec:
        raise SpecError(f"{where + '.' if where else ''}{key}: missing field")
    return spec[key]


def _group(spec) -> MatrixLieGroup:
    if "name" in spec:
        try:
            return named_group(spec["name"])
        except CartanError as exc:
            raise SpecError(f"group.name: {exc}") from None
    basis = _field(spec, "basis", "group")
    if not isinstance(basis, list) or not basis:
        raise SpecError("group.basis: expected a non-empty list of matrices")
    mats = [_matrix(b, f"group.basis[{i}]") for i, b in enumerate(basis)]
    try:
        return MatrixLieGroup(spec.get("label", "custom"), mats)
    except CartanError as exc:
        raise SpecError(f"group.basis: {exc}") from None


def _gauge_A(spec, r: int, m: int) -> Callable[[np.ndarray], np.ndarray]:
    if "A" in spec:
        table = spec["A"]
        if not isinstance(table, list) or len(table) != r or any(
                not isinstance(row, list) or len(row) != m for row in table):
            raise SpecError(f"gauge.A: expected a {r} x {m} table of expressions")
        cells = [[compile_expr(c, m, f"gauge.A[{i}][{j}]") for j, c in enumerate(row)]
                 for i, row in enumerate(table)]
        return lambda x: np.array([[c(x) for c in row] for row in cells], dtype=float)
    terms = _field(spec, "terms", "gauge")
    if not isinstance(terms, list):
        raise SpecError("gauge.terms: expected a list")
    compiled = []
    for i, t in enumerate(terms):
        coef = compile_expr(_field(t, "coef", f"gauge.terms[{i}]"), m, f"gauge.terms[{i}].coef")
        mat = _matrix(_field(t, "matrix", f"gauge.terms[{i}]"), f"gauge.terms[{i}].matrix", (r, m))
        compiled.append((coef, mat))
    return lambda x: sum((c(x) * mat for c, mat in compiled), np.zeros((r, m)))


def custom_bundle(spec: dict) -> CartanBundle:
    chart = _field(spec, "chart")
    lower = np.array(_field(chart, "lower", "chart"), dtype=float)
    upper = np.array(_field(chart, "upper", "chart"), dtype=float)
    if lower.ndim != 1 or lower.shape != upper.shape or not np.all(lower < upper):
        raise SpecError("chart: lower and upper must be equal-length lists with lower < upper")
    m = lower.size
    H = _group(_field(spec, "group"))
    coeffs = _field(spec, "coefficients")
    kind = coeffs.get("rho", "natural") if isinstance(coeffs, dict) else None
    model = split = None
    if kind == "natural":
        r, rho = H.n, (lambda h: np.asarray(h, dtype=float))
    elif kind == "trivial":
        r = int(_field(coeffs, "dim", "coefficients"))
        rho = lambda h: np.eye(r)
    elif kind == "adjoint":
        r, rho = H.dim, H.Ad
    elif kind == "semidirect_adjoint":
        model, split = semidirect_model(H)
        r, rho = model.g.dim, model.rho
    else:
        raise SpecError("coefficients.rho: expected natural, trivial, adjoint or semidirect_adjoint")
    if "dim" in coeffs and int(coeffs["dim"]) != r:
        raise SpecError(f"coefficients.dim: {coeffs['dim']} does not match the representation ({r})")
    gauge = _field(spec, "gauge")
    A = _gauge_A(gauge, r, m)
    lam_spec = gauge.get("lambda", "inclusion" if model is not None else "zero")
    if lam_spec == "zero":
        lam = np.zeros((r, H.dim))
    elif lam_spec == "identity":
        if r != H.dim:
            raise SpecError("gauge.lambda: identity needs dim V = dim h")
        lam = np.eye(r)
    elif lam_spec == "inclusion":
        if model is None:
            raise SpecError("gauge.lambda: inclusion needs semidirect_adjoint coefficients")
        lam = model.pair.h_coords
    else:
        lam = _matrix(lam_spec, "gauge.lambda", (r, H.dim))
    try:
        A(0.5 * (lower + upper))
    except (TypeError, ValueError) as exc:
        raise SpecError(f"gauge: cannot evaluate at the chart centre ({exc})") from None
    return CartanBundle(ChartBundle(lower, upper, H), Coefficients(r, rho), CartanGauge(A, lam),
                        model, split, spec.get("name", "custom"))


def load_spec(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from None
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(spec, dict):
        raise SpecError(f"{path}: top level must be an object")
    return spec


def bundle_from_spec(spec: dict) -> CartanBundle:
    kind = spec.get("kind")
    if kind == "catalog":
        name = _field(spec, "name")
        params = spec.get("params") or {}
        if not isinstance(params, dict):
            raise SpecError("params: expected an object")
        try:
            return catalog.build(name, params)
        except KeyError:
            raise SpecError(f"name: unknown catalog entry {name!r}") from None
    if kind == "custom":
        return custom_bundle(spec)
    raise SpecError("kind: expected 'catalog' or 'custom'")


# -- commands ---------------------------------------------------------------------------

def _emit(args, reports: list[CheckReport], summary: dict | None = None) -> int:
    if args.report:
        payload = dumps(reports)
        try:
            import jsonschema
            jsonschema.validate(json.loads(payload), REPORT_SCHEMA)
        except ImportError:
            pass
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    if not args.quiet:
        if summary:
            for k, v in summary.items():
                print(f"{k}: {v}")
        for r in reports:
            print(r.line())
    failed = [r.check for r in reports if not r.passed]
    if failed and not args.quiet:
        print("failed: " + ", ".join(failed))
    return EXIT_FAIL if failed else EXIT_OK


def _context(args):
    tol = Tolerances(exact_tol=args.tol_exact, fd_tol=args.tol_fd)
    return bundle_from_spec(load_spec(args.spec)), Sampler(seed=args.seed), tol


def cmd_check(args) -> int:
    cb, sampler, tol = _context(args)
    if args.what == "cartan":
        return _emit(args, verify.run_suite(cb, sampler=sampler, tol=tol))
    pg = groupoid.pfaffian_of(cb)
    return _emit(args, verify.run_suite(pg, sampler=sampler, tol=tol))


def cmd_correspond(args) -> int:
    cb, sampler, tol = _context(args)
    pg = groupoid.pfaffian_of(cb)
    center = groupoid.chart_center(pg)
    if args.direction == "to-groupoid":
        reports = verify.run_suite(pg, ["multiplicative", "constant_rank", "symbol_closure", "full",
                                        "lie_type"], sampler, tol)
        summary = {"groupoid dimension": pg.gg.dim, "rank of omega": pg.r,
                   "symbol dimension": groupoid.symbol_space(pg, center, tol).dim}
    elif args.direction == "to-bundle":
        back = groupoid.pfaffian_to_cartan(pg, center, sampler, tol)
        reports = verify.run_suite(back, sampler=sampler, tol=tol)
        summary = {"basepoint": center.tolist(), "rank of V": back.r,
                   "theta at the basepoint": np.round(back.theta_matrix(center, back.H.identity), 12).tolist()}
    else:
        gs, gamma = cartan_to_gstructure(cb)
        reports = verify.run_suite(cb, ["gstructure_roundtrip", "torsion_agreement"], sampler, tol)
        summary = {"coframe at centre": np.round(gs.coframe(center), 12).tolist(),
                   "connection at centre": np.round(gamma.gamma(center), 12).tolist()}
    return _emit(args, reports, summary)


def cmd_roundtrip(args) -> int:
    cb, sampler, tol = _context(args)
    pg = groupoid.pfaffian_of(cb)
    reports = verify.run_suite(pg, ["roundtrip_theta", "roundtrip_kernel"], sampler, tol)
    return _emit(args, reports, {"max roundtrip residual": f"{reports[0].max_residual:.3e}"})


def cmd_curvature(args) -> int:
    cb, _, tol = _context(args)
    try:
        x = np.array([float(t) for t in args.at.split(",")])
    except ValueError:
        raise SpecError(f"--at: cannot parse {args.at!r}") from None
    if x.size != cb.m:
        raise SpecError(f"--at: expected {cb.m} coordinates")
    if not cb.bundle.contains(x):
        raise SpecError("--at: point lies outside the chart")
    h = cb.H.identity
    eye = np.eye(cb.tangent_dim)
    out = {}
    for i in range(cb.m):
        for j in range(i + 1, cb.m):
            out[f"curvature(d{i},d{j})"] = curvature(cb, x, h, eye[i], eye[j], tol).tolist()
            if args.torsion:
                if cb.split is None:
                    raise SpecError("--torsion needs a reductive model")
                out[f"torsion(d{i},d{j})"] = torsion(cb, cb.split, x, h, eye[i], eye[j], tol).tolist()
    if not args.quiet:
        print(json.dumps(out, indent=2))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(dumps([]) + "\n")
    return EXIT_OK


def cmd_catalog(args) -> int:
    for name in catalog.names():
        e = catalog.entry(name)
        params = json.dumps(e.params) if e.params else ""
        print(f"{name:34s} {params:10s} {e.description}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tol-exact", type=float, default=1e-9)
    common.add_argument("--tol-fd", type=float, default=1e-4)
    common.add_argument("--report", metavar="OUT.json")
    common.add_argument("--quiet", action="store_true")

    p = argparse.ArgumentParser(prog="cartanbundles", parents=[common],
                                description="Numeric checks for Cartan bundles and Pfaffian groupoids.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="run a check suite")
    c.add_argument("what", choices=["cartan", "pfaffian"])
    c.add_argument("spec")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("correspond", parents=[common], help="build the corresponding object")
    c.add_argument("spec")
    c.add_argument("--direction", choices=["to-groupoid", "to-bundle", "gstructure"], default="to-groupoid")
    c.set_defaults(func=cmd_correspond)

    c = sub.add_parser("roundtrip", parents=[common], help="bundle -> groupoid -> bundle")
    c.add_argument("spec")
    c.set_defaults(func=cmd_roundtrip)

    c = sub.add_parser("curvature", parents=[common], help="curvature at a chart point")
    c.add_argument("spec")
    c.add_argument("--at", required=True, help="comma separated chart coordinates")
    c.add_argument("--torsion", action="store_true")
    c.set_defaults(func=cmd_curvature)

    c = sub.add_parser("catalog", parents=[common], help="catalog entries")
    c.add_argument("action", choices=["list"])
    c.set_defaults(func=cmd_catalog)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CartanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
