"""Command-line front end.

Subcommands: analyze, verify-catalog, orbit, salem, weyl and catalog.
Exit codes are 0 when everything passes, 1 when a check fails and 2 on a
usage or parse error.  Reports are JSON with the top-level key
``"schema": "cremona-lab/1"``.
"""

from __future__ import annotations

import argparse
import ast
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import mpmath

from . import __version__, families, picard, projmap, salem, suite, weyl
from .arith import GaussianRational, char_poly, default_precision

SCHEMA = "cremona-lab/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
GROWTH_MIN_ITERS = 8


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Complex expressions
# ---------------------------------------------------------------------------

_FUNCTIONS = {"sqrt": mpmath.sqrt, "exp": mpmath.exp}
_CONSTANTS = {"i": mpmath.mpc(0, 1), "pi": mpmath.pi}


def parse_complex(text: str, precision: int | None = None) -> mpmath.mpc:
    """Evaluate an expression over rationals, i, pi, sqrt, exp, + - * / ^ and parentheses."""
    prec = precision or default_precision()
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            # decimal literals are read as the rational they print as
            q = Fraction(repr(node.value))
            return mpmath.mpf(q.numerator) / q.denominator
        if isinstance(node, ast.Name) and node.id in _CONSTANTS:
            return +_CONSTANTS[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if b == 0:
                    raise UsageError(f"division by zero in {text!r}")
                return a / b
            if isinstance(node.op, ast.Pow):
                return a ** b
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCTIONS
                and len(node.args) == 1 and not node.keywords):
            return _FUNCTIONS[node.func.id](ev(node.args[0]))
        raise UsageError(f"unsupported syntax in {text!r}")

    with mpmath.workprec(prec):
        return mpmath.mpc(ev(tree))


def parse_exact(text: str):
    """A parameter in Q(i), such as ``1/2 + 3/4*i``."""
    try:
        return GaussianRational.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse parameter {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def make_report(command: str, checks: Sequence[suite.CheckResult], data: dict, seconds: float) -> dict:
    ids = [c.id for c in checks]
    if len(set(ids)) != len(ids):
        raise ValueError("check ids must be unique")
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "checks": [c.to_json() for c in sorted(checks, key=lambda c: c.id)],
        "data": data,
        "timing": {"total_seconds": round(seconds, 6),
                   "checks": {c.id: round(c.seconds, 6) for c in checks}},
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _write_report(report: dict, path: str | None) -> None:
    if path:
        Path(path).write_text(dump_report(report))


def _exit_code(checks: Sequence[suite.CheckResult]) -> int:
    return EXIT_FAIL if any(c.status == suite.FAIL for c in checks) else EXIT_OK


def _inline_check(check_id: str, ok: bool, computed, expected) -> suite.CheckResult:
    return suite.CheckResult(check_id, "internal-consistency", suite.PASS if ok else suite.FAIL,
                             str(computed), str(expected), None, 0.0)


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

FAMILY_ALIASES = {
    "sigma": families.Family.SIGMA,
    "rho": families.Family.RHO,
    "tau": families.Family.TAU,
    "bk_fab": families.Family.BK_FAB,
    "bk_fab_affine": families.Family.BK_FAB_AFFINE,
    "bk_k": families.Family.BK_K,
    "bk_rot": families.Family.BK_ROT,
    "mcmullen": families.Family.MCMULLEN,
    "dg_phi": families.Family.DG_PHI,
    "dg_phialphaphi": families.Family.DG_PHI_ALPHA_PHI,
    "dg_conic": families.Family.DG_CONIC,
}

INTEGER_PARAMS = {"n", "k"}


def resolve_family(name: str) -> families.Family:
    for fam in families.Family:
        if fam.value == name:
            return fam
    try:
        return FAMILY_ALIASES[name.lower()]
    except KeyError:
        raise UsageError(f"unknown family {name!r}; choose from {', '.join(sorted(FAMILY_ALIASES))}") from None


FAMILY_OPTIONS = ("a", "b", "c", "delta", "alpha", "n", "k", "a_j")


def _family_params(fam: families.Family, args: argparse.Namespace) -> dict:
    accepted = set(families.REQUIRED_PARAMS[fam]) | set(families.OPTIONAL_PARAMS.get(fam, ()))
    unused = sorted(k for k in FAMILY_OPTIONS if getattr(args, k, None) is not None and k not in accepted)
    if unused:
        raise UsageError(f"{fam.value} does not take " + ", ".join("--" + k.replace("_", "-") for k in unused))
    params = {}
    for key in families.REQUIRED_PARAMS[fam]:
        raw = getattr(args, key, None)
        if raw is None:
            raise UsageError(f"{fam.value} needs --{key}")
        if key in INTEGER_PARAMS:
            try:
                params[key] = int(raw)
            except ValueError:
                raise UsageError(f"--{key} must be an integer") from None
        else:
            params[key] = parse_exact(raw)
    if fam is families.Family.BK_K and args.a_j:
        coeffs = {}
        for item in args.a_j:
            j, _, value = item.partition("=")
            if not value or not j.strip().isdigit():
                raise UsageError("--a-j expects j=value")
            coeffs[int(j)] = parse_exact(value)
        params["a_j"] = coeffs
    return params


def cmd_analyze(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    fam = resolve_family(args.family)
    params = _family_params(fam, args)
    degenerate_factor = None
    try:
        f = families.make(families.FamilyId(fam, params))
    except families.DegenerateParameters as exc:
        f, degenerate_factor = exc.reduced, exc.factor
        print(f"degenerate parameters: removed common factor {exc.factor}", file=sys.stderr)
    except (ValueError, families.FamilyError) as exc:
        raise UsageError(str(exc)) from exc

    iters = max(args.iters, 1)
    seq = projmap.degree_sequence(f, max(iters, GROWTH_MIN_ITERS), args.budget)
    try:
        growth = projmap.growth_class(seq.degrees)
        growth_json = {"tag": growth.tag.value, "rate": str(growth.rate) if growth.rate is not None else None}
    except projmap.Inconclusive as exc:
        growth_json = {"tag": "Inconclusive", "reason": str(exc)}
    probe = projmap.stability_probe(f, iters, args.budget)
    data: dict = {
        "family": fam.value,
        "params": {k: str(v) for k, v in params.items()},
        "map": str(f),
        "degenerate_factor": str(degenerate_factor) if degenerate_factor is not None else None,
        "degree": f.degree,
        "degree_sequence": list(seq.degrees[:iters]),
        "growth_degrees": list(seq.degrees),
        "growth": growth_json,
        "stability": {"stable_up_to": probe.stable_up_to, "violated_at": probe.violated_at,
                      "truncated": probe.truncated},
    }
    checks = [
        _inline_check("analyze.first_degree", seq.degrees[0] == f.degree, seq.degrees[0], f.degree),
        _inline_check("analyze.degrees_bounded_by_powers",
                      all(d <= f.degree ** (k + 1) for k, d in enumerate(seq.degrees)),
                      list(seq.degrees), "deg f^n <= (deg f)^n"),
    ]
    try:
        div = projmap.jacobian_divisor(f) if f.degree <= 3 else None
    except projmap.ZeroJacobian:
        div = None
        data["exceptional"] = {"zero_jacobian": True}
        print("the Jacobian vanishes identically: the map is not dominant", file=sys.stderr)
    if div is not None:
        data["exceptional"] = {
            "factors": [{"form": str(p), "multiplicity": m} for p, m in div.factors],
            "remainder": str(div.remainder),
            "unfactored": div.unfactored,
        }
        checks.append(_inline_check("analyze.jacobian_degree", div.total_degree() == 3 * (f.degree - 1),
                                    div.total_degree(), 3 * (f.degree - 1)))
        ind = projmap.indeterminacy_points(f)
        data["indeterminacy"] = {"points": [str(p) for p in ind.points], "complete": ind.complete}
    if fam in (families.Family.BK_FAB, families.Family.BK_FAB_AFFINE):
        record = families.vn_membership(params["a"], params["b"], iters)
        data["vn"] = record.to_json()
        affine = families.make(families.FamilyId(families.Family.BK_FAB_AFFINE, params), allow_degenerate=True)
        homogeneous = families.make(families.FamilyId(families.Family.BK_FAB, params), allow_degenerate=True)
        checks.append(_inline_check("analyze.bk_chart_forms_agree", affine == homogeneous, str(affine), str(homogeneous)))
    report = make_report("analyze", checks, data, time.perf_counter() - start)
    _write_report(report, args.json)

    print(f"map {f}")
    print(f"degrees {list(seq.degrees[:iters])}")
    print(f"growth {growth_json['tag']}" + (f" rate {growth_json['rate']}" if growth_json.get("rate") else "")
          + (f" ({growth_json['reason']})" if "reason" in growth_json else ""))
    print(f"stability stable_up_to={probe.stable_up_to} violated_at={probe.violated_at}")
    if "vn" in data:
        hit = data["vn"]["hit_index"]
        print(f"orbit of q: hit index {hit} ({data['vn']['terminated_by']})" if hit is not None
              else f"orbit of q: no hit ({data['vn']['terminated_by']})")
        if hit is not None:
            print(f"V_{hit} hit")
    return _exit_code(checks)


# ---------------------------------------------------------------------------
# verify-catalog
# ---------------------------------------------------------------------------


def cmd_verify_catalog(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    selected = suite.checks(args.filter)
    results = suite.run_checks(selected)
    counts = {s: sum(r.status == s for r in results) for s in (suite.PASS, suite.FAIL, suite.DISCREPANCY, suite.SKIPPED)}
    data = {"filter": args.filter, "selected": len(results), "empty_selection": not results, "counts": counts}
    report = make_report("verify-catalog", results, data, time.perf_counter() - start)
    _write_report(report, args.json)
    for r in sorted(results, key=lambda r: r.id):
        print(f"{r.status:<21} {r.id}")
    if not results:
        print(f"no checks match {args.filter!r}")
    print(" ".join(f"{k}={v}" for k, v in counts.items()))
    return _exit_code(results)


# ---------------------------------------------------------------------------
# orbit
# ---------------------------------------------------------------------------


def _parse_point(text: str) -> tuple:
    parts = [p for p in text.split(",")]
    if len(parts) != 2:
        raise UsageError("--point expects two comma-separated expressions")
    return tuple(complex(parse_complex(p)) for p in parts)


def cmd_orbit(args: argparse.Namespace) -> int:
    alpha = complex(parse_complex(args.alpha))
    beta = complex(parse_complex(args.beta))
    point = _parse_point(args.point)
    if args.count < 1:
        raise UsageError("-N must be at least 1")
    table = families.orbit_projection_samples(alpha, beta, point, args.count)
    if args.out == "-":
        table.write_csv(sys.stdout)
    else:
        with open(args.out, "w", newline="") as handle:
            table.write_csv(handle)
    lo, hi = table.y_modulus_range
    print(f"rows={len(table)} terminated_by={table.terminated_by} min|y|={lo!r} max|y|={hi!r}",
          file=sys.stderr if args.out == "-" else sys.stdout)
    return EXIT_OK


# ---------------------------------------------------------------------------
# salem, weyl, catalog
# ---------------------------------------------------------------------------


def cmd_salem(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    try:
        p = salem.parse(args.poly)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cyclo, rest = salem.cyclotomic_part(p)
    try:
        result = salem.classify(p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    data = {
        "poly": str(p),
        "reciprocal": salem.is_reciprocal(p),
        "cyclotomic_factors": {str(k): m for k, m in sorted(salem.cyclotomic_factors(p).items())},
        "rest": str(rest),
        "tag": result.tag.value,
        "leading_root": str(result.leading_root) if result.leading_root is not None else None,
    }
    check = _inline_check("salem.factorization", cyclo * rest == p, f"{cyclo} * {rest}", str(p))
    report = make_report("salem", [check], data, time.perf_counter() - start)
    _write_report(report, args.json)
    print(f"{result.tag.value}" + (f" {result.leading_root}" if result.leading_root is not None else ""))
    print(f"cyclotomic part {cyclo}; rest {rest}")
    return _exit_code([check])


def cmd_weyl(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    n = args.n
    if n < 3:
        raise UsageError("n must be at least 3")
    ctx = weyl.WeylContext(n)
    w = weyl.coxeter_element(ctx)
    formula = weyl.coxeter_char_poly_formula(n)
    on_roots = char_poly(weyl.restrict_to_roots(w, n))
    try:
        order = weyl.coxeter_order(n)
    except weyl.InfiniteOrder:
        order = None
    cyclo, rest = salem.cyclotomic_part(formula)
    radius = weyl.adjacency_spectral_radius(n)
    bip = weyl.bipartite_restriction(n)
    data = {
        "n": n,
        "char_poly": str(formula),
        "order": order,
        "cyclotomic_part": str(cyclo),
        "rest": str(rest),
        "rest_class": salem.classify(rest).tag.value if rest.degree > 0 else "Constant",
        "adjacency_radius": str(radius),
        "bipartite_kind": bip.kind.value,
        "leading_eigenvalue": str(bip.leading_eigenvalue) if bip.leading_eigenvalue is not None else None,
    }
    check = _inline_check("weyl.char_poly_routes", on_roots == formula, str(on_roots), str(formula))
    report = make_report("weyl", [check], data, time.perf_counter() - start)
    _write_report(report, args.json)
    print(f"P_{n} = {formula}")
    print(f"order {order if order is not None else 'infinite'}; {bip.kind.value}")
    print(f"cyclotomic part {cyclo}; rest {rest}")
    return _exit_code([check])


def cmd_catalog(args: argparse.Namespace) -> int:
    entries = picard.catalog_json()
    if args.name:
        entries = [e for e in entries if e["name"] == args.name]
        if not entries:
            raise UsageError(f"no catalog entry named {args.name!r}")
    text = json.dumps({"schema": SCHEMA, "entries": entries}, indent=2, sort_keys=True)
    if args.json:
        Path(args.json).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cremona-lab", description="Plane birational maps, Picard actions and Salem numbers.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="degree growth, stability and orbit data of a family member")
    p.add_argument("family", help="sigma, rho, tau, bk_fab, bk_fab_affine, bk_k, bk_rot, mcmullen, "
                                  "dg_phi, dg_phialphaphi or dg_conic")
    for name in ("a", "b", "c", "delta", "alpha"):
        p.add_argument(f"--{name}", help="parameter in Q(i), e.g. 1/2+i")
    p.add_argument("--n", help="integer parameter of dg_phi")
    p.add_argument("--k", help="integer parameter of bk_k")
    p.add_argument("--a-j", dest="a_j", action="append", metavar="J=VALUE", help="coefficient a_j of bk_k")
    p.add_argument("--iters", type=int, default=8)
    p.add_argument("--budget", type=int, default=200, help="stop before an iterate could exceed this degree")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("verify-catalog", help="run the verification checks")
    p.add_argument("--filter", default=None, metavar="GLOB", help="select check ids, e.g. 'weyl.*'")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(handler=cmd_verify_catalog)

    p = sub.add_parser("orbit", help="write orbit projections of (x, y) -> ((ax + y)/(x + 1), by) as CSV")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--point", required=True, help="two expressions x,y")
    p.add_argument("-N", dest="count", type=int, required=True)
    p.add_argument("--out", required=True, help="CSV path, or - for stdout")
    p.set_defaults(handler=cmd_orbit)

    p = sub.add_parser("salem", help="classify an integer polynomial")
    p.add_argument("poly", help="coefficient list [c0, c1, ...] or an expression in t")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(handler=cmd_salem)

    p = sub.add_parser("weyl", help="Coxeter element data for W_n")
    p.add_argument("n", type=int)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(handler=cmd_weyl)

    p = sub.add_parser("catalog", help="print stored characteristic matrices")
    p.add_argument("name", nargs="?")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(handler=cmd_catalog)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"cremona-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
