"""Command-line entry point: ``genus-forge <subcommand> [options]``.

Exit status is 0 when every requested check holds, 1 on a mathematical
failure and 2 on a usage error (bad flag, unreadable manifold, bad value).
"""
import argparse
import json
import os
import sys
from fractions import Fraction

from .arith import format_rat
from .cohomology import BundleContext, CohClass, format_monomial, make_monomial
from .elliptic import ell_bundle, ell_theta, modular_coefficients, quasi_periodicity_check, verify_route_agreement
from .errors import GenusForgeError, InsufficientTruncationError, InvalidArgumentError, ManifoldSpecError
from .genus import (
    chern_number_index_formula,
    chi_y,
    chi_y_taylor_minus1,
    closed_form_a,
    index_vector,
    pluri_chi,
    pontryagin_number_index_formula,
    reconstruct,
    signature_index_vector,
    signature_pluri,
    theorem_contract,
)
from .manifolds import load_manifold, symbolic_manifold
from .suite import GROUPS, run_suite

QORDER_ENV = "GENUS_FORGE_QORDER"
VERIFY_QORDER = 4
COMPUTE_QORDER = 6


class UsageError(Exception):
    pass


# -- helpers ----------------------------------------------------------------------

def _rat(x):
    if isinstance(x, (int, Fraction)):
        return format_rat(x)
    return str(x)


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _int_list(text):
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}") from None
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("entries of --q must be nonnegative")
    return values


def resolve_qorder(flag, default, environ=None):
    """--qorder beats GENUS_FORGE_QORDER beats the subcommand default."""
    if flag is not None:
        return flag
    environ = os.environ if environ is None else environ
    raw = environ.get(QORDER_ENV)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{QORDER_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"{QORDER_ENV} must be a positive integer, got {raw!r}")
    return value


def _manifold(args, required=True):
    if args.manifold is not None:
        m = load_manifold(args.manifold)
        if getattr(args, "n", None) is not None and args.n != m.d:
            raise UsageError(f"--n {args.n} disagrees with the manifold's dimension {m.d}")
        return m
    if getattr(args, "n", None) is not None:
        return symbolic_manifold(args.n)
    if required:
        raise UsageError("give --manifold <name|path> or --n <d> for a symbolic manifold")
    return None


def _poly_dict(poly):
    return {",".join(str(e) for e in k): _rat(c) for k, c in sorted(poly.terms.items())}


def _series_rows(s):
    return [{"q": _rat(qe), "y": _rat(ye), "coefficient": _rat(c)}
            for (qe, ye), c in sorted(s.items(), key=lambda kv: kv[0])]


def _emit(out, payload):
    out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _context(args, m):
    l = args.bundle_rank
    relations = args.relations == "on"
    # no rank, or a concrete manifold at full rank, means W = T
    if l is None or (l == m.d and not m.symbolic):
        return BundleContext(m.d, m.d, relations=relations, tangent=True, c1_vanishes=relations)
    return BundleContext(m.d, l, relations=relations, c1_vanishes=relations)


# -- subcommands ----------------------------------------------------------------

def cmd_chi_y(args, out):
    m = _manifold(args)
    poly = chi_y(m)
    a = chi_y_taylor_minus1(m)
    a += [Fraction(0)] * (4 - len(a))
    mismatched = []
    for i in range(4):
        expected = m.integrate(closed_form_a(i, m.d))
        if _rat(expected) != _rat(a[i]):
            mismatched.append(i)
    if args.output == "machine":
        _emit(out, {"manifold": m.name, "d": m.d, "chi_y": _poly_dict(poly),
                    "a": [_rat(x) for x in a], "closed_forms_agree": not mismatched})
    else:
        out.write(f"manifold: {m.name} (d={m.d})\n")
        out.write(f"chi_y: {poly.to_text(compact=True)}\n")
        out.write(" ".join(f"a{i}={_rat(x)}" for i, x in enumerate(a)) + "\n")
        out.write("closed forms a0..a3: " + ("agree" if not mismatched else
                  "DISAGREE at " + ", ".join(f"a{i}" for i in mismatched)) + "\n")
    return 1 if mismatched else 0


def _coefficient_block(args, m, poly, signature):
    """Returns (payload, failure) for the --q coefficient request."""
    qs = args.q
    if len(qs) != args.g:
        raise UsageError(f"--q has {len(qs)} entries but --g is {args.g}")
    top = m.d
    if any(q > top for q in qs):
        raise UsageError(f"entries of --q must lie in 0..{top}")
    step = 2 if signature else 1
    value = poly.expand_at_minus_one().coefficient(tuple(step * (m.d - q) for q in qs))
    expected = None
    if not signature or m.d % 2 == 0:
        expected = theorem_contract(m, qs, signature=signature)
    failed = expected is not None and _rat(expected) != _rat(value)
    return {"q": list(qs), "coefficient": _rat(value),
            "contract": None if expected is None else _rat(expected), "agrees": not failed}, failed


def _pluri_common(args, out, signature):
    m = _manifold(args)
    if args.g < 1:
        raise UsageError("--g must be at least 1")
    poly = signature_pluri(m, args.g) if signature else pluri_chi(m, args.g)
    block, failed = (None, False)
    if args.q is not None:
        block, failed = _coefficient_block(args, m, poly, signature)
    if args.output == "machine":
        payload = {"manifold": m.name, "d": m.d, "g": args.g, "polynomial": _poly_dict(poly)}
        if block:
            payload["coefficient"] = block
        _emit(out, payload)
    else:
        label = "signature pluri-genus" if signature else "pluri-genus"
        out.write(f"manifold: {m.name} (d={m.d}) g={args.g}\n")
        out.write(f"{label}: {poly.to_text(compact=True)}\n")
        if block:
            power = "2(n-q_i)" if signature else "n-q_i"
            out.write(f"coefficient of prod (1+y_i)^({power}) at q={tuple(args.q)}: {block['coefficient']}\n")
            if block["contract"] is None:
                out.write("contract: below the top degree, no prediction\n")
            else:
                out.write(f"contract: {block['contract']} ({'agrees' if block['agrees'] else 'DISAGREES'})\n")
    return 1 if failed else 0


def cmd_pluri(args, out):
    return _pluri_common(args, out, signature=False)


def cmd_signature_pluri(args, out):
    return _pluri_common(args, out, signature=True)


def cmd_index_formula(args, out):
    m = _manifold(args, required=False) if args.manifold else None
    n = args.n if args.n is not None else (m.d if m else None)
    if n is None or args.q is None:
        raise UsageError("index-formula needs --q and either --n or --manifold")
    if args.kind == "p":
        weights = pontryagin_number_index_formula(n, args.q)
        mono = make_monomial((("p", q), 1) for q in args.q if q)
    else:
        weights = chern_number_index_formula(n, args.q)
        mono = make_monomial((("c", q), 1) for q in args.q if q)
    name = format_monomial(mono)
    result = None
    if m is not None:
        vec = signature_index_vector(m, len(args.q)) if args.kind == "p" else index_vector(m, len(args.q))
        value = reconstruct(weights, vec)
        direct = m.integrate(CohClass({mono: Fraction(1)}, m.d))
        result = {"manifold": m.name, "reconstructed": _rat(value), "direct": _rat(direct),
                  "agrees": _rat(value) == _rat(direct)}
    if args.output == "machine":
        payload = {"n": n, "q": list(args.q), "kind": args.kind, "number": name,
                   "weights": [{"p": list(p), "weight": _rat(w)} for p, w in weights]}
        if result:
            payload["reconstruction"] = result
        _emit(out, payload)
    else:
        out.write(f"index formula for {name} (n={n}): {len(weights)} nonzero weights\n")
        for p, w in weights:
            out.write(f"p=({','.join(str(x) for x in p)}) weight={_rat(w)}\n")
        if result:
            out.write(f"reconstructed {name} = {result['reconstructed']}\n")
            out.write(f"direct {name} = {result['direct']} ({'agrees' if result['agrees'] else 'DISAGREES'})\n")
    return 0 if result is None or result["agrees"] else 1


def _report_out(out, reports):
    for r in reports:
        out.write(r.to_text() + "\n")


def cmd_elliptic(args, out):
    m = _manifold(args)
    ctx = _context(args, m)
    n = resolve_qorder(args.qorder, COMPUTE_QORDER)
    bundle, theta = ell_bundle(m, ctx, n), ell_theta(m, ctx, n)
    reports = [verify_route_agreement(m, ctx, n)] + quasi_periodicity_check(bundle)
    failed = any(not r.ok for r in reports)
    if args.output == "machine":
        _emit(out, {"manifold": m.name, "context": ctx.label(), "qorder": n,
                    "bundle": _series_rows(bundle.series), "theta": _series_rows(theta.series),
                    "reports": [r.to_dict() for r in reports]})
    else:
        out.write(f"manifold: {m.name}  context: {ctx.label()}  q-order: {n}\n")
        out.write(f"Ell (bundle route): {bundle.series}\n")
        out.write(f"Ell (theta route):  {theta.series}\n")
        _report_out(out, reports)
    return 1 if failed else 0


def cmd_modular_coeffs(args, out):
    m = _manifold(args)
    ctx = _context(args, m)
    n = resolve_qorder(args.qorder, COMPUTE_QORDER)
    e = ell_bundle(m, ctx, n)
    rows, failed = [], False
    for k, (a, cert) in enumerate(modular_coefficients(e, args.ucap - 1, n)):
        rows.append((k, a, cert))
        failed = failed or not cert.ok
    if args.output == "machine":
        _emit(out, {"manifold": m.name, "context": ctx.label(), "qorder": n, "coefficients": [
            {"k": k, "series": _series_rows(a), "weight": cert.weight, "verdict": cert.verdict,
             "basis_coefficients": {f"G4^{x} G6^{y}": _rat(c) for (x, y), c in sorted(cert.coefficients.items())},
             "mismatches": [{"q": q, "expected": _rat(p), "actual": _rat(v)} for q, p, v in cert.mismatches]}
            for k, a, cert in rows]})
    else:
        out.write(f"manifold: {m.name}  context: {ctx.label()}  q-order: {n}\n")
        for k, a, cert in rows:
            out.write(f"a{k} = {a}\n")
            out.write("  " + cert.to_text().replace("\n", "\n  ") + "\n")
    return 1 if failed else 0


def cmd_verify(args, out):
    n = resolve_qorder(args.qorder, VERIFY_QORDER)
    results = run_suite(args.suite, n, args.extended)
    failed = False
    items = []
    for item, reports, seconds in results:
        ok = all(r.ok for r in reports)
        if not item.extended:
            failed = failed or not ok
        items.append((item, reports, seconds, ok))
    if args.output == "machine":
        _emit(out, {"suite": args.suite, "qorder": n, "passed": not failed, "items": [
            {"key": item.key, "title": item.title, "extended": item.extended, "passed": ok,
             "reports": [r.to_dict() for r in reports]}
            for item, reports, seconds, ok in items]})
    else:
        for item, reports, seconds, ok in items:
            tag = "PASS" if ok else "FAIL"
            extra = " (extended, non-gating)" if item.extended else ""
            out.write(f"{tag} {item.key}: {item.title}, {len(reports)} checks{extra}\n")
            for r in reports:
                if args.verbose or not r.ok:
                    out.write("  " + r.to_text().replace("\n", "\n  ") + "\n")
        out.write(f"suite {args.suite} at q-order {n}: {'PASS' if not failed else 'FAIL'}\n")
    return 1 if failed else 0


# -- parser ------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="genus-forge", description="Exact genus and elliptic-genus computations.")
    sub = parser.add_subparsers(dest="command", metavar="subcommand")
    sub.required = True

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--output", choices=("human", "machine"), default="human")
        p.set_defaults(func=fn)
        return p

    def manifold_flags(p):
        p.add_argument("--manifold", help="catalog name (cp1, cp2, cp3, k3, quintic, cp1xcp1) or spec file")
        p.add_argument("--n", type=_positive_int, help="dimension; alone it selects a symbolic manifold")

    p = add("chi-y", cmd_chi_y, "chi_y-genus and its expansion at y = -1")
    manifold_flags(p)

    for name, fn in (("pluri", cmd_pluri), ("signature-pluri", cmd_signature_pluri)):
        p = add(name, fn, f"{name} polynomial and an optional coefficient")
        manifold_flags(p)
        p.add_argument("--g", type=_positive_int, default=1)
        p.add_argument("--q", type=_int_list)

    p = add("index-formula", cmd_index_formula, "index weights for a characteristic number")
    manifold_flags(p)
    p.add_argument("--q", type=_int_list)
    p.add_argument("--kind", choices=("c", "p"), default="c")

    for name, fn in (("elliptic", cmd_elliptic), ("modular-coeffs", cmd_modular_coeffs)):
        p = add(name, fn, f"{name} for a manifold and bundle rank")
        manifold_flags(p)
        p.add_argument("--bundle-rank", type=int)
        p.add_argument("--relations", choices=("on", "off"), default="on")
        p.add_argument("--qorder", type=_positive_int)
        if name == "modular-coeffs":
            p.add_argument("--ucap", type=_positive_int, default=3, help="number of coefficients a_0.. to report")

    p = add("verify", cmd_verify, "run the identity suite")
    p.add_argument("--suite", choices=GROUPS, default="all")
    p.add_argument("--qorder", type=_positive_int)
    p.add_argument("--extended", action="store_true")
    p.add_argument("--verbose", action="store_true")
    return parser


def run(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args, out)
    except (UsageError, InvalidArgumentError, ManifoldSpecError) as exc:
        err.write(f"genus-forge: error: {exc}\n")
        return 2
    except InsufficientTruncationError as exc:
        err.write(f"genus-forge: insufficient truncation: {exc}\n")
        return 1
    except GenusForgeError as exc:
        err.write(f"genus-forge: {type(exc).__name__}: {exc}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
