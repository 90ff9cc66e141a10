"""Command-line front end: linkage files, analysis reports, motion samples.

Linkage files are JSON objects with exactly one of

* ``"lines"``: six arrays of eight numbers in the order ``(1, i, j, k, e, ei, ej, ek)``;
* ``"dh"``: an object with arrays ``"c"``, ``"b"``, ``"s"`` of length six.

Numbers may be JSON numbers or strings such as ``"0.25"`` or ``"-3/7"``.  On
the exact backend strings are parsed without rounding.

Exit status is 0 on success and 2 on invalid input.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

from . import __version__
from .classify import (BondDiagram, classify, coupler_degree, genus_bound,
                       maximal_bond_diagram)
from .dualquat import DualQuaternion
from .linkage import (DHParams, Linkage6R, LinkageError, closing_discrepancy,
                      coupling_dimensions, dh_from_lines, lines_from_dh)
from .motion import TrackerConfig, assemble, mobility_witness, track
from .quadpoly import (EliminationError, bond_conditions, crosscheck_invariant_vs_elim,
                       derived_invariant_quads, elimination_quads, invariant_quads)
from .scalars import GaussianRational

SEED_ENV = "HEXLINK_SEED"


class InputError(ValueError):
    """Invalid linkage file or command-line value; maps to exit status 2."""


# ---------------------------------------------------------------------------
# Reading


def _number(value, path, exact):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise InputError(f"{path}: expected a number or numeric string, got {value!r}")
    try:
        if exact:
            if isinstance(value, float):
                if not math.isfinite(value):
                    raise ValueError
                return Fraction(repr(value))
            return Fraction(value.strip() if isinstance(value, str) else value)
        out = float(Fraction(value.strip())) if isinstance(value, str) else float(value)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{path}: cannot parse {value!r} as a number") from None
    if not math.isfinite(out):
        raise InputError(f"{path}: value must be finite")
    return out


def _array(data, path, length):
    if not isinstance(data, list) or len(data) != length:
        raise InputError(f"{path}: expected an array of {length} entries")
    return data


def parse_linkage(data, exact=True):
    """Turn a decoded linkage file into ``Linkage6R`` or ``DHParams``."""
    if not isinstance(data, dict):
        raise InputError("top level: expected a JSON object")
    keys = [k for k in ("lines", "dh") if k in data]
    if len(keys) != 1:
        raise InputError("top level: exactly one of 'lines' or 'dh' must be present")
    try:
        if keys[0] == "lines":
            rows = _array(data["lines"], "lines", 6)
            axes = []
            for i, row in enumerate(rows):
                coeffs = [_number(x, f"lines[{i}][{j}]", exact) for j, x in enumerate(_array(row, f"lines[{i}]", 8))]
                axes.append(DualQuaternion(*coeffs))
            return Linkage6R(axes)
        dh = data["dh"]
        if not isinstance(dh, dict):
            raise InputError("dh: expected an object with arrays 'c', 'b', 's'")
        vals = {}
        for name in ("c", "b", "s"):
            if name not in dh:
                raise InputError(f"dh.{name}: missing")
            vals[name] = tuple(_number(x, f"dh.{name}[{i}]", exact) for i, x in enumerate(_array(dh[name], f"dh.{name}", 6)))
        return DHParams(vals["c"], vals["b"], vals["s"]).validate()
    except LinkageError as exc:
        raise InputError(str(exc)) from None


def load_linkage(path, exact=True):
    try:
        with (sys.stdin if path == "-" else open(path)) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_linkage(data, exact)


def _seed(args):
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return args.seed


# ---------------------------------------------------------------------------
# Formatting


def fmt(x):
    """JSON-friendly scalar: exact values as strings, floats to 12 significant digits."""
    if isinstance(x, GaussianRational):
        return str(x.re) if x.im == 0 else {"re": str(x.re), "im": str(x.im)}
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, complex):
        if x.imag == 0:
            return float(f"{x.real:.12g}")
        return {"re": float(f"{x.real:.12g}"), "im": float(f"{x.imag:.12g}")}
    return float(f"{float(x):.12g}")


def _text(v):
    if isinstance(v, dict):
        im = v["im"]
        sign = "-" if str(im).startswith("-") else "+"
        return f"{v['re']} {sign} {str(im).lstrip('-')}i"
    return str(v)


def _quad(q):
    return {"a1": fmt(q.a1), "a0": fmt(q.a0)}


def _quad_text(q):
    return f"x^2 + ({_text(fmt(q.a1))})x + ({_text(fmt(q.a0))})"


def _quadset(Q):
    return {"plus": [_quad(q) for q in Q.qplus], "minus": [_quad(q) for q in Q.qminus]}


def _dh_json(P):
    return {"c": [fmt(x) for x in P.c], "b": [fmt(x) for x in P.b], "s": [fmt(x) for x in P.s]}


def _to_backend(obj, exact):
    if exact:
        if isinstance(obj, Linkage6R) and not obj.is_exact:
            raise InputError("exact backend needs exact input")
        return obj
    return obj.to_float()


# ---------------------------------------------------------------------------
# Reports


def _families_json(rep):
    eqs = {}
    for name, items in rep.equations.items():
        eqs[name] = [{"name": e.name, "lhs": fmt(e.lhs), "rhs": fmt(e.rhs), "residual": fmt(e.residual)}
                     for e in items]
    out = {"flags": rep.flags, "equations": eqs, "dietmaier_flip_mask": rep.dietmaier_flip_mask,
           "notes": list(rep.notes)}
    if rep.hooke_geometric is not None:
        e = rep.hooke_geometric
        out["hooke_geometric"] = {"name": e.name, "residual": fmt(e.residual)}
    return out


def analysis_report(obj, seed=0, motion=False, crosscheck=True):
    """Everything the package can say about one linkage, as a JSON-ready dict."""
    report = {"input": "lines" if isinstance(obj, Linkage6R) else "dh"}
    if isinstance(obj, Linkage6R):
        P = dh_from_lines(obj)
        dims = coupling_dimensions(obj)
    else:
        P = obj
        dims = None
    fam = classify(P)
    dims = tuple(dims or fam.coupling_dims)
    bound, case = genus_bound(dims)
    report["backend"] = "exact" if P.is_exact else "float"
    report["dh"] = _dh_json(P)
    report["coupling_dimensions"] = list(dims)
    report["invariant_quads"] = _quadset(invariant_quads(P))
    report["invariant_quads_elimination_consistent"] = _quadset(derived_invariant_quads(P))
    bonds = bond_conditions(P)
    report["bond_conditions"] = [
        {"k": p.k, "partner": p.k + 3, "sign": p.sign, "gcd_degree": p.gcd_degree,
         "resultant": fmt(p.resultant), "same_discriminant": p.same_discriminant}
        for p in bonds.pairs]
    if dims == (8,) * 6:
        md = maximal_bond_diagram(P)
        report["maximal_bond_diagram"] = {"diagram": str(md.diagram), "upper_bound": True, "note": md.note}
    else:
        report["maximal_bond_diagram"] = None
    report["families"] = _families_json(fam)
    report["genus_bound"] = {"bound": bound, "case": case}
    if crosscheck and isinstance(obj, Linkage6R) and dims == (8,) * 6:
        try:
            cc = crosscheck_invariant_vs_elim(obj, seed=seed)
            report["crosscheck"] = {"published_form_matches": cc.match,
                                    "elimination_consistent_form_matches": cc.match_derived,
                                    "max_deviation_published": fmt(cc.max_deviation),
                                    "max_deviation_elimination_consistent": fmt(cc.max_deviation_derived)}
        except EliminationError as exc:
            report["crosscheck"] = {"error": str(exc)}
    if motion:
        L = obj if isinstance(obj, Linkage6R) else assemble(P, seed=seed)
        w = mobility_witness(L.to_float())
        report["motion"] = {"label": w.label, "samples": w.samples, "max_residual": fmt(w.max_residual),
                            "rank5_fraction": fmt(w.rank5_fraction), "stop": w.stop,
                            "note": "numerical witness, not a proof"}
    return report


def _print_text(report, out):
    w = lambda s="": print(s, file=out)
    w(f"input: {report['input']}  backend: {report['backend']}")
    dh = report["dh"]
    w("DH parameters")
    w(f"  {'k':>2} {'c':>16} {'b':>16} {'s':>16}")
    for k in range(6):
        w(f"  {k + 1:>2} {_text(dh['c'][k]):>16} {_text(dh['b'][k]):>16} {_text(dh['s'][k]):>16}")
    w(f"coupling dimensions: {' '.join(str(d) for d in report['coupling_dimensions'])}")
    for key, title in (("invariant_quads", "invariant quad polynomials (published closed form)"),
                       ("invariant_quads_elimination_consistent",
                        "invariant quad polynomials (elimination-consistent closed form)")):
        w(title)
        for sign in ("plus", "minus"):
            for k, q in enumerate(report[key][sign], start=1):
                w(f"  Q{k}{'+' if sign == 'plus' else '-'} = x^2 + ({_text(q['a1'])})x + ({_text(q['a0'])})")
    w("bond conditions (gcd degree of opposite quad polynomials, upper bounds only)")
    for p in report["bond_conditions"]:
        w(f"  Q{p['k']}{p['sign']} / Q{p['partner']}{p['sign']}: gcd degree {p['gcd_degree']}, "
          f"resultant {_text(p['resultant'])}")
    md = report["maximal_bond_diagram"]
    if md:
        w(f"maximal bond diagram (upper bound): {md['diagram'] or '(empty)'}")
    fam = report["families"]
    w("families")
    for name, flag in fam["flags"].items():
        w(f"  {name}: {'yes' if flag else 'no'}")
        for e in fam["equations"][name]:
            w(f"    {e['name']}: residual {_text(e['residual'])}")
    if fam.get("dietmaier_flip_mask") is not None:
        w(f"  dietmaier equations hold after reversing axes mask {fam['dietmaier_flip_mask']:06b}")
    for note in fam["notes"]:
        w(f"  note: {note}")
    g = report["genus_bound"]
    w(f"genus bound: {g['bound']} ({g['case']})")
    if "crosscheck" in report:
        w(f"elimination cross-check: {report['crosscheck']}")
    if "motion" in report:
        m = report["motion"]
        w(f"motion: {m['label']}, {m['samples']} samples, max residual {m['max_residual']} ({m['note']})")


def _emit(report, args, printer=_print_text):
    if args.json:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        print()
    else:
        printer(report, sys.stdout)


# ---------------------------------------------------------------------------
# Commands


def cmd_analyze(args):
    obj = _to_backend(load_linkage(args.file, args.exact), args.exact)
    _emit(analysis_report(obj, seed=_seed(args), motion=args.motion, crosscheck=not args.no_crosscheck), args)
    return 0


def cmd_classify(args):
    obj = _to_backend(load_linkage(args.file, args.exact), args.exact)
    P = dh_from_lines(obj) if isinstance(obj, Linkage6R) else obj
    rep = classify(P)
    report = _families_json(rep)
    report["coupling_dimensions"] = list(rep.coupling_dims)
    report["genus_bound"] = {"bound": rep.genus_bound, "case": rep.genus_label}

    def printer(r, out):
        for name, flag in r["flags"].items():
            print(f"{name}: {'yes' if flag else 'no'}", file=out)
            for e in r["equations"][name]:
                print(f"  {e['name']}: {_text(e['lhs'])} = {_text(e['rhs'])}  residual {_text(e['residual'])}", file=out)
        for note in r["notes"]:
            print(f"note: {note}", file=out)
        print(f"coupling dimensions: {' '.join(map(str, r['coupling_dimensions']))}", file=out)
        print(f"genus bound: {r['genus_bound']['bound']} ({r['genus_bound']['case']})", file=out)

    _emit(report, args, printer)
    return 0


def cmd_quadpoly(args):
    obj = _to_backend(load_linkage(args.file, args.exact), args.exact)
    seed = _seed(args)
    P = dh_from_lines(obj) if isinstance(obj, Linkage6R) else obj
    report = {"published": _quadset(invariant_quads(P)),
              "elimination_consistent": _quadset(derived_invariant_quads(P))}
    if isinstance(obj, Linkage6R):
        try:
            report["raw_elimination"] = [_quad(q) for q in elimination_quads(obj, seed=seed)]
        except (EliminationError, LinkageError) as exc:
            report["raw_elimination"] = {"error": str(exc)}

    def printer(r, out):
        for key in ("published", "elimination_consistent"):
            print(f"{key} closed form", file=out)
            for sign in ("plus", "minus"):
                for k, q in enumerate(r[key][sign], start=1):
                    print(f"  Q{k}{'+' if sign == 'plus' else '-'} = x^2 + ({_text(q['a1'])})x + ({_text(q['a0'])})", file=out)
        raw = r.get("raw_elimination")
        if isinstance(raw, list):
            print("raw elimination Q(h_k, h_k+1, h_k+2, h_k+3)", file=out)
            for k, q in enumerate(raw, start=1):
                print(f"  k={k}: x^2 + ({_text(q['a1'])})x + ({_text(q['a0'])})", file=out)
        elif raw is not None:
            print(f"raw elimination unavailable: {raw['error']}", file=out)

    _emit(report, args, printer)
    return 0


def _line_json(h, exact):
    return [str(x) if exact else repr(float(x)) for x in h.coeffs]


def cmd_synth(args):
    P = load_linkage(args.file, args.exact)
    if isinstance(P, Linkage6R):
        raise InputError("synth expects a 'dh' file")
    if args.open_chain:
        L = lines_from_dh(P if args.exact else P.to_float())
        gap = closing_discrepancy(P, L)
        print("open chain; closing discrepancy " + ", ".join(f"{k}={_text(fmt(v))}" for k, v in gap.items()),
              file=sys.stderr)
        exact = L.is_exact
    else:
        try:
            L = assemble(P, seed=_seed(args))
        except LinkageError as exc:
            raise InputError(str(exc)) from None
        exact = False
    json.dump({"lines": [_line_json(h, exact) for h in L.axes]}, sys.stdout, indent=2)
    print()
    return 0


CSV_COLUMNS = ["step", "t1", "t2", "t3", "t4", "t5", "t6", "residual", "jac_rank"]


def cmd_sample_motion(args):
    if args.steps <= 0:
        raise InputError("--steps must be positive")
    if not args.tol > 0:
        raise InputError("--tol must be positive")
    obj = load_linkage(args.file, exact=False)
    L = obj if isinstance(obj, Linkage6R) else assemble(obj, seed=_seed(args))
    try:
        cfg = TrackerConfig(step=args.step, max_steps=args.steps, tol=args.tol,
                            newton_tol=min(1e-11, args.tol), seed=_seed(args))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = track(L.to_float(), cfg)
    rows = [s for s in result.samples if s.residual < args.tol]
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    try:
        writer = csv.writer(out)
        writer.writerow(CSV_COLUMNS)
        for s in rows:
            writer.writerow([s.step, *(f"{x:.15g}" for x in s.theta), f"{s.residual:.3e}", s.jac_rank])
    finally:
        if out is not sys.stdout:
            out.close()
    if not rows:
        print(f"warning: {result.stop or 'no motion found at this resolution'} "
              "(not a proof of rigidity)", file=sys.stderr)
    else:
        print(f"{len(rows)} samples; stopped: {result.stop}", file=sys.stderr)
    return 0


def _pair(text):
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"--pair expects 'i,j', got {text!r}") from None
    if not (1 <= i <= 6 and 1 <= j <= 6) or i == j:
        raise InputError("--pair needs two different links in 1..6")
    return i, j


def cmd_coupler_degree(args):
    try:
        D = BondDiagram.parse(args.diagram)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.pair:
        print(coupler_degree(D, *_pair(args.pair)))
    else:
        for i in range(1, 7):
            for j in range(i + 1, 7):
                print(f"{i},{j}: {coupler_degree(D, i, j)}")
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="hexlink", description="Algebraic analysis of closed 6R linkages.")
    parser.add_argument("--version", action="version", version=f"hexlink {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, backend=True):
        p.add_argument("file", help="linkage JSON file ('-' for stdin)")
        if backend:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--exact", dest="exact", action="store_true", default=True,
                           help="rational arithmetic (default)")
            g.add_argument("--float", dest="exact", action="store_false", help="floating point arithmetic")
        g = p.add_mutually_exclusive_group()
        g.add_argument("--json", dest="json", action="store_true", default=False)
        g.add_argument("--text", dest="json", action="store_false")
        p.add_argument("--seed", type=int, default=0, help=f"randomization seed (overridden by {SEED_ENV})")

    p = sub.add_parser("analyze", help="full report")
    common(p)
    p.add_argument("--motion", action="store_true", help="add a numerical mobility witness")
    p.add_argument("--no-crosscheck", action="store_true", help="skip the elimination cross-check")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="family equations and genus bound")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("quadpoly", help="invariant and raw quad polynomials")
    common(p)
    p.set_defaults(func=cmd_quadpoly)

    p = sub.add_parser("synth", help="place axes for a 'dh' file")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", dest="exact", action="store_true", default=True)
    g.add_argument("--float", dest="exact", action="store_false")
    p.add_argument("--open-chain", action="store_true",
                   help="skip closing the loop; joints 2..5 at angle 0")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sample-motion", help="track the configuration curve, write CSV")
    p.add_argument("file")
    p.add_argument("--steps", type=int, default=400, help="step budget")
    p.add_argument("--step", type=float, default=0.05, help="driver increment in radians")
    p.add_argument("--tol", type=float, default=1e-9, help="residual bound for reported samples")
    p.add_argument("--out", default="-", help="CSV path ('-' for stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample_motion)

    p = sub.add_parser("coupler-degree", help="coupler curve degree from a bond diagram")
    p.add_argument("--diagram", required=True, help="comma-separated i-j:k entries")
    p.add_argument("--pair", help="links i,j (omit for all 15 pairs)")
    p.set_defaults(func=cmd_coupler_degree)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
