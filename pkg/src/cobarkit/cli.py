"""Command line front end.

    cobarkit validate  [FILE | --fixture NAME]
    cobarkit cobar     [FILE | --fixture NAME] COALGEBRA TWISTING
    cobarkit weq       [FILE | --fixture NAME] MORPHISM TWISTING
    cobarkit survives  [FILE | --fixture NAME] COALGEBRA TWISTING --class EXPR
    cobarkit paper-report

Exit codes: 0 pass/yes, 1 fail/no, 2 indeterminate, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .cobar import STABILITY, alpha_weq, class_survives, cobar_complex, homology_table
from .coalg import CoalgebraMorphism
from .comodule import (AlgebraModule, ModuleMap, TwistingCochain, bar_comodule, cobar_comodule,
                       comodule_weq)
from .gradedlin import AlgebraError, Field, homology
from .report import paper_report
from .twisting import TwistingMorphism
from .workspace import ValidationFailure, Workspace, WorkspaceError, build, load

EXIT_YES, EXIT_NO, EXIT_UNSTABLE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers

def parse_window(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"window must look like a..b, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return a, b


def parse_schedule(text: str) -> list[int]:
    try:
        levels = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"schedule must be n1,n2,..., got {text!r}") from None
    if not levels or any(n < 1 for n in levels):
        raise argparse.ArgumentTypeError("schedule levels must be positive")
    return levels


def parse_field(text: str) -> Field:
    try:
        return Field.parse(text)
    except AlgebraError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


_TERM = re.compile(r"^(?:(?P<coeff>\d+(?:/\d+)?)\s*\*\s*)?(?P<label>[^\s*+]+)$")


def parse_class(expr: str, field: Field) -> dict:
    """``coeff*label ± coeff*label ...`` into {label: coeff}."""
    text = expr.strip()
    if not text:
        raise UsageError("empty class expression")
    # split on + or - that follow a complete term (whitespace-separated or leading)
    pieces = re.split(r"(?:^|\s+)([+-])\s*", " " + text if text[0] in "+-" else text)
    out: dict = {}
    sign = 1
    for piece in pieces:
        if piece in ("+", "-"):
            sign = 1 if piece == "+" else -1
            continue
        if not piece.strip():
            continue
        m = _TERM.match(piece.strip())
        if not m:
            raise UsageError(f"cannot read term {piece.strip()!r} in class {expr!r}")
        c = Fraction(m.group("coeff") or 1) * sign
        lab = m.group("label")
        out[lab] = out.get(lab, 0) + field(c)
        sign = 1
    return {k: v for k, v in out.items() if v}


def _workspace(args) -> tuple[Workspace, list[str]]:
    names = list(args.names)
    if args.fixture is not None:
        ws = load(fixture=args.fixture)
    else:
        if not names:
            raise UsageError("give a workspace file or --fixture NAME")
        ws = load(names.pop(0))
    if args.field is not None and args.field != ws.field:
        raw = dict(ws.raw)
        raw["field"] = args.field.name
        ws = build(raw)
    return ws, names


def _take(names: list[str], n: int, what: str) -> list[str]:
    if len(names) != n:
        raise UsageError(f"expected {what}, got {' '.join(names) or 'nothing'}")
    return names


def _lookup(ws: Workspace, name: str, *sections: str):
    for s in sections:
        table = getattr(ws, s)
        if name in table:
            return table[name]
    raise UsageError(f"no object named {name!r} in {', '.join(sections)}")


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False, default=str))
    else:
        print(text)


# ---------------------------------------------------------------------------
# verbs

def cmd_validate(args) -> int:
    if args.fixture is not None:
        ws = load(fixture=args.fixture, collect=True)
    else:
        if len(args.names) != 1:
            raise UsageError("validate takes one workspace file (or --fixture NAME)")
        ws = load(args.names[0], collect=True)
    counts = {s: len(getattr(ws, s)) for s in ("operads", "cooperads", "coalgebras", "twisting",
                                                 "morphisms", "modules", "module_maps")}
    lines = [f"field {ws.field.name}; " + ", ".join(f"{n} {s}" for s, n in counts.items() if n)]
    for obj, msg in ws.violations:
        lines.append(f"FAIL {obj}: {msg}")
    lines.append("valid" if not ws.violations else f"{len(ws.violations)} violation(s)")
    _emit(args, {"field": ws.field.name, "objects": counts, "ok": not ws.violations,
                 "violations": [{"object": o, "message": m} for o, m in ws.violations]},
          "\n".join(lines))
    return EXIT_YES if not ws.violations else EXIT_NO


def _cobar_arity_one(args, ws, M: AlgebraModule, sigma: TwistingCochain) -> int:
    tau = _lookup(ws, args.bar, "twisting") if args.bar else sigma
    sched = args.schedule or [args.max_weight]
    levels = []
    ok = True
    for T in sched:
        W = cobar_comodule(sigma, bar_comodule(tau, M), T)
        bad = W.dsquared_violations()
        ok = ok and not bad
        s = W.slice()
        betti = {d: b for d, b in homology(s).betti.items() if s.window[0] < d < s.window[1]}
        levels.append({"truncation": T, "certified_weight": W.certified_weight,
                       "dimension": len(W.certified_keys()), "d_squared_zero": not bad,
                       "betti": betti})
    lines = [f"Ω_{sigma.name} B_{tau.name} {M.name}"]
    for lv in levels:
        lines.append(f"T={lv['truncation']}: certified weight ≤ {lv['certified_weight']}, "
                     f"dim {lv['dimension']}, d²=0 {'yes' if lv['d_squared_zero'] else 'NO'}, "
                     f"betti {lv['betti']}")
    _emit(args, {"module": M.name, "sigma": sigma.name, "tau": tau.name, "levels": levels},
          "\n".join(lines))
    return EXIT_YES if ok else EXIT_NO


def cmd_cobar(args) -> int:
    ws, names = _workspace(args)
    cname, tname = _take(names, 2, "COALGEBRA TWISTING")
    alpha = _lookup(ws, tname, "twisting")
    if isinstance(alpha, TwistingCochain):
        return _cobar_arity_one(args, ws, _lookup(ws, cname, "modules"), alpha)
    X = _lookup(ws, cname, "coalgebras")
    c = cobar_complex(alpha, X, args.max_weight, args.window, check=False)
    bad = c.dsquared_violations()
    dims = c.dims()
    degs = sorted({d for d, _ in dims})
    lines = [f"Ω_{alpha.name} {X.name}, weight ≤ {args.max_weight}"
             + (f", degrees {args.window[0]}..{args.window[1]}" if args.window else "")]
    lines.append("dimensions (degree: weight=dim)")
    for d in degs:
        row = ", ".join(f"{w}={n}" for (dd, w), n in sorted(dims.items()) if dd == d)
        lines.append(f"  {d}: {row}")
    lines.append(f"d²=0: {'yes' if not bad else 'NO (' + bad[0] + ')'}")
    payload = {"coalgebra": X.name, "twisting": alpha.name, "max_weight": args.max_weight,
               "window": list(args.window) if args.window else None,
               "dimensions": [{"degree": d, "weight": w, "dim": n} for (d, w), n in sorted(dims.items())],
               "d_squared_zero": not bad, "homology": []}
    for N in args.schedule or [args.max_weight]:
        cN = c if N == args.max_weight else cobar_complex(alpha, X, N, args.window, check=False)
        h, exact = homology_table(cN)
        flag = "EXACT" if exact else "PER-TRUNCATION"
        inner = dict(h.betti)
        entry = {"truncation": N, "flag": flag, "betti": inner}
        if h.betti_by_weight is not None:
            entry["by_weight"] = {f"{d},{w}": b for (d, w), b in sorted(h.betti_by_weight.items()) if b}
        payload["homology"].append(entry)
        lines.append(f"homology, weight ≤ {N} [{flag}]: "
                     + ", ".join(f"H_{d}={b}" for d, b in sorted(inner.items())))
        if "by_weight" in entry:
            lines.append("  by (degree, weight): " + (", ".join(
                f"({k})={b}" for k, b in entry["by_weight"].items()) or "all zero"))
    _emit(args, payload, "\n".join(lines))
    return EXIT_YES if not bad else EXIT_NO


def _verdict_exit(summary: str) -> int:
    if summary == "stable-yes":
        return EXIT_YES
    if summary == "stable-no":
        return EXIT_NO
    return EXIT_UNSTABLE


def cmd_weq(args) -> int:
    ws, names = _workspace(args)
    mname, tname = _take(names, 2, "MORPHISM TWISTING")
    alpha = _lookup(ws, tname, "twisting")
    f = _lookup(ws, mname, "morphisms", "module_maps")
    stability = args.stability
    if isinstance(f, ModuleMap):
        if not isinstance(alpha, TwistingCochain):
            raise UsageError(f"{mname} is a module map; use a twisting cochain")
        tau = _lookup(ws, args.bar, "twisting") if args.bar else alpha
        v = comodule_weq(alpha, tau, f, args.schedule or [4, 6, 8], stability)
        levels, flag, summary = v.levels, "PER-TRUNCATION", v.summary
        extra = {str(k): d for k, d in v.details.items()}
    else:
        if not isinstance(alpha, TwistingMorphism) or not isinstance(f, CoalgebraMorphism):
            raise UsageError(f"{mname} is a coalgebra morphism; use an operadic twisting morphism")
        r = alpha_weq(alpha, f, args.window or (0, 6), args.schedule or [3, 4, 5, 6], stability)
        levels, flag, summary = r.levels, r.flag, r.summary
        extra = {str(k): {"degree": d, "cycle": {lab: str(x) for lab, x in cyc.items()}}
                 for k, (d, cyc) in r.witnesses.items()}
    lines = [f"{mname} under {alpha.name} [{flag}]"]
    for N, v in levels:
        lines.append(f"  N={N}: {v}")
    lines.append(f"verdict: {summary}")
    _emit(args, {"morphism": mname, "twisting": alpha.name, "flag": flag,
                 "levels": [{"truncation": N, "verdict": v} for N, v in levels],
                 "summary": summary, "details": extra}, "\n".join(lines))
    return _verdict_exit(summary)


def cmd_survives(args) -> int:
    ws, names = _workspace(args)
    cname, tname = _take(names, 2, "COALGEBRA TWISTING")
    if not args.cls:
        raise UsageError("survives needs --class EXPR")
    alpha = _lookup(ws, tname, "twisting")
    if not isinstance(alpha, TwistingMorphism):
        raise UsageError("survives works with operadic twisting morphisms")
    X = _lookup(ws, cname, "coalgebras")
    cycle = parse_class(args.cls, ws.field)
    sched = args.schedule or list(range(3, 11))
    c = cobar_complex(alpha, X, args.max_weight, args.window, check=False)
    cert = class_survives(c, cycle, sched, args.stability, args.cls)
    lines = [f"class {cert.target} in Ω_{alpha.name} {X.name}", "  N  membership"]
    for N, v in cert.levels:
        lines.append(f"  {N:<2} {v}")
    lines.append(f"verdict: {cert.verdict}")
    _emit(args, {"class": cert.target, "twisting": alpha.name, "coalgebra": X.name,
                 "levels": [{"truncation": N, "membership": v} for N, v in cert.levels],
                 "stabilized": cert.stabilized, "survives": cert.survives,
                 "verdict": cert.verdict}, "\n".join(lines))
    if not cert.stabilized:
        return EXIT_UNSTABLE
    return EXIT_YES if cert.survives else EXIT_NO


def cmd_paper_report(args) -> int:
    rep = paper_report(args.field or Field(0), args.schedule, args.stability)
    _emit(args, rep.as_dict(), rep.render())
    return rep.exit_code


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=parse_field, default=None, help="Q or Fp:<p>")
    common.add_argument("--max-weight", type=int, default=6, dest="max_weight")
    common.add_argument("--window", type=parse_window, default=None, help="degrees a..b")
    common.add_argument("--schedule", type=parse_schedule, default=None, help="n1,n2,...")
    common.add_argument("--stability", type=int, default=STABILITY)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--fixture", default=None, help="bundled workspace name")
    common.add_argument("--bar", default=None, help="cochain of the bar side (arity one)")

    p = argparse.ArgumentParser(prog="cobarkit", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="verb", required=True)
    for verb, fn, names in (("validate", cmd_validate, "[FILE]"),
                            ("cobar", cmd_cobar, "[FILE] COALGEBRA TWISTING"),
                            ("weq", cmd_weq, "[FILE] MORPHISM TWISTING"),
                            ("survives", cmd_survives, "[FILE] COALGEBRA TWISTING"),
                            ("paper-report", cmd_paper_report, "")):
        sp = sub.add_parser(verb, parents=[common])
        if names:
            sp.add_argument("names", nargs="*", metavar=names)
        else:
            sp.set_defaults(names=[])
        if verb == "survives":
            sp.add_argument("--class", dest="cls", default=None, help="e.g. '2*x^2 - x'")
        sp.set_defaults(func=fn)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_YES
    if args.stability < 1:
        print("error: --stability must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ValidationFailure as e:
        for obj, msg in e.violations:
            print(f"FAIL {obj}: {msg}", file=sys.stderr)
        return EXIT_NO
    except (UsageError, WorkspaceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except AlgebraError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
