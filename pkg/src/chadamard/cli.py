"""Command-line front end.

Every command prints a JSON report on stdout and a one-line summary on
stderr.  Exit codes: 0 success, 1 checked and false / refuted, 2 error,
3 search budget exhausted.  Row and column indices on the command line are
1-based.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import catalogue, formats
from .affine import family_dimension, find_pair_patterns, parametrize_pair, parametrize_real
from .conference import (ConferenceMatrix, conference_to_hadamard, hadamard_to_conference,
                         iterative_parametrize, paley_conference,
                         symmetric_conference_order_feasible)
from .dita import (DEFAULT_BUDGET, NOT_DITA, dita_detect, extension_rows,
                   no_orthogonal_extension, quick_non_dita)
from .errors import VerificationError
from .ops import defect_report, dephase, haagerup_set, hadamard_residual, is_hadamard
from .phase import AffinePhaseMatrix, family_is_hadamard

SCHEMA_VERSION = 1
BUDGET_ENV = "CHADAMARD_DITA_BUDGET"

OK, NEGATIVE, ERROR, EXHAUSTED = 0, 1, 2, 3


class CliError(Exception):
    pass


# ----------------------------------------------------------------- helpers

def _load(args):
    if getattr(args, "catalogue", None):
        return catalogue.get(args.catalogue).object
    if getattr(args, "input", None):
        return formats.load(args.input)
    raise CliError("give an input with --in PATH or --catalogue ID")


def _phase_matrix(args, allow_family=False) -> AffinePhaseMatrix:
    obj = _load(args)
    if isinstance(obj, ConferenceMatrix):
        obj = conference_to_hadamard(obj)
    if obj.param_count and not allow_family:
        raise CliError("expected a matrix without parameters")
    return obj


def _pair(text):
    try:
        a, b = (int(x) for x in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise CliError(f"cannot parse index pair {text!r}") from exc
    if a < 1 or b < 1:
        raise CliError(f"indices are 1-based, got {text!r}")
    return a - 1, b - 1


def _budget(args):
    if args.budget is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise CliError(f"{BUDGET_ENV} must be an integer, got {env!r}") from exc
    return DEFAULT_BUDGET


def _emit(report, summary, code):
    report = {"schema_version": SCHEMA_VERSION, **report}
    print(json.dumps(report))
    print(summary, file=sys.stderr)
    return code


# ----------------------------------------------------------------- commands

def cmd_verify(args):
    obj = _load(args)
    if isinstance(obj, ConferenceMatrix):
        # conference identities are checked when the matrix is built
        return _emit({"command": "verify", "kind": "conference", "conference": True},
                     f"conference matrix of order {obj.order}: identities hold", OK)
    if obj.param_count:
        check = family_is_hadamard(obj)
        report = {"command": "verify", "kind": "family", "order": obj.order,
                  "params": list(obj.params), "hadamard": bool(check),
                  "failing_rows": [r + 1 for r in check.rows] if check.rows else None}
        summary = f"family of order {obj.order}, {obj.param_count} parameters: " \
                  f"{'Hadamard for all values' if check else 'NOT Hadamard'}"
        return _emit(report, summary, OK if check else NEGATIVE)
    ok = is_hadamard(obj)
    report = {"command": "verify", "kind": "hadamard", "order": obj.order, "hadamard": ok,
              "residual": hadamard_residual(obj)}
    return _emit(report, f"order {obj.order}: {'Hadamard' if ok else 'NOT Hadamard'}",
                 OK if ok else NEGATIVE)


def cmd_dephase(args):
    H = _phase_matrix(args, allow_family=True)
    D, op = dephase(H)
    if args.format == "text":
        sys.stdout.write(formats.format_text(D))
        print(f"dephased matrix of order {D.order}", file=sys.stderr)
        return OK
    return _emit({"command": "dephase", "matrix": formats.to_json_dict(D), "op": op.to_dict()},
                 f"dephased matrix of order {D.order}", OK)


def cmd_info(args):
    H = _phase_matrix(args, allow_family=True)
    report = {"command": "info", "order": H.order}
    if H.param_count:
        report["params"] = list(H.params)
        report["family_hadamard"] = bool(family_is_hadamard(H))
        report["family_dimension"] = family_dimension(H)
        H = H.base_matrix()
    report["hadamard"] = is_hadamard(H)
    lam = haagerup_set(H)
    report["lambda"] = lam.labels()
    report["lambda_exact"] = lam.exact
    rep = defect_report(H)
    report["defect"] = rep["defect"]
    report["defect_method"] = rep["method"]
    D, _ = dephase(H)
    quick = quick_non_dita(D)
    report["dita"] = "not-dita (core has no 1)" if quick == NOT_DITA else "inconclusive"
    summary = (f"order {H.order}, hadamard={report['hadamard']}, |Lambda|={len(lam)}, "
               f"defect={report['defect']}, dita: {report['dita']}")
    return _emit(report, summary, OK)


def cmd_dita(args):
    H = _phase_matrix(args)
    verdict = dita_detect(H, budget=_budget(args), shortcut=not args.no_shortcut, jobs=args.jobs)
    report = {"command": "dita-check", **verdict.to_dict()}
    if verdict.status == "certificate":
        c = verdict.certificate
        summary = f"Diţă structure found: n={c.n}, k={c.k}" + (" (transpose)" if c.transposed else "")
        return _emit(report, summary, OK)
    cases = ", ".join(f"({n},{k})" for n, k in verdict.cases_examined)
    if verdict.status == "budget-exhausted":
        return _emit(report, f"budget exhausted after {verdict.search_nodes} nodes", EXHAUSTED)
    return _emit(report, f"not of Diţă type ({verdict.reason}); cases {cases or 'none'}", NEGATIVE)


def cmd_extension(args):
    ok = no_orthogonal_extension(args.p)
    rows = extension_rows(args.p)
    report = {"command": "extension-check", "p": args.p, "candidates": 2 ** (4 * args.p),
              "rows": rows.tolist(), "no_extension": ok}
    summary = f"p={args.p}: " + ("no +-1 row is orthogonal to all four rows" if ok
                                 else "an orthogonal extension exists")
    return _emit(report, summary, OK if ok else NEGATIVE)


def _family_out(args, F, report, summary):
    if args.out:
        formats.save(F, args.out, args.format)
    report["matrix"] = formats.to_json_dict(F)
    report["dimension"] = family_dimension(F)
    report["text"] = formats.format_text(F)
    return _emit(report, summary, OK)


def cmd_param_real(args):
    H = _phase_matrix(args)
    F = parametrize_real(H)
    return _family_out(args, F, {"command": "param real", "params": list(F.params)},
                       f"{F.param_count}-parameter affine family, verified")


def cmd_param_pair(args):
    H = _phase_matrix(args)
    u, v = sorted(_pair(args.cols))
    if not H.is_dephased():
        raise CliError("param pair needs a dephased matrix; run `dephase` first")
    pattern = next((p for p in find_pair_patterns(H) if (p.u, p.v) == (u, v)), None)
    if pattern is None:
        raise CliError(f"columns {u + 1},{v + 1} are not row-wise equal or opposite")
    F = parametrize_pair(H, pattern, name=args.name)
    report = {"command": "param pair", "columns": [u + 1, v + 1],
              "opposite_rows": [i + 1 for i in pattern.opposite_rows]}
    return _family_out(args, F, report, "one-parameter affine family, verified")


def cmd_conf_gen(args):
    C = paley_conference(args.q)
    report = {"command": "conference gen", "q": args.q, "order": C.order,
              "symmetric": C.is_symmetric(), "skew": C.is_skew(),
              "matrix": formats.conference_to_json_dict(C)}
    if args.hadamard:
        report["hadamard"] = formats.to_json_dict(conference_to_hadamard(C))
    return _emit(report, f"Paley conference matrix of order {C.order}", OK)


def cmd_conf_feasible(args):
    ok, reason = symmetric_conference_order_feasible(args.order)
    return _emit({"command": "conference feasible", "order": args.order, "feasible": ok,
                  "reason": reason}, f"order {args.order}: {reason}", OK if ok else NEGATIVE)


def cmd_conf_hadamard(args):
    obj = _load(args)
    if not isinstance(obj, ConferenceMatrix):
        raise CliError("expected a conference matrix")
    H = conference_to_hadamard(obj)
    if args.dephase:
        H, _ = dephase(H)
    return _emit({"command": "conference hadamard", "matrix": formats.to_json_dict(H),
                  "hadamard": is_hadamard(H)}, f"Hadamard matrix of order {H.order}", OK)


def cmd_conf_param(args):
    obj = _load(args)
    if isinstance(obj, ConferenceMatrix):
        D, _ = dephase(conference_to_hadamard(obj))
    else:
        D = obj
        if D.param_count:
            raise CliError("expected a matrix without parameters")
        hadamard_to_conference(D)  # checks the conference shape
    pairs = None
    if args.pairs:
        pairs = [_pair(p) for p in args.pairs.split(";") if p.strip()]
    steps = []

    def record(step, pair, F):
        steps.append({"step": step, "rows": [pair[0] + 1, pair[1] + 1], "verified": True})
        print(f"step {step}: rows {pair[0] + 1},{pair[1] + 1} verified", file=sys.stderr)

    F = iterative_parametrize(D, pairs, on_step=record)
    report = {"command": "conference param", "steps": steps, "params": list(F.params)}
    return _family_out(args, F, report, f"{F.param_count}-parameter family, every step verified")


def _parse_point(text, count):
    try:
        x = [float(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise CliError(f"cannot parse point {text!r}") from exc
    if len(x) != count:
        raise CliError(f"expected {count} values, got {len(x)}")
    return x


def cmd_family(args):
    F = _load(args)
    if isinstance(F, ConferenceMatrix):
        raise CliError("expected an affine family")
    if args.action == "check":
        check = family_is_hadamard(F)
        report = {"command": "family check", "params": list(F.params), "hadamard": bool(check),
                  "failing_rows": [r + 1 for r in check.rows] if check.rows else None,
                  "coeffs": list(check.coeffs) if check.coeffs else None}
        summary = "Hadamard for all parameter values" if check else \
            f"not Hadamard: rows {[r + 1 for r in check.rows]}"
        return _emit(report, summary, OK if check else NEGATIVE)
    if args.action == "dim":
        d = family_dimension(F)
        return _emit({"command": "family dim", "params": list(F.params), "dimension": d},
                     f"dimension {d}", OK)
    x = _parse_point(args.at or "", F.param_count)
    M = np.asarray(F.to_complex(x))
    n = F.order
    residual = float(np.abs(M @ M.conj().T - n * np.eye(n)).max())
    ok = residual < 1e-9
    report = {"command": "family eval", "at": x, "residual": residual, "hadamard": ok,
              "matrix": [[[z.real, z.imag] for z in row] for row in M.tolist()]}
    return _emit(report, f"residual {residual:.3g}", OK if ok else NEGATIVE)


def cmd_catalogue(args):
    if args.action == "list":
        entries = catalogue.list_entries()
        report = {"command": "catalogue list",
                  "entries": [{"id": i, "kind": catalogue.get(i).kind, "provenance": p}
                              for i, p in entries]}
        return _emit(report, f"{len(entries)} entries (plus F<N> for any N)", OK)
    if not args.id:
        raise CliError("catalogue get needs an id")
    entry = catalogue.get(args.id)
    sys.stdout.write(formats.dumps(entry.object, args.format).rstrip("\n") + "\n")
    print(f"{entry.id}: {entry.provenance}", file=sys.stderr)
    return OK


# ----------------------------------------------------------------- parser

def _add_input(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--in", dest="input", metavar="PATH", help="matrix file (JSON or text)")
    g.add_argument("--catalogue", metavar="ID", help="catalogue id, e.g. H12, D10_3, F6")


def build_parser():
    parser = argparse.ArgumentParser(prog="chadamard",
                                     description="Exact tools for complex Hadamard matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check the Hadamard (or family) property exactly")
    _add_input(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dephase", help="dephase a matrix")
    _add_input(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_dephase)

    p = sub.add_parser("info", help="Hadamard check, Lambda set, defect, quick Diţă test")
    _add_input(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("dita-check", help="exhaustive search for Diţă structure")
    _add_input(p)
    p.add_argument("--budget", type=int, default=None,
                   help=f"node budget per case (default ${BUDGET_ENV} or {DEFAULT_BUDGET})")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the cases")
    p.add_argument("--no-shortcut", action="store_true", help="skip the core-has-no-1 test")
    p.set_defaults(func=cmd_dita)

    p = sub.add_parser("lemma-l", aliases=["extension-check"],
                       help="brute-force check that the four block rows have no orthogonal +-1 extension")
    p.add_argument("--p", type=int, required=True, help="odd p with 3 <= p <= 5")
    p.set_defaults(func=cmd_extension)

    param = sub.add_parser("param", help="affine families from equal/opposite column pairs")
    psub = param.add_subparsers(dest="mode", required=True)
    for name, func in (("real", cmd_param_real), ("pair", cmd_param_pair)):
        p = psub.add_parser(name)
        _add_input(p)
        p.add_argument("--out", metavar="PATH", help="also write the family to a file")
        p.add_argument("--format", choices=("json", "text"), default="json")
        if name == "pair":
            p.add_argument("--cols", required=True, help="column pair u,v (1-based)")
            p.add_argument("--name", default="t", help="parameter name")
        p.set_defaults(func=func)

    conf = sub.add_parser("conference", help="conference matrices and their families")
    csub = conf.add_subparsers(dest="mode", required=True)
    p = csub.add_parser("gen", help="Paley conference matrix for an odd prime q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--hadamard", action="store_true", help="also report I + iC (or I - C)")
    p.set_defaults(func=cmd_conf_gen)
    p = csub.add_parser("feasible", help="necessary condition for symmetric conference orders")
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_conf_feasible)
    p = csub.add_parser("hadamard", help="I + iC (symmetric) or I - C (skew)")
    _add_input(p)
    p.add_argument("--dephase", action="store_true")
    p.set_defaults(func=cmd_conf_hadamard)
    p = csub.add_parser("param", help="iterative parametrization over suitable row pairs")
    _add_input(p)
    p.add_argument("--pairs", help='row pairs, 1-based, e.g. "2,10;3,9;5,7" (default: greedy)')
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_conf_param)

    p = sub.add_parser("family", help="affine family tools")
    p.add_argument("action", choices=("check", "eval", "dim"))
    _add_input(p)
    p.add_argument("--at", help="comma separated parameter values for eval")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("catalogue", help="built-in matrices and families")
    p.add_argument("action", choices=("get", "list"))
    p.add_argument("id", nargs="?")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_catalogue)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        raise
    except (CliError, VerificationError, ValueError, KeyError, TypeError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": type(exc).__name__,
                          "message": msg}))
        print(f"error: {msg}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
