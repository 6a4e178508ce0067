"""Command-line front end: ``strata <subcommand> ...``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import geomkit, lemmalab, polycore, stratlat
from .geomkit import RootConfiguration, StratumPoint

DEGREE_CAP = 10
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers

def derive_seed(seed: int, *keys: int) -> int:
    """Independent 32-bit child seed for (seed, keys); stable across runs."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1)[0])


def parse_mv(text: str) -> tuple:
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    if not body.strip():
        return ()
    try:
        return tuple(int(p) for p in body.split(","))
    except ValueError:
        raise UsageError(f"bad multiplicity vector {text!r}") from None


def check_degree(n: int, cap: int):
    if not 1 <= n <= cap:
        raise UsageError(f"degree {n} outside 1..{cap}")


def mv_record(p: polycore.MonicPolynomial) -> dict:
    mv = polycore.multiplicity_vector(p)
    n = p.degree
    return {"mv": list(mv.parts), "l": mv.length, "q": mv.groups, "surplus": mv.surplus,
            "codim": mv.surplus, "pairs": mv.pairs(n), "degree": n}


def mv_text(rec: dict) -> str:
    return "[{}] l={} q={} surplus={} codim={} pairs={}".format(
        ",".join(map(str, rec["mv"])), rec["l"], rec["q"], rec["surplus"], rec["codim"], rec["pairs"])


def _num(v):
    return geomkit._num(v)


# ---------------------------------------------------------------------------
# subcommands

def cmd_mv(args) -> tuple:
    try:
        p = polycore.parse_poly(args.poly)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rec = mv_record(p)
    if args.format == "json":
        return json.dumps(rec) + "\n", EXIT_OK
    return mv_text(rec) + "\n", EXIT_OK


def cmd_poset(args) -> tuple:
    check_degree(args.n, args.cap)
    poset = stratlat.build_poset(args.n)
    if args.format == "dot":
        return poset.to_dot(), EXIT_OK
    return poset.to_json(), EXIT_OK


def _stratum(args) -> stratlat.Stratum:
    check_degree(args.n, args.cap)
    try:
        return stratlat.validate_mv(parse_mv(args.mv), args.n)
    except stratlat.MVError as exc:
        raise UsageError(str(exc)) from None


def cmd_sample(args) -> tuple:
    stratum = _stratum(args)
    lines = []
    for k in range(args.count):
        try:
            pt = geomkit.sample_stratum(stratum, derive_seed(args.seed, k), box=(args.lo, args.hi),
                                        separation=args.separation, exact=not args.float)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if pt.config.is_rational:
            back = polycore.multiplicity_vector(polycore.MonicPolynomial(pt.a))
            if back.parts != stratum.parts:
                raise RuntimeError(f"round-trip gave {back} for a point of {stratum}")
        lines.append(json.dumps(pt.to_json()))
    return "\n".join(lines) + ("\n" if lines else ""), EXIT_OK


def cmd_tangent(args) -> tuple:
    try:
        raw = sys.stdin.read() if args.point == "-" else (
            open(args.point).read() if os.path.exists(args.point) else args.point)
        pt = StratumPoint.from_json(json.loads(raw))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"invalid point: {exc}") from None
    frame = geomkit.tangent_frame(pt)
    doc = frame.to_json()
    doc["diagnostics"] = frame.diagnostics
    return json.dumps(doc) + "\n", EXIT_OK


THEOREM = "theorem"


def _theorem_rows(n, seeds, samples, seed, tol):
    rows = []
    for si, stratum in enumerate(stratlat.enumerate_mvs(n)):
        for k in range(seeds * samples):
            pt = geomkit.sample_stratum(stratum, derive_seed(seed, n, si, k))
            rec = geomkit.theorem_check(pt)
            ok = rec["rank_sigma_min"] > 1e-9 and rec["margin"] > 1e-8 and rec["fd_rel_error"] <= tol
            rows.append({"check": THEOREM, "stratum": str(stratum), "sample": k,
                         "verdict": "PASS" if ok else "FAIL", **rec})
    return rows


def _lemma_rows(n, which, seeds, seed, tol):
    rows = []
    for si, stratum in enumerate(lemmalab.eligible_strata(n)):
        for k in range(seeds):
            setup = lemmalab.section_setup(stratum, derive_seed(seed, n, si, k))
            reps = lemmalab.verify_all(setup, which, tol_eq=tol, tol_neq=tol)
            for name, rep in reps.items():
                rows.append({"check": name, "stratum": str(stratum), "sample": k,
                             "verdict": rep.verdict, "margins": rep.margins, "note": rep.note})
    return rows


def cmd_verify(args) -> tuple:
    check_degree(args.n, args.cap)
    which = list(lemmalab.LEMMAS) + [THEOREM] if args.which == "all" else [args.which]
    t0 = time.perf_counter()
    rows = []
    if THEOREM in which:
        rows += _theorem_rows(args.n, args.seeds, args.samples, args.seed, args.tol)
    lemmas = [w for w in which if w != THEOREM]
    if lemmas:
        rows += _lemma_rows(args.n, lemmas, args.seeds, args.seed, args.tol)
    failed = [r for r in rows if r["verdict"] != "PASS"]
    code = EXIT_FAIL if failed else EXIT_OK
    summary = {"n": args.n, "checks": which, "total": len(rows), "failed": len(failed),
               "verdict": "FAIL" if failed else "PASS", "seconds": round(time.perf_counter() - t0, 3)}
    if args.format == "json":
        return json.dumps({"summary": summary, "results": rows}, default=float) + "\n", code
    out = [f"{r['verdict']} {r['check']} {r['stratum']} sample={r['sample']}" for r in rows]
    out.append(f"{summary['verdict']} n={args.n} checks={','.join(which)} "
               f"total={summary['total']} failed={summary['failed']}")
    return "\n".join(out) + "\n", code


# swallowtail ---------------------------------------------------------------

FACES = {(2,): "S", (2, 1, 1): "ABO", (1, 1, 2): "ACO", (1, 2, 1): "BCO",
         (3, 1): "BO", (1, 3): "CO", (2, 2): "AO", (4,): "O", (): "OD"}


def _grid(lo, hi, k):
    return [Fraction(lo) + (Fraction(hi) - Fraction(lo)) * i / (k - 1) for i in range(k)]


def swallowtail_points(resolution: int) -> list:
    """Parameterized points of the discriminant surface for n = 4, a_1 = 0.

    Main sheet: P = (x - t)^2 (x^2 + 2 t x + c).  Special values c = t^2
    (two double roots) and c = -3 t^2 (a triple root) trace the edges; the
    curve (x^2 + b^2)^2 is added separately.
    """
    if resolution < 2:
        raise UsageError("resolution must be at least 2")
    ts = _grid(-1, 1, resolution)
    cs = _grid(-3, 3, resolution)
    params = []
    for t in ts:
        for c in cs:
            params.append(("sheet", t, c))
        if t != 0:
            params.append(("sheet", t, t * t))
            params.append(("sheet", t, -3 * t * t))
    params.append(("sheet", Fraction(0), Fraction(0)))
    for b in _grid(0, 1, resolution)[1:]:
        params.append(("od", b, None))
    seen = set()
    out = []
    for kind, t, c in params:
        if kind == "sheet":
            p = polycore.mul(polycore.power((Fraction(1), -t), 2), (Fraction(1), 2 * t, c))
        else:
            p = polycore.power((Fraction(1), Fraction(0), t * t), 2)
        if p in seen:
            continue
        seen.add(p)
        mv = polycore.multiplicity_vector(p).parts
        res = polycore.resultant(p, polycore.derivative(p))
        out.append({"family": kind, "t": t if kind == "sheet" else None, "c": c,
                    "b": t if kind == "od" else None,
                    "a2": p[2], "a3": p[3], "a4": p[4], "mv": list(mv),
                    "face": FACES.get(mv, "?"), "res_zero": res == 0})
    return out


def cmd_swallowtail(args) -> tuple:
    pts = swallowtail_points(args.resolution)
    if args.format == "json":
        doc = [{k: (_num(v) if isinstance(v, Fraction) else v) for k, v in r.items()} for r in pts]
        return json.dumps(doc) + "\n", EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ["family", "t", "c", "b", "a2", "a3", "a4", "mv", "face", "res_zero"]
    w.writerow(cols)
    for r in pts:
        row = []
        for k in cols:
            v = r[k]
            if k == "mv":
                v = "[" + ",".join(map(str, v)) + "]"
            elif v is None:
                v = ""
            elif isinstance(v, Fraction):
                v = str(v)
            row.append(v)
        w.writerow(row)
    return buf.getvalue(), EXIT_OK


# ---------------------------------------------------------------------------

def _default_seed() -> int:
    env = os.environ.get("STRATA_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"STRATA_SEED must be an integer, got {env!r}") from None


def build_parser() -> argparse.ArgumentParser:
    def flags(suppress):
        # global flags are accepted before or after the subcommand
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--seed", type=int, default=d(None), help="RNG seed (fallback: $STRATA_SEED, then 0)")
        g.add_argument("--tol", type=float, default=d(1e-6), help="verification tolerance")
        g.add_argument("--format", choices=["json", "dot", "csv", "text"], default=d(None))
        g.add_argument("--out", default=d(None), help="write output to this path")
        g.add_argument("--cap", type=int, default=d(DEGREE_CAP), help="maximum degree")
        return g

    common = flags(True)
    ap = argparse.ArgumentParser(prog="strata", parents=[flags(False)],
                                 description="Multiplicity-vector strata of real monic polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mv", parents=[common], help="multiplicity vector of a polynomial")
    p.add_argument("poly", help='degree-descending coefficients incl. the leading 1, e.g. "1,0,-2,0,1"')
    p.set_defaults(func=cmd_mv, fmt="text")

    p = sub.add_parser("poset", parents=[common], help="stratum poset as JSON or DOT")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_poset, fmt="json")

    p = sub.add_parser("sample", parents=[common], help="random points of a stratum (JSON lines)")
    p.add_argument("mv", help='e.g. "[2,1]" or "2,1"; "[]" for no real roots')
    p.add_argument("n", type=int)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--lo", type=float, default=-2.0)
    p.add_argument("--hi", type=float, default=2.0)
    p.add_argument("--separation", type=float, default=0.2)
    p.add_argument("--float", action="store_true", help="float roots instead of a rational grid")
    p.set_defaults(func=cmd_sample, fmt="json")

    p = sub.add_parser("tangent", parents=[common], help="tangent frame at a point (JSON)")
    p.add_argument("point", help="point JSON, a file holding it, or - for stdin")
    p.set_defaults(func=cmd_tangent, fmt="json")

    p = sub.add_parser("verify", parents=[common], help="run the verification harness")
    p.add_argument("n", type=int)
    p.add_argument("which", nargs="?", default="all", choices=[THEOREM, *lemmalab.LEMMAS, "all"])
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--samples", type=int, default=1, help="theorem samples per seed")
    p.set_defaults(func=cmd_verify, fmt="text")

    p = sub.add_parser("swallowtail", parents=[common], help="n=4 discriminant surface mesh")
    p.add_argument("--resolution", type=int, default=9)
    p.set_defaults(func=cmd_swallowtail, fmt="csv")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        if args.seed < 0:
            raise UsageError("seed must be non-negative")
        args.format = args.format or args.fmt
        text, code = args.func(args)
    except UsageError as exc:
        print(f"strata: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
