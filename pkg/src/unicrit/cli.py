"""Command-line front end.

Every JSON report has the keys ``inputs``, ``result``, ``certified`` and
``flags``.  Output is sorted and contains no timing or parallelism details,
so identical inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from . import adelic, arch, exact_core, harness, nonarch
from .config import FORMATS, RunConfig
from .errors import UnicritError
from .exact_core import parse_decimal, parse_rational

EXIT_OK, EXIT_ERROR, EXIT_VIOLATED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rat(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _dec(text: str) -> Fraction:
    try:
        return parse_decimal(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a decimal or rational: {text!r}") from exc


def _values(text: str) -> list[Fraction]:
    return [_rat(v) for v in text.split(",") if v.strip()]


def report(inputs: dict, result, certified: bool, flags=()) -> dict:
    return {"inputs": inputs, "result": result, "certified": bool(certified), "flags": list(flags)}


# ---------------------------------------------------------------- commands


def cmd_iterate(ns, cfg):
    if ns.m is not None:
        poly = exact_core.preperiodic_poly(ns.a, ns.d, ns.m, ns.n, cfg.degree_cap)
        inputs = {"a": str(ns.a), "d": ns.d, "m": ns.m, "n": ns.n}
    else:
        poly = exact_core.iterate_poly(ns.a, ns.d, ns.n, cfg.degree_cap)
        inputs = {"a": str(ns.a), "d": ns.d, "n": ns.n}
    result = {"poly": str(poly), "degree": poly.degree, "coeffs": poly.to_json()}
    return report(inputs, result, True)


def cmd_find_sab(ns, cfg):
    S = exact_core.find_common_preperiodic(ns.a, ns.b, ns.d, ns.M, cfg.degree_cap)
    inputs = {"a": str(ns.a), "b": str(ns.b), "d": ns.d, "M": ns.M}
    return report(inputs, S.to_json(), True, ["total_count:lower_bound"])


def cmd_green(ns, cfg):
    if ns.prime is not None:
        det = nonarch.green_nonarch_detail(ns.a, ns.d, ns.prime, ns.t, min(cfg.nmax, 512))
        inputs = {"a": str(ns.a), "d": ns.d, "p": ns.prime, "t": str(ns.t)}
        return report(inputs, det.to_json(), True, [f"method:{det.method}"])
    t = (ns.t, ns.im) if ns.im else ns.t
    det = arch.green_arch_detail(ns.a, ns.d, t, cfg.tol, cfg.precision, cfg.nmax)
    inputs = {"a": str(ns.a), "d": ns.d, "t_re": str(ns.t), "t_im": str(ns.im or 0)}
    result = {"green": det.value.to_json(), "status": det.status, "steps": det.steps}
    return report(inputs, result, True, [f"status:{det.status}"])


def cmd_cover_check(ns, cfg):
    if ns.d == 2:
        rep = arch.cover_check_d2(ns.a, ns.n, cfg.precision)
    else:
        rep = arch.cover_check_dgt2(ns.a, ns.d, ns.n, cfg.precision)
    inputs = {"a": str(ns.a), "d": ns.d, "n_test": ns.n}
    return report(inputs, rep.to_json(), rep.passed, [] if rep.passed else ["counterexamples"])


def cmd_newton(ns, cfg):
    rep = nonarch.newton_root_structure(ns.a, ns.d, ns.p, ns.n, degree_cap=cfg.degree_cap)
    inputs = {"a": str(ns.a), "d": ns.d, "p": ns.p, "n": ns.n}
    flags = [] if rep.spacing_ok is not None else ["spacing:unchecked"]
    return report(inputs, rep.to_json(), rep.valuations_ok and rep.spacing_ok is not False, flags)


def cmd_height(ns, cfg):
    h = adelic.weil_height_pair(ns.a, ns.b)
    return report({"a": str(ns.a), "b": str(ns.b)}, h.to_json(), True)


def cmd_pairing(ns, cfg):
    rep = adelic.pairing_global(ns.a, ns.b, ns.d, ns.n_arch, cfg.tol, cfg.precision, ns.root_set)
    inputs = {"a": str(ns.a), "b": str(ns.b), "d": ns.d, "n_arch": rep.arch_term.n, "root_set": ns.root_set}
    return report(inputs, rep.to_json(), False, rep.flags)


def _random_pairs(k: int, seed: int, d: int) -> list[tuple[Fraction, Fraction]]:
    rng = random.Random(seed)
    out = []
    while len(out) < k:
        a = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        b = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        if a**d != b**d:
            out.append((a, b))
    return out


def _pairs(ns, cfg) -> list:
    if ns.grid is not None:
        return harness.grid_pairs(ns.grid, ns.d)
    if ns.random is not None:
        return _random_pairs(ns.random, cfg.seed, ns.d)
    if ns.a is None or ns.b is None:
        raise UsageError("give a and b, or --grid, or --random")
    return [(ns.a, ns.b)]


def cmd_verify(ns, cfg):
    kwargs = {"tol": cfg.tol, "precision": cfg.precision}
    if ns.theorem == "thm1.2":
        kwargs.update(eps=ns.eps, M=ns.M)
    pairs = _pairs(ns, cfg)
    verdicts = harness.verify_grid(ns.theorem, pairs, ns.d, cfg.jobs, **kwargs)
    rows = [v.to_json() for v in verdicts]
    counts = {k: sum(v.verdict == k for v in verdicts) for k in harness.VERDICTS}
    inputs = {"theorem": ns.theorem, "d": ns.d, "pairs": [[str(a), str(b)] for a, b in pairs]}
    if ns.theorem == "thm1.2":
        inputs.update(eps=str(ns.eps), M=ns.M)
    result = rows[0] if len(rows) == 1 and ns.grid is None and ns.random is None else {
        "verdicts": rows, "counts": counts}
    flags = ["violated"] if counts["violated"] else []
    return report(inputs, result, all(v.certified for v in verdicts), flags)


def cmd_explore(ns, cfg):
    pairs = _pairs(ns, cfg)
    res = harness.explore_thm_1_4(ns.d, pairs, cfg.jobs, tol=cfg.tol, precision=cfg.precision)
    inputs = {"theorem": ns.theorem, "d": ns.d, "pairs": [[str(a), str(b)] for a, b in pairs]}
    return report(inputs, res.to_json(), False, ["exploratory"])


def cmd_bound_cd(ns, cfg):
    res = harness.bound_C_d(ns.d, ns.eps, ns.delta)
    return report({"d": ns.d, "eps": str(ns.eps), "delta": str(ns.delta)}, res.to_json(), True,
                  ["conditional"])


def _green_row(args):
    a, d, re, im, tol, prec, nmax = args
    g = arch.green_arch(a, d, (re, im), tol, prec, nmax)
    return [float(re), float(im), g.mid, g.lo, g.hi]


def cmd_grid_green(ns, cfg):
    re0, re1, im0, im1 = ns.window
    if ns.step <= 0 or re1 < re0 or im1 < im0:
        raise UsageError("need a nonempty window and a positive step")
    work = []
    im = im0
    while im <= im1:
        re = re0
        while re <= re1:
            work.append((ns.a, ns.d, re, im, cfg.tol, cfg.precision, cfg.nmax))
            re += ns.step
        im += ns.step
    rows = harness.map_ordered(_green_row, work, cfg.jobs)
    inputs = {"a": str(ns.a), "d": ns.d, "window": [str(x) for x in ns.window], "step": str(ns.step)}
    return report(inputs, {"columns": ["re", "im", "g", "g_lo", "g_hi"], "rows": rows}, True)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=int)
    common.add_argument("--nmax", type=int)
    common.add_argument("--degree-cap", type=int, dest="degree_cap")
    common.add_argument("--tol", type=float)
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--jobs", type=int)
    common.add_argument("--seed", type=int)

    p = _Parser(prog="unicrit", description="Arithmetic dynamics of z^d + t with certified numerics.",
                parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("iterate", parents=[common], help="print f_T^n(a), or f_T^m(a) - f_T^n(a) with --m")
    s.add_argument("a", type=_rat)
    s.add_argument("d", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--m", type=int)
    s.set_defaults(func=cmd_iterate)

    s = sub.add_parser("find-sab", parents=[common], help="bounded search for common preperiodic parameters")
    for name in ("a", "b"):
        s.add_argument(name, type=_rat)
    s.add_argument("d", type=int)
    s.add_argument("M", type=int)
    s.set_defaults(func=cmd_find_sab)

    s = sub.add_parser("green", parents=[common], help="Green's function at infinity or at a prime")
    place = s.add_mutually_exclusive_group(required=True)
    place.add_argument("--arch", action="store_true")
    place.add_argument("--prime", type=int)
    s.add_argument("a", type=_rat)
    s.add_argument("d", type=int)
    s.add_argument("t", type=_dec)
    s.add_argument("--im", type=_dec, help="imaginary part of t (archimedean only)")
    s.set_defaults(func=cmd_green)

    s = sub.add_parser("cover-check", parents=[common], help="check the disk covers of M_a")
    s.add_argument("a", type=_rat)
    s.add_argument("d", type=int)
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_cover_check)

    s = sub.add_parser("newton", parents=[common], help="p-adic root valuations and spacing of f_T^n(a)")
    s.add_argument("a", type=_rat)
    s.add_argument("d", type=int)
    s.add_argument("p", type=int)
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_newton)

    s = sub.add_parser("height", parents=[common], help="Weil height h(a, b)")
    s.add_argument("a", type=_rat)
    s.add_argument("b", type=_rat)
    s.set_defaults(func=cmd_height)

    s = sub.add_parser("pairing", parents=[common], help="global pairing report")
    s.add_argument("a", type=_rat)
    s.add_argument("b", type=_rat)
    s.add_argument("d", type=int)
    s.add_argument("--n-arch", type=int, dest="n_arch")
    s.add_argument("--root-set", choices=arch.ROOT_SETS, default="iterate", dest="root_set")
    s.set_defaults(func=cmd_pairing)

    s = sub.add_parser("verify", parents=[common], help="check an inequality on inputs or a grid")
    s.add_argument("theorem", choices=harness.THEOREMS)
    s.add_argument("a", type=_rat, nargs="?")
    s.add_argument("b", type=_rat, nargs="?")
    s.add_argument("d_pos", type=int, nargs="?", metavar="d")
    s.add_argument("--d", type=int, dest="d_opt")
    s.add_argument("--grid", type=_values)
    s.add_argument("--random", type=int, help="number of random pairs drawn with --seed")
    s.add_argument("--eps", type=_rat, default=Fraction(1))
    s.add_argument("--M", type=int, default=3)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("explore", parents=[common], help="minimum certified pairing lower bound over a grid")
    s.add_argument("theorem", choices=["thm1.4"])
    s.add_argument("--grid", type=_values)
    s.add_argument("--random", type=int)
    s.add_argument("--d", type=int, dest="d_opt", default=2)
    s.set_defaults(func=cmd_explore, a=None, b=None, d_pos=None)

    s = sub.add_parser("bound-cd", parents=[common], help="conditional uniform bound C(d)")
    s.add_argument("d", type=int)
    s.add_argument("eps", type=_dec)
    s.add_argument("delta", type=_dec)
    s.set_defaults(func=cmd_bound_cd)

    s = sub.add_parser("grid-green", parents=[common], help="CSV of Green values on a window")
    s.add_argument("a", type=_rat)
    s.add_argument("d", type=int)
    s.add_argument("--window", type=_dec, nargs=4, required=True, metavar=("RE0", "RE1", "IM0", "IM1"))
    s.add_argument("--step", type=_dec, required=True)
    s.set_defaults(func=cmd_grid_green, format_default="csv")
    return p


# ---------------------------------------------------------------- output


def _flatten(prefix: str, obj, out: list) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, obj))


def render(rep: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep, sort_keys=True, indent=2)
    buf = io.StringIO()
    result = rep["result"]
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        if isinstance(result, dict) and "columns" in result:
            w.writerow(result["columns"])
            w.writerows([[repr(x) if isinstance(x, float) else x for x in row] for row in result["rows"]])
        else:
            w.writerow(["key", "value"])
            pairs = []
            _flatten("", rep, pairs)
            w.writerows([[k, repr(v) if isinstance(v, float) else v] for k, v in pairs])
        return buf.getvalue().rstrip("\n")
    pairs = []
    _flatten("", rep, pairs)
    return "\n".join(f"{k} = {v}" for k, v in pairs)


def _has_violation(rep: dict) -> bool:
    return "violated" in rep.get("flags", ())


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if getattr(ns, "func", None) in (cmd_verify, cmd_explore):
            ns.d = ns.d_opt if ns.d_opt is not None else ns.d_pos
            if ns.d is None:
                raise UsageError("missing d")
        fmt = ns.format or getattr(ns, "format_default", None)
        cfg = RunConfig.from_env(precision=ns.precision, nmax=ns.nmax, degree_cap=ns.degree_cap,
                                 tol=ns.tol, format=fmt, jobs=ns.jobs, seed=ns.seed)
        rep = ns.func(ns, cfg)
        rep["inputs"]["config"] = cfg.public()
        print(render(rep, cfg.format))
        return EXIT_VIOLATED if _has_violation(rep) else EXIT_OK
    except UsageError as exc:
        print(f"unicrit: usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (UnicritError, ValueError, ArithmeticError) as exc:
        print(f"unicrit: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
