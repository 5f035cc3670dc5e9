"""Check the pairing inequalities on concrete inputs.

A verdict is "verified" or "violated" only when it follows from certified
enclosures.  The archimedean estimator can only make a verdict
"consistent" or "inconclusive".
"""

from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .adelic import PairingReport, pairing_global, weil_height_pair, weil_height_single
from .arch import DEFAULT_PRECISION, DEFAULT_TOL
from .errors import PreconditionError, SymmetricInputsError
from .exact_core import PreperiodicParameterSet, as_rational, find_common_preperiodic
from .intervals import GreenValue, frac_down, frac_up

VERDICTS = ("verified", "consistent", "violated", "inconclusive")
THEOREMS = ("thm1.2", "thm1.3", "thm4.13")


@dataclass
class TheoremVerdict:
    theorem: str
    inputs: dict
    estimate: GreenValue
    certified_lhs: GreenValue
    rhs: GreenValue
    verdict: str
    notes: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.verdict in ("verified", "violated")

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "inputs": self.inputs,
            "estimate": self.estimate.to_json(),
            "certified_lhs": self.certified_lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


@functools.lru_cache(maxsize=256)
def _cached_pairing(a: Fraction, b: Fraction, d: int, n_arch, tol: float, precision: int) -> PairingReport:
    return pairing_global(a, b, d, n_arch, tol, precision)


def _affine_log(coef: Fraction, h, shift: Fraction) -> GreenValue:
    """Outward enclosure of coef * (h + shift) for an exact height h."""
    lo, hi = h.interval.lo, h.interval.hi
    if coef >= 0:
        return GreenValue(frac_down(coef * (Fraction(lo) + shift)), frac_up(coef * (Fraction(hi) + shift)))
    return GreenValue(frac_down(coef * (Fraction(hi) + shift)), frac_up(coef * (Fraction(lo) + shift)))


def _lower_verdict(est: GreenValue, cert: GreenValue, rhs: GreenValue) -> str:
    if cert.lo >= rhs.hi:
        return "verified"
    if cert.hi < rhs.lo:
        return "violated"
    return "consistent" if est.hi >= rhs.lo else "inconclusive"


def _upper_verdict(est: GreenValue, cert: GreenValue, rhs: GreenValue) -> str:
    if cert.hi <= rhs.lo:
        return "verified"
    if cert.lo > rhs.hi:
        return "violated"
    return "consistent" if est.lo <= rhs.hi else "inconclusive"


def _prepare(a, b, d):
    a, b = as_rational(a), as_rational(b)
    if d < 2:
        raise PreconditionError("d must be >= 2")
    if a**d == b**d:
        raise SymmetricInputsError(a, b, d)
    return a, b


def _inputs(a, b, d, **extra) -> dict:
    out = {"a": str(a), "b": str(b), "d": d}
    out.update({k: str(v) if isinstance(v, Fraction) else v for k, v in extra.items()})
    return out


def verify_thm_1_2(a, b, d: int, eps, S: PreperiodicParameterSet | None = None, M: int = 3,
                   n_arch: int | None = None, tol: float = DEFAULT_TOL,
                   precision: int = DEFAULT_PRECISION) -> TheoremVerdict:
    """Upper bound (eps + (8d/eps - 2)/|S|)(h(a,b) + 5) with |S| from the bounded search."""
    a, b = _prepare(a, b, d)
    eps = as_rational(eps)
    if not 0 < eps < 4 * d:
        raise PreconditionError(f"eps must satisfy 0 < eps < 4d = {4 * d}")
    if S is None:
        S = find_common_preperiodic(a, b, d, M)
    if S.total_count < 1:
        raise PreconditionError("the parameter set is empty")
    coef = eps + (8 * d / eps - 2) / S.total_count
    h = weil_height_pair(a, b)
    rhs = _affine_log(coef, h, Fraction(5))
    rep = _cached_pairing(a, b, d, n_arch, tol, precision)
    verdict = _upper_verdict(rep.total, rep.certified_total, rhs)
    notes = [f"|S| taken as the certified lower count {S.total_count}"]
    if verdict == "verified":
        notes.append("certified upper bound on the pairing is below the right-hand side")
    return TheoremVerdict("thm1.2", _inputs(a, b, d, eps=eps, S_count=S.total_count, M=S.index_bound),
                          rep.total, rep.certified_total, rhs, verdict, notes)


def verify_thm_1_3(a, b, d: int, n_arch: int | None = None, tol: float = DEFAULT_TOL,
                   precision: int = DEFAULT_PRECISION) -> TheoremVerdict:
    """Lower bound h(a,b)/(12 d^2) - 1."""
    a, b = _prepare(a, b, d)
    h = weil_height_pair(a, b)
    rhs = _affine_log(Fraction(1, 12 * d * d), h, Fraction(-12 * d * d, 1))
    rep = _cached_pairing(a, b, d, n_arch, tol, precision)
    verdict = _lower_verdict(rep.total, rep.certified_total, rhs)
    return TheoremVerdict("thm1.3", _inputs(a, b, d, h=h.exact_str()), rep.total, rep.certified_total,
                          rhs, verdict, [])


def verify_thm_4_13(a, b, d: int, n_arch: int | None = None, tol: float = DEFAULT_TOL,
                    precision: int = DEFAULT_PRECISION) -> TheoremVerdict:
    """Lower bound h(a^d - b^d)/d^3 - 2."""
    a, b = _prepare(a, b, d)
    h = weil_height_single(a**d - b**d)
    rhs = _affine_log(Fraction(1, d**3), h, Fraction(-2 * d**3, 1))
    rep = _cached_pairing(a, b, d, n_arch, tol, precision)
    verdict = _lower_verdict(rep.total, rep.certified_total, rhs)
    return TheoremVerdict("thm4.13", _inputs(a, b, d, h=h.exact_str()), rep.total, rep.certified_total,
                          rhs, verdict, [])


VERIFIERS = {"thm1.2": verify_thm_1_2, "thm1.3": verify_thm_1_3, "thm4.13": verify_thm_4_13}


def grid_pairs(values, d: int) -> list[tuple[Fraction, Fraction]]:
    """Ordered pairs from a value list, skipping those with a^d == b^d."""
    vals = [as_rational(v) for v in values]
    return [(a, b) for a in vals for b in vals if a**d != b**d]


def _run_one(args):
    theorem, a, b, d, kwargs = args
    return VERIFIERS[theorem](a, b, d, **kwargs)


def map_ordered(fn, items, jobs: int = 1) -> list:
    """Apply fn to items, in parallel when jobs > 1, keeping input order."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=1))


def verify_grid(theorem: str, pairs, d: int, jobs: int = 1, **kwargs) -> list[TheoremVerdict]:
    if theorem not in VERIFIERS:
        raise PreconditionError(f"unknown theorem {theorem!r}")
    work = [(theorem, a, b, d, kwargs) for a, b in pairs]
    return map_ordered(_run_one, work, jobs)


@dataclass
class ExplorationResult:
    d: int
    minimum: float
    argmin: tuple
    rows: list

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "min_certified_lower_bound": self.minimum,
            "argmin": [str(x) for x in self.argmin],
            "rows": self.rows,
        }


def _explore_one(args):
    a, b, d, kwargs = args
    rep = pairing_global(a, b, d, **kwargs)
    return {
        "a": str(a), "b": str(b),
        "certified_lo": rep.certified_total.lo,
        "estimate_lo": rep.total.lo,
        "estimate_hi": rep.total.hi,
    }


def explore_thm_1_4(d: int, pairs, jobs: int = 1, **kwargs) -> ExplorationResult:
    """Minimum certified lower bound of the pairing over a grid; exploratory only."""
    pairs = list(pairs)
    if not pairs:
        raise PreconditionError("empty grid")
    for a, b in pairs:
        _prepare(a, b, d)
    rows = map_ordered(_explore_one, [(as_rational(a), as_rational(b), d, kwargs) for a, b in pairs], jobs)
    best = min(range(len(rows)), key=lambda i: (rows[i]["certified_lo"], i))
    return ExplorationResult(d, rows[best]["certified_lo"], (rows[best]["a"], rows[best]["b"]), rows)


@dataclass(frozen=True)
class BoundCd:
    d: int
    eps: Fraction
    delta: Fraction
    value: Fraction

    @property
    def label(self) -> str:
        return f"conditional on delta(d) >= {self.delta}"

    def to_json(self) -> dict:
        return {"bound": float(self.value), "exact": str(self.value), "label": self.label,
                "d": self.d, "eps": str(self.eps), "delta": str(self.delta)}


C2 = Fraction(1)
C4 = Fraction(5)


def c1(d: int) -> Fraction:
    return Fraction(1, 12 * d * d)


def c3(d: int, eps: Fraction) -> Fraction:
    return 8 * d / eps - 2


def bound_C_d(d: int, eps, delta) -> BoundCd:
    """c3(eps) / (c1 delta / (c1 c4 + c2 + delta) - eps), exactly."""
    eps, delta = as_rational(eps), as_rational(delta)
    if d < 2:
        raise PreconditionError("d must be >= 2")
    if eps <= 0 or delta <= 0:
        raise PreconditionError("eps and delta must be positive")
    k = c1(d)
    den = k * delta / (k * C4 + C2 + delta) - eps
    if den <= 0:
        raise PreconditionError("denominator nonpositive - decrease eps")
    return BoundCd(d, eps, delta, c3(d, eps) / den)


def default_eps(d: int) -> list[Fraction]:
    """eps = 4d / 2^k for k = 1..6, spanning (0, 4d) geometrically."""
    return [Fraction(4 * d, 2**k) for k in range(1, 7)]
