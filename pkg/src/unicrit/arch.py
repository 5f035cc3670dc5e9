"""Archimedean numerics for f_t(z) = z^d + t over the complex numbers.

Everything that claims to be certified is computed with :class:`Ball`
arithmetic (high-precision centers, upward-rounded radii).  The pairing
estimator averages certified Green values over a finite root set; the
average itself is only an estimate of the integral and is flagged as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr, mpz

from .errors import PreconditionError, RootFinderStagnated, SymmetricInputsError, Undetermined
from .exact_core import (
    DEFAULT_DEGREE_CAP,
    DensePoly,
    as_rational,
    exact_orbit,
    iterate_poly,
    preperiodic_poly,
    squarefree_decomposition,
    squarefree_part,
)
from .intervals import Ball, GreenValue, down, interval_mean, log_down, up

DEFAULT_PRECISION = 128
MAX_PRECISION = 1024
DEFAULT_TOL = 1e-10
DEFAULT_NMAX = 2000

ComplexPoint = mpc


# ---------------------------------------------------------------- roots


@dataclass(frozen=True)
class RootEnclosure:
    """A disk that provably contains exactly one root of the polynomial."""

    center: mpc
    radius: mpfr

    def ball(self, prec: int | None = None) -> Ball:
        prec = prec or self.center.precision[0]
        return Ball(self.center, self.radius, prec)


def _mpq(q: Fraction):
    return gmpy2.mpq(q.numerator, q.denominator)


def _log2_abs(q: Fraction) -> float:
    return math.log2(abs(q.numerator)) - math.log2(q.denominator)


def _root_bound(p: DensePoly) -> Fraction:
    """Cauchy bound 1 + max |c_i / c_n|."""
    lc = p.lc
    return 1 + max(abs(c / lc) for c in p.coeffs[:-1])


def _horner2(cs, z):
    """p(z) and p'(z) by Horner's scheme, coefficients highest degree first."""
    pv = cs[0]
    dv = 0
    for c in cs[1:]:
        dv = dv * z + pv
        pv = pv * z + c
    return pv, dv


def _horner_abs(acs, m):
    s = acs[0]
    for c in acs[1:]:
        s = s * m + c
    return s


def _initial_points(p: DensePoly, n: int, prec: int) -> list:
    cs = p.coeffs
    # circle about the root centroid with the geometric-mean radius
    centroid = -cs[n - 1] / (n * cs[n])
    with gmpy2.context(precision=prec):
        cen = mpc(_mpq(centroid))
        val = p(centroid)
        r = abs(val / cs[n])
        rad = mpfr(_mpq(r)) ** (mpfr(1) / n) if r else mpfr(1)
        two_pi = 2 * gmpy2.const_pi()
        pts = []
        for k in range(n):
            theta = two_pi * k / n + mpfr("0.4")
            pts.append(cen + rad * mpc(gmpy2.cos(theta), gmpy2.sin(theta)))
    return pts


def _aberth(cs, z: list, prec: int, max_iter: int) -> list:
    n = len(z)
    z = list(z)
    with gmpy2.context(precision=prec):
        z = [mpc(x) for x in z]
        eps = mpfr(2) ** (8 - prec)
        acs = [abs(c) for c in cs]
        floor = 4 * len(cs) * mpfr(2) ** (-prec)
        done = [False] * n
        for _ in range(max_iter):
            active = 0
            for i in range(n):
                if done[i]:
                    continue
                zi = z[i]
                pv, dv = _horner2(cs, zi)
                # stop once |p(z)| is at the level of Horner rounding noise
                if abs(pv) <= floor * _horner_abs(acs, abs(zi)):
                    done[i] = True
                    continue
                s = 0
                for j in range(n):
                    if j != i:
                        diff = zi - z[j]
                        if diff != 0:
                            s += 1 / diff
                if dv == 0:
                    w = mpc(eps, eps) * (1 + abs(zi))
                else:
                    ratio = pv / dv
                    den = 1 - ratio * s
                    w = ratio / den if den != 0 else ratio
                z[i] = zi - w
                if abs(w) <= eps * max(abs(zi), mpfr(1)):
                    done[i] = True
                else:
                    active += 1
            if active == 0:
                return z
    raise RootFinderStagnated(f"Aberth iteration did not converge in {max_iter} steps at {prec} bits")


def _certify(p: DensePoly, z: list, prec: int) -> list[RootEnclosure] | None:
    """Inclusion disks n|p(z)/p'(z)|; None unless they are pairwise disjoint."""
    n = p.degree
    coeff_balls = [Ball(c, 0, prec) for c in reversed(p.coeffs)]
    out = []
    for zi in z:
        x = Ball(zi, 0, prec)
        pv = coeff_balls[0]
        dv = Ball(0, 0, prec)
        for c in coeff_balls[1:]:
            dv = dv * x + pv
            pv = pv * x + c
        dlo = dv.mag_lo()
        if dlo == 0:
            return None
        rad = up(lambda a, b: n * a / b, pv.mag_hi(), dlo)
        out.append(RootEnclosure(zi, rad))
    if not _pairwise_disjoint(out):
        return None
    return out


def _pairwise_disjoint(encl: list[RootEnclosure]) -> bool:
    order = sorted(encl, key=lambda e: e.center.real)
    # sweep in real part; radii are tiny compared with typical spacing
    rmax = max((e.radius for e in order), default=mpfr(0))
    for i, e in enumerate(order):
        for f in order[i + 1:]:
            gap_re = down(lambda a, b: a - b, f.center.real, e.center.real)
            if gap_re > up(lambda a, b, c: a + b + 2 * c, e.radius, f.radius, rmax):
                break
            dist = Ball(e.center, 0, e.center.precision[0]) - Ball(f.center, 0, e.center.precision[0])
            if dist.mag_lo() <= up(lambda a, b: a + b, e.radius, f.radius):
                return False
    return True


def isolate_roots(
    p: DensePoly, precision: int = DEFAULT_PRECISION, max_iter: int | None = None
) -> list[RootEnclosure]:
    """Certified enclosures of all roots of a squarefree polynomial.

    Aberth-Ehrlich iteration from a circle of initial points, followed by
    inclusion disks of radius deg * |p(z)| / |p'(z)| evaluated in ball
    arithmetic.  Working precision is doubled until the disks are pairwise
    disjoint and each radius is below 2^-precision * max(1, |z|).
    """
    n = p.degree
    if n < 1:
        raise PreconditionError("root finding needs degree >= 1")
    if n == 1:
        root = -p.coeffs[0] / p.coeffs[1]
        b = Ball(root, 0, precision)
        return [RootEnclosure(b.c, b.r)]
    spread = max(abs(_log2_abs(c)) for c in p.coeffs if c) + n * max(
        1.0, _log2_abs(_root_bound(p))
    )
    prec = precision + 32 + int(math.log2(n)) * 4
    prec_cap = 2 * (MAX_PRECISION + int(spread))
    max_iter = max_iter or (200 + 20 * n)
    z = _initial_points(p, n, prec)
    while True:
        cs = [mpc(_mpq(c), precision=prec) for c in reversed(p.coeffs)]
        z = _aberth(cs, z, prec, max_iter)
        encl = _certify(p, z, prec)
        if encl is not None:
            target_ok = all(
                e.radius <= up(lambda m: mpfr(2) ** (-precision) * max(m, mpfr(1)), abs(e.center))
                for e in encl
            )
            if target_ok:
                return sorted(encl, key=_root_key)
        prec *= 2
        if prec > prec_cap:
            raise RootFinderStagnated(f"no certified isolation below {prec_cap} bits")


def _root_key(e: RootEnclosure):
    c = e.center
    return (float(c.real), float(c.imag))


def roots(p: DensePoly, precision: int = DEFAULT_PRECISION) -> list[ComplexPoint]:
    """All roots of a squarefree polynomial as high-precision complex numbers."""
    return [e.center for e in isolate_roots(p, precision)]


def roots_with_multiplicity(p: DensePoly, precision: int = DEFAULT_PRECISION) -> list[tuple[RootEnclosure, int]]:
    out = []
    for q, mult in squarefree_decomposition(p):
        out.extend((e, mult) for e in isolate_roots(q, precision))
    return out


# ---------------------------------------------------------------- Green's function


def _escape_scale(a: Fraction) -> Fraction:
    return max(abs(a), Fraction(4))


@dataclass(frozen=True)
class GreenResult:
    value: GreenValue
    status: str  # "escaped" or "bounded"
    steps: int
    precision: int


def _as_ball(t, prec: int) -> Ball:
    if isinstance(t, Ball):
        return Ball(t.c, t.r, prec) if t.prec != prec else t
    if isinstance(t, RootEnclosure):
        return Ball(t.center, t.radius, prec)
    if isinstance(t, (int, Fraction, str)) and not isinstance(t, bool):
        return Ball(as_rational(t), 0, prec)
    if isinstance(t, tuple) and len(t) == 2:
        # exact rational real and imaginary parts
        re, im = (as_rational(x) for x in t)
        return Ball(re, 0, prec) + Ball(im, 0, prec) * Ball(1j, 0, prec)
    if isinstance(t, (float, complex, mpc, mpfr)):
        return Ball(t, 0, prec)
    raise TypeError(f"unsupported parameter type {type(t)}")


def _green_once(a: Fraction, d: int, t, tol: float, prec: int, n_max: int) -> GreenResult:
    M = _escape_scale(a)
    tb = _as_ball(t, prec)
    t_hi = tb.mag_hi()
    inner = down(lambda x: mpfr(x), _mpq(8 * M))
    r_esc = up(lambda x, th: max(mpfr(x), (2 * th) ** (mpfr(1) / d)), _mpq(8 * M), t_hi)
    in_disk = t_hi <= down(lambda x: mpfr(x), _mpq(4 * M**d))
    log10m = up(lambda x: gmpy2.log(mpfr(x)), _mpq(10 * M))
    D = mpz(d)

    z = Ball(a, 0, prec)
    for k in range(1, n_max + 1):
        z = z**d + tb
        lo, hi = z.mag_lo(), z.mag_hi()
        if lo >= r_esc:
            return _escape_tail(z, tb, d, k, tol, prec)
        if hi < inner and in_disk:
            # bounded so far: |f^k| <= 9 max(|a|,4) and |t| <= 4 max(|a|,4)^d
            # force |f^(k+j)| <= (10 max(|a|,4))^(d^j)
            bound = up(lambda L, q: L / q, log10m, D ** (k - 1))
            if bound <= tol:
                return GreenResult(GreenValue(0.0, float(bound)), "bounded", k, prec)
    raise Undetermined(f"no certificate within {n_max} iterations at {prec} bits")


def _escape_tail(z: Ball, tb: Ball, d: int, k: int, tol: float, prec: int) -> GreenResult:
    D = mpz(d)
    t_hi = tb.mag_hi()
    for extra in range(64):
        lo, hi = z.mag_lo(), z.mag_hi()
        q = up(lambda th, l: th / l**d, t_hi, lo)
        if q > mpfr("0.5"):
            raise Undetermined("escape invariant lost; increase precision")
        # |g - d^(1-k) log|z_k|| <= d^(1-k)/(d-1) * -log(1-q)
        one_minus_q = down(lambda x: 1 - x, q)
        neg_log = up(lambda x: -x, down(gmpy2.log, one_minus_q))
        scale = D ** (k - 1)
        tail = up(lambda nl, s: nl / (s * (d - 1)), neg_log, scale)
        e_lo = down(lambda l, s: gmpy2.log(l) / s, lo, scale)
        e_hi = up(lambda h, s: gmpy2.log(h) / s, hi, scale)
        g_lo = down(lambda e, t: e - t, e_lo, tail)
        g_hi = up(lambda e, t: e + t, e_hi, tail)
        if up(lambda a, b: a - b, g_hi, g_lo) <= tol:
            g_lo = max(float(g_lo), 0.0)
            return GreenResult(GreenValue(g_lo, float(g_hi)), "escaped", k, prec)
        z = z**d + tb
        k += 1
    raise Undetermined("escape tail did not reach the tolerance; increase precision")


def green_arch_detail(
    a,
    d: int,
    t,
    tol: float = DEFAULT_TOL,
    precision: int = DEFAULT_PRECISION,
    n_max: int = DEFAULT_NMAX,
    max_precision: int = MAX_PRECISION,
) -> GreenResult:
    a = as_rational(a)
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    if d < 2:
        raise PreconditionError("d must be >= 2")
    prec = precision
    while True:
        try:
            return _green_once(a, d, t, tol, prec, n_max)
        except Undetermined:
            if prec * 2 > max_precision:
                raise
            prec *= 2


def green_arch(a, d: int, t, tol: float = DEFAULT_TOL, precision: int = DEFAULT_PRECISION,
               n_max: int = DEFAULT_NMAX) -> GreenValue:
    """Certified enclosure of width <= tol of the Green's function g_a(t)."""
    return green_arch_detail(a, d, t, tol, precision, n_max).value


# ---------------------------------------------------------------- membership


@dataclass(frozen=True)
class Membership:
    status: str  # "inside" or "outside"
    certified: bool
    reason: str
    steps: int

    @property
    def heuristic(self) -> bool:
        return not self.certified

    def to_json(self) -> dict:
        return {"status": self.status, "certified": self.certified, "reason": self.reason, "steps": self.steps}


def member_M_a(a, d: int, t, n_max: int = 200, precision: int = DEFAULT_PRECISION,
               exact_steps: int = 24) -> Membership:
    """Decide whether t lies in the generalized Mandelbrot set M_a."""
    a = as_rational(a)
    M = _escape_scale(a)
    big = 4**d * M**d
    if isinstance(t, (int, Fraction, str)) and not isinstance(t, bool):
        t = as_rational(t)
        if abs(t) > big:
            return Membership("outside", True, "parameter exceeds 4^d max(|a|,4)^d", 0)
        orbit, start = exact_orbit(a, d, t, exact_steps, bound=8 * M, max_bits=4096)
        if start is not None:
            return Membership("inside", True, f"exact cycle entered at step {start}", len(orbit) - 1)
        if abs(orbit[-1]) > 8 * M:
            return Membership("outside", True, "iterate exceeded 8 max(|a|,4)", len(orbit) - 1)
    tb = _as_ball(t, precision)
    if tb.mag_lo() > up(mpfr, _mpq(big)):
        return Membership("outside", True, "parameter exceeds 4^d max(|a|,4)^d", 0)
    inner_hi = up(mpfr, _mpq(8 * M))
    inner_lo = down(mpfr, _mpq(8 * M))
    z = Ball(a, 0, precision)
    for k in range(1, n_max + 1):
        z = z**d + tb
        if z.mag_lo() >= inner_hi:
            return Membership("outside", True, "iterate exceeded 8 max(|a|,4)", k)
        if z.mag_hi() >= inner_lo:
            continue
    if z.mag_hi() < inner_lo:
        return Membership("inside", False, f"orbit bounded for {n_max} steps", n_max)
    raise Undetermined(f"membership undetermined after {n_max} steps")


# ---------------------------------------------------------------- disk covers


@dataclass
class CoverReport:
    a: Fraction
    d: int
    n_test: int
    covers: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples and all(c["disjoint"] for c in self.covers.values())

    def to_json(self) -> dict:
        return {
            "a": str(self.a),
            "d": self.d,
            "n_test": self.n_test,
            "passed": self.passed,
            "covers": self.covers,
            "counterexamples": self.counterexamples,
        }


def _roots_of_unity(d: int, prec: int) -> list[Ball]:
    out = []
    with gmpy2.context(precision=prec + 16):
        two_pi = 2 * gmpy2.const_pi()
        for i in range(d):
            th = two_pi * i / d
            out.append(mpc(gmpy2.cos(th), gmpy2.sin(th)))
    err = mpfr(2) ** (4 - prec)
    return [Ball(w, err, prec) for w in out]


def _alpha_centers(a: Fraction, d: int, prec: int, four: bool = False) -> list[Ball]:
    ab = Ball(a, 0, prec)
    ad = Ball(a**d, 0, prec)
    if d == 2:
        one = Ball(1, 0, prec)
        centers = [Ball(0, 0, prec) - ad - ab, Ball(0, 0, prec) - ad + ab]
        if four:
            centers += [centers[0] - one, centers[1] - one]
        return centers
    zeta = _roots_of_unity(d, prec)
    return [Ball(0, 0, prec) - ad + w * ab for w in zeta]


def _check_cover(report: CoverReport, name: str, a: Fraction, d: int, n_test: int,
                 centers: list[Ball], radius: Fraction, first_k: int, expected, prec: int) -> None:
    R_lo = down(mpfr, _mpq(radius))
    R_hi = up(mpfr, _mpq(radius))
    disjoint = True
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            if (centers[i] - centers[j]).mag_lo() <= up(lambda r: 2 * r, R_hi):
                disjoint = False
    counts = {}
    for k in range(2, n_test + 1):
        p = preperiodic_poly(a, d, k, 1)
        per_disk = [0] * len(centers)
        for enc, mult in roots_with_multiplicity(p, prec):
            rb = enc.ball(prec)
            hits = [i for i, c in enumerate(centers) if (rb - c).mag_hi() < R_lo]
            if len(hits) == 1:
                per_disk[hits[0]] += mult
                continue
            near = [i for i, c in enumerate(centers) if (rb - c).mag_lo() <= R_hi]
            report.counterexamples.append({
                "cover": name,
                "k": k,
                "root": [float(enc.center.real), float(enc.center.imag)],
                "reason": "outside cover" if not near else "not certified inside a single disk",
            })
        counts[k] = per_disk
        if k >= first_k:
            want = expected(k)
            if any(c != want for c in per_disk):
                report.counterexamples.append({
                    "cover": name, "k": k, "counts": per_disk, "expected": want,
                    "reason": "per-disk root count mismatch",
                })
    report.covers[name] = {
        "radius": str(radius),
        "centers": [[float(c.c.real), float(c.c.imag)] for c in centers],
        "disjoint": disjoint,
        "counts": {str(k): v for k, v in counts.items()},
        "weight": str(Fraction(1, len(centers))),
    }


def cover_check_d2(a, n_test: int, precision: int = DEFAULT_PRECISION) -> CoverReport:
    """Check the two-disk (radius 10) and four-disk (radius 5/|a|) covers of M_a, d = 2."""
    a = as_rational(a)
    if abs(a) < 28:
        raise PreconditionError("cover_check_d2 needs |a| >= 28")
    if n_test < 2:
        raise PreconditionError("n_test must be >= 2")
    rep = CoverReport(a, 2, n_test)
    prec = precision + 64
    _check_cover(rep, "two_disk", a, 2, n_test, _alpha_centers(a, 2, prec), Fraction(10),
                 2, lambda k: 2 ** (k - 2), precision)
    _check_cover(rep, "four_disk", a, 2, n_test, _alpha_centers(a, 2, prec, four=True),
                 Fraction(5) / abs(a), 3, lambda k: 2 ** (k - 3), precision)
    return rep


def cover_check_dgt2(a, d: int, n_test: int, precision: int = DEFAULT_PRECISION) -> CoverReport:
    """Check the d-disk cover of radius 12/|a|^(d-2) around -a^d + zeta^i a."""
    a = as_rational(a)
    if d <= 2:
        raise PreconditionError("cover_check_dgt2 needs d > 2")
    if abs(a) < 6:
        raise PreconditionError("cover_check_dgt2 needs |a| >= 6")
    if n_test < 2:
        raise PreconditionError("n_test must be >= 2")
    rep = CoverReport(a, d, n_test)
    prec = precision + 64
    _check_cover(rep, "d_disk", a, d, n_test, _alpha_centers(a, d, prec),
                 Fraction(12) / abs(a) ** (d - 2), 2, lambda k: d ** (k - 2), precision)
    return rep


# ---------------------------------------------------------------- pairing


@dataclass(frozen=True)
class PairingEstimate:
    """Archimedean pairing estimate from a finite root set.

    ``value`` encloses the finite average (certified as an average, not as
    the integral).  ``history`` holds the averages at depths n, n-1, n-2 and
    ``band`` widens ``value`` by twice the largest Cauchy gap among them,
    clipped to the certified bounds.  The band is a heuristic error bar.
    """

    value: GreenValue
    band: GreenValue
    n: int
    root_count: int
    root_set: str
    history: tuple = ()
    flag: str = "estimator"

    @property
    def gaps(self) -> list[float]:
        mids = [v.mid for v in self.history]
        return [abs(x - y) for x, y in zip(mids, mids[1:])]

    @property
    def gap(self) -> float | None:
        g = self.gaps
        return g[0] if g else None

    def to_json(self) -> dict:
        return {
            "value": self.value.to_json(),
            "band": self.band.to_json(),
            "n": self.n,
            "root_count": self.root_count,
            "root_set": self.root_set,
            "history": [v.to_json() for v in self.history],
            "gaps": self.gaps,
            "flag": self.flag,
        }


ROOT_SETS = ("iterate", "preperiodic")


def _root_polynomial(b: Fraction, d: int, n: int, root_set: str, degree_cap: int) -> DensePoly:
    if root_set == "iterate":
        return squarefree_part(iterate_poly(b, d, n, degree_cap))
    if root_set == "preperiodic":
        if n < 2:
            raise PreconditionError("preperiodic root set needs n >= 2")
        return squarefree_part(preperiodic_poly(b, d, n, 1, degree_cap))
    raise PreconditionError(f"unknown root set {root_set!r}")


def _estimate(a, b, d, n, tol, precision, root_set, degree_cap) -> tuple[GreenValue, int]:
    p = _root_polynomial(b, d, n, root_set, degree_cap)
    encl = isolate_roots(p, precision)
    vals = [green_arch(a, d, e, tol, precision) for e in encl]
    return interval_mean(vals), len(encl)


def pairing_arch(a, b, d: int, n: int, tol: float = DEFAULT_TOL, precision: int = DEFAULT_PRECISION,
                 root_set: str = "iterate", with_gap: bool = True,
                 degree_cap: int = DEFAULT_DEGREE_CAP) -> PairingEstimate:
    """Estimate the local pairing as the mean of g_a over roots of f_T^n(b).

    With ``root_set="preperiodic"`` the roots of f_T^n(b) - f_T(b) are used
    instead.  With ``with_gap`` the averages at depths n-1 and n-2 are also
    computed to give the convergence gaps and the heuristic band.
    """
    a, b = as_rational(a), as_rational(b)
    if a**d == b**d:
        raise SymmetricInputsError(a, b, d)
    lowest = 2 if root_set == "preperiodic" else 1
    if n < lowest:
        raise PreconditionError(f"n must be >= {lowest}")
    value, count = _estimate(a, b, d, n, tol, precision, root_set, degree_cap)
    value = GreenValue(value.lo, value.hi, certified=False)
    history = [value]
    if with_gap:
        for k in (n - 1, n - 2):
            if k < lowest:
                break
            v, _ = _estimate(a, b, d, k, tol, precision, root_set, degree_cap)
            history.append(GreenValue(v.lo, v.hi, certified=False))
    bounds = pairing_arch_bounds(a, b, d)
    mids = [v.mid for v in history]
    gaps = [abs(x - y) for x, y in zip(mids, mids[1:])]
    if gaps:
        w = 2 * max(gaps)
        lo = max(value.lo - w, bounds.lo)
        hi = min(value.hi + w, bounds.hi)
        band = GreenValue(min(lo, hi), max(lo, hi), certified=False)
    else:
        band = GreenValue(bounds.lo, bounds.hi, certified=False)
    return PairingEstimate(value, band, n, count, root_set, tuple(history))


def pairing_arch_bounds(a, b, d: int) -> GreenValue:
    """Certified enclosure of the archimedean local pairing from explicit bounds.

    The lower end uses the explicit lower estimates for d = 2 and d > 2; the
    upper end bounds g over the disk |t| < 3 max(|b|,4)^d that contains M_b,
    using W_{k+1} <= 2 W_k^d for W_k = max(|f_t^k(a)|, B).  Both ends are
    symmetrized, since the pairing is symmetric in (a, b).
    """
    a, b = as_rational(a), as_rational(b)
    if a**d == b**d:
        raise SymmetricInputsError(a, b, d)
    lo = max(_lower_bound(a, b, d), 0.0)
    hi = min(_upper_bound(a, b, d), _upper_bound(b, a, d))
    return GreenValue(lo, max(hi, lo))


def _lower_bound(a: Fraction, b: Fraction, d: int) -> float:
    x, y = max(abs(a), abs(b)), min(abs(a), abs(b))
    D = abs(a**d - b**d)
    cands = [0.0]
    if d == 2:
        if D > 1:
            cands.append(down(lambda l1, l2: (l1 - l2) / 8, log_down(D), _log_up_int(5000)))
        if x >= 50 and y <= 28:
            cands.append(log_down(x))
        if x >= 50 and y >= 28 and D >= 20:
            cands.append(down(lambda l: l / 4, log_down(13 * x)))
        if x >= 50 and y >= 28 and 11 / x <= D <= 20:
            cands.append(down(lambda l: l / 16, log_down(13 * x)))
    else:
        d3 = d**3
        if D > 1:
            cands.append(down(lambda l1, l2: (l1 - l2) / d3, log_down(D), _log_up_int(2 * 9**d)))
        if x >= 9 and y <= 6:
            cands.append(log_down(x))
        if x >= 9 and y >= 6 and D >= Fraction(25) / x ** (d - 2):
            cands.append(down(lambda l: l / (d * d), log_down(13 * x)))
    return float(max(cands))


def _log_up_int(n: int) -> float:
    return float(up(lambda v: gmpy2.log(mpfr(v)), n))


def _upper_bound(a: Fraction, b: Fraction, d: int) -> float:
    Mb = _escape_scale(b)
    # B = max(|a|, (3 Mb^d)^(1/d), 2^(1/(d-1)))
    B = up(lambda ax, m: max(mpfr(ax), mpfr(3) ** (mpfr(1) / d) * m, mpfr(2) ** (mpfr(1) / (d - 1))),
           _mpq(abs(a)), _mpq(Mb))
    return float(up(lambda bb: d * (gmpy2.log(bb) + gmpy2.log(mpfr(2)) / (d - 1)), B))
