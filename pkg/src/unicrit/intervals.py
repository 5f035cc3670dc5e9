"""Outward-rounded real intervals and complex balls.

Real endpoints are Python floats produced with directed rounding, so every
:class:`GreenValue` encloses the quantity it stands for.  Complex balls keep a
high-precision gmpy2 center and a 53-bit radius rounded upward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

_UP = dict(precision=53, round=gmpy2.RoundUp)
_DOWN = dict(precision=53, round=gmpy2.RoundDown)


def up(fn, *args):
    """Evaluate ``fn(*args)`` in 53-bit arithmetic rounded toward +inf."""
    with gmpy2.context(**_UP):
        return fn(*args)


def down(fn, *args):
    with gmpy2.context(**_DOWN):
        return fn(*args)


def frac_down(q: Fraction) -> float:
    """Largest float <= q."""
    return float(down(mpfr, gmpy2.mpq(q.numerator, q.denominator)))


def frac_up(q: Fraction) -> float:
    return float(up(mpfr, gmpy2.mpq(q.numerator, q.denominator)))


def log_down(x) -> float:
    """Lower bound for the natural log of a positive exact number."""
    if isinstance(x, Fraction):
        x = gmpy2.mpq(x.numerator, x.denominator)
    return float(down(lambda v: gmpy2.log(mpfr(v)), x))


def log_up(x) -> float:
    if isinstance(x, Fraction):
        x = gmpy2.mpq(x.numerator, x.denominator)
    return float(up(lambda v: gmpy2.log(mpfr(v)), x))


def _sum_exact(values) -> Fraction:
    return sum((Fraction(v) for v in values), Fraction(0))


@dataclass(frozen=True)
class GreenValue:
    """A closed interval [lo, hi] in natural-log units.

    ``certified`` is False when the interval comes from an estimator rather
    than a rigorous enclosure.
    """

    lo: float
    hi: float
    certified: bool = True

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("NaN endpoint")

    @classmethod
    def point(cls, x: float, certified: bool = True) -> "GreenValue":
        return cls(x, x, certified)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def intersects(self, other: "GreenValue") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other: "GreenValue") -> "GreenValue":
        return interval_sum([self, other])

    def scale(self, k: Fraction) -> "GreenValue":
        """Multiply by a nonnegative exact rational, rounding outward."""
        k = Fraction(k)
        if k < 0:
            raise ValueError("negative scale")
        return GreenValue(
            frac_down(Fraction(self.lo) * k), frac_up(Fraction(self.hi) * k), self.certified
        )

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "certified": self.certified}


def interval_sum(terms) -> GreenValue:
    """Outward-rounded sum; exact accumulation makes it order independent."""
    terms = list(terms)
    if not terms:
        return GreenValue(0.0, 0.0)
    lo = frac_down(_sum_exact(t.lo for t in terms))
    hi = frac_up(_sum_exact(t.hi for t in terms))
    return GreenValue(lo, hi, all(t.certified for t in terms))


def interval_mean(terms) -> GreenValue:
    terms = list(terms)
    n = len(terms)
    if n == 0:
        raise ValueError("mean of no intervals")
    lo = frac_down(_sum_exact(t.lo for t in terms) / n)
    hi = frac_up(_sum_exact(t.hi for t in terms) / n)
    return GreenValue(lo, hi, all(t.certified for t in terms))


class Ball:
    """Complex ball: high-precision center, upward-rounded radius.

    All operations return balls that contain every exact result obtainable
    from points of the operand balls.
    """

    __slots__ = ("c", "r", "prec")

    def __init__(self, c, r=0, prec: int = 128):
        self.prec = prec
        if isinstance(c, Fraction):
            c = gmpy2.mpq(c.numerator, c.denominator)
        with gmpy2.context(precision=prec):
            cc = mpc(c)
        r = up(mpfr, r)
        if isinstance(c, mpc) and c.precision == (prec, prec):
            self.c = cc
            self.r = r
            return
        # account for rounding of the center to prec bits
        err = _exact_err(c, cc)
        self.c = cc
        self.r = up(lambda x, y: x + y, r, err)

    @classmethod
    def _make(cls, c: mpc, r: mpfr, prec: int) -> "Ball":
        b = object.__new__(cls)
        b.c, b.r, b.prec = c, r, prec
        return b

    def mag_hi(self) -> mpfr:
        """Upper bound on |z| over the ball."""
        return up(lambda c, r: gmpy2.hypot(c.real, c.imag) + r, self.c, self.r)

    def mag_lo(self) -> mpfr:
        v = down(lambda c, r: gmpy2.hypot(c.real, c.imag) - r, self.c, self.r)
        return v if v > 0 else mpfr(0)

    def _round_err(self, c: mpc) -> mpfr:
        # gmpy2 rounds each component correctly, so |err| <= 2^(1-prec) |c|
        return up(lambda re, im: (abs(re) + abs(im)) * mpfr(2) ** (1 - self.prec), c.real, c.imag)

    def __add__(self, other: "Ball") -> "Ball":
        with gmpy2.context(precision=self.prec):
            c = self.c + other.c
        r = up(lambda a, b, e: a + b + e, self.r, other.r, self._round_err(c))
        return Ball._make(c, r, self.prec)

    def __sub__(self, other: "Ball") -> "Ball":
        with gmpy2.context(precision=self.prec):
            c = self.c - other.c
        r = up(lambda a, b, e: a + b + e, self.r, other.r, self._round_err(c))
        return Ball._make(c, r, self.prec)

    def __mul__(self, other: "Ball") -> "Ball":
        with gmpy2.context(precision=self.prec):
            c = self.c * other.c
        m1 = up(lambda z: gmpy2.hypot(z.real, z.imag), self.c)
        m2 = up(lambda z: gmpy2.hypot(z.real, z.imag), other.c)
        r = up(
            lambda m1, m2, r1, r2, e: m1 * r2 + m2 * r1 + r1 * r2 + e,
            m1, m2, self.r, other.r, self._round_err(c),
        )
        return Ball._make(c, r, self.prec)

    def __pow__(self, k: int) -> "Ball":
        if k < 1:
            raise ValueError("ball power must be >= 1")
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def contains_zero(self) -> bool:
        return self.mag_lo() == 0

    def __repr__(self):
        return f"Ball({self.c}, r={self.r})"


def _exact_err(exact, rounded: mpc) -> mpfr:
    """Upper bound on |exact - rounded| for an exactly representable input."""
    if isinstance(exact, complex):
        re_, im_ = exact.real, exact.imag
    elif isinstance(exact, mpc):
        re_, im_ = exact.real, exact.imag
    else:
        re_, im_ = exact, 0
    dre = abs(gmpy2.mpq(re_) - gmpy2.mpq(rounded.real))
    dim = abs(gmpy2.mpq(im_) - gmpy2.mpq(rounded.imag))
    return up(lambda a, b: mpfr(a) + mpfr(b), dre, dim)
