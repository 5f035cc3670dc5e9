"""p-adic valuations, Newton polygons and non-archimedean Green's functions.

Every quantity here is an exact integer or rational exponent of p.  Intervals
are kept in units of log p (:class:`LogPInterval`) and converted to natural
log only when a :class:`GreenValue` is requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import HypothesisViolated, PreconditionError, SymmetricInputsError
from .exact_core import DEFAULT_DEGREE_CAP, DensePoly, as_rational, iterate_poly
from .intervals import GreenValue, frac_down, frac_up, log_down, log_up

INF = math.inf
DEFAULT_NMAX = 64
SPACING_DEGREE_LIMIT = 16


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or p < 2 or not sympy.isprime(p):
        raise PreconditionError(f"{p} is not a prime")


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x, p: int):
    """Exact p-adic valuation of a rational; +inf for zero."""
    x = as_rational(x)
    if x == 0:
        return INF
    return _vp_int(abs(x.numerator), p) - _vp_int(x.denominator, p)


def padic_abs(x, p: int):
    """Return v_p(x); the absolute value is p^(-v)."""
    _check_prime(p)
    return valuation(x, p)


def abs_p(x, p: int) -> Fraction:
    """|x|_p as an exact rational."""
    v = padic_abs(x, p)
    if v == INF:
        return Fraction(0)
    return Fraction(p) ** (-v)


def _neg_v(x, p: int):
    """-v_p(x), i.e. log_p |x|_p; -inf for zero."""
    v = valuation(x, p)
    return -v


# ---------------------------------------------------------------- intervals


@dataclass(frozen=True)
class LogPInterval:
    """[lo, hi] * log p with exact rational endpoints."""

    lo: Fraction
    hi: Fraction
    p: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("invalid interval")

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def to_green(self) -> GreenValue:
        """Multiply by log p with outward rounding."""
        g_lo = 0.0 if self.lo == 0 else frac_down(self.lo * Fraction(log_down(self.p)))
        g_hi = 0.0 if self.hi == 0 else frac_up(self.hi * Fraction(log_up(self.p)))
        return GreenValue(g_lo, g_hi)

    def to_json(self) -> dict:
        return {"lo_logp": str(self.lo), "hi_logp": str(self.hi), "p": self.p, "exact": self.exact}


def _point(x, p) -> LogPInterval:
    x = Fraction(x)
    return LogPInterval(x, x, p)


# ---------------------------------------------------------------- Green's function


@dataclass(frozen=True)
class PadicGreen:
    value: LogPInterval
    method: str  # "closed_form", "escape", "cycle" or "bound"
    steps: int = 0

    def to_json(self) -> dict:
        return {"value": self.value.to_json(), "green": self.value.to_green().to_json(),
                "method": self.method, "steps": self.steps}


def _to_zp(x: Fraction, p: int, shift: int, K: int) -> int:
    """x * p^shift reduced mod p^K; requires v_p(x) >= -shift."""
    if x == 0:
        return 0
    v = valuation(x, p)
    e = v + shift
    if e < 0:
        raise ValueError("valuation below the representable range")
    num = abs(x.numerator) // p ** max(v, 0)
    den = x.denominator // p ** max(-v, 0)
    mod = p**K
    r = (num * pow(den, -1, mod) * pow(p, e, mod)) % mod
    return r if x > 0 else (-r) % mod


def _circle_orbit(a: Fraction, d: int, p: int, t: Fraction, n_max: int) -> PadicGreen:
    """Green's function on |t| = |a|^d by p-adic orbit valuations.

    Values are stored as integers Z = z * p^S modulo p^P with S = d*A, where
    |a|_p = p^A.  The absolute precision P shrinks by the cancellation in
    each step, so valuations are known exactly while Z mod p^P is nonzero.
    """
    A = -valuation(a, p)
    S = d * A
    K = S + 16 + n_max * (d - 1) * A
    mod = p**K
    Z = _to_zp(a, p, S, K)
    Tz = _to_zp(t, p, S, K)
    P = K
    v = -A  # valuation of the current iterate
    last_inside = 0
    for k in range(1, n_max + 1):
        # z^d * p^S = Z^d / p^((d-1)S), exact integer division
        Zd = Z**d // p ** ((d - 1) * S)
        P = min(P + (d - 1) * v, K)
        Z = (Zd + Tz) % mod
        if P <= 0:
            break
        r = Z % p**P
        if r == 0:
            if S - P < A:
                # |z_k| < |a| forces |z_(k+1)| = |t| = |a|^d
                return PadicGreen(_point(Fraction(A, d ** (k - 1)), p), "escape", k + 1)
            break
        v = _vp_int(r, p) - S
        if -v > A:
            # |z_k| > |a| >= 1 and |t| = |a|^d: |z_(k+j)| = |z_k|^(d^j)
            return PadicGreen(_point(Fraction(-v, d ** (k - 1)), p), "escape", k)
        last_inside = k
    hi = Fraction(A, d ** max(last_inside - 1, 0)) if last_inside else Fraction(d * A)
    return PadicGreen(LogPInterval(Fraction(0), hi, p), "bound", last_inside)


def _exact_cycle(a: Fraction, d: int, t: Fraction, steps: int, max_bits: int = 4096) -> bool:
    seen = {a}
    z = a
    for _ in range(steps):
        z = z**d + t
        if z in seen:
            return True
        if z.numerator.bit_length() + z.denominator.bit_length() > max_bits:
            return False
        seen.add(z)
    return False


def green_nonarch_detail(a, d: int, p: int, t, n_max: int = DEFAULT_NMAX) -> PadicGreen:
    a, t = as_rational(a), as_rational(t)
    _check_prime(p)
    if d < 2:
        raise PreconditionError("d must be >= 2")
    A = -valuation(a, p)
    lt = _neg_v(t, p)  # log_p |t|_p, -inf at 0
    if A <= 0:
        return PadicGreen(_point(max(0, lt), p), "closed_form")
    if lt < d * A:
        return PadicGreen(_point(d * A, p), "closed_form")
    if lt > d * A:
        return PadicGreen(_point(lt, p), "closed_form")
    if _exact_cycle(a, d, t, 12):
        return PadicGreen(_point(0, p), "cycle")
    return _circle_orbit(a, d, p, t, n_max)


def green_nonarch(a, d: int, p: int, t, n_max: int = DEFAULT_NMAX) -> LogPInterval:
    """g_{a,p}(t) in units of log p.

    Closed forms when |a|_p <= 1 or |t|_p != |a|_p^d (zero width); on the
    circle |t|_p = |a|_p^d the orbit valuations decide escape exactly, and a
    non-escaping orbit yields [0, d^-(N-1) log|a|_p].
    """
    return green_nonarch_detail(a, d, p, t, n_max).value


# ---------------------------------------------------------------- Newton polygon


@dataclass(frozen=True)
class Segment:
    slope: Fraction
    length: int

    @property
    def root_valuation(self) -> Fraction:
        return -self.slope


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple  # (index, valuation) for nonzero coefficients
    hull: tuple  # Segment, slopes strictly increasing

    @property
    def length(self) -> int:
        return sum(s.length for s in self.hull)

    def root_valuations(self) -> list[Fraction]:
        out = []
        for s in self.hull:
            out.extend([s.root_valuation] * s.length)
        return out

    def to_json(self) -> dict:
        return {
            "points": [[i, str(v)] for i, v in self.points],
            "hull": [{"slope": str(s.slope), "length": s.length} for s in self.hull],
        }


def newton_polygon(poly: DensePoly, p: int) -> NewtonPolygon:
    """Lower convex hull of (i, v_p(c_i)) over the nonzero coefficients."""
    pts = [(i, Fraction(valuation(c, p))) for i, c in enumerate(poly.coeffs) if c != 0]
    if not pts:
        raise PreconditionError("zero polynomial")
    hull = []
    for pt in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    segs = []
    for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
        segs.append(Segment(Fraction(v1 - v0) / (i1 - i0), i1 - i0))
    # a leading run of zero roots shows up as a missing low-order point
    return NewtonPolygon(tuple(pts), tuple(segs))


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _power_sums(poly: DensePoly, kmax: int) -> list[Fraction]:
    """p_0..p_kmax of the roots of a monic polynomial (Newton identities)."""
    n = poly.degree
    c = poly.coeffs
    # e_k with sign: coefficient of T^(n-k) is (-1)^k e_k
    e = [(-1) ** k * c[n - k] for k in range(n + 1)]
    ps = [Fraction(n)]
    for k in range(1, kmax + 1):
        s = Fraction(0)
        for i in range(1, min(k, n + 1)):
            s += (-1) ** (i - 1) * e[i] * ps[k - i]
        if k <= n:
            s += (-1) ** (k - 1) * k * e[k]
        ps.append(s)
    return ps


def difference_polynomial(poly: DensePoly) -> DensePoly:
    """Monic polynomial whose roots are s_i - s_j over ordered pairs i != j."""
    poly = poly.monic()
    m = poly.degree
    N = m * (m - 1)
    ps = _power_sums(poly, N)
    binom = [[math.comb(k, j) for j in range(k + 1)] for k in range(N + 1)]
    D = [Fraction(N)]
    for k in range(1, N + 1):
        if k % 2:
            D.append(Fraction(0))
            continue
        s = sum(binom[k][j] * (-1) ** (k - j) * ps[j] * ps[k - j] for j in range(k + 1))
        D.append(s)
    e = [Fraction(1)]
    for k in range(1, N + 1):
        s = sum((-1) ** (i - 1) * e[k - i] * D[i] for i in range(1, k + 1))
        e.append(s / k)
    coeffs = [(-1) ** k * e[k] for k in range(N, -1, -1)]
    return DensePoly(coeffs)


@dataclass(frozen=True)
class NewtonReport:
    a: Fraction
    d: int
    p: int
    n: int
    polygon: NewtonPolygon
    expected_valuation: Fraction
    valuations_ok: bool
    spacing_bound_valuation: Fraction
    min_spacing_valuation: Fraction | None
    spacing_ok: bool | None
    discriminant_valuation: Fraction | None

    def to_json(self) -> dict:
        return {
            "a": str(self.a), "d": self.d, "p": self.p, "n": self.n,
            "polygon": self.polygon.to_json(),
            "root_abs_log_p": str(-self.expected_valuation),
            "valuations_ok": self.valuations_ok,
            "spacing_bound_log_p": str(-self.spacing_bound_valuation),
            "min_spacing_log_p": None if self.min_spacing_valuation is None else str(-self.min_spacing_valuation),
            "spacing_ok": self.spacing_ok,
            "discriminant_valuation": None if self.discriminant_valuation is None else str(self.discriminant_valuation),
        }


def root_hypothesis_holds(a, d: int, p: int) -> bool:
    """|a|_p > |d|_p^(-2/(d-1)), decided on exponents."""
    v = valuation(a, p)
    if v == INF:
        return False
    return -(d - 1) * v > 2 * _vp_int(d, p)


def discriminant_valuation(poly: DensePoly, p: int) -> Fraction:
    """v_p of the discriminant of a monic polynomial, via resultant with p'."""
    T = sympy.Symbol("T")
    expr = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(poly.monic().coeffs)], T)
    disc = sympy.discriminant(expr)
    return Fraction(valuation(Fraction(int(disc.p), int(disc.q)), p))


def newton_root_structure(a, d: int, p: int, n: int, spacing_limit: int = SPACING_DEGREE_LIMIT,
                          degree_cap: int = DEFAULT_DEGREE_CAP) -> NewtonReport:
    """Root valuations and minimal root spacing of f_T^n(a) over Q_p.

    Valuations come from the Newton polygon.  The spacing is checked exactly
    through the Newton polygon of the difference polynomial when the degree
    is at most ``spacing_limit``; otherwise ``spacing_ok`` is None.
    """
    a = as_rational(a)
    _check_prime(p)
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if not root_hypothesis_holds(a, d, p):
        raise HypothesisViolated(f"hypothesis violated: |a|_p <= |d|_p^(-2/(d-1)) for a={a}, d={d}, p={p}")
    poly = iterate_poly(a, d, n, degree_cap)
    poly_np = newton_polygon(poly, p)
    va = Fraction(valuation(a, p))
    expected = d * va
    vals_ok = all(s.root_valuation == expected for s in poly_np.hull) and poly_np.length == poly.degree
    # |s1 - s2| > |a| / (|d| |a|^(d-1))^(n-1)
    bound_v = va - (n - 1) * (_vp_int(d, p) + (d - 1) * va)
    min_sp = sp_ok = disc_v = None
    m = poly.degree
    if m == 1:
        sp_ok = True
    elif m <= spacing_limit:
        dpoly = difference_polynomial(poly)
        dnp = newton_polygon(dpoly, p)
        if dpoly.coeffs[0] == 0:
            sp_ok = False
        else:
            min_sp = max(s.root_valuation for s in dnp.hull)
            sp_ok = min_sp < bound_v
        disc_v = discriminant_valuation(poly, p)
    return NewtonReport(a, d, p, n, poly_np, expected, vals_ok, bound_v, min_sp, sp_ok, disc_v)


# ---------------------------------------------------------------- local pairing


CASE_TAGS = ("both_small", "one_big", "distinct_big", "equal_big")


@dataclass(frozen=True)
class LocalPairingCase:
    tag: str
    value: LogPInterval
    n: int | None = None
    note: str = ""

    @property
    def p(self) -> int:
        return self.value.p

    @property
    def contribution(self) -> GreenValue:
        return self.value.to_green()

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "tag": self.tag,
            "value": self.value.to_json(),
            "contribution": self.contribution.to_json(),
            "n": self.n,
            "note": self.note,
        }


def admissible_index(a: Fraction, b: Fraction, d: int, p: int, n_cap: int = 64) -> int | None:
    """Least n >= 1 with |a^d - b^d| > |d|^(-2(n-1)) / X^((d-1)(n-1)-1), X = max(|a|,|b|)."""
    X = max(-valuation(a, p), -valuation(b, p))
    vd = _vp_int(d, p)
    lhs = -valuation(a**d - b**d, p)
    for n in range(1, n_cap + 1):
        rhs = 2 * vd * (n - 1) - ((d - 1) * (n - 1) - 1) * X
        if lhs > rhs:
            return n
    return None


def pairing_nonarch(a, b, d: int, p: int, n_cap: int = 64) -> LocalPairingCase:
    """The local pairing at p, in units of log p, by case analysis on |a|_p, |b|_p."""
    a, b = as_rational(a), as_rational(b)
    _check_prime(p)
    if a**d == b**d:
        raise SymmetricInputsError(a, b, d)
    la, lb = -valuation(a, p), -valuation(b, p)
    big = max(la, lb)
    if big <= 0:
        return LocalPairingCase("both_small", _point(0, p))
    if la != lb:
        tag = "one_big" if min(la, lb) <= 0 else "distinct_big"
        return LocalPairingCase(tag, _point(d * big, p))
    # equal_big: only lower bounds are available; g_a <= d log|a| on the support
    vd = _vp_int(d, p)
    diff = -valuation(a**d - b**d, p)
    lower = max(Fraction(0), (max(0, diff) - Fraction(2 * d * vd, d - 1)) / d**3)
    n = None
    note = "no index satisfies the lower-bound hypothesis"
    if root_hypothesis_holds(a, d, p):
        n = admissible_index(a, b, d, p, n_cap)
        if n is not None:
            lower = max(lower, Fraction(big, d ** (2 * n - 2)))
            note = ""
        else:
            note = f"no admissible index up to {n_cap}"
    return LocalPairingCase("equal_big", LogPInterval(lower, Fraction(d * big), p), n, note)
