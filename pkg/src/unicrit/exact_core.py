"""Exact rational and polynomial arithmetic for the family f_t(z) = z^d + t.

Scalars are :class:`fractions.Fraction`.  Polynomials in the parameter ``T``
are :class:`DensePoly` instances with Fraction coefficients stored lowest
degree first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Sequence

from .errors import DegreeCapExceeded, PreconditionError, SymmetricInputsError

DEFAULT_DEGREE_CAP = 4096

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: inputs to the exact layer must be exact objects.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational input")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"-7"`` or ``"10^6"`` style input.

    Decimal notation is rejected on purpose; see :func:`parse_decimal` for
    parameters that may be given as decimals.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty rational")
    if "/" in s:
        num, den = s.split("/", 1)
        q = Fraction(_parse_int(num), _parse_int(den))
        return q
    return Fraction(_parse_int(s))


def parse_decimal(text: str) -> Fraction:
    """Parse a decimal or rational string into an exact rational."""
    s = text.strip()
    if "/" in s or "^" in s:
        return parse_rational(s)
    return Fraction(s)


def _parse_int(s: str) -> int:
    sign = 1
    if s.startswith("-"):
        sign, s = -1, s[1:]
    elif s.startswith("+"):
        s = s[1:]
    if "^" in s:
        base, exp = s.split("^", 1)
        return sign * int(base) ** int(exp)
    if "e" in s.lower():
        mant, exp = s.lower().split("e", 1)
        return sign * int(mant) * 10 ** int(exp)
    return sign * int(s)


def _common_denominator(coeffs: Sequence[Fraction]) -> int:
    return reduce(math.lcm, (c.denominator for c in coeffs), 1)


class DensePoly:
    """Immutable dense univariate polynomial over Q in the variable T."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def _raw(cls, coeffs: tuple) -> "DensePoly":
        p = object.__new__(cls)
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        p._c = tuple(c)
        return p

    @classmethod
    def T(cls) -> "DensePoly":
        return cls._raw((Fraction(0), Fraction(1)))

    @classmethod
    def constant(cls, c) -> "DensePoly":
        return cls._raw((as_rational(c),))

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self._c) - 1

    @property
    def lc(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def is_monic(self) -> bool:
        return bool(self._c) and self._c[-1] == 1

    def monic(self) -> "DensePoly":
        if not self._c:
            return self
        lc = self._c[-1]
        if lc == 1:
            return self
        return DensePoly._raw(tuple(x / lc for x in self._c))

    # arithmetic

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return DensePoly._raw(tuple(out))

    __radd__ = __add__

    def __neg__(self):
        return DensePoly._raw(tuple(-x for x in self._c))

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            k = Fraction(other)
            return DensePoly._raw(tuple(x * k for x in self._c))
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._c or not other._c:
            return DensePoly._raw(())
        # multiply on integer numerators over a common denominator
        da, db = _common_denominator(self._c), _common_denominator(other._c)
        ia = [int(x * da) for x in self._c]
        ib = [int(x * db) for x in other._c]
        out = [0] * (len(ia) + len(ib) - 1)
        for i, x in enumerate(ia):
            if x:
                for j, y in enumerate(ib):
                    out[i + j] += x * y
        den = da * db
        return DensePoly._raw(tuple(Fraction(v, den) for v in out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = DensePoly._raw((Fraction(1),))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other: "DensePoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        dg = other.degree
        inv_lc = 1 / other.lc
        if len(rem) <= dg:
            return DensePoly._raw(()), self
        quo = [Fraction(0)] * (len(rem) - dg)
        oc = other._c
        for i in range(len(rem) - 1, dg - 1, -1):
            coef = rem[i] * inv_lc
            if coef:
                quo[i - dg] = coef
                for j in range(dg + 1):
                    rem[i - dg + j] -= coef * oc[j]
        return DensePoly._raw(tuple(quo)), DensePoly._raw(tuple(rem[:dg]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "DensePoly") -> "DensePoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def derivative(self) -> "DensePoly":
        return DensePoly._raw(tuple(i * x for i, x in enumerate(self._c) if i))

    def __call__(self, x):
        acc = 0
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        return f"DensePoly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for i in range(len(self._c) - 1, -1, -1):
            c = self._c[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if i == 0:
                body = str(mag)
            else:
                mono = "T" if i == 1 else f"T^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list:
        return [str(c) for c in self._c]


def _coerce(x):
    if isinstance(x, DensePoly):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return DensePoly._raw((Fraction(x),))
    return NotImplemented


def poly_gcd(p: DensePoly, q: DensePoly) -> DensePoly:
    """Monic gcd over Q (the zero polynomial if both inputs are zero)."""
    a, b = p.monic(), q.monic()
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def poly_lcm(p: DensePoly, q: DensePoly) -> DensePoly:
    g = poly_gcd(p, q)
    return (p.exact_div(g) * q).monic()


def squarefree_part(p: DensePoly) -> DensePoly:
    """p / gcd(p, p'), made monic: same distinct roots, all simple."""
    if p.is_zero():
        raise PreconditionError("squarefree part of the zero polynomial")
    if p.degree == 0:
        return DensePoly.constant(1)
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g).monic()


def squarefree_decomposition(p: DensePoly) -> list[tuple[DensePoly, int]]:
    """Yun's algorithm: monic squarefree coprime factors with multiplicities."""
    if p.is_zero():
        raise PreconditionError("squarefree decomposition of the zero polynomial")
    p = p.monic()
    if p.degree == 0:
        return []
    dp = p.derivative()
    a0 = poly_gcd(p, dp)
    b = p.exact_div(a0)
    c = dp.exact_div(a0)
    dd = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        ai = poly_gcd(b, dd)
        b = b.exact_div(ai)
        c = dd.exact_div(ai)
        dd = c - b.derivative()
        if ai.degree > 0:
            out.append((ai, i))
        i += 1
    return out


def _check_params(d: int, n: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise PreconditionError(f"d must be an integer >= 2, got {d!r}")
    if not isinstance(n, int) or n < 0:
        raise PreconditionError(f"iterate index must be a nonnegative integer, got {n!r}")


def iterate_degree(d: int, n: int) -> int:
    return 0 if n == 0 else d ** (n - 1)


def iterates(a, d: int, n: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> Iterator[DensePoly]:
    """Yield f_T^0(a) = a, f_T^1(a), ..., f_T^n(a)."""
    a = as_rational(a)
    _check_params(d, n)
    if iterate_degree(d, n) > degree_cap:
        raise DegreeCapExceeded(iterate_degree(d, n), degree_cap)
    z = DensePoly.constant(a)
    yield z
    T = DensePoly.T()
    for _ in range(n):
        z = z**d + T
        yield z


def iterate_poly(a, d: int, n: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> DensePoly:
    """f_T^n(a) as a polynomial in T; monic of degree d^(n-1) for n >= 1.

    ``n = 0`` gives the constant polynomial ``a``.
    """
    *_, last = iterates(a, d, n, degree_cap)
    return last


def preperiodic_poly(a, d: int, m: int, n: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> DensePoly:
    """f_T^m(a) - f_T^n(a) for m > n >= 0."""
    if not (isinstance(m, int) and isinstance(n, int) and m > n >= 0):
        raise PreconditionError(f"need m > n >= 0, got m={m}, n={n}")
    its = list(iterates(a, d, m, degree_cap))
    return its[m] - its[n]


def factor_over_q(p: DensePoly) -> list[tuple[DensePoly, int]]:
    """Monic irreducible factors over Q with multiplicities."""
    import sympy

    if p.is_zero():
        raise PreconditionError("cannot factor the zero polynomial")
    x = sympy.Symbol("T")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(p.coeffs))
    _, pairs = sympy.factor_list(sympy.Poly(expr, x, domain="QQ"))
    out = []
    for fac, mult in pairs:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())]
        out.append((DensePoly(coeffs).monic(), int(mult)))
    out.sort(key=lambda fm: (fm[0].degree, [(c.numerator, c.denominator) for c in fm[0].coeffs]))
    return out


def is_symmetric_pair(a, b, d: int) -> bool:
    return as_rational(a) ** d == as_rational(b) ** d


@dataclass(frozen=True)
class PreperiodicParameterSet:
    """Parameters found to make two marked points simultaneously preperiodic.

    ``total_count`` counts distinct complex roots of the factors.  It is a
    lower bound on |S_{a,b}|, never the exact size.
    """

    a: Fraction
    b: Fraction
    d: int
    factors: tuple
    index_bound: int
    total_count: int

    def to_json(self) -> dict:
        return {
            "factors": [str(f) for f in self.factors],
            "factor_coeffs": [f.to_json() for f in self.factors],
            "index_bound": self.index_bound,
            "total_count": self.total_count,
            "total_count_is_lower_bound": True,
        }


def _index_pairs(M: int):
    return [(m, n) for m in range(1, M + 1) for n in range(m)]


def find_common_preperiodic(
    a, b, d: int, M: int, degree_cap: int = DEFAULT_DEGREE_CAP
) -> PreperiodicParameterSet:
    """Search for t making both a and b preperiodic, with orbit indices <= M.

    The common roots of prod_{n<m<=M}(f^m(a) - f^n(a)) and the analogous
    product for b are accumulated pairwise: for every pair of index pairs the
    squarefree gcd is folded into a running lcm, so no full product is formed.
    """
    a, b = as_rational(a), as_rational(b)
    _check_params(d, 1)
    if not isinstance(M, int) or M < 1:
        raise PreconditionError(f"index bound M must be >= 1, got {M!r}")
    if a**d == b**d:
        raise SymmetricInputsError(a, b, d)
    if iterate_degree(d, M) > degree_cap:
        raise DegreeCapExceeded(iterate_degree(d, M), degree_cap)

    its_a = list(iterates(a, d, M, degree_cap))
    its_b = list(iterates(b, d, M, degree_cap))
    polys_a = _distinct_squarefree([its_a[m] - its_a[n] for m, n in _index_pairs(M)])
    polys_b = _distinct_squarefree([its_b[m] - its_b[n] for m, n in _index_pairs(M)])

    common = DensePoly.constant(1)
    for pa in polys_a:
        for pb in polys_b:
            g = poly_gcd(pa, pb)
            if g.degree <= 0:
                continue
            extra = g.exact_div(poly_gcd(g, common))
            if extra.degree > 0:
                common = (common * extra).monic()
                if common.degree > degree_cap:
                    raise DegreeCapExceeded(common.degree, degree_cap)

    factors = tuple(f for f, _ in factor_over_q(common)) if common.degree > 0 else ()
    return PreperiodicParameterSet(a, b, d, factors, M, common.degree)


def _distinct_squarefree(polys: list[DensePoly]) -> list[DensePoly]:
    seen = {}
    for p in polys:
        if p.is_zero():
            # identically preperiodic in T; cannot happen for d >= 2
            raise ArithmeticError("iterate difference vanished identically")
        if p.degree == 0:
            continue
        s = squarefree_part(p)
        seen.setdefault(s, None)
    return list(seen)


def orbit_is_preperiodic_mod(q: DensePoly, x, d: int, max_steps: int = 256) -> bool | None:
    """Decide whether x is preperiodic for z -> z^d + T in Q[T]/(q).

    ``q`` must be irreducible, so the quotient is a field and the orbit of x
    is finite exactly when a residue repeats.  Returns ``None`` when no
    repetition shows up within ``max_steps`` (inconclusive).
    """
    if q.degree < 1:
        raise PreconditionError("modulus must have positive degree")
    T = DensePoly.T() % q
    z = DensePoly.constant(as_rational(x)) % q
    seen = {z}
    for _ in range(max_steps):
        z = ((z**d) + T) % q
        if z in seen:
            return True
        seen.add(z)
    return None


def exact_orbit(a, d: int, t, max_steps: int, bound=None,
                max_bits: int | None = None) -> tuple[list[Fraction], int | None]:
    """Iterate z -> z^d + t exactly from a.

    Returns the orbit and the index at which a value first repeats (``None``
    if no repeat within ``max_steps``, if |z| exceeded ``bound`` or if the
    iterate needs more than ``max_bits`` bits).
    """
    a, t = as_rational(a), as_rational(t)
    orbit = [a]
    index = {a: 0}
    z = a
    for _ in range(max_steps):
        z = z**d + t
        if z in index:
            orbit.append(z)
            return orbit, index[z]
        index[z] = len(orbit)
        orbit.append(z)
        if bound is not None and abs(z) > bound:
            return orbit, None
        if max_bits is not None and z.numerator.bit_length() + z.denominator.bit_length() > max_bits:
            return orbit, None
    return orbit, None
