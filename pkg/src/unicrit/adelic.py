"""Weil heights over Q, the product formula and the global pairing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .arch import DEFAULT_PRECISION, DEFAULT_TOL, PairingEstimate, pairing_arch, pairing_arch_bounds
from .errors import PreconditionError, SymmetricInputsError
from .exact_core import as_rational
from .intervals import GreenValue, interval_sum, log_down, log_up
from .nonarch import LocalPairingCase, pairing_nonarch, valuation


@dataclass(frozen=True)
class HeightValue:
    """h = log(exact) with exact a positive rational."""

    exact: Fraction

    @property
    def value(self) -> float:
        return math.log(self.exact.numerator) - math.log(self.exact.denominator)

    @property
    def interval(self) -> GreenValue:
        return GreenValue(log_down(self.exact), log_up(self.exact))

    def exact_str(self) -> str:
        return f"log({self.exact})"

    def to_json(self) -> dict:
        return {"h": self.value, "exact": self.exact_str()}


def _primes(n: int) -> list[int]:
    return sorted(sympy.factorint(abs(n))) if abs(n) > 1 else []


def weil_height_pair(a, b) -> HeightValue:
    """h(a, b): sum over places of log max(|a|_v, |b|_v, 1)."""
    a, b = as_rational(a), as_rational(b)
    prod = max(abs(a), abs(b), Fraction(1))
    for p in _primes(a.denominator * b.denominator):
        e = max(0, -valuation(a, p), -valuation(b, p))
        prod *= Fraction(p) ** e
    return HeightValue(prod)


def weil_height_single(x) -> HeightValue:
    """h(p/q) = log max(|p|, q)."""
    x = as_rational(x)
    return HeightValue(Fraction(max(abs(x.numerator), x.denominator)))


def product_formula_check(x) -> Fraction:
    """Exact residual prod_v |x|_v - 1, which vanishes for every nonzero rational.

    The product is taken over infinity and the primes dividing x's numerator
    and denominator; all other places contribute |x|_p = 1.
    """
    x = as_rational(x)
    if x == 0:
        raise PreconditionError("product formula needs x != 0")
    prod = abs(x)
    for p in _primes(x.numerator * x.denominator):
        prod *= Fraction(p) ** (-valuation(x, p))
    return prod - 1


def relevant_primes(a: Fraction, b: Fraction, d: int) -> list[int]:
    """Primes where a local term or hypothesis can be nontrivial."""
    return _primes(a.denominator * b.denominator * d)


@dataclass
class PairingReport:
    a: Fraction
    b: Fraction
    d: int
    arch_term: PairingEstimate
    arch_bounds: GreenValue
    nonarch_terms: list  # [(p, LocalPairingCase)] sorted by p
    total: GreenValue
    certified_total: GreenValue
    flags: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {
            "arch_term": self.arch_term.to_json(),
            "arch_bounds": self.arch_bounds.to_json(),
            "nonarch_terms": [case.to_json() for _, case in self.nonarch_terms],
            "total": self.total.to_json(),
            "certified_total": self.certified_total.to_json(),
            "flags": list(self.flags),
        }


def default_n_arch(d: int) -> int:
    """Smallest depth with at least 32 roots in the estimator."""
    n = 1
    while d ** (n - 1) < 32:
        n += 1
    return n


def pairing_global(a, b, d: int, n_arch: int | None = None, tol: float = DEFAULT_TOL,
                   precision: int = DEFAULT_PRECISION, root_set: str = "iterate",
                   with_gap: bool = True) -> PairingReport:
    """Assemble the global pairing from the archimedean estimate and the p-adic terms.

    ``total`` adds the archimedean estimator band to the exact p-adic intervals.
    ``certified_total`` replaces the estimator with certified archimedean
    bounds, so it always encloses the true pairing.
    """
    a, b = as_rational(a), as_rational(b)
    if a**d == b**d:
        raise SymmetricInputsError(a, b, d)
    n_arch = n_arch or default_n_arch(d)
    arch = pairing_arch(a, b, d, n_arch, tol, precision, root_set, with_gap)
    bounds = pairing_arch_bounds(a, b, d)
    terms = [(p, pairing_nonarch(a, b, d, p)) for p in relevant_primes(a, b, d)]
    local = [case.contribution for _, case in terms]
    total = interval_sum([arch.band] + local)
    cert = interval_sum([bounds] + local)
    flags = ["arch:estimator", "arch_bounds:certified", "nonarch:certified"]
    for p, case in terms:
        if case.tag == "equal_big":
            flags.append(f"nonarch:interval_at_{p}")
    return PairingReport(a, b, d, arch, bounds, terms, total, cert, flags)
