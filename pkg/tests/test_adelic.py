import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unicrit.adelic import (
    default_n_arch,
    pairing_global,
    product_formula_check,
    relevant_primes,
    weil_height_pair,
    weil_height_single,
)
from unicrit.errors import PreconditionError, SymmetricInputsError
from unicrit.nonarch import pairing_nonarch

nonzero = st.fractions(max_denominator=10**6).filter(lambda q: q != 0)


@pytest.mark.parametrize(
    "a,b,exact",
    [
        (2, F(1, 3), 6),
        (0, 1, 1),
        (F(1, 2), F(3, 2), 3),
        (F(3, 4), F(5, 6), 12),
        (10**6, 0, 10**6),
    ],
)
def test_height_pair_examples(a, b, exact):
    h = weil_height_pair(a, b)
    assert h.exact == exact
    assert h.to_json() == {"h": h.value, "exact": f"log({exact})"}


def test_height_single():
    assert weil_height_single(F(-7, 3)).exact == 7
    assert weil_height_single(F(2, 9)).exact == 9
    assert weil_height_single(0).exact == 1


@given(st.fractions(max_denominator=500), st.fractions(max_denominator=500))
@settings(max_examples=100)
def test_height_pair_via_common_denominator(a, b):
    # projective height of (1 : a : b) as max(|L|, |L a|, |L b|) with L the lcm of denominators
    L = math.lcm(a.denominator, b.denominator)
    h = weil_height_pair(a, b)
    assert h.exact == max(L, abs(L * a), abs(L * b))
    assert h.interval.lo <= h.value <= h.interval.hi


@given(nonzero)
@settings(max_examples=100)
def test_product_formula_exact(x):
    assert product_formula_check(x) == 0


def test_product_formula_zero():
    with pytest.raises(PreconditionError):
        product_formula_check(0)


def test_relevant_primes():
    assert relevant_primes(F(1, 6), F(5, 7), 2) == [2, 3, 7]
    assert relevant_primes(F(0), F(1), 3) == [3]


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50), st.sampled_from([11, 13, 17]))
@settings(max_examples=40)
def test_extra_primes_contribute_nothing(a, b, p):
    if a**2 == b**2 or p in relevant_primes(a, b, 2):
        return
    c = pairing_nonarch(a, b, 2, p)
    assert c.tag == "both_small" and c.value.hi == 0


def test_default_depths():
    assert default_n_arch(2) == 6
    assert default_n_arch(3) == 5


def test_global_pairing_report():
    rep = pairing_global(F(1, 2), F(3, 2), 2, n_arch=5)
    assert [p for p, _ in rep.nonarch_terms] == [2]
    assert "nonarch:interval_at_2" in rep.flags
    assert rep.certified_total.lo <= rep.total.lo
    assert rep.total.hi <= rep.certified_total.hi
    js = rep.to_json()
    assert set(js) == {"arch_term", "arch_bounds", "nonarch_terms", "total", "certified_total", "flags"}


@pytest.mark.parametrize("a,b", [(0, 1), (F(1, 3), 1), (2, F(1, 2))])
def test_global_swap_symmetry(a, b):
    x = pairing_global(a, b, 2, n_arch=5).total
    y = pairing_global(b, a, 2, n_arch=5).total
    assert x.intersects(y)


def test_global_rejects_symmetric():
    with pytest.raises(SymmetricInputsError):
        pairing_global(2, -2, 2)


@pytest.mark.parametrize("x,exact", [(0, 1), (F(3, 2), 3), (F(35, 9), 35), (F(2) ** 2 - F(1, 3) ** 2, 35)])
def test_height_single_examples(x, exact):
    assert weil_height_single(x).exact == exact


def test_height_of_origin_is_zero():
    assert weil_height_pair(0, 0).value == 0


@pytest.mark.parametrize("x", [1, F(6, 5), F(2**30, 3**20)])
def test_product_formula_examples(x):
    assert product_formula_check(x) == 0


@given(st.fractions(max_denominator=1000), st.fractions(max_denominator=1000))
@settings(max_examples=100)
def test_pair_height_dominates_single(a, b):
    h = weil_height_pair(a, b)
    assert h.exact >= weil_height_single(a).exact
    assert h.exact >= weil_height_single(b).exact
    assert h.value >= 0


def test_global_large_integer_point():
    rep = pairing_global(100, 0, 2)
    assert rep.total.lo >= math.log(100) - 1e-10
    assert all(case.value.hi == 0 for _, case in rep.nonarch_terms)


def test_global_third_and_one():
    rep = pairing_global(F(1, 3), 1, 2, n_arch=5)
    terms = dict(rep.nonarch_terms)
    assert (terms[3].value.lo, terms[3].value.hi) == (2, 2)
    assert terms[2].value.hi == 0


@pytest.mark.parametrize("a,b", [(0, 1), (F(1, 2), 1), (-1, F(1, 3))])
def test_global_total_nonnegative(a, b):
    rep = pairing_global(a, b, 2, n_arch=5)
    assert 0 <= rep.total.lo <= rep.total.hi
