from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unicrit.errors import PreconditionError, SymmetricInputsError
from unicrit.harness import (
    VERDICTS,
    _lower_verdict,
    _upper_verdict,
    bound_C_d,
    default_eps,
    explore_thm_1_4,
    grid_pairs,
    verify_grid,
    verify_thm_1_2,
    verify_thm_1_3,
    verify_thm_4_13,
)
from unicrit.intervals import GreenValue


@pytest.mark.parametrize("a,b", [(10**6, 0), (0, 1), (F(1, 2), F(3, 2))])
def test_lower_bound_theorem_examples(a, b):
    v = verify_thm_1_3(a, b, 2, n_arch=5)
    assert v.verdict == "verified"
    assert v.certified


@pytest.mark.parametrize("a,b", [(2, F(1, 3)), (10**9, 0)])
def test_difference_height_theorem_examples(a, b):
    assert verify_thm_4_13(a, b, 2, n_arch=5).verdict == "verified"


def test_upper_bound_theorem_example():
    v = verify_thm_1_2(0, 1, 2, eps=1, M=3, n_arch=5)
    assert v.verdict in ("verified", "consistent")
    assert v.inputs["S_count"] >= 3
    assert abs(v.rhs.mid - 28.333) < 1e-2


def test_verdict_json_shape():
    js = verify_thm_1_3(0, 1, 2, n_arch=5).to_json()
    assert set(js) == {"theorem", "inputs", "estimate", "certified_lhs", "rhs", "verdict", "notes"}
    assert js["verdict"] in VERDICTS


def test_verifiers_reject_symmetric_inputs():
    with pytest.raises(SymmetricInputsError):
        verify_thm_1_3(1, -1, 2)
    with pytest.raises(PreconditionError):
        verify_thm_1_2(0, 1, 2, eps=8)


def _g(lo, hi):
    return GreenValue(lo, hi)


@pytest.mark.parametrize(
    "est,cert,rhs,expected",
    [
        (_g(1, 2), _g(1, 2), _g(0, 0.5), "verified"),
        (_g(0, 0.1), _g(0, 0.2), _g(1, 1), "violated"),
        (_g(1, 2), _g(0, 3), _g(1.5, 1.5), "consistent"),
        (_g(0, 1), _g(0, 3), _g(1.5, 1.5), "inconclusive"),
    ],
)
def test_lower_verdict_rules(est, cert, rhs, expected):
    assert _lower_verdict(est, cert, rhs) == expected


@pytest.mark.parametrize(
    "est,cert,rhs,expected",
    [
        (_g(1, 2), _g(1, 2), _g(3, 4), "verified"),
        (_g(5, 6), _g(5, 6), _g(1, 2), "violated"),
        (_g(1, 2), _g(0, 5), _g(1.5, 1.5), "consistent"),
        (_g(3, 4), _g(0, 5), _g(1.5, 1.5), "inconclusive"),
    ],
)
def test_upper_verdict_rules(est, cert, rhs, expected):
    assert _upper_verdict(est, cert, rhs) == expected


def test_grid_pairs_skip_symmetric():
    pairs = grid_pairs([0, 1, -1], 2)
    assert (F(1), F(-1)) not in pairs
    assert (F(0), F(1)) in pairs
    assert len(pairs) == 4


def test_grid_is_order_preserving_in_parallel():
    pairs = grid_pairs([0, 1, 2], 2)
    seq = verify_grid("thm1.3", pairs, 2, jobs=1, n_arch=4)
    par = verify_grid("thm1.3", pairs, 2, jobs=3, n_arch=4)
    assert [v.to_json() for v in seq] == [v.to_json() for v in par]


def test_exploration():
    res = explore_thm_1_4(2, [(0, 1), (0, 2), (1, 2)], n_arch=4)
    assert res.argmin in {("0", "1"), ("0", "2"), ("1", "2")}
    assert res.minimum == min(r["certified_lo"] for r in res.rows)
    with pytest.raises(PreconditionError, match="empty grid"):
        explore_thm_1_4(2, [])


def test_bound_cd_exact():
    b = bound_C_d(2, F(1, 10**4), 1)
    # c1 = 1/48, c1 delta / (c1 c4 + c2 + delta) = (1/48) / (5/48 + 2) = 1/101
    assert b.value == (F(8 * 2) * 10**4 - 2) / (F(1, 101) - F(1, 10**4))
    assert "conditional" in b.label


def test_bound_cd_denominator_guard():
    with pytest.raises(PreconditionError, match="denominator nonpositive"):
        bound_C_d(2, 1, 1)


@given(st.integers(2, 6), st.fractions(min_value=F(1, 10), max_value=10, max_denominator=10))
def test_bound_cd_monotone_in_delta(d, delta):
    eps = F(1, 10**6)
    b1 = bound_C_d(d, eps, delta)
    b2 = bound_C_d(d, eps, 2 * delta)
    assert b2.value < b1.value


def test_default_eps_range():
    es = default_eps(3)
    assert all(0 < e < 12 for e in es)
    assert es == sorted(es, reverse=True)


def test_upper_rhs_decreases_with_count():
    from dataclasses import replace

    from unicrit.exact_core import find_common_preperiodic

    S = find_common_preperiodic(0, 1, 2, 3)
    rhs = [verify_thm_1_2(0, 1, 2, eps=1, S=replace(S, total_count=k), n_arch=4).rhs.mid for k in (1, 2, 5, 20)]
    assert rhs == sorted(rhs, reverse=True)


def test_exploration_single_pair_is_nonnegative():
    res = explore_thm_1_4(2, [(0, 1)], n_arch=4)
    assert res.minimum >= 0 and len(res.rows) == 1


def test_bound_cd_example_and_eps_monotone():
    c1 = F(1, 48)
    delta = F(1, 10)
    half = F(1, 2) * c1 * delta / (c1 * 5 + 1 + delta)
    b = bound_C_d(2, half, delta)
    assert b.value > 0
    limit = 2 * half  # the denominator vanishes here
    near = [bound_C_d(2, limit * k / 100, delta).value for k in range(90, 100)]
    assert near == sorted(near)
    with pytest.raises(PreconditionError):
        bound_C_d(2, limit, delta)
