from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from swanlab.datum import RamDatum, RamPair
from swanlab.errors import InvalidContext, InvalidInput
from swanlab.residue_field import DiffForm, RatFun, get_fq
from swanlab.valuation_lattice import (BreakSequence, EpsilonContext, ValGroup, compose,
                                       epsilon_of_breaks, in_lambda_epsilon,
                                       lambda_eps_shift, merged_tower_check,
                                       phi_of_breaks, psi_of_breaks, rank2_breaks)


def test_valgroup_membership():
    lam = ValGroup(6)
    assert Fr(1, 6) in lam and Fr(1, 2) in lam and Fr(1, 4) not in lam


@pytest.mark.parametrize("p,breaks,eps", [
    (3, [Fr(1, 3)], Fr(2, 9)),
    (3, [Fr(1, 2)], Fr(1, 3)),
    (2, [Fr(1, 4), Fr(1, 2)], Fr(5, 16)),  # 1/4 * 1/4 + 1/2 * 1/2
])
def test_epsilon_examples(p, breaks, eps):
    b = BreakSequence(p, breaks)
    assert epsilon_of_breaks(b) == eps
    # independent route: the defect t - psi(t) above the top break
    t = b.top + 1
    assert t - psi_of_breaks(b)(t) == eps


def test_epsilon_empty_rejected():
    with pytest.raises(InvalidInput):
        epsilon_of_breaks(BreakSequence(3, []))


def test_psi_examples():
    psi = psi_of_breaks(BreakSequence(3, [Fr(1, 3)]))
    assert psi(1) == Fr(7, 9)
    assert psi(0) == 0
    assert psi(Fr(1, 3)) == Fr(1, 9)
    assert phi_of_breaks(BreakSequence(3, [Fr(1, 3)]))(Fr(1, 9)) == Fr(1, 3)
    with pytest.raises(InvalidInput):
        psi(-1)


def test_bad_breaks():
    with pytest.raises(InvalidInput):
        BreakSequence(3, [Fr(1, 2), Fr(1, 3)])
    with pytest.raises(InvalidInput):
        BreakSequence(3, [0])


breaks_st = st.lists(st.fractions(min_value=Fr(1, 30), max_value=3, max_denominator=30),
                     min_size=1, max_size=3, unique=True).map(sorted)


@given(st.sampled_from([2, 3, 5]), breaks_st,
       st.fractions(min_value=0, max_value=5, max_denominator=50))
def test_psi_phi_inverse(p, bs, t):
    b = BreakSequence(p, bs)
    psi, phi = psi_of_breaks(b), phi_of_breaks(b)
    assert phi(psi(t)) == t and psi(phi(t)) == t
    assert compose(phi, psi) == compose(psi, phi)


@given(st.sampled_from([2, 3, 5]), breaks_st, st.fractions(min_value=0, max_value=3))
def test_psi_above_top_break(p, bs, extra):
    b = BreakSequence(p, bs)
    t = b.top + extra
    assert psi_of_breaks(b)(t) == t - epsilon_of_breaks(b)


@given(st.sampled_from([2, 3, 5]), breaks_st)
def test_tower_transitivity(p, bs):
    full, composed = merged_tower_check(BreakSequence(p, bs))
    assert full == composed


def _brute(t, ctx, kmax=40):
    if t < 0:
        return False
    for k in range(1, kmax + 1):
        if t < ctx.threshold(k) and (ctx.p ** k * t) not in ctx.lam:
            return False
    return True


def test_lambda_eps_examples():
    ctx = EpsilonContext(3, Fr(2, 9), ValGroup(18))
    assert in_lambda_epsilon(Fr(1, 54), ctx)
    assert not in_lambda_epsilon(Fr(1, 108), ctx)
    assert in_lambda_epsilon(Fr(5, 18), ctx)  # any t in Lambda
    assert in_lambda_epsilon(Fr(7, 5), ctx)   # above the limit (3 - 2/9)/2
    with pytest.raises(InvalidInput):
        in_lambda_epsilon(Fr(-1), ctx)
    with pytest.raises(InvalidContext):
        in_lambda_epsilon(Fr(1), EpsilonContext(3, Fr(1, 27), ValGroup(18)))
    with pytest.raises(InvalidContext):
        EpsilonContext.from_breaks(BreakSequence(3, [Fr(1, 7)]), ValGroup(18))


def test_lambda_eps_shift_examples():
    ctx = EpsilonContext(3, Fr(2, 9), ValGroup(18))
    assert lambda_eps_shift(ctx.epsilon, ctx.epsilon, ctx) == ctx.epsilon
    r = lambda_eps_shift(Fr(1, 3), Fr(5, 9), ctx)
    assert r == Fr(2, 3) and in_lambda_epsilon(r, ctx)
    with pytest.raises(InvalidInput):
        lambda_eps_shift(Fr(1, 18), Fr(1, 3), ctx)


@given(st.fractions(min_value=0, max_value=2, max_denominator=400))
def test_lambda_eps_matches_bruteforce(t):
    ctx = EpsilonContext(3, Fr(2, 9), ValGroup(18))
    assert in_lambda_epsilon(t, ctx) == _brute(t, ctx)


def test_rank2_breaks():
    F = get_fq(3)
    s = RatFun.s(F)
    assert rank2_breaks(RamDatum(3, [RamPair(Fr(3, 2), DiffForm(RatFun.const(F, 1)))])) \
        == [(Fr(3, 2), 1)]
    assert rank2_breaks(RamDatum(3, [RamPair(1, DiffForm(s))])) == [(1, 2)]
    assert rank2_breaks(RamDatum(3, [])) == []
