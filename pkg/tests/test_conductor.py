import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from swanlab.conductor import (CharP, CharTower, MinimizeTrace, combine, construct_from_datum,
                               minimize_swan, ramification_datum, swan_p, swan_p_norm_oracle,
                               swan_tower)
from swanlab.datum import Cancellation, RamDatum, RamPair
from swanlab.datum_rules import validate_thm1
from swanlab.errors import (InvalidInput, RequiresConstantExtension, TrivialCharacter)
from swanlab.local_field import CaseB, LocalField
from swanlab.residue_field import DiffForm, RatFun, get_fq, is_pth_power, random_ratfun
from swanlab.valuation_lattice import BreakSequence, epsilon_of_breaks

F3 = get_fq(3)
S3 = RatFun.s(F3)
DS = DiffForm.ds(F3)
DLOG = DiffForm.dlog_s(F3)


def test_swan_p_examples():
    K = LocalField.build(3, 1, 1, 6)
    s = K.s()
    assert swan_p(CharP(K, s)) == RamPair(Fr(3, 2), DLOG)
    assert swan_p(CharP(K, K.one() + K.pi(Fr(1, 2)) * s)) == RamPair(Fr(1), DS)
    cube = (K.one() + K.pi(Fr(1, 3)) * s + K.from_int(3)) ** 3
    assert swan_p(CharP(K, cube * s)) == RamPair(Fr(3, 2), DLOG)


def test_norm_oracle_examples():
    K = LocalField.build(3, 1, 1, 6)
    s = K.s()
    assert swan_p_norm_oracle(CharP(K, s)) == RamPair(Fr(3, 2), DLOG)
    assert swan_p_norm_oracle(CharP(K, K.one() + K.pi(Fr(1, 2)) * s)) == RamPair(Fr(1), DS)


@pytest.mark.parametrize("p,m", [(2, 2), (3, 1), (5, 1)])
@settings(max_examples=25)
@given(seed=st.integers(0, 10 ** 9))
def test_norm_oracle_agrees(p, m, seed):
    rng = random.Random(seed)
    K = LocalField.build(p, m, 1, 6)
    a = random_ratfun(K.F, rng.randint(1, 3), rng, den_deg=rng.randint(0, 2))
    if is_pth_power(a) is not None:
        return
    if rng.random() < 0.5:
        u = K.lift(a)
    else:
        u = K.one() + K.lift(a).shift(Fr(p * rng.randrange(1, K.e // (p - 1)), K.e))
    chi = CharP(K, u)
    try:
        chi.reduce()
    except (TrivialCharacter, RequiresConstantExtension):
        return
    assert swan_p(chi) == swan_p_norm_oracle(chi)


def test_trivial_character():
    K = LocalField.build(3, 0, 1, 6)
    with pytest.raises(TrivialCharacter):
        ramification_datum(CharP(K, (K.one() + K.s()) ** 3))


def test_twist_order_p():
    K = LocalField.build(3, 1, 1, 6)
    chi = CharP(K, K.one() + K.pi(Fr(1, 2)) * (K.s() + K.from_int(1)) * K.s())
    w = swan_p(chi)
    w2 = swan_p(chi.twist(2))
    assert w2.delta == w.delta and w2.omega == w.omega.scale(RatFun.const(F3, 2))
    with pytest.raises(InvalidInput):
        chi.twist(3)


def test_combine_examples():
    a = RamPair(Fr(3, 2), DLOG)
    b = RamPair(Fr(1), DS)
    assert combine(a, b) == a and combine(b, a) == a
    c = RamPair(Fr(1), DiffForm(S3 * S3))
    assert combine(b, c) == RamPair(Fr(1), DS + DiffForm(S3 * S3))
    assert combine(b, RamPair(Fr(1), -DS)) == Cancellation(Fr(1))


def test_epsilon_shift_arithmetic():
    eps = epsilon_of_breaks(BreakSequence(3, [Fr(1, 3)]))
    assert Fr(7, 9) + eps == 1


def test_tower_above_low_break():
    # delta_bar = 1 > 1/2: any lift has (delta_bar + 1, -omega_bar)
    K = LocalField.build(3, 1, 1, 6)
    chi = CharTower(K, K.one() + K.pi(Fr(1, 2)) * K.s())
    dat = swan_tower(chi, auto_extend=True)
    assert dat.pairs[0] == RamPair(Fr(1), DS)
    assert dat.pairs[1] == RamPair(Fr(2), -DS)
    assert validate_thm1(dat).clauses() >= {"thm1.ii"}


def test_tower_twist():
    K = LocalField.build(3, 1, 1, 6)
    s = K.s()
    chi = CharTower(K, K.one() + K.pi(Fr(1, 2)) * s, K.one() + K.pi(Fr(1, 2)) * s * s)
    dat = ramification_datum(chi, auto_extend=True)
    tw = ramification_datum(chi.twist(2), auto_extend=True)
    two = RatFun.const(F3, 2)
    assert tw.deltas == dat.deltas
    assert [q.omega for q in tw.pairs] == [q.omega.scale(two) for q in dat.pairs]


def test_minimize_small_break():
    K = LocalField.build(3, 2, 1, 6)
    chibar = CharP(K, K.one() + K.pi(Fr(7, 6)) * K.s())
    assert swan_p(chibar).delta == Fr(1, 3)
    trace = MinimizeTrace()
    chi = minimize_swan(chibar, trace=trace)
    dat = swan_tower(chi, auto_extend=True)
    assert dat.deltas == [Fr(1, 3), Fr(1)]
    deltas = [st_[0] for st_ in trace.steps]
    assert all(a > b for a, b in zip(deltas, deltas[1:])) and deltas[-1] == 1
    # already minimal: zero further steps
    trace2 = MinimizeTrace()
    again = minimize_swan(CharP(chi.K, chi.u0), trace=trace2)
    assert len(trace2.steps) >= 1 and trace2.steps[-1][0] == 1
    assert swan_tower(again, auto_extend=True).deltas == [Fr(1, 3), Fr(1)]


def test_minimize_rejects_large_break():
    K = LocalField.build(3, 1, 1, 6)
    with pytest.raises(InvalidInput):
        minimize_swan(CharP(K, K.s()))


def test_construct_n1():
    chi = construct_from_datum(RamDatum(3, [RamPair(Fr(3, 2), DLOG)]))
    assert isinstance(chi, CharP) and chi.reduced.ubar == S3
    chi = construct_from_datum(RamDatum(3, [RamPair(Fr(1), DS)]))
    red = chi.reduced
    assert isinstance(red, CaseB) and red.t == Fr(1, 6) and red.wbar == S3
    assert chi.K.e == 6


def test_construct_n2_example():
    dat = RamDatum(3, [RamPair(Fr(1, 3), DS), RamPair(Fr(1), DiffForm(S3 ** 3))])
    assert validate_thm1(dat).passed
    chi = construct_from_datum(dat)
    assert isinstance(chi, CharTower)
    assert ramification_datum(chi, auto_extend=True) == dat


def test_construct_rejects_invalid():
    with pytest.raises(InvalidInput):
        construct_from_datum(RamDatum(3, [RamPair(Fr(1, 3), DLOG)]))
