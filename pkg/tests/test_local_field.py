import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from swanlab.conductor import embed_elem
from swanlab.errors import InvalidInput, RequiresConstantExtension, TrivialCharacter
from swanlab.fierce_extension import make_extension
from swanlab.local_field import (CaseA, CaseB, Frac, LocalField, canonical_form, epsilon_lift,
                                 gauss_valuation, is_moderate, is_reduced, kummer_reduce,
                                 lift, reduced_unit_value, residue)
from swanlab.residue_field import RatFun, is_pth_power, random_ratfun
from swanlab.valuation_lattice import EpsilonContext, ValGroup

K2 = LocalField.build(3, 0, 1, 6)   # e = 2
K6 = LocalField.build(3, 1, 1, 6)   # e = 6


def cofactor_is_one(u, red, mult):
    q = Frac(u) * mult ** red.L.p / reduced_unit_value(red)
    w = q.minus_one()
    return w.num.X is None or w.val() >= 3


def test_gauss_valuation_examples():
    s = K2.s()
    assert gauss_valuation(s) == 0
    assert gauss_valuation(K2.pi(Fr(1, 2)) * (K2.one() + s)) == Fr(1, 2)
    assert gauss_valuation(K2.from_int(3) / (K2.one() - s)) == 1


def test_residue_and_lift_examples():
    F = K2.F
    s = K2.s()
    assert residue(s + K2.from_int(3)) == RatFun.s(F)
    assert residue(lift(K2, RatFun.s(F).inverse()) * s) == RatFun.const(F, 1)
    assert residue(K2.pi(Fr(1, 2))).is_zero()
    with pytest.raises(InvalidInput):
        residue(K2.pi(Fr(1, 2)).inverse())


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (5, 1), (3, 2)])
@given(seed=st.integers(0, 10 ** 9))
def test_residue_of_lift(p, f, seed):
    K = LocalField.build(p, 0, f, 6)
    a = random_ratfun(K.F, 3, random.Random(seed), den_deg=2)
    assert residue(lift(K, a)) == a


def test_reduce_case_a():
    s = K6.s()
    red, mult = kummer_reduce(s)
    assert isinstance(red, CaseA) and red.ubar == RatFun.s(K6.F)
    u = (K6.one() + K6.pi(Fr(1, 6)) * s) ** 3 * s
    red, mult = kummer_reduce(u)
    assert isinstance(red, CaseA) and red.ubar == RatFun.s(K6.F)
    assert cofactor_is_one(u, red, mult)


def test_reduce_case_b():
    u = K6.one() + K6.pi(Fr(1, 2)) * K6.s()
    red, mult = kummer_reduce(u)
    assert isinstance(red, CaseB)
    assert red.t == Fr(1, 6) and red.wbar == RatFun.s(K6.F)
    assert cofactor_is_one(u, red, mult)


def test_reduce_strips_pth_powers():
    # leading term pi_{1/6} s^3 of u - 1 is a cube and has to be absorbed
    K = LocalField.build(3, 2, 1, 6)
    s = K.s()
    c = K.one() + K.pi(Fr(1, 18)) * s
    u = c ** 3 * (K.one() + K.pi(Fr(1, 2)) * s)
    red, mult = kummer_reduce(u)
    assert isinstance(red, CaseB) and is_reduced(red)
    assert red.t == Fr(1, 6) and red.wbar == RatFun.s(K.F)
    assert cofactor_is_one(u, red, mult)


def test_reduce_trivial_and_lattice_errors():
    with pytest.raises(TrivialCharacter):
        kummer_reduce((K2.one() + K2.s()) ** 3)
    # v(u - 1)/p = 1/6 is not in (1/2)Z
    with pytest.raises(RequiresConstantExtension):
        kummer_reduce(K2.one() + K2.pi(Fr(1, 2)) * K2.s())


@pytest.mark.parametrize("p,m", [(2, 2), (3, 1), (5, 0)])
@given(seed=st.integers(0, 10 ** 9))
def test_reduce_random_units(p, m, seed):
    rng = random.Random(seed)
    K = LocalField.build(p, m, 1, 6)
    a = random_ratfun(K.F, 3, rng, den_deg=rng.randint(0, 2))
    if is_pth_power(a) is not None:
        return
    t = Fr(rng.randrange(1, K.e), K.e)
    u = (K.one() + K.lift(a).shift(t)) if rng.random() < 0.5 else K.lift(a)
    try:
        red, mult = kummer_reduce(u)
    except (RequiresConstantExtension, TrivialCharacter):
        return
    assert is_reduced(red)
    assert cofactor_is_one(u, red, mult)


def test_canonical_form_examples():
    s = K6.s()
    assert canonical_form(K6.one() + s, K2).exponents == [0]
    assert canonical_form(K6.pi(Fr(1, 6)) + K6.pi(Fr(1, 2)), K2).exponents == [Fr(1, 6), Fr(1, 2)]
    # pi_{1/6}(1 + pi_{1/3}) expands to the previous element
    a = K6.pi(Fr(1, 6)) * (K6.one() + K6.pi(Fr(1, 3)))
    assert canonical_form(a, K2).exponents == [Fr(1, 6), Fr(1, 2)]
    # 1/6 and 2/3 differ by 1/2, which lies in the base lattice
    b = K6.pi(Fr(1, 6)) * (K6.one() + s * K6.pi(Fr(1, 2)))
    assert canonical_form(b, K2).exponents == [Fr(1, 6)]


@given(seed=st.integers(0, 10 ** 9))
def test_canonical_form_unique(seed):
    rng = random.Random(seed)
    a = sum((K6.lift(random_ratfun(K6.F, 2, rng, den_deg=0)).shift(Fr(rng.randrange(0, 12), 6))
             for _ in range(3)), K6.pi(Fr(rng.randrange(0, 6), 6)))
    cf = canonical_form(a, K2)
    exps = cf.exponents
    assert len(set(x % Fr(1, 2) for x in exps)) == len(exps)
    again = sum((embed_elem(u, K6).shift(t) for t, u in cf.terms), K6.from_int(0))
    assert canonical_form(again, K2).exponents == exps
    assert (again - a).X is None


def test_moderation():
    K18 = LocalField.build(3, 2, 1, 6)
    K54 = LocalField.build(3, 3, 1, 6)
    ctx = EpsilonContext(3, Fr(2, 9), ValGroup(18))
    s = K54.s()
    assert is_moderate(K54.one() + s, K18, ctx)
    assert is_moderate(K54.pi(Fr(1, 54)) * s, K18, ctx)
    # exponent 1/162 is not in Lambda_eps (its 27-fold multiple leaves the lattice)
    K162 = LocalField.build(3, 4, 1, 6)
    assert not is_moderate(K162.pi(Fr(1, 162)), K18, ctx)
    # moderate elements form a subring
    a = K54.one() + K54.pi(Fr(1, 54)) * s
    b = K54.pi(Fr(1, 27)) + s
    assert is_moderate(a * b, K18, ctx) and is_moderate(a + b, K18, ctx)


def test_epsilon_lift_case_a_tower():
    K = LocalField.build(3, 2, 1, 8)
    red, _ = kummer_reduce(K.s())
    M = make_extension(red)
    ctx = EpsilonContext(3, Fr(2, 9), ValGroup(K.e))
    cert = epsilon_lift(RatFun.s(K.F), M, ctx)
    assert cert.b.residue() == M.x().residue()
    diff = cert.a.with_field(M) - cert.b ** 3
    assert diff.X is None or diff.val() >= ctx.epsilon


@pytest.mark.parametrize("p,m,eps", [(3, 2, Fr(2, 9)), (2, 2, Fr(1, 4)), (5, 1, Fr(1, 5))])
@given(seed=st.integers(0, 10 ** 9))
def test_epsilon_lift_certificates(p, m, eps, seed):
    rng = random.Random(seed)
    K = LocalField.build(p, m, 1, 8 if p < 5 else 6)
    u = K.one() + K.lift(RatFun.s(K.F)).shift(Fr(p * (K.e // (p * (p - 1)) - 1 or 1), K.e))
    red, _ = kummer_reduce(u)
    M = make_extension(red)
    ctx = EpsilonContext(p, eps, ValGroup(K.e))
    abar = random_ratfun(K.F, 2, rng, den_deg=rng.randint(0, 1))
    cert = epsilon_lift(abar, M, ctx)
    assert residue(cert.a) == abar
    diff = cert.a.with_field(M) - cert.b ** p
    assert diff.X is None or diff.val() >= eps
