import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from swanlab.conductor import CharP, swan_p
from swanlab.errors import InvalidInput, TrivialCharacter
from swanlab.fierce_extension import make_extension, reduce_over_extension
from swanlab.local_field import CaseA, CaseB, Frac, LocalField, kummer_reduce
from swanlab.residue_field import RatFun, is_pth_power, random_ratfun
from swanlab.valuation_lattice import BreakSequence, psi_of_breaks


def tower(p, m, expr="s", N=6):
    K = LocalField.build(p, m, 1, N)
    s = K.s()
    u = s if expr == "s" else K.one() + K.pi(Fr(p, K.e)) * s
    red, _ = kummer_reduce(u)
    return K, make_extension(red)


def random_elem(M, rng, deg=2):
    K = M.base
    out = M.from_base(K.from_int(0))
    for i in range(M.p):
        a = random_ratfun(K.F, deg, rng, den_deg=rng.randint(0, 1))
        out = out + M.from_base(K.lift(a)) * M.x_pow(i)
    return out


def same(a, b, prec=3):
    diff = a - b
    return diff.X is None or diff.val() >= prec


def test_case_a_extension():
    K, M = tower(3, 0)
    assert M.gbar == RatFun.s(K.F)
    assert is_pth_power(M.gbar) is None
    assert same(M.v() ** 3, M.from_base(K.s()))


def test_case_b_extension():
    K, M = tower(3, 1, "b")
    assert isinstance(M.red, CaseB) and M.t == Fr(1, 6)
    assert M.gbar == RatFun.s(K.F)
    # middle coefficients of the integral relation have valuation 1 - (p - i) t > 0
    for i in range(1, 3):
        assert Fr(K.k.val(M.rho[i]), K.e) == 1 - (3 - i) * M.t


def test_non_reduced_rejected():
    K = LocalField.build(3, 0, 1, 6)
    with pytest.raises(InvalidInput):
        make_extension(CaseA(Frac(K.s() ** 3)))


@pytest.mark.parametrize("p,m,kind", [(2, 2, "s"), (2, 2, "b"), (3, 1, "s"), (3, 1, "b"),
                                      (5, 0, "s")])
@given(seed=st.integers(0, 10 ** 9))
def test_galois_and_norm_laws(p, m, kind, seed):
    rng = random.Random(seed)
    K, M = tower(p, m, kind)
    a, b = random_elem(M, rng), random_elem(M, rng)
    c = M.from_base(K.lift(random_ratfun(K.F, 2, rng)))
    assert same(M.galois_apply(p, a), a)
    assert same(M.sigma(c), c)
    assert same(M.sigma(a * b), M.sigma(a) * M.sigma(b))
    na, nb = M.norm(a), M.norm(b)
    assert same(M.norm(a * b), na * nb)
    assert same(M.norm(M.sigma(a)), na)


@pytest.mark.parametrize("p,m", [(2, 0), (3, 0), (5, 0)])
def test_norm_of_kummer_generator(p, m):
    K, M = tower(p, m)
    v = M.v()
    assert same(M.sigma(v), M.from_base(K.zeta()) * v)
    sign = (-1) ** (p - 1)
    assert same(M.norm(v), K.s() * sign)
    lam = K.lam()
    assert same(M.norm(M.from_base(lam)), lam ** p)


@pytest.mark.parametrize("p,m,kind", [(3, 0, "s"), (3, 1, "b"), (2, 2, "b"), (5, 1, "b")])
def test_displacement_is_lower_break(p, m, kind):
    K, M = tower(p, m, kind)
    vals = {M.displacement(j) for j in range(1, p)}
    assert len(vals) == 1
    delta = swan_p(CharP(K, Frac(K.s()) if kind == "s" else
                         Frac(K.one() + K.pi(Fr(p, K.e)) * K.s()))).delta
    assert vals.pop() == psi_of_breaks(BreakSequence(p, [delta]))(delta)
    if (p, kind) == (3, "s"):
        assert M.displacement() == Fr(1, 2)


def test_reduce_over_extension():
    K, M = tower(3, 1)
    red, _ = reduce_over_extension(M.v())
    assert isinstance(red, CaseA) and is_pth_power(red.ubar) is None
    with pytest.raises(TrivialCharacter):
        reduce_over_extension(M.from_base(K.s()))
