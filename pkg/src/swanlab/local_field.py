"""Elements of K = Frac(O_k[s]) under the Gauss valuation, and Kummer reduction.

An element is stored as ``pi^k * X / D`` where ``X`` and ``D`` are integral
polynomial arrays (see :mod:`swanlab.constants`), ``X`` has Gauss valuation 0
and ``D`` is a base polynomial with unit content.  ``rel`` is the relative
precision of ``X/D`` in pi-units.  The same element type serves the fierce
extensions of :mod:`swanlab.fierce_extension`; only the field handle ``L``
changes (it knows how to multiply ``X`` arrays and take residues).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .constants import INF, ConstField, build_constants
from .errors import (InvalidInput, NotFierce, PrecisionExhausted,
                     RequiresConstantExtension, TrivialCharacter)
from .residue_field import RatFun, artin_schreier_solve, is_pth_power
from .valuation_lattice import EpsilonContext, in_lambda_epsilon, rat


class Elem:
    """pi^k X / D with relative precision ``rel``; ``X is None`` means zero.

    For a zero, ``k`` is a lower bound for the true valuation (INF if exact).
    """

    __slots__ = ("L", "k", "X", "D", "rel")

    def __init__(self, L, k, X, D, rel):
        self.L, self.k, self.X, self.D, self.rel = L, k, X, D, rel

    # -- construction ----------------------------------------------------------
    @staticmethod
    def make(L, k: int, X, D, rel: int) -> "Elem":
        kf = L.k
        X = kf.trim(X)
        cx = kf.val(X)
        if cx >= INF or cx >= rel:
            return Elem.zero(L, k + min(cx, rel))
        if cx:
            X = kf.div_pi(X, cx)
        cd = kf.val(D)
        if cd:
            D = kf.div_pi(D, cd)
        return Elem(L, k + cx - cd, X, kf.trim(D), min(rel - cx, rel - cd))

    @staticmethod
    def zero(L, bound: int = INF) -> "Elem":
        return Elem(L, bound, None, None, 0)

    def is_zero(self) -> bool:
        return self.X is None

    @property
    def exact_zero(self) -> bool:
        return self.X is None and self.k >= INF

    def __repr__(self):
        if self.X is None:
            return f"Elem(0 + O(pi^{self.k}))"
        return f"Elem(v={self.val()}, degs={self.X.shape[1] - 1}/{self.D.shape[1] - 1}, rel={self.rel})"

    # -- valuation / residue ---------------------------------------------------
    def val(self) -> Fraction:
        if self.X is None:
            raise PrecisionExhausted(f"element is zero to precision (v >= {self.k}/{self.L.k.e})")
        return Fraction(self.k, self.L.k.e)

    def residue(self) -> RatFun:
        if self.X is None:
            if self.k > 0:
                return self.L.res_zero()
            raise PrecisionExhausted("residue of an element known only to O(1)")
        if self.k < 0:
            raise InvalidInput("residue of an element of negative valuation")
        if self.k > 0:
            return self.L.res_zero()
        return self.L.residue_of(self.X, self.D)

    @property
    def absprec(self) -> int:
        return self.k if self.X is None else self.k + self.rel

    # -- arithmetic --------------------------------------------------------------
    def _coerce(self, other) -> "Elem":
        if isinstance(other, Elem):
            return other
        if isinstance(other, int):
            return self.L.from_int(other)
        return NotImplemented

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.X is None or o.X is None:
            a = self if self.X is None else o
            b = o if a is self else self
            bound = a.k + (b.k if b.X is not None else 0) if a.k < INF else INF
            return Elem.zero(self._big(o), bound)
        L = self._big(o)
        kf = L.k
        X = L.mulX(self.X, o.X)
        D = kf.mul(self.D, o.D)
        return Elem.make(L, self.k + o.k, X, D, min(self.rel, o.rel, getattr(L, "cap", INF)))

    __rmul__ = __mul__

    def _big(self, o):
        # base-field elements may be combined with extension elements
        return self.L if getattr(self.L, "dim", 1) >= getattr(o.L, "dim", 1) else o.L

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        L = self._big(o)
        a, b = self, o
        if a.X is None and b.X is None:
            return Elem.zero(L, min(a.k, b.k))
        if a.X is None:
            a, b = b, a
        # now a is nonzero
        if b.X is None:
            if b.k >= a.absprec:
                return Elem(L, a.k, a.X, a.D, a.rel)
            return Elem.make(L, a.k, a.X, a.D, b.k - a.k)
        if b.k >= a.absprec:
            return Elem(L, a.k, a.X, a.D, a.rel)
        if a.k >= b.absprec:
            return Elem(L, b.k, b.X, b.D, b.rel)
        kf = L.k
        k0 = min(a.k, b.k)
        absprec = min(a.absprec, b.absprec, k0 + kf.e * kf.N)
        if a.D.shape == b.D.shape and np.array_equal(a.D, b.D):
            X = kf.add(kf.mul_pi(a.X, a.k - k0), kf.mul_pi(b.X, b.k - k0))
            D = a.D
        else:
            X = kf.add(kf.mul(kf.mul_pi(a.X, a.k - k0), b.D),
                       kf.mul(kf.mul_pi(b.X, b.k - k0), a.D))
            D = kf.mul(a.D, b.D)
        return Elem.make(L, k0, X, D, absprec - k0)

    __radd__ = __add__

    def __neg__(self):
        if self.X is None:
            return self
        return Elem(self.L, self.k, self.L.k.neg(self.X), self.D, self.rel)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def inverse(self) -> "Elem":
        if self.X is None:
            raise ZeroDivisionError("inverse of zero (to precision)")
        if self.X.shape[0] != 1:
            return self.L.inverse(self)
        return Elem(self.L, -self.k, self.D, self.X, self.rel)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.L.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, t) -> "Elem":
        """Multiply by pi_t (t in the value lattice, any sign)."""
        kt = rat(t) * self.L.k.e
        if kt.denominator != 1:
            raise RequiresConstantExtension(f"pi_{t} needs a finer lattice",
                                            suggested_m=self.L.k.m + 1)
        kt = int(kt)
        if self.X is None:
            return Elem.zero(self.L, self.k + kt if self.k < INF else INF)
        return Elem(self.L, self.k + kt, self.X, self.D, self.rel)

    def shift_units(self, kt: int) -> "Elem":
        if self.X is None:
            return Elem.zero(self.L, self.k + kt if self.k < INF else INF)
        return Elem(self.L, self.k + kt, self.X, self.D, self.rel)

    def with_field(self, L) -> "Elem":
        """View a base element inside an extension (arrays are shared)."""
        return Elem(L, self.k, self.X, self.D, self.rel)

    def component(self, i: int) -> "Elem":
        """Base-field coefficient of x^i (for extension elements)."""
        if self.X is None:
            return Elem.zero(self.L.base, self.k)
        if i >= self.X.shape[0]:
            return Elem.zero(self.L.base, self.absprec)
        return Elem.make(self.L.base, self.k, self.X[i:i + 1], self.D, self.rel)

    def polynomial_part(self):
        """(k, X, D) with X integral; handy for building relations."""
        return self.k, self.X, self.D


class LocalField:
    """K: rational functions in s over the constants k, Gauss valuation."""

    dim = 1

    def __init__(self, k: ConstField):
        self.k = k
        self.F = k.F
        self.p, self.e = k.p, k.e
        self.base = self

    @classmethod
    def build(cls, p: int, m: int = 0, f: int = 1, N: int = 6) -> "LocalField":
        return cls(build_constants(p, m, 1, N, f))

    def __repr__(self):
        return f"K(p={self.p}, e={self.e}, f={self.k.f}, N={self.k.N})"

    def __eq__(self, other):
        return isinstance(other, LocalField) and type(other) is type(self) and self.k == other.k

    def __hash__(self):
        return hash(("K", self.k.key))

    # protocol used by Elem
    def mulX(self, A, B):
        return self.k.mul(A, B)

    def residue_of(self, X, D) -> RatFun:
        return RatFun(self.F, self.k.residue_poly(X), self.k.residue_poly(D))

    def res_zero(self) -> RatFun:
        return RatFun.const(self.F, 0)

    def inverse(self, x):
        raise InvalidInput("K elements are always invertible through swap")

    # constructors
    def _exact(self, X, k=0, D=None) -> Elem:
        kf = self.k
        return Elem.make(self, k, X, kf.one() if D is None else D, kf.e * kf.N)

    def one(self) -> Elem:
        return self._exact(self.k.one())

    def from_int(self, c: int) -> Elem:
        if c == 0:
            return Elem.zero(self)
        return self._exact(self.k.scalar(c))

    def const(self, A) -> Elem:
        return self._exact(A)

    def s(self) -> Elem:
        X = self.k.zeros(1, 2)
        X[0, 1, 0, 0] = 1
        return self._exact(X)

    def pi(self, t) -> Elem:
        return self.one().shift(t)

    def zeta(self) -> Elem:
        return self.const(self.k.zeta)

    def lam(self) -> Elem:
        return self.const(self.k.lam)

    def lift(self, a: RatFun) -> Elem:
        """Naive coefficientwise lift of a residue rational function."""
        if a.F != self.F:
            raise InvalidInput("residue field mismatch")
        if a.is_zero():
            return Elem.zero(self)
        return self._exact(self.k.lift_poly(a.num), 0, self.k.lift_poly(a.den))

    def poly(self, X) -> Elem:
        return self._exact(X)


def gauss_valuation(x: Elem) -> Fraction:
    return x.val()


def residue(x: Elem) -> RatFun:
    return x.residue()


def lift(K: LocalField, a: RatFun) -> Elem:
    return K.lift(a)


# ---------------------------------------------------------------------------
# fractions of elements (extension fields have no cheap inverse)

class Frac:
    """num / den for elements of K or of a fierce extension."""

    __slots__ = ("num", "den")

    def __init__(self, num: Elem, den: Optional[Elem] = None):
        self.num = num
        self.den = num.L.one() if den is None else den

    @property
    def L(self):
        return self.num.L if getattr(self.num.L, "dim", 1) >= getattr(self.den.L, "dim", 1) else self.den.L

    def __mul__(self, other):
        if isinstance(other, Frac):
            return Frac(self.num * other.num, self.den * other.den)
        return Frac(self.num * other, self.den)

    def __truediv__(self, other):
        if isinstance(other, Frac):
            return Frac(self.num * other.den, self.den * other.num)
        return Frac(self.num, self.den * other)

    def inverse(self) -> "Frac":
        return Frac(self.den, self.num)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Frac(self.num ** n, self.den ** n)

    def shift(self, t) -> "Frac":
        return Frac(self.num.shift(t), self.den)

    def val(self) -> Fraction:
        return self.num.val() - self.den.val()

    def vk(self) -> int:
        self.num.val(), self.den.val()
        return self.num.k - self.den.k

    def minus_one(self) -> "Frac":
        return Frac(self.num - self.den, self.den)

    def residue(self) -> RatFun:
        v = self.vk()
        if v < 0:
            raise InvalidInput("residue of an element of negative valuation")
        if v > 0:
            return self.L.res_zero()
        return self.num.shift_units(-self.num.k).residue() / self.den.shift_units(-self.den.k).residue()

    def to_elem(self) -> Elem:
        return self.num * self.den.inverse()

    def __repr__(self):
        return f"Frac({self.num!r} / {self.den!r})"


def as_frac(u) -> Frac:
    return u if isinstance(u, Frac) else Frac(u)


# ---------------------------------------------------------------------------
# reduced units

@dataclass
class CaseA:
    """u a unit with residue outside the p-th powers."""

    u: Frac

    @property
    def L(self):
        return self.u.L

    @property
    def ubar(self) -> RatFun:
        return self.u.residue()

    @property
    def kind(self) -> str:
        return "A"


@dataclass
class CaseB:
    """u = 1 + pi_{p t} w with 0 < t < 1/(p-1) and residue(w) not a p-th power."""

    t: Fraction
    w: Frac

    @property
    def L(self):
        return self.w.L

    @property
    def wbar(self) -> RatFun:
        return self.w.residue()

    @property
    def kind(self) -> str:
        return "B"


ReducedUnit = Union[CaseA, CaseB]


def kummer_reduce(u, max_steps: int = 10 ** 4):
    """Return ``(reduced, multiplier)`` with ``u * multiplier^p`` reduced.

    ``u`` may be an :class:`Elem` or a :class:`Frac` over K or over a fierce
    extension.  The multiplier is returned as a :class:`Frac`.
    """
    u = as_frac(u)
    L = u.L
    kf = L.k
    p, e = kf.p, kf.e
    pp = p * e // (p - 1)  # p/(p-1) in pi-units
    one = L.one()
    mult = Frac(one)
    vk = u.vk()
    if vk % p:
        raise RequiresConstantExtension(
            f"v(u) = {Fraction(vk, e)} is not divisible by p in the value group",
            suggested_m=kf.m + 1)
    if vk:
        u = Frac(u.num.shift_units(-vk), u.den)
        mult = Frac(one.shift_units(-vk // p))
    b = is_pth_power(u.residue())
    if b is None:
        return CaseA(u), mult
    B = L.lift(b)
    u = Frac(u.num, u.den * B ** p)
    mult = mult / B
    for _ in range(max_steps):
        w = u.minus_one()
        if w.num.X is None:
            bound = w.num.k - w.den.k
            if bound > pp:
                raise TrivialCharacter("u is a p-th power to working precision")
            raise PrecisionExhausted("u - 1 vanishes to working precision below p/(p-1)")
        tk = w.vk()
        if tk > pp:
            raise TrivialCharacter(f"v(u-1) = {Fraction(tk, e)} > p/(p-1)")
        abar = Frac(w.num.shift_units(-tk), w.den).residue()
        if tk == pp:
            bb = artin_schreier_solve(abar)
            if bb is None:
                raise NotFierce("residue extension is separable (Artin-Schreier)")
            c = one + L.lift(bb).shift_units(e // (p - 1))
        else:
            root = is_pth_power(abar)
            if tk % p:
                raise RequiresConstantExtension(
                    f"v(u-1)/p = {Fraction(tk, e * p)} is not in the value group",
                    suggested_m=kf.m + 1)
            if root is None:
                return CaseB(Fraction(tk // p, e), Frac(w.num.shift_units(-tk), w.den)), mult
            c = one + L.lift(root).shift_units(tk // p)
        u = Frac(u.num, u.den * c ** p)
        mult = mult / c
    raise PrecisionExhausted("reduction loop did not terminate")


def is_reduced(r: ReducedUnit) -> bool:
    if isinstance(r, CaseA):
        return r.u.vk() == 0 and is_pth_power(r.ubar) is None
    p = r.L.k.p
    return (0 < r.t < Fraction(1, p - 1) and r.w.vk() == 0
            and is_pth_power(r.wbar) is None)


def reduced_unit_value(r: ReducedUnit) -> Frac:
    if isinstance(r, CaseA):
        return r.u
    return Frac(r.w.num.shift(r.L.k.p * r.t) + r.w.den, r.w.den)


# ---------------------------------------------------------------------------
# canonical forms and moderation

@dataclass(frozen=True)
class CanonicalForm:
    terms: tuple  # ((t, unit Elem over the base field), ...)

    @property
    def exponents(self) -> list:
        return [t for t, _ in self.terms]


def canonical_form(a: Elem, base: LocalField) -> CanonicalForm:
    """Split a = sum a_i pi_{t_i} with a_i base units and t_i pairwise
    inequivalent modulo the base lattice.

    ``a`` lives over constants with e' = N e; pi'-exponents are grouped by
    their class mod N, each class giving one base-level element.
    """
    big = a.L
    kb, kB = base.k, big.k
    if kB.e % kb.e or kB.f != kb.f or kB.p != kb.p:
        raise InvalidInput("element does not live over an extension of the base constants")
    step = kB.e // kb.e
    if a.X is None:
        return CanonicalForm(())
    off = [j for j in range(kB.e) if j % step]
    if off and np.any(a.D[..., off]):
        raise InvalidInput("denominator must be defined over the base constants")
    Dbase = np.ascontiguousarray(a.D[..., ::step])
    classes = {}
    for j in range(kB.e):
        if a.X[..., j].any():
            classes.setdefault((a.k + j) % step, []).append(j)
    terms = []
    for c, js in classes.items():
        bexp = {j: (a.k + j - c) // step for j in js}
        low = min(bexp.values())
        Xbase = kb.zeros(a.X.shape[0], a.X.shape[1])
        for j in js:
            q, r = divmod(bexp[j] - low, kb.e)
            if q < kb.N:
                Xbase[..., r] = np.mod(Xbase[..., r] + a.X[..., j] * pow(-kb.p, q, kb.mod), kb.mod)
        unit = Elem.make(base, low, Xbase, Dbase, kb.e * kb.N)
        if unit.X is None:
            continue
        v = unit.val()
        terms.append((Fraction(c, kB.e) + v, unit.shift(-v)))
    terms.sort(key=lambda tu: tu[0])
    return CanonicalForm(tuple(terms))


def is_moderate(a: Elem, base: LocalField, ctx: EpsilonContext) -> bool:
    return all(in_lambda_epsilon(t, ctx) for t in canonical_form(a, base).exponents
               if t >= 0)


# ---------------------------------------------------------------------------
# epsilon lifts

@dataclass
class EpsilonLift:
    a: Elem  # lift in O_K
    b: Elem  # element of O_M with v(a - b^p) >= eps
    c: Elem  # (a - b^p) / pi_eps


def epsilon_lift(abar: RatFun, M, ctx: EpsilonContext) -> EpsilonLift:
    """Lift abar to a in O_K with a = b^p + pi_eps c, b, c integral over M."""
    K = M.base
    eps = ctx.epsilon
    if (eps * K.e).denominator != 1:
        raise RequiresConstantExtension(f"epsilon = {eps} not in the value group",
                                        suggested_m=K.k.m + 1)
    beta = abar.coeff_frobenius(-1)  # beta(r)^p = abar(r^p)
    b = M.lift(beta)
    g = M.g_elem
    a = Elem.zero(K)
    gi = K.one()
    for i in range(M.p):
        ci = b.component(i)  # includes the common denominator of b
        if ci.X is not None:
            a = a + (ci ** M.p) * gi
        gi = gi * g
    diff = a.with_field(M) - b ** M.p
    if diff.X is not None and diff.val() < eps:
        from .errors import InternalInconsistency
        raise InternalInconsistency(f"epsilon lift defect {diff.val()} < {eps}")
    c = diff.shift(-eps)
    return EpsilonLift(a, b, c)


__all__ = [
    "Elem", "LocalField", "Frac", "CaseA", "CaseB", "ReducedUnit", "kummer_reduce",
    "is_reduced", "reduced_unit_value", "CanonicalForm", "canonical_form",
    "is_moderate", "EpsilonLift", "epsilon_lift", "gauss_valuation", "residue",
    "lift", "as_frac",
]
