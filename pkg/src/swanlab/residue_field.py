"""The residue field F_q(s): rational functions, p-bases, forms a*ds/s and Cartier.

Polynomial arithmetic is delegated to python-flint's ``fq_default_poly``.
The p-basis element is always ``s``.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Optional

import flint

from .errors import InvalidInput, NotFixedByCartier, NotKilledByCartier


class Fq:
    """F_{p^f} together with its polynomial ring in s."""

    def __init__(self, p: int, f: int = 1):
        if p < 2 or not flint.fmpz(p).is_prime():
            raise InvalidInput(f"{p} is not prime")
        if f < 1:
            raise InvalidInput("f must be positive")
        self.p, self.f, self.q = p, f, p ** f
        self.ctx = flint.fq_default_ctx(p, f, "g")
        self.R = flint.fq_default_poly_ctx(self.ctx)
        # integer coefficients of the defining polynomial of F_q over F_p
        self.modulus = [int(c) for c in self.ctx.modulus().coeffs()]

    def __repr__(self):
        return f"Fq({self.p}, {self.f})"

    def __eq__(self, other):
        return isinstance(other, Fq) and (self.p, self.f) == (other.p, other.f)

    def __hash__(self):
        return hash((self.p, self.f))

    def elem(self, x):
        """Element from an int or a list of F_p-coordinates in the basis 1, g, ..."""
        if isinstance(x, (list, tuple)):
            return self.ctx([int(c) % self.p for c in x])
        if isinstance(x, flint.fq_default):
            return x
        return self.ctx(x)

    def coords(self, c) -> list:
        """F_p coordinates (length f) of an F_q element."""
        lst = [int(v) for v in c.to_list()]
        return lst + [0] * (self.f - len(lst))

    def poly(self, coeffs):
        return self.R([self.elem(c) if isinstance(c, (list, tuple)) else c
                       for c in coeffs])

    def is_prime_field_elem(self, c) -> Optional[int]:
        co = self.coords(c)
        if any(co[1:]):
            return None
        return co[0]

    def elements(self):
        """Iterate over all q elements (small fields only)."""
        import itertools
        for co in itertools.product(range(self.p), repeat=self.f):
            yield self.elem(list(co))

    def random_elem(self, rng: random.Random):
        return self.elem([rng.randrange(self.p) for _ in range(self.f)])


@lru_cache(maxsize=None)
def get_fq(p: int, f: int = 1) -> Fq:
    return Fq(p, f)


# polynomial helpers ---------------------------------------------------------

def _frob_inv_poly(F: Fq, P):
    """Apply the inverse Frobenius to each coefficient of P."""
    return F.R([c.pth_root() for c in P.coeffs()])


def _frob_poly(F: Fq, P):
    return F.R([c.frobenius() for c in P.coeffs()])


def _split_mod_p(F: Fq, P) -> list:
    """Write P = sum_i s^i Q_i(s^p) and return [Q_0, ..., Q_{p-1}]."""
    p = F.p
    cs = P.coeffs()
    return [F.R(cs[i::p]) for i in range(p)]


def _ord_s(P) -> int:
    if P.is_zero():
        raise InvalidInput("order of zero")
    for i, c in enumerate(P.coeffs()):
        if not c.is_zero():
            return i
    raise AssertionError


def poly_pth_root(F: Fq, P):
    """Return Q with Q^p = P, or None."""
    parts = _split_mod_p(F, P)
    if any(not q.is_zero() for q in parts[1:]):
        return None
    return _frob_inv_poly(F, parts[0])


class RatFun:
    """num/den in F_q(s), den monic and coprime to num."""

    __slots__ = ("F", "num", "den")

    def __init__(self, F: Fq, num, den=None, _reduced=False):
        self.F = F
        if not hasattr(num, "coeffs"):
            num = F.R([num])
        if den is None:
            den = F.R([1])
        elif not hasattr(den, "coeffs"):
            den = F.R([den])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = F.R([1])
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num.divmod(g)[0]
                    den = den.divmod(g)[0]
            lc = den.leading_coefficient()
            if not lc.is_one():
                inv = lc.inverse()
                num, den = num * inv, den * inv
        self.num, self.den = num, den

    # construction
    @classmethod
    def const(cls, F: Fq, c) -> "RatFun":
        return cls(F, F.R([F.elem(c)]), _reduced=False)

    @classmethod
    def s(cls, F: Fq) -> "RatFun":
        return cls(F, F.R.gen(), _reduced=True)

    @classmethod
    def from_coeffs(cls, F: Fq, num, den=(1,)) -> "RatFun":
        return cls(F, F.poly(num), F.poly(den))

    def _coerce(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            if other.F != self.F:
                raise InvalidInput("residue fields differ")
            return other
        if isinstance(other, int) or hasattr(other, "frobenius"):
            return RatFun(self.F, self.F.R([other]), _reduced=True)
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFun(self.F, self.num + o.num, self.den)
        return RatFun(self.F, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(self.F, -self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFun(self.F, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFun(self.F, self.den, self.num, _reduced=False)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFun(self.F, self.num ** k, self.den ** k, _reduced=True)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, RatFun) else other
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((tuple(str(c) for c in self.num.coeffs()),
                     tuple(str(c) for c in self.den.coeffs())))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    # calculus
    def derivative(self) -> "RatFun":
        """d/ds."""
        n, d = self.num, self.den
        return RatFun(self.F, n.derivative() * d - n * d.derivative(), d * d)

    def frobenius(self) -> "RatFun":
        """x -> x^p."""
        return self ** self.F.p

    def coeff_frobenius(self, k: int = 1) -> "RatFun":
        """Apply Frobenius^k to the coefficients only (s is fixed)."""
        F = self.F
        n = F.R([c.frobenius(k) for c in self.num.coeffs()])
        d = F.R([c.frobenius(k) for c in self.den.coeffs()])
        return RatFun(F, n, d, _reduced=True)

    def subs_pth_power(self) -> "RatFun":
        """a(s) -> a(s^p)."""
        return RatFun(self.F, self.num.inflate(self.F.p), self.den.inflate(self.F.p),
                      _reduced=True)

    def ord_s(self) -> int:
        return _ord_s(self.num) - _ord_s(self.den)

    def degree(self) -> int:
        return max(self.num.degree(), self.den.degree())

    def __repr__(self):
        return f"RatFun({self})"

    def __str__(self):
        return ratfun_str(self)


def _coef_str(F: Fq, c) -> str:
    if F.f == 1:
        return str(int(F.coords(c)[0]))
    co = F.coords(c)
    terms = []
    for k, v in enumerate(co):
        if v:
            mono = "1" if k == 0 else ("g" if k == 1 else f"g^{k}")
            terms.append(mono if v == 1 and k else f"{v}" if k == 0 else f"{v}*{mono}")
    return "+".join(terms) if terms else "0"


def poly_str(F: Fq, P, var="s") -> str:
    if P.is_zero():
        return "0"
    terms = []
    for k, c in reversed(list(enumerate(P.coeffs()))):
        if c.is_zero():
            continue
        cs = _coef_str(F, c)
        if "+" in cs:
            cs = f"({cs})"
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            terms.append(cs)
        elif cs == "1":
            terms.append(mono)
        else:
            terms.append(f"{cs}*{mono}")
    return " + ".join(terms)


def ratfun_str(a: RatFun) -> str:
    ns = poly_str(a.F, a.num)
    if a.den.is_one():
        return ns
    return f"({ns})/({poly_str(a.F, a.den)})"


# p-bases --------------------------------------------------------------------

def pth_power_decompose(a: RatFun) -> list:
    """Return [b_0, ..., b_{p-1}] with a = sum b_i^p s^i."""
    F = a.F
    p = F.p
    P = a.num * a.den ** (p - 1)
    parts = _split_mod_p(F, P)
    return [RatFun(F, _frob_inv_poly(F, Q), a.den) for Q in parts]


def is_pth_power(a: RatFun) -> Optional[RatFun]:
    bs = pth_power_decompose(a)
    if any(not b.is_zero() for b in bs[1:]):
        return None
    return bs[0]


def pth_root(a: RatFun) -> RatFun:
    r = is_pth_power(a)
    if r is None:
        raise InvalidInput(f"{a} is not a p-th power")
    return r


def random_ratfun(F: Fq, deg: int, rng: random.Random, den_deg: Optional[int] = None,
                  nonzero: bool = True) -> RatFun:
    dd = deg if den_deg is None else den_deg
    while True:
        num = F.R([F.random_elem(rng) for _ in range(deg + 1)])
        den = F.R([F.random_elem(rng) for _ in range(dd)] + [F.ctx(1)])
        a = RatFun(F, num, den)
        if not nonzero or not a.is_zero():
            return a


# linear algebra over F_p ------------------------------------------------------

def solve_mod_p(rows: list, rhs: list, p: int) -> Optional[list]:
    """Solve A x = rhs over F_p (A given by rows); any solution, or None."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    if n == 0:
        return [] if not any(v % p for v in rhs) else None
    aug = flint.nmod_mat(m, n + 1, [v % p for r, b in zip(rows, rhs) for v in list(r) + [b]], p)
    red, rank = aug.rref()
    x = [0] * n
    for i in range(rank):
        row = [int(red[i, j]) for j in range(n + 1)]
        lead = next((j for j in range(n + 1) if row[j]), None)
        if lead == n:
            return None
        x[lead] = row[n]
    return x


# forms ----------------------------------------------------------------------

class DiffForm:
    """The form a * ds/s."""

    __slots__ = ("a",)

    def __init__(self, a: RatFun):
        self.a = a

    @property
    def F(self) -> Fq:
        return self.a.F

    @classmethod
    def zero(cls, F: Fq) -> "DiffForm":
        return cls(RatFun.const(F, 0))

    @classmethod
    def ds(cls, F: Fq) -> "DiffForm":
        return cls(RatFun.s(F))

    @classmethod
    def dlog_s(cls, F: Fq) -> "DiffForm":
        return cls(RatFun.const(F, 1))

    def __add__(self, o):
        return DiffForm(self.a + o.a)

    def __sub__(self, o):
        return DiffForm(self.a - o.a)

    def __neg__(self):
        return DiffForm(-self.a)

    def scale(self, z) -> "DiffForm":
        return DiffForm(self.a * z)

    def __eq__(self, o):
        return isinstance(o, DiffForm) and self.a == o.a

    def __hash__(self):
        return hash(("form", self.a))

    def is_zero(self) -> bool:
        return self.a.is_zero()

    def __repr__(self):
        return f"DiffForm(({self.a})*ds/s)"


def d(y: RatFun) -> DiffForm:
    """dy = s*y' ds/s."""
    return DiffForm(y.derivative() * RatFun.s(y.F))


def dlog(y: RatFun) -> DiffForm:
    if y.is_zero():
        raise InvalidInput("dlog of zero")
    return DiffForm(y.derivative() * RatFun.s(y.F) / y)


def cartier(w: DiffForm) -> DiffForm:
    return DiffForm(pth_power_decompose(w.a)[0])


def v1(w: DiffForm) -> int:
    """Order of the form at s = 0, with ds/s of order 0."""
    if w.is_zero():
        raise InvalidInput("v1 of the zero form")
    return w.a.ord_s()


def solve_exact(w: DiffForm) -> RatFun:
    """y with dy = w; exists exactly when C(w) = 0."""
    F = w.F
    bs = pth_power_decompose(w.a)
    if not bs[0].is_zero():
        raise NotKilledByCartier(f"C({w}) != 0")
    s = RatFun.s(F)
    y = RatFun.const(F, 0)
    for i in range(1, F.p):
        if not bs[i].is_zero():
            y = y + bs[i] ** F.p * s ** i * RatFun.const(F, pow(i, -1, F.p))
    return y


def solve_dlog(w: DiffForm, degree_bound: Optional[int] = None) -> Optional[RatFun]:
    """y with dy/y = w, or None if no such y (with factors of bounded degree).

    A logarithmic form has only simple poles; the multiplicity of each
    irreducible f in y is read off from the residue of w/s along f.
    """
    F = w.F
    if cartier(w) != w:
        raise NotFixedByCartier(f"C({w}) != {w}")
    if w.is_zero():
        return RatFun.const(F, 1)
    s = F.R.gen()
    h = RatFun(F, w.a.num, w.a.den * s)  # w/s = dy/y in ds
    A, D = h.num, h.den
    y = RatFun.const(F, 1)
    if not D.is_one():
        _, facs = D.factor()
        for fac, mult in facs:
            if mult != 1:
                return None
            if degree_bound is not None and fac.degree() > degree_bound:
                return None
            G = D.divmod(fac)[0]
            r = (A * G.inverse_mod(fac) * fac.derivative().inverse_mod(fac)).divmod(fac)[1]
            if r.degree() > 0:
                return None
            n = F.is_prime_field_elem(r.coeffs()[0] if not r.is_zero() else F.ctx(0))
            if n is None:
                return None
            y = y * RatFun(F, fac, _reduced=True) ** n
    return y if dlog(y) == w else None


def artin_schreier_solve(a: RatFun) -> Optional[RatFun]:
    """b with b^p - b = a, or None."""
    F = a.F
    p = F.p
    if a.is_zero():
        return RatFun.const(F, 0)
    E = poly_pth_root(F, a.den)
    if E is None:
        return None
    N = a.num
    Ep1 = E ** (p - 1)
    dB = max(E.degree(), N.degree() // p) + 1
    # F_p-linear system in the coordinates of B = sum_k c_k s^k
    cols = []
    for k in range(dB + 1):
        for j in range(F.f):
            c = F.elem([1 if i == j else 0 for i in range(F.f)])
            mono = F.R([0] * k + [c])
            img = mono ** p - mono * Ep1
            cols.append(img)
    L = max([c.degree() for c in cols] + [N.degree()]) + 1

    def vec(P):
        cs = P.coeffs()
        out = []
        for i in range(L):
            out.extend(F.coords(cs[i]) if i < len(cs) else [0] * F.f)
        return out

    colv = [vec(c) for c in cols]
    rows = [[colv[j][i] for j in range(len(cols))] for i in range(L * F.f)]
    x = solve_mod_p(rows, vec(N), p)
    if x is None:
        return None
    B = F.R([0])
    for k in range(dB + 1):
        co = x[k * F.f:(k + 1) * F.f]
        if any(co):
            B = B + F.R([0] * k + [F.elem(co)])
    b = RatFun(F, B, E)
    assert b ** p - b == a
    return b


__all__ = [
    "Fq", "get_fq", "RatFun", "DiffForm", "pth_power_decompose", "is_pth_power",
    "pth_root", "artin_schreier_solve", "cartier", "solve_dlog", "solve_exact",
    "v1", "d", "dlog", "random_ratfun", "solve_mod_p", "poly_pth_root",
]
