"""Degree-p fierce Kummer extensions M = K(v), v^p = u with u reduced.

M is generated over O_K by an integral element x (x = D v in case A,
x = W_D (v - 1)/pi_t in case B) whose minimal relation

    x^p = g - sum_{0<i<p} rho_i x^i

has polynomial coefficients.  Elements of M reuse :class:`Elem` with X
arrays of x-length p.  The residue field M-bar = F_q(r), r^p = s, is handled
with the same :class:`RatFun` class (the variable is simply read as r).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import InvalidInput, PrecisionExhausted
from .local_field import (CaseA, Elem, LocalField, ReducedUnit, is_reduced,
                          kummer_reduce)
from .residue_field import RatFun


def _ratfun_solve(G: list, rhs: list) -> list:
    """Solve c G = rhs over F_q(s) (G square, rows indexed like c)."""
    n = len(G)
    # transpose to the usual A c = rhs form
    A = [[G[j][i] for j in range(n)] + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not A[r][col].is_zero()), None)
        if piv is None:
            raise InvalidInput("singular p-basis matrix")
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].inverse()
        A[col] = [a * inv for a in A[col]]
        for r in range(n):
            if r != col and not A[r][col].is_zero():
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


class FierceExt:
    """M = K(x) together with Galois action, norms and residues."""

    def __init__(self, red: ReducedUnit):
        if not is_reduced(red):
            raise InvalidInput("make_extension needs a reduced unit")
        K = red.L
        if not isinstance(K, LocalField):
            raise InvalidInput("extensions are only built over the base field")
        self.base = K
        self.red = red
        self.k = kf = K.k
        self.p, self.e, self.F = K.p, K.e, K.F
        self.dim = p = K.p
        self._one = None
        if isinstance(red, CaseA):
            u = red.u.to_elem()
            self.t = None
            Xu, Du = u.X, u.D
            self.cap = u.rel
            self.g = kf.mul(Xu, kf_pow(kf, Du, p - 1))
            self.rho = [None] * p
            self.scale = Du          # x = Du * v
        else:
            w = red.w.to_elem()
            t = red.t
            self.t = t
            W, WD = w.X, w.D
            self.cap = w.rel
            self.g = kf.mul(W, kf_pow(kf, WD, p - 1))
            self.rho = [None] * p
            for i in range(1, p):
                lvl = (1 + (i - p) * t) * kf.e
                assert lvl.denominator == 1 and lvl > 0
                c = -(comb(p, i) // p)
                self.rho[i] = kf.scale_int(kf.mul_pi(kf_pow(kf, WD, p - i), int(lvl)), c)
            self.scale = WD          # x = WD (v - 1)/pi_t
        self._build_relation()
        self._build_residue()
        self._build_sigma()

    # -- relation --------------------------------------------------------------
    def _build_relation(self):
        kf, p = self.k, self.p
        S = max([self.g.shape[1]] + [r.shape[1] for r in self.rho if r is not None])
        xp = kf.zeros(p, S)
        xp[0:1, :self.g.shape[1]] = self.g
        for i in range(1, p):
            if self.rho[i] is not None:
                xp[i:i + 1, :self.rho[i].shape[1]] = kf.neg(self.rho[i])
        self.xp = kf.trim(xp)
        powers = [self.xp]
        for _ in range(p - 2):
            prev = powers[-1]
            shifted = kf.zeros(p + 1, prev.shape[1])
            shifted[1:] = prev
            top = shifted[p:p + 1]
            low = shifted[:p].copy()
            powers.append(kf.trim(kf.add(low, kf.mul(top, self.xp))))
        self.high = powers  # high[j] = x^(p+j)

    def mulX(self, A, B):
        kf, p = self.k, self.p
        R = kf.mul(A, B)
        if R.shape[0] <= p:
            return R
        out = R[:p].copy()
        for j in range(p, R.shape[0]):
            if R[j].any():
                out = kf.add(out, kf.mul(R[j:j + 1], self.high[j - p]))
        return out

    # -- residues --------------------------------------------------------------
    def _build_residue(self):
        F, p = self.F, self.p
        gbar = self.k.residue_poly(self.g)
        self.gbar = RatFun(F, gbar)
        self.xbar = RatFun(F, F.R([c.pth_root() for c in gbar.coeffs()]))  # in r
        assert self.xbar ** p == self.gbar.subs_pth_power()
        G = []
        xi = RatFun.const(F, 1)
        for i in range(p):
            G.append(_split_r(F, xi, p))
            xi = xi * self.xbar
        self.G = G

    def residue_of(self, X, D) -> RatFun:
        kf, F = self.k, self.F
        acc = RatFun.const(F, 0)
        xi = RatFun.const(F, 1)
        for i in range(X.shape[0]):
            Pi = kf.residue_poly(X[i:i + 1])
            if not Pi.is_zero():
                acc = acc + RatFun(F, Pi.inflate(p_of(self)), _reduced=True) * xi
            xi = xi * self.xbar
        Dp = kf.residue_poly(D).inflate(self.p)
        return acc / RatFun(self.F, Dp, _reduced=True)

    def res_zero(self) -> RatFun:
        return RatFun.const(self.F, 0)

    def lift(self, a: RatFun) -> Elem:
        """An element of O_M with residue a (a read as a function of r)."""
        kf, F, p = self.k, self.F, self.p
        if a.is_zero():
            return Elem.zero(self)
        rhs = _split_r(F, a, p)
        c = _ratfun_solve(self.G, rhs)
        den = F.R([1])
        for ci in c:
            if not ci.is_zero():
                den = den * ci.den.divmod(den.gcd(ci.den))[0]
        nums = []
        S = 1
        for ci in c:
            P = (ci.num * den.divmod(ci.den)[0]) if not ci.is_zero() else F.R([0])
            nums.append(kf.lift_poly(P))
            S = max(S, nums[-1].shape[1])
        X = kf.zeros(p, S)
        for i, arr in enumerate(nums):
            X[i:i + 1, :arr.shape[1]] = arr
        return Elem.make(self, 0, X, kf.lift_poly(den), kf.e * kf.N)

    # -- constructors ------------------------------------------------------------
    def one(self) -> Elem:
        return self.base.one().with_field(self)

    def from_int(self, c: int) -> Elem:
        return self.base.from_int(c).with_field(self)

    def from_base(self, a: Elem) -> Elem:
        return a.with_field(self)

    def x(self) -> Elem:
        X = self.k.zeros(2, 1)
        X[1, 0, 0, 0] = 1
        return Elem.make(self, 0, X, self.k.one(), self.k.e * self.k.N)

    def x_pow(self, i: int) -> Elem:
        X = self.k.zeros(i + 1, 1)
        X[i, 0, 0, 0] = 1
        if i >= self.p:
            return self.x() ** i
        return Elem.make(self, 0, X, self.k.one(), self.k.e * self.k.N)

    @property
    def g_elem(self) -> Elem:
        return Elem.make(self.base, 0, self.g, self.k.one(), self.cap)

    def v(self) -> Elem:
        """The Kummer generator with v^p = u."""
        kf = self.k
        sc = Elem.make(self.base, 0, self.scale, kf.one(), kf.e * kf.N)
        if self.t is None:
            return self.x() * sc.inverse()
        return self.one() + self.x().shift(self.t) * sc.inverse()

    # -- Galois action -------------------------------------------------------------
    def _build_sigma(self):
        kf, p = self.k, self.p
        sx = kf.zeros(2, 1)
        sx[1:2, :1] = kf.zeta
        if self.t is not None:
            tk = int(self.t * kf.e)
            shifted = kf.div_pi(kf.lam, tk)
            c = kf.mul(shifted, self.scale)
            sx = kf.add(sx, c)  # constant term in x: lam pi_{-t} W_D
        self.sigma_x = sx
        # sig[i] = sigma(x^i)
        sig = [kf.one()]
        for _ in range(1, p):
            sig.append(self.mulX(sig[-1], sx))
        self.sig = sig

    def sigma(self, a: Elem) -> Elem:
        if a.X is None:
            return Elem.zero(self, a.k)
        kf = self.k
        out = kf.zeros(1, 1)
        for i in range(a.X.shape[0]):
            if a.X[i].any():
                out = kf.add(out, kf.mul(a.X[i:i + 1], self.sig[i]))
        return Elem.make(self, a.k, out, a.D, min(a.rel, self.cap))

    def galois_apply(self, j: int, a: Elem) -> Elem:
        j %= self.p
        for _ in range(j):
            a = self.sigma(a)
        return a

    def conjugates(self, a: Elem) -> list:
        out = [a]
        for _ in range(self.p - 1):
            out.append(self.sigma(out[-1]))
        return out

    def norm(self, a: Elem) -> Elem:
        if a.L is self.base:
            return a ** self.p
        prod = self.one()
        for c in self.conjugates(a):
            prod = prod * c
        return self._to_base(prod)

    def trace(self, a: Elem) -> Elem:
        if a.L is self.base:
            return a * self.p
        tot = Elem.zero(self)
        for c in self.conjugates(a):
            tot = tot + c
        return self._to_base(tot)

    def _to_base(self, a: Elem) -> Elem:
        if a.X is None:
            return Elem.zero(self.base, a.k)
        kf = self.k
        if a.X.shape[0] > 1:
            vx = kf.val(a.X[1:])
            if vx < a.rel:
                raise PrecisionExhausted("norm/trace has nonzero x-components")
        return Elem.make(self.base, a.k, a.X[0:1], a.D, a.rel)

    def inverse(self, a: Elem) -> Elem:
        conj = self.conjugates(a)
        prod = self.one()
        for c in conj[1:]:
            prod = prod * c
        n = self._to_base(prod * a)
        return prod * n.inverse()

    def displacement(self, j: int = 1) -> Fraction:
        if j % self.p == 0:
            raise InvalidInput("j must be nonzero mod p")
        x = self.x()
        return (self.galois_apply(j, x) - x).val()

    def __repr__(self):
        kind = "A" if self.t is None else f"B(t={self.t})"
        return f"FierceExt({kind}, p={self.p}, e={self.e})"


def p_of(M) -> int:
    return M.p


def kf_pow(kf, A, n: int):
    out = kf.one()
    for _ in range(n):
        out = kf.mul(out, A)
    return out


def _split_r(F, a: RatFun, p: int) -> list:
    """a(r) = sum_j a_j(r^p) r^j; returns [a_j(s)]."""
    num = a.num * a.den ** (p - 1)
    den = F.R([c.frobenius() for c in a.den.coeffs()])  # a.den(r)^p = den(s)
    cs = num.coeffs()
    return [RatFun(F, F.R(cs[j::p]), den) for j in range(p)]


def make_extension(red: ReducedUnit) -> FierceExt:
    return FierceExt(red)


def reduce_over_extension(uM, max_steps: int = 10 ** 4):
    """Kummer-reduce a unit of M (an Elem or a Frac over M)."""
    return kummer_reduce(uM, max_steps)


__all__ = ["FierceExt", "make_extension", "reduce_over_extension"]
