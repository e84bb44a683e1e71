"""Truncated p-adic constants k = W(F_q)[pi]/(pi^e + p) and the pi_t system.

Elements of the coefficient ring live in numpy int64 arrays indexed
``[x_deg, s_deg, y_deg, pi_deg]``: ``y`` generates the unramified part
(modulo a lift of the Conway-type polynomial of F_q), ``pi`` is the
uniformizer with ``pi^e = -p`` and ``s``/``x`` are the polynomial variables
used by the local field and its extensions.  Everything is reduced mod p^N.
Products go through a single Kronecker-packed ``nmod_poly`` multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import flint

from .errors import InvalidInput, NoConvergenceCertificate, PrecisionExhausted
from .residue_field import Fq, get_fq

INF = 10 ** 9  # valuation of an exact zero, in pi-units


class ConstField:
    """The constants field together with array arithmetic over its integers."""

    def __init__(self, p: int, m: int = 0, f: int = 1, N: int = 6):
        if N < 4:
            raise PrecisionExhausted("working precision must be at least 4 digits")
        if p ** N >= 2 ** 31:
            raise InvalidInput(f"p^N = {p}^{N} too large for the int64 kernel")
        self.p, self.m, self.f, self.N = p, m, f, N
        self.e = (p - 1) * p ** m
        self.mod = p ** N
        self.F: Fq = get_fq(p, f)
        self.h = np.array(self.F.modulus, dtype=np.int64)  # monic, degree f
        self._zeta = None

    def __repr__(self):
        return f"ConstField(p={self.p}, m={self.m}, f={self.f}, N={self.N}, e={self.e})"

    def __eq__(self, other):
        return isinstance(other, ConstField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def key(self):
        return (self.p, self.m, self.f, self.N)

    @property
    def eisenstein(self) -> str:
        return f"X^{self.e} + {self.p}"

    # --- array constructors --------------------------------------------------
    def zeros(self, a: int = 1, s: int = 1) -> np.ndarray:
        return np.zeros((a, s, self.f, self.e), dtype=np.int64)

    def scalar(self, c: int) -> np.ndarray:
        z = self.zeros()
        z[0, 0, 0, 0] = c % self.mod
        return z

    def one(self) -> np.ndarray:
        return self.scalar(1)

    def pi_pow(self, k: int) -> np.ndarray:
        """pi^k for k >= 0."""
        if k < 0:
            raise InvalidInput("negative power of pi is not integral")
        q, r = divmod(k, self.e)
        z = self.zeros()
        z[0, 0, 0, r] = pow(-self.p, q, self.mod) if q < self.N else 0
        return z

    # --- basic ring operations -----------------------------------------------
    def reduce(self, A: np.ndarray) -> np.ndarray:
        return np.mod(A, self.mod)

    def add(self, A, B):
        a = max(A.shape[0], B.shape[0])
        s = max(A.shape[1], B.shape[1])
        out = self.zeros(a, s)
        out[:A.shape[0], :A.shape[1]] += A
        out[:B.shape[0], :B.shape[1]] += B
        return np.mod(out, self.mod)

    def neg(self, A):
        return np.mod(-A, self.mod)

    def sub(self, A, B):
        return self.add(A, self.neg(B))

    def scale_int(self, A, c: int):
        return np.mod(A * (c % self.mod), self.mod)

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Product of two arrays (x, s, y, pi) with folding of y and pi."""
        f, e, mod = self.f, self.e, self.mod
        a1, s1 = A.shape[:2]
        a2, s2 = B.shape[:2]
        yp, kp = 2 * f - 1, 2 * e - 1
        sp = s1 + s2 - 1
        ao = a1 + a2 - 1
        if A.size * B.size <= 4096:
            return self._mul_small(A, B)
        PA = np.zeros((a1, sp, yp, kp), dtype=np.int64)
        PA[:, :s1, :f, :e] = A
        PB = np.zeros((a2, sp, yp, kp), dtype=np.int64)
        PB[:, :s2, :f, :e] = B
        pa = flint.nmod_poly(PA.ravel().tolist(), mod)
        pb = flint.nmod_poly(PB.ravel().tolist(), mod)
        cs = (pa * pb).coeffs()
        total = ao * sp * yp * kp
        raw = np.zeros(total, dtype=np.int64)
        if cs:
            raw[:len(cs)] = np.array([int(c) for c in cs], dtype=np.int64)
        return self._fold(raw.reshape(ao, sp, yp, kp))

    def _mul_small(self, A, B):
        f, e = self.f, self.e
        a1, s1 = A.shape[:2]
        a2, s2 = B.shape[:2]
        out = np.zeros((a1 + a2 - 1, s1 + s2 - 1, 2 * f - 1, 2 * e - 1), dtype=object)
        Ao = A.astype(object)
        Bo = B.astype(object)
        for i in range(a1):
            for j in range(s1):
                for y in range(f):
                    for k in range(e):
                        c = Ao[i, j, y, k]
                        if c:
                            out[i:i + a2, j:j + s2, y:y + f, k:k + e] += c * Bo
        out = np.mod(out, self.mod).astype(np.int64)
        return self._fold(out)

    def _fold(self, R: np.ndarray) -> np.ndarray:
        f, e, p, mod = self.f, self.e, self.p, self.mod
        R = np.mod(R, mod)
        if R.shape[3] > e:
            hi = R[..., e:]
            R = R[..., :e].copy()
            R[..., :hi.shape[3]] -= p * hi
            R = np.mod(R, mod)
        if R.shape[2] > f:
            h = self.h
            for j in range(R.shape[2] - 1, f - 1, -1):
                top = R[:, :, j, :].copy()
                if top.any():
                    for i in range(f):
                        if h[i]:
                            R[:, :, j - f + i, :] = np.mod(R[:, :, j - f + i, :] - h[i] * top, mod)
            R = R[:, :, :f, :]
        return np.ascontiguousarray(R)

    def mul_pi(self, A: np.ndarray, c: int) -> np.ndarray:
        """A * pi^c, c >= 0."""
        if c == 0:
            return A
        q, r = divmod(c, self.e)
        out = A
        if r:
            out = np.zeros_like(A)
            out[..., r:] = A[..., :self.e - r]
            out[..., :r] = -self.p * A[..., self.e - r:]
        if q:
            out = out * (pow(-self.p, q, self.mod) if q < self.N else 0)
        return np.mod(out, self.mod)

    def div_pi(self, A: np.ndarray, c: int) -> np.ndarray:
        """Exact division A / pi^c; caller guarantees v(A) >= c.

        Digits that shift in from above are unknown and set to 0; callers
        account for the lost precision.
        """
        if c == 0:
            return A
        p, e = self.p, self.e
        q, r = divmod(c, e)
        out = A.copy()
        if r:
            low = out[..., :r]
            if np.any(low % p):
                raise AssertionError("div_pi: not divisible")
            new = np.zeros_like(out)
            new[..., :e - r] = out[..., r:]
            new[..., e - r:] = -(low // p)
            out = np.mod(new, self.mod)
        for _ in range(q):
            if np.any(out % p):
                raise AssertionError("div_pi: not divisible")
            out = np.mod(-(out // p), self.mod)
        return out

    # --- valuations ----------------------------------------------------------
    def vp_array(self, A: np.ndarray) -> np.ndarray:
        """Entrywise p-adic valuation, capped at N (for zero)."""
        p = self.p
        v = np.zeros(A.shape, dtype=np.int64)
        cur = A.copy()
        for _ in range(self.N):
            mask = (cur % p == 0)
            if not mask.any():
                break
            v += mask
            cur = np.where(mask, cur // p, cur)
        return v

    def val(self, A: np.ndarray) -> int:
        """pi-adic (Gauss) valuation in pi-units; INF if zero mod p^N."""
        if not A.any():
            return INF
        v = self.vp_array(A) * self.e + np.arange(self.e)
        v = np.where(A == 0, INF, v)
        return int(v.min())

    def trim(self, A: np.ndarray) -> np.ndarray:
        """Drop top s-coefficients that vanish identically."""
        nz = np.nonzero(A.reshape(A.shape[0], A.shape[1], -1).any(axis=(0, 2)))[0]
        top = int(nz[-1]) + 1 if nz.size else 1
        if top == A.shape[1]:
            return A
        return A[:, :top].copy()

    # --- residues and lifts ---------------------------------------------------
    def residue_poly(self, A: np.ndarray):
        """Residue of a (1, S, f, e) array as an F_q[s] polynomial."""
        F = self.F
        low = np.mod(A[0, :, :, 0], self.p)
        return F.R([F.elem(list(row)) for row in low.tolist()])

    def lift_poly(self, P) -> np.ndarray:
        F = self.F
        cs = P.coeffs() or [F.ctx(0)]
        out = self.zeros(1, len(cs))
        for i, c in enumerate(cs):
            out[0, i, :, 0] = F.coords(c)
        return out

    def residue_const(self, A: np.ndarray):
        return self.F.elem(list(np.mod(A[0, 0, :, 0], self.p)))

    def lift_const(self, c) -> np.ndarray:
        out = self.zeros()
        out[0, 0, :, 0] = self.F.coords(c)
        return out

    # --- constants -------------------------------------------------------------
    def unit_inverse(self, A: np.ndarray) -> np.ndarray:
        """Inverse of a unit constant (shape (1,1,f,e)) by Newton iteration."""
        if self.val(A) != 0:
            raise InvalidInput("not a unit")
        x = self.lift_const(self.residue_const(A).inverse())
        prec = 1
        two = self.scalar(2)
        while prec < self.e * self.N:
            x = self.mul(x, self.sub(two, self.mul(A, x)))
            prec *= 2
        return x

    def divide(self, A, B):
        """A / B for constants with v(A) >= v(B)."""
        vb = self.val(B)
        if vb >= INF:
            raise ZeroDivisionError
        ub = self.div_pi(B, vb)
        va = self.val(A)
        if va < vb:
            raise InvalidInput("quotient not integral")
        return self.mul(self.div_pi(A, vb) if va < INF else A, self.unit_inverse(ub))

    def poly_eval(self, coeffs: list, x: np.ndarray) -> np.ndarray:
        acc = self.zeros()
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def hensel_root(self, coeffs: list, x0: np.ndarray) -> np.ndarray:
        """Newton iteration for a root of sum coeffs[i] X^i starting at x0."""
        deriv = [self.scale_int(c, i) for i, c in enumerate(coeffs)][1:]
        fx = self.poly_eval(coeffs, x0)
        dfx = self.poly_eval(deriv, x0)
        vf, vd = self.val(fx), self.val(dfx)
        if vf >= INF:
            return x0
        if not vf > 2 * vd:
            raise NoConvergenceCertificate(
                f"v(f(x0)) = {Fraction(vf, self.e)} <= 2 v(f'(x0)) = {Fraction(2 * vd, self.e)}")
        x = x0
        for _ in range(4 * (self.e * self.N).bit_length() + 4):
            fx = self.poly_eval(coeffs, x)
            if self.val(fx) >= INF:
                return x
            dfx = self.poly_eval(deriv, x)
            x = self.sub(x, self.divide(fx, dfx))
        if self.val(self.poly_eval(coeffs, x)) < INF:
            raise NoConvergenceCertificate("Newton iteration did not stabilize")
        return x

    @property
    def lam(self) -> np.ndarray:
        return self.sub(self.zeta, self.one())

    @property
    def zeta(self) -> np.ndarray:
        """A primitive p-th root of unity with zeta - 1 = pi_{1/(p-1)} * unit."""
        if self._zeta is None:
            self._zeta = self._build_zeta()
        return self._zeta

    def _build_zeta(self) -> np.ndarray:
        p = self.p
        if p == 2:
            return self.scalar(-1)
        mu = self.pi_pow(self.e // (p - 1))
        # Phi_p(1 + mu c)/p = 1 - c^(p-1) + sum_{2<=i<p} (C(p,i)/p) mu^(i-1) c^(i-1)
        from math import comb
        coeffs = [self.zeros() for _ in range(p)]
        coeffs[0] = self.one()
        coeffs[p - 1] = self.scalar(-1)
        for i in range(2, p):
            coeffs[i - 1] = self.add(coeffs[i - 1],
                                     self.scale_int(self.mul_pi(self.one(), (i - 1) * self.e // (p - 1)),
                                                    comb(p, i) // p))
        c = self.hensel_root(coeffs, self.one())
        return self.add(self.one(), self.mul(mu, c))

    def embed_into(self, other: "ConstField", A: np.ndarray) -> np.ndarray:
        """Embed an array into a field with larger m (same f, p)."""
        if other.p != self.p or other.f != self.f or other.m < self.m:
            raise InvalidInput("incompatible constant fields")
        step = other.e // self.e
        out = np.zeros(A.shape[:3] + (other.e,), dtype=np.int64)
        out[..., ::step] = A
        return np.mod(out, other.mod)


@lru_cache(maxsize=None)
def build_constants(p: int, m: int = 0, n: int = 1, N: int = 6, f: int = 1) -> ConstField:
    """Constants field with e = (p-1) p^m; for n = 2 at least m = 1.

    For n = 2 the root of unity of order p^2 itself is never needed: every
    invariant is computed over the degree-p Kummer extension, which only uses
    zeta_p.  We only enforce the lattice size.
    """
    if n not in (1, 2):
        raise InvalidInput("only n in {1, 2} supported")
    if n == 2:
        m = max(m, 1)
    return ConstField(p, m, f, N)


@dataclass(frozen=True)
class PiSystem:
    """pi_t := (d * pi)^(e t); d = 1 is the default model."""

    k: ConstField
    d: int = 1

    def pi(self, t) -> np.ndarray:
        t = Fraction(t)
        et = t * self.k.e
        if et.denominator != 1 or et < 0:
            raise InvalidInput(f"{t} not a nonnegative element of (1/{self.k.e})Z")
        et = int(et)
        return self.k.mul(self.k.scalar(pow(self.d, et, self.k.mod)), self.k.pi_pow(et))


def verify_pi_system(sys: PiSystem) -> dict:
    k = sys.k
    e, p = k.e, k.p
    ts = [Fraction(i, e) for i in range(0, 2 * e + 1)]
    rep = {}
    rep["i"] = all(k.val(sys.pi(t)) == int(t * e) for t in ts)
    rep["ii"] = all(np.array_equal(k.mul(sys.pi(a), sys.pi(b)), sys.pi(a + b))
                    for a in ts[:e] for b in ts[:3])
    diff = k.sub(sys.pi(Fraction(1, p - 1)), k.lam)
    rep["iii"] = k.val(diff) >= e // (p - 1) + 1
    diff1 = k.add(sys.pi(1), k.scalar(p))
    rep["iv"] = k.val(diff1) >= e + 1
    return rep


def extend_constants(k: ConstField, new_e: int | None = None, new_f: int | None = None):
    """Return (k', embed) with e' = new_e and/or f' = new_f.

    Only p-power growth of e is realizable in the pi^e = -p model; for f the
    unramified part is re-embedded through a Hensel-lifted root of h.
    """
    p = k.p
    m2, f2 = k.m, k.f
    if new_e is not None:
        if new_e % k.e:
            raise InvalidInput("new e must be a multiple of e")
        ratio = new_e // k.e
        j = 0
        while p ** j < ratio:
            j += 1
        if p ** j != ratio:
            raise InvalidInput(f"e can only grow by powers of p, not by {ratio}")
        m2 = k.m + j
    if new_f is not None:
        if new_f % k.f:
            raise InvalidInput("new f must be a multiple of f")
        f2 = new_f
    k2 = ConstField(p, m2, f2, k.N)
    step = k2.e // k.e
    if f2 == k.f:
        def embed(A):
            return k.embed_into(k2, A)
        return k2, embed
    # image of y: a root of h in the unramified part of k2
    F2 = k2.F
    hbar = F2.R([F2.ctx(int(c) % p) for c in k.F.modulus])
    root = hbar.roots()[0][0]
    coeffs = []
    for c in k.h.tolist():
        z = k2.zeros()
        z[0, 0, 0, 0] = c % k2.mod
        coeffs.append(z)
    y_img = k2.hensel_root(coeffs, k2.lift_const(root))
    powers = [k2.one()]
    for _ in range(k.f - 1):
        powers.append(k2.mul(powers[-1], y_img))

    def embed(A):
        out = np.zeros(A.shape[:2] + (k2.f, k2.e), dtype=np.int64)
        for j in range(k.f):
            part = np.zeros(A.shape[:2] + (k2.f, k2.e), dtype=np.int64)
            part[:, :, 0, ::step] = A[:, :, j, :]
            out = out + k2.mul(part, powers[j])[:, :A.shape[1]]
        return np.mod(out, k2.mod)

    return k2, embed


__all__ = ["ConstField", "build_constants", "PiSystem", "verify_pi_system",
           "extend_constants", "INF"]
