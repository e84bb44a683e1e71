"""Characters, Swan conductors and differential Swan conductors.

Order p characters are Kummer classes u in K^x / K^xp.  Order p^2 characters
are towers: a reduced u0 for the order p quotient (defining M = K(v),
v^p = u0) together with z in K^x, so that the restriction to M is the class
of v*z.  Every computation here is exact in the value group and in the
residue field; p-adic precision is tracked by :class:`Elem`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .constants import INF
from .datum import Cancellation, RamDatum, RamPair
from .datum_rules import validate_thm1
from .errors import (InternalInconsistency, InvalidContext, InvalidInput, IterationBudgetExceeded,
                     PrecisionExhausted, RequiresConstantExtension, SolverBoundExceeded)
from .fierce_extension import FierceExt, make_extension
from .local_field import (CaseA, Elem, Frac, LocalField, as_frac, epsilon_lift,
                          kummer_reduce)
from .residue_field import (DiffForm, RatFun, cartier, d, dlog, solve_dlog,
                            solve_exact)
from .valuation_lattice import BreakSequence, EpsilonContext, ValGroup, epsilon_of_breaks

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# moving elements to a larger constant field

def embed_elem(x: Elem, K2: LocalField) -> Elem:
    """Image of x under k -> k' (pi -> pi'^(e'/e))."""
    K = x.L
    if K == K2:
        return x
    k1, k2 = K.k, K2.k
    if k2.e % k1.e or k2.f != k1.f or k2.p != k1.p:
        raise InvalidInput("target constants do not extend the source")
    step = k2.e // k1.e
    if x.X is None:
        return Elem.zero(K2, x.k * step if x.k < INF else INF)
    X = k1.embed_into(k2, x.X)
    D = k1.embed_into(k2, x.D)
    return Elem.make(K2, x.k * step, X, D, min(x.rel * step, k2.e * k2.N))


def embed_frac(u, K2: LocalField) -> Frac:
    u = as_frac(u)
    return Frac(embed_elem(u.num, K2), embed_elem(u.den, K2))


def _to_field(u: Frac, L) -> Frac:
    return Frac(u.num.with_field(L), u.den.with_field(L))


# ---------------------------------------------------------------------------
# characters

class CharP:
    """chi_u of order p (u modulo p-th powers)."""

    def __init__(self, K: LocalField, u):
        self.K = K
        self.u = as_frac(u)
        if self.u.L != K:
            raise InvalidInput("u does not live in K")
        self._red = None

    @property
    def p(self) -> int:
        return self.K.p

    def reduce(self):
        """(reduced unit, multiplier); raises TrivialCharacter for trivial classes."""
        if self._red is None:
            self._red = kummer_reduce(self.u)
        return self._red

    @property
    def reduced(self):
        return self.reduce()[0]

    def twist(self, a: int) -> "CharP":
        if a % self.p == 0:
            raise InvalidInput("twist exponent must be prime to p")
        return CharP(self.K, self.u ** (a % self.p))

    def extend(self, K2: LocalField) -> "CharP":
        return CharP(K2, embed_frac(self.u, K2))

    def __repr__(self):
        return f"CharP({self.K}, u={self.u})"


class CharTower:
    """chi of order p^2 with p*chi = chi_{u0}; chi|_M is the class of v*z."""

    def __init__(self, K: LocalField, u0, z=None):
        self.K = K
        self.u0 = as_frac(u0)
        self.z = as_frac(z) if z is not None else Frac(K.one())
        self._M = None

    @property
    def p(self) -> int:
        return self.K.p

    @property
    def level1(self) -> CharP:
        return CharP(self.K, self.u0)

    def _setup(self):
        if self._M is None:
            red, mult = self.level1.reduce()
            # u0 z^p = (u0 mult^p) (z / mult)^p
            self._M = make_extension(red)
            self._zeff = self.z / mult
        return self._M, self._zeff

    @property
    def M(self) -> FierceExt:
        return self._setup()[0]

    def restriction_class(self) -> Frac:
        """The Kummer class of chi|_M as a fraction over M (p * chi checks itself:
        its p-th root class is v^p z^p = u0 z^p up to p^2-th powers)."""
        M, z = self._setup()
        return Frac(M.v(), M.one()) * _to_field(z, M)

    def add_order_p(self, w) -> "CharTower":
        """chi + chi_w for an order p character chi_w of K."""
        return CharTower(self.K, self.u0, self.z * as_frac(w))

    def twist(self, a: int) -> "CharTower":
        if a % self.p == 0:
            raise InvalidInput("twist exponent must be prime to p")
        return CharTower(self.K, self.u0 ** a, self.z ** a)

    def extend(self, K2: LocalField) -> "CharTower":
        return CharTower(K2, embed_frac(self.u0, K2), embed_frac(self.z, K2))

    def __repr__(self):
        return f"CharTower({self.K}, u0={self.u0}, z={self.z})"


Character = Union[CharP, CharTower]


# ---------------------------------------------------------------------------
# order p

def swan_of_reduced(red) -> RamPair:
    """(delta, omega) of a reduced unit over K or over a fierce extension."""
    p = red.L.k.p
    top = Fraction(p, p - 1)
    if isinstance(red, CaseA):
        return RamPair(top, dlog(red.ubar))
    return RamPair(top - p * red.t, d(red.wbar))


def swan_p(chi: CharP) -> RamPair:
    return swan_of_reduced(chi.reduced)


def swan_p_norm_oracle(chi: CharP) -> RamPair:
    """Read (delta, omega) from b = N(sigma(x)/x - 1) and y = N(x)."""
    M = make_extension(chi.reduced)
    x = M.x()
    a_num = M.sigma(x) - x
    y = M.norm(x)
    b = M.norm(a_num) / y
    delta = b.val()
    unit = (b.inverse()).shift(delta)
    return RamPair(delta, dlog(y.residue()).scale(unit.residue()))


# ---------------------------------------------------------------------------
# addition law

def combine(d1: RamPair, d2: RamPair):
    if d1.delta != d2.delta:
        return d1 if d1.delta > d2.delta else d2
    w = d1.omega + d2.omega
    if w.is_zero():
        return Cancellation(d1.delta)
    return RamPair(d1.delta, w)


# ---------------------------------------------------------------------------
# order p^2

def _tower_top(chi: CharTower, low: RamPair, check: bool = True) -> RamPair:
    M, _ = chi._setup()
    K, p = chi.K, chi.p
    redM, _ = kummer_reduce(chi.restriction_class())
    top_M = swan_of_reduced(redM)
    eps = epsilon_of_breaks(BreakSequence(p, [low.delta]))
    dM = top_M.delta
    delta = dM + eps
    if (delta * K.e).denominator != 1:
        raise RequiresConstantExtension(f"delta = {delta} outside the value group",
                                        suggested_m=K.k.m + 1)
    # F(a dr/r) = a^p ds/s, a^p(r) = a^sigma(r^p)
    a_sig = top_M.omega.a.coeff_frobenius(1)
    omega = None
    witnesses = []
    xi = M.one()
    gi = RatFun.const(K.F, 1)
    for i in range(p):
        beta = M.one() - xi.shift(dM)
        nb = M.norm(beta)
        diff = K.one() - nb
        if diff.X is not None and diff.val() < delta:
            raise InternalInconsistency(f"norm defect {diff.val()} below delta {delta}")
        if diff.X is None and diff.k < delta * K.e:
            raise PrecisionExhausted("norm defect vanishes below delta at working precision")
        Ti = diff.shift(-delta).residue() if diff.X is not None else RatFun.const(K.F, 0)
        rhs = cartier(DiffForm(gi * a_sig))
        witnesses.append((Ti, rhs))
        if omega is None and not Ti.is_zero():
            omega = rhs.scale(Ti.inverse())
        xi = xi * M.x()
        gi = gi * M.gbar
    if omega is None or omega.is_zero():
        raise InternalInconsistency("no nonzero norm symbol to read the top form from")
    for Ti, rhs in witnesses:
        if omega.scale(Ti) != rhs:
            raise InternalInconsistency("top form inconsistent across norm probes")
    pair = RamPair(delta, omega)
    if check:
        rep = validate_thm1(RamDatum(p, [low, pair]))
        if not rep.passed:
            raise InternalInconsistency(
                f"tower datum violates the structure theorem: {[r.cid for r in rep.failures()]}")
    return pair


def swan_tower(chi: CharTower, check: bool = True, auto_extend: bool = False,
               max_m: int = 4) -> RamDatum:
    """Both pairs of an order p^2 character.

    With ``auto_extend`` the constants are enlarged (m -> m+1, bounded by
    ``max_m``) whenever a reduction over M leaves the value group; the datum
    does not depend on the constant extension.
    """
    low = swan_p(chi.level1)

    def run(K):
        c = chi if K == chi.K else chi.extend(K)
        return _tower_top(c, low, check)

    return RamDatum(chi.p, [low, _with_extension(run, chi.K, auto_extend, max_m)])


def ramification_datum(chi: Character, check: bool = True, auto_extend: bool = False,
                       max_m: int = 4) -> RamDatum:
    if isinstance(chi, CharP):
        return RamDatum(chi.p, [swan_p(chi)])
    if isinstance(chi, CharTower):
        return swan_tower(chi, check, auto_extend, max_m)
    raise InvalidInput("expected CharP or CharTower")


# ---------------------------------------------------------------------------
# constructing order p characters from a pair

def _solve_pair_class(K: LocalField, pair: RamPair, degree_bound: Optional[int] = None) -> Frac:
    """A Kummer class u over K with swan_p(chi_u) = pair."""
    p = K.p
    top = Fraction(p, p - 1)
    if pair.delta > top:
        raise InvalidInput("delta exceeds p/(p-1)")
    if pair.delta == top:
        y = solve_dlog(pair.omega, degree_bound)
        if y is None:
            raise SolverBoundExceeded("no y with dy/y = omega within the degree bound")
        return Frac(K.lift(y))
    y = solve_exact(pair.omega)
    pt = top - pair.delta
    if (pt / p * K.e).denominator != 1:
        raise RequiresConstantExtension(f"t = {pt / p} not in the value group",
                                        suggested_m=K.k.m + 1)
    return Frac(K.one() + K.lift(y).shift(pt))


def _required_m(p: int, deltas) -> int:
    """Smallest m such that every needed exponent lies in (1/e) Z."""
    need = []
    top = Fraction(p, p - 1)
    for dl in deltas:
        need += [dl, (top - dl) / p]
    m = 0
    while any((q * (p - 1) * p ** m).denominator != 1 for q in need):
        m += 1
        if m > 12:
            raise InvalidInput("deltas need an unreasonably large constant extension")
    return m


def _with_extension(fn, K: LocalField, auto_extend: bool, max_m: int):
    """Run fn(K) and, if allowed, retry over larger m on RequiresConstantExtension."""
    while True:
        try:
            return fn(K)
        except RequiresConstantExtension as exc:
            if not auto_extend or K.k.m + 1 > max_m:
                raise
            log.info("extending constants: m %d -> %d (%s)", K.k.m, K.k.m + 1, exc)
            K = LocalField.build(K.p, K.k.m + 1, K.k.f, K.k.N)


def construct_from_datum(dat: RamDatum, K: Optional[LocalField] = None, *,
                         N: int = 6, f: Optional[int] = None,
                         degree_bound: Optional[int] = None,
                         budget: int = 30, check: bool = True,
                         auto_extend: bool = True, max_m: int = 6) -> Character:
    """A character whose ramification datum is ``dat`` (after constant extension)."""
    rep = validate_thm1(dat)
    if not rep.passed:
        raise InvalidInput(f"datum fails validation: {[r.cid for r in rep.failures()]}")
    if not 1 <= len(dat) <= 2:
        raise InvalidInput("only n = 1, 2 supported")
    p = dat.p
    F = dat.pairs[0].omega.F
    f = F.f if f is None else f
    if K is None:
        m = _required_m(p, dat.deltas)
        if len(dat) == 2:
            m = max(m, 1)
        K = LocalField.build(p, m, f, N)
    top = Fraction(p, p - 1)
    low = Fraction(1, p - 1)
    pair1 = dat.pairs[0]
    chi1 = CharP(K, _solve_pair_class(K, pair1, degree_bound))
    if len(dat) == 1:
        out = chi1
    else:
        d1 = pair1.delta
        pair2 = dat.pairs[1]
        if d1 > low:
            out = CharTower(K, chi1.u)
        elif d1 == low:
            chi0 = CharTower(K, chi1.u)
            w0 = swan_tower(chi0, check, auto_extend, max_m).pairs[1]
            if w0.delta != top:
                raise InternalInconsistency("lift of a break-1/(p-1) character is not at p/(p-1)")
            eta = pair2.omega - w0.omega
            out = chi0
            if not eta.is_zero():
                out = chi0.add_order_p(_solve_pair_class(K, RamPair(top, eta), degree_bound))
        else:
            chimin = minimize_swan(chi1, budget=budget, check=check,
                                   auto_extend=auto_extend, max_m=max_m)
            K = chimin.K
            wmin = swan_tower(chimin, check, auto_extend, max_m).pairs[1]
            d2, w2 = pair2.delta, pair2.omega
            if d2 == p * d1 and d2 < top:
                eta = w2 - wmin.omega
                out = chimin
                if not eta.is_zero():
                    out = chimin.add_order_p(_solve_pair_class(K, RamPair(d2, eta), degree_bound))
            else:
                out = chimin.add_order_p(_solve_pair_class(K, pair2, degree_bound))
    got = ramification_datum(out, check, auto_extend, max_m)
    if got.deltas != dat.deltas or [q.omega for q in got.pairs] != [q.omega for q in dat.pairs]:
        raise InternalInconsistency(f"constructed character has datum {got}, wanted {dat}")
    return out


# ---------------------------------------------------------------------------
# minimal lifts

@dataclass
class MinimizeTrace:
    steps: list = field(default_factory=list)  # (delta_i, omega_i, moderate?)


def minimize_swan(chibar: CharP, budget: int = 30, check: bool = True,
                  trace: Optional[MinimizeTrace] = None, auto_extend: bool = True,
                  max_m: int = 5) -> CharTower:
    """Lift chibar (delta < 1/(p-1)) to an order p^2 character with sw = p*delta.

    Each step cancels the leading pair (delta_i, omega_i) of the current lift
    with an order p character, so the Swan conductor strictly decreases until
    it reaches p*delta.  Constants are enlarged on demand when ``auto_extend``.
    """
    p = chibar.p
    low = swan_p(chibar)
    if low.delta >= Fraction(1, p - 1):
        raise InvalidInput("minimize_swan needs delta < 1/(p-1)")
    top = Fraction(p, p - 1)
    target = p * low.delta
    trace = trace if trace is not None else MinimizeTrace()
    chi = CharTower(chibar.K, chibar.u)
    if chi.K.k.m < 1:
        if not auto_extend:
            raise RequiresConstantExtension("order p^2 towers need m >= 1", suggested_m=1)
        chi = chi.extend(LocalField.build(p, 1, chi.K.k.f, chi.K.k.N))

    def one_step(chi):
        K = chi.K
        pair = _tower_top(chi, low, check)
        dl, w = pair.delta, pair.omega
        if dl <= target:
            return pair, None, None
        mu = top - dl
        if dl == top:
            abar = solve_dlog(w)
            if abar is None:
                raise SolverBoundExceeded("no logarithmic primitive found")
        else:
            abar = solve_exact(w)
        try:
            ctx = EpsilonContext.from_breaks(BreakSequence(p, [low.delta]), ValGroup(K.e))
            lifted = epsilon_lift(abar, chi.M, ctx).a
            moderate = True
        except (InvalidContext, RequiresConstantExtension, InternalInconsistency) as exc:
            log.info("epsilon lift unavailable (%s); using a plain lift", exc)
            lifted = K.lift(abar)
            moderate = False
        if dl == top:
            zi = Frac(K.one(), lifted)
        else:
            zi = Frac(K.one() - lifted.shift(mu))
        return pair, chi.add_order_p(zi), moderate

    last = None
    for it in range(budget + 1):
        while True:
            try:
                pair, nxt, moderate = one_step(chi)
                break
            except RequiresConstantExtension:
                m2 = chi.K.k.m + 1
                if not auto_extend or m2 > max_m:
                    raise
                log.info("minimize_swan: extending constants to m = %d", m2)
                chi = chi.extend(LocalField.build(p, m2, chi.K.k.f, chi.K.k.N))
        dl = pair.delta
        if last is not None and not dl < last:
            raise InternalInconsistency(f"no decrease: {last} -> {dl}")
        last = dl
        trace.steps.append((dl, pair.omega, moderate))
        if dl == target:
            return chi
        if dl < target:
            raise InternalInconsistency(f"swan {dl} below p*delta = {target}")
        if it == budget:
            break
        chi = nxt
    raise IterationBudgetExceeded(f"no minimal lift within {budget} steps", trace=trace.steps)


__all__ = ["CharP", "CharTower", "RamPair", "RamDatum", "Cancellation", "swan_p",
           "swan_p_norm_oracle", "swan_of_reduced", "swan_tower", "combine",
           "construct_from_datum", "minimize_swan", "ramification_datum",
           "embed_elem", "embed_frac", "MinimizeTrace"]
