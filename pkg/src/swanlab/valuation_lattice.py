"""Exact rational bookkeeping for value groups and Herbrand functions.

All valuations are normalized so that v(p) = 1.  Rationals are plain
:class:`fractions.Fraction` objects; nothing in this module touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidContext, InvalidInput

Rat = Fraction


def rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise InvalidInput(f"not an exact rational: {x!r}")


def rat_str(x: Fraction) -> str:
    x = rat(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ValGroup:
    """The value lattice (1/e) Z of a field with absolute ramification index e."""

    e: int

    def __post_init__(self):
        if self.e < 1:
            raise InvalidInput("ramification index must be positive")

    def __contains__(self, t) -> bool:
        return (rat(t) * self.e).denominator == 1

    def refine(self, factor: int) -> "ValGroup":
        return ValGroup(self.e * factor)


@dataclass(frozen=True)
class BreakSequence:
    """Upper ramification breaks of a cyclic p-power extension."""

    p: int
    breaks: tuple

    def __init__(self, p: int, breaks: Iterable):
        bs = tuple(rat(b) for b in breaks)
        if any(b <= 0 for b in bs):
            raise InvalidInput("breaks must be positive")
        if any(a >= b for a, b in zip(bs, bs[1:])):
            raise InvalidInput("breaks must be strictly increasing")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "breaks", bs)

    def __len__(self):
        return len(self.breaks)

    @property
    def top(self) -> Fraction:
        return self.breaks[-1]


def epsilon_of_breaks(b: BreakSequence) -> Fraction:
    """Defect t - psi(t) above the top break: sum of delta_i (p-1)/p^(n-i)."""
    if not b.breaks:
        raise InvalidInput("empty break sequence")
    p, n = b.p, len(b.breaks) + 1
    return sum((d * (p - 1) / Fraction(p) ** (n - i)
                for i, d in enumerate(b.breaks, start=1)), Fraction(0))


@dataclass(frozen=True)
class HerbrandMap:
    """Continuous, strictly increasing piecewise linear map fixing 0.

    ``segments`` holds ``(start, slope)`` pairs; segment i is valid on
    ``[start_i, start_{i+1}]`` and the last one extends to infinity.
    """

    segments: tuple
    kind: str = "psi"

    def __post_init__(self):
        if not self.segments or self.segments[0][0] != 0:
            raise InvalidInput("first segment must start at 0")
        if any(s <= 0 for _, s in self.segments):
            raise InvalidInput("slopes must be positive")

    def __call__(self, t) -> Fraction:
        t = rat(t)
        if t < 0:
            raise InvalidInput("Herbrand maps are defined on t >= 0")
        value = Fraction(0)
        for i, (start, slope) in enumerate(self.segments):
            end = self.segments[i + 1][0] if i + 1 < len(self.segments) else None
            if end is None or t <= end:
                return value + slope * (t - start)
            value += slope * (end - start)
        raise AssertionError("unreachable")

    def invert(self) -> "HerbrandMap":
        segs = tuple((self(start), 1 / slope) for start, slope in self.segments)
        return HerbrandMap(segs, "phi" if self.kind == "psi" else "psi")

    def breakpoints(self) -> list:
        return [s for s, _ in self.segments[1:]]

    def canonical(self) -> "HerbrandMap":
        """Merge adjacent segments of equal slope."""
        segs = [self.segments[0]]
        for start, slope in self.segments[1:]:
            if slope != segs[-1][1]:
                segs.append((start, slope))
        return HerbrandMap(tuple(segs), self.kind)

    def __eq__(self, other):
        if not isinstance(other, HerbrandMap):
            return NotImplemented
        return self.canonical().segments == other.canonical().segments

    def __hash__(self):
        return hash(self.canonical().segments)

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "breakpoints": [rat_str(s) for s, _ in self.segments],
                "slopes": [rat_str(m) for _, m in self.segments]}


def psi_eval(m: HerbrandMap, t) -> Fraction:
    return m(t)


phi_eval = psi_eval


def psi_of_breaks(b: BreakSequence) -> HerbrandMap:
    """psi(t) = integral of |G^s|^-1, with |G^s| dropping by p at each break."""
    n = len(b.breaks)
    p = b.p
    starts = (Fraction(0),) + b.breaks
    segs = tuple((s, Fraction(1, p ** (n - i))) for i, s in enumerate(starts))
    return HerbrandMap(segs, "psi")


def phi_of_breaks(b: BreakSequence) -> HerbrandMap:
    return psi_of_breaks(b).invert()


def compose(outer: HerbrandMap, inner: HerbrandMap) -> HerbrandMap:
    """Return ``outer o inner`` (e.g. psi_{L/M} o psi_{M/K} = psi_{L/K})."""
    pts = set(inner.breakpoints())
    for q in outer.breakpoints():
        pts.add(inner.invert()(q))
    starts = [Fraction(0)] + sorted(x for x in pts if x > 0)
    segs = []
    for i, s in enumerate(starts):
        nxt = starts[i + 1] if i + 1 < len(starts) else s + 1
        mid = (s + nxt) / 2
        # slope of the composite on (s, nxt)
        slope = (outer(inner(nxt)) - outer(inner(mid))) / (nxt - mid)
        segs.append((s, slope))
    kind = outer.kind if outer.kind == inner.kind else "mixed"
    return HerbrandMap(tuple(segs), kind).canonical()


@dataclass(frozen=True)
class EpsilonContext:
    p: int
    epsilon: Fraction
    lam: ValGroup

    @classmethod
    def from_breaks(cls, b: BreakSequence, lam: ValGroup) -> "EpsilonContext":
        eps = epsilon_of_breaks(b)
        if eps not in lam:
            raise InvalidContext(f"epsilon {eps} is not in (1/{lam.e})Z")
        return cls(b.p, eps, lam)

    def threshold(self, k: int) -> Fraction:
        """(1 - eps/p) * nu_k with nu_k = 1 + 1/p + ... + 1/p^(k-1)."""
        p = self.p
        nu = sum((Fraction(1, p ** j) for j in range(k)), Fraction(0))
        return (1 - self.epsilon / p) * nu

    @property
    def limit(self) -> Fraction:
        """sup_k of the thresholds, (p - eps)/(p - 1)."""
        return (self.p - self.epsilon) / (self.p - 1)


def _check_ctx(ctx: EpsilonContext):
    if ctx.epsilon not in ctx.lam:
        raise InvalidContext(f"epsilon {ctx.epsilon} not in (1/{ctx.lam.e})Z")


def in_lambda_epsilon(t, ctx: EpsilonContext) -> bool:
    """Membership in the monoid Lambda_eps.

    The thresholds (1 - eps/p) nu_k increase with k, so the k for which the
    premise ``t < threshold(k)`` holds form a tail {k >= k1}.  Membership is
    then decided by the single test ``p^k1 t in Lambda`` (which implies the
    tests for all larger k).
    """
    t = rat(t)
    if t < 0:
        raise InvalidInput("Lambda_eps only contains nonnegative rationals")
    _check_ctx(ctx)
    if t >= ctx.limit:
        return True
    k = 1
    while t >= ctx.threshold(k):
        k += 1
    return ctx.p ** k * t in ctx.lam


def lambda_eps_shift(s, t, ctx: EpsilonContext, check: bool = True) -> Fraction:
    s, t = rat(s), rat(t)
    if s < ctx.epsilon or t < ctx.epsilon:
        raise InvalidInput("both arguments must be >= epsilon")
    if not (in_lambda_epsilon(s, ctx) and in_lambda_epsilon(t, ctx)):
        raise InvalidInput("arguments must lie in Lambda_eps")
    r = s + t - ctx.epsilon
    if check:
        assert in_lambda_epsilon(r, ctx), (s, t, ctx)
    return r


def rank2_breaks(datum) -> list:
    """Breaks for the rank-2 valuation (v, v_1) with v_1 the place s = 0."""
    from .residue_field import v1
    return [(pair.delta, v1(pair.omega) + 1) for pair in datum.pairs]


def merged_tower_check(b: BreakSequence) -> tuple:
    """Return (psi_{L/K}, psi_{L/M} o psi_{M/K}) for the quotient by the
    order-p subgroup; both sides must agree."""
    full = psi_of_breaks(b)
    if len(b) == 1:
        lower = HerbrandMap(((Fraction(0), Fraction(1)),))
        upper = psi_of_breaks(BreakSequence(b.p, [b.top]))
        return full, compose(upper, lower)
    quotient = BreakSequence(b.p, b.breaks[:-1])
    psi_mk = psi_of_breaks(quotient)
    top_break = psi_mk(b.top)
    psi_lm = psi_of_breaks(BreakSequence(b.p, [top_break]))
    return full, compose(psi_lm, psi_mk)


__all__ = [
    "Rat", "rat", "rat_str", "ValGroup", "BreakSequence", "HerbrandMap",
    "EpsilonContext", "epsilon_of_breaks", "psi_eval", "phi_eval",
    "psi_of_breaks", "phi_of_breaks", "compose", "in_lambda_epsilon",
    "lambda_eps_shift", "rank2_breaks", "merged_tower_check",
]


def _sequence_of(xs: Sequence) -> tuple:  # pragma: no cover - helper for reprs
    return tuple(rat(x) for x in xs)
