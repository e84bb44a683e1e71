"""Validators and enumerators for ramification data and char-p break sequences."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .datum import RamDatum, RamPair
from .errors import InvalidInput
from .residue_field import DiffForm, cartier, d, dlog, get_fq, random_ratfun


@dataclass
class ConditionRecord:
    cid: str
    passed: bool
    witness: dict = field(default_factory=dict)


@dataclass
class ValidationReport:
    records: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, cid: str, ok: bool, **witness):
        self.records.append(ConditionRecord(cid, bool(ok), witness))

    def clauses(self) -> set:
        return {r.cid for r in self.records}

    def failures(self) -> list:
        return [r for r in self.records if not r.passed]

    def to_json(self) -> dict:
        return {"pass": self.passed,
                "conditions": [{"id": r.cid, "pass": r.passed,
                                "witness": {k: str(v) for k, v in r.witness.items()}}
                               for r in self.records]}


def validate_thm1(dat: RamDatum) -> ValidationReport:
    """Check the structural constraints on (delta_i, omega_i) pair by pair.

    Only the clause selected by the delta relations is checked, in the
    stated direction; omega is never used to infer delta.
    """
    if not isinstance(dat, RamDatum):
        raise InvalidInput("expected a RamDatum")
    p = dat.p
    top = Fraction(p, p - 1)
    low = Fraction(1, p - 1)
    rep = ValidationReport()
    if not dat.pairs:
        return rep
    d1, w1 = dat.pairs[0].delta, dat.pairs[0].omega
    c1 = cartier(w1)
    rep.add("thm1.i", 0 < d1 <= top, delta=d1)
    # for omega != 0 the two implications below give both equivalences
    if d1 == top:
        rep.add("thm1.i.a", c1 == w1, delta=d1)
    else:
        rep.add("thm1.i.b", c1.is_zero(), delta=d1)
    for i in range(1, len(dat.pairs)):
        db, wb = dat.pairs[i - 1].delta, dat.pairs[i - 1].omega
        dl, wl = dat.pairs[i].delta, dat.pairs[i].omega
        if db > low:
            rep.add("thm1.ii", dl == db + 1 and wl == -wb, i=i + 1, delta=dl)
            continue
        rep.add("thm1.iii", p * db <= dl <= top, i=i + 1, delta=dl)
        c = cartier(wl)
        if dl == p * db and dl < top:
            rep.add("thm1.iii.a", c == wb, i=i + 1)
        elif p * db < dl < top:
            rep.add("thm1.iii.b", c.is_zero(), i=i + 1)
        elif p * db < dl == top:
            rep.add("thm1.iii.c", c == wl, i=i + 1)
        elif p * db == dl == top:
            rep.add("thm1.iii.d", c == wl + wb, i=i + 1)
    return rep


# ---------------------------------------------------------------------------
# characteristic p break sequences

@dataclass(frozen=True)
class BreakSeqCharP:
    p: int
    u: tuple

    def __init__(self, p: int, u):
        u = tuple(int(x) for x in u)
        if any(x <= 0 for x in u) or any(a >= b for a, b in zip(u, u[1:])):
            raise InvalidInput("breaks must be positive and strictly increasing")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "u", u)


def validate_charp_breaks(b: BreakSeqCharP) -> ValidationReport:
    p, u = b.p, b.u
    rep = ValidationReport()
    if u:
        rep.add("introthm1.i", u[0] % p != 0, u1=u[0])
    for i in range(1, len(u)):
        ok = u[i] == p * u[i - 1] or (u[i] > p * u[i - 1] and u[i] % p != 0)
        rep.add("introthm1.ii", ok, i=i + 1, u=u[i])
    return rep


def enumerate_charp_breaks(p: int, n: int, u_max: int) -> list:
    """All admissible sequences of length exactly n with u_n <= u_max."""
    if n <= 0 or u_max <= 0:
        return []
    out = []

    def extend(seq):
        if len(seq) == n:
            out.append(BreakSeqCharP(p, seq))
            return
        prev = seq[-1]
        if p * prev <= u_max:
            cands = [p * prev] + [v for v in range(p * prev + 1, u_max + 1) if v % p]
            for v in cands:
                extend(seq + [v])

    for u1 in range(1, u_max + 1):
        if u1 % p:
            extend([u1])
    out.sort(key=lambda b: b.u)
    return out


def check_hyodo(dat: RamDatum) -> ValidationReport:
    if len(dat.pairs) != 2:
        raise InvalidInput("Hyodo's inequalities are stated for two pairs")
    p = dat.p
    d1, d2 = dat.pairs[0].delta, dat.pairs[1].delta
    upper = Fraction(p, p - 1) + d1 * Fraction(p - 1, p)
    rep = ValidationReport()
    if d1 >= Fraction(1, p - 1):
        rep.add("hyodo.a", d1 + 1 <= d2 <= upper, d1=d1, d2=d2)
    if d1 <= Fraction(1, p - 1):
        rep.add("hyodo.b", p * d1 <= d2 <= upper, d1=d1, d2=d2)
    return rep


# ---------------------------------------------------------------------------
# corpus of valid data

def _exact_forms(F, deg: int, rng: random.Random, count: int) -> list:
    """Nonzero exact forms dy with y of degree <= deg (numerator and denominator)."""
    out = []
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        y = random_ratfun(F, rng.randint(1, max(1, deg)), rng,
                          den_deg=rng.randint(0, max(0, deg - 1)))
        w = d(y)
        if not w.is_zero():
            out.append(w)
    return out


def _log_forms(F, deg: int, rng: random.Random, count: int) -> list:
    out = []
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        y = random_ratfun(F, rng.randint(1, max(1, deg)), rng,
                          den_deg=rng.randint(0, max(0, deg - 1)))
        w = dlog(y)
        if not w.is_zero():
            out.append(w)
    return out


def delta_grid(p: int, step: Fraction, lo: Fraction = Fraction(0)) -> list:
    top = Fraction(p, p - 1)
    step = Fraction(step)
    out = []
    x = step
    while x <= top:
        if x > lo:
            out.append(x)
        x += step
    return out


def enumerate_valid_data(p: int, step, degree_bound: int, n_max: int = 2,
                         per_slot: int = 1, seed: int = 0, f: int = 1,
                         grid: Optional[list] = None) -> list:
    """Data on the delta grid, omega of bounded degree, filtered by validate_thm1.

    Candidates are assembled clause by clause (so every branch of the case
    analysis is represented) and then passed through the validator.
    """
    rng = random.Random(seed)
    F = get_fq(p, f)
    top = Fraction(p, p - 1)
    low = Fraction(1, p - 1)
    grid = delta_grid(p, Fraction(step)) if grid is None else grid
    if not grid:
        return []
    out = []
    firsts = []
    for d1 in grid:
        forms = (_log_forms if d1 == top else _exact_forms)(F, degree_bound, rng, per_slot)
        for w in forms:
            firsts.append(RamPair(d1, w))
    for pr in firsts:
        out.append(RamDatum(p, [pr]))
    if n_max >= 2:
        for pr in firsts:
            d1, w1 = pr.delta, pr.omega
            cands = []
            if d1 > low:
                if d1 + 1 in grid or grid[-1] < d1 + 1:
                    cands.append(RamPair(d1 + 1, -w1))
            else:
                for d2 in grid:
                    if d2 < p * d1:
                        continue
                    if d2 == p * d1 and d2 < top:
                        # C(w2) = w1: w2 = a^p ds/s + exact part
                        lift_ = DiffForm(w1.a ** p)
                        for ex in _exact_forms(F, degree_bound, rng, per_slot):
                            cands.append(RamPair(d2, lift_ + ex))
                    elif d2 < top:
                        for ex in _exact_forms(F, degree_bound, rng, per_slot):
                            cands.append(RamPair(d2, ex))
                    elif p * d1 < d2:
                        for lg in _log_forms(F, degree_bound, rng, per_slot):
                            cands.append(RamPair(d2, lg))
                    else:
                        for lg in _log_forms(F, degree_bound, rng, per_slot):
                            w2 = lg - w1
                            if not w2.is_zero():
                                cands.append(RamPair(d2, w2))
            for c in cands:
                if c.omega.is_zero():
                    continue
                out.append(RamDatum(p, [pr, c]))
    return [dat for dat in out if validate_thm1(dat).passed]


__all__ = ["ConditionRecord", "ValidationReport", "validate_thm1", "BreakSeqCharP",
           "validate_charp_breaks", "enumerate_charp_breaks", "check_hyodo",
           "enumerate_valid_data", "delta_grid"]
