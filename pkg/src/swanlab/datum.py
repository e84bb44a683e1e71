"""Ramification pairs (delta, omega) and data; shared by conductor and datum_rules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput
from .residue_field import DiffForm
from .valuation_lattice import rat


@dataclass(frozen=True)
class RamPair:
    delta: Fraction
    omega: DiffForm

    def __post_init__(self):
        object.__setattr__(self, "delta", rat(self.delta))
        if self.delta <= 0:
            raise InvalidInput("delta must be positive")
        if self.omega.is_zero():
            raise InvalidInput("omega must be a nonzero form")

    def __repr__(self):
        return f"({self.delta}, ({self.omega.a})*ds/s)"


@dataclass(frozen=True)
class RamDatum:
    p: int
    pairs: tuple

    def __init__(self, p: int, pairs):
        pairs = tuple(pairs)
        for a, b in zip(pairs, pairs[1:]):
            if not a.delta < b.delta:
                raise InvalidInput("deltas must be strictly increasing")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)

    @property
    def deltas(self) -> list:
        return [q.delta for q in self.pairs]

    def __repr__(self):
        return f"RamDatum(p={self.p}, {list(self.pairs)})"


@dataclass(frozen=True)
class Cancellation:
    """Outcome of adding two pairs whose leading terms cancel: delta < bound."""

    bound: Fraction


__all__ = ["RamPair", "RamDatum", "Cancellation"]
