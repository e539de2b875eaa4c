"""Finitely atomic positive Borel measures on the half line [0, oo).

Everything downstream (moment sequences, Berger measures, pushforwards) is
computed exactly from the atom list, so only finitely atomic measures are
supported.  An empty atom list is the zero measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .qpoly import q_poly

# Points that collide within this relative distance after a pushforward are
# merged into a single atom.
MERGE_RTOL = 1e-12


class ResolventIntegrals(NamedTuple):
    """sum w/(x-1) and sum w/(x-1)^2 over the atoms.

    When an atom sits exactly at 1 the second integral is +inf and the first
    is reported as NaN (undefined).
    """

    i1: float
    i2: float


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite positive measure given by (point, mass) atoms.

    Invariants: points are finite, nonnegative and strictly increasing; masses
    are finite and strictly positive.
    """

    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        last = -math.inf
        for i, (point, mass) in enumerate(self.atoms):
            if not math.isfinite(point) or point < 0.0:
                raise ValueError(
                    f"atom {i}: point must be a finite nonnegative real, got {point!r}"
                )
            if not math.isfinite(mass) or mass <= 0.0:
                raise ValueError(
                    f"atom {i}: mass must be a finite positive real, got {mass!r}"
                )
            if point <= last:
                raise ValueError(
                    f"atom {i}: points must be strictly increasing, got {point!r} after {last!r}"
                )
            last = point

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_atoms(cls, pairs: Iterable[tuple[float, float]]) -> "AtomicMeasure":
        """Build a measure from unordered pairs, merging nearly equal points."""
        items = sorted((float(p), float(m)) for p, m in pairs)
        merged: list[list[float]] = []
        for point, mass in items:
            if merged and point - merged[-1][0] <= MERGE_RTOL * max(1.0, abs(point)):
                merged[-1][1] += mass
            else:
                merged.append([point, mass])
        return cls(tuple((p, m) for p, m in merged))

    @classmethod
    def from_json(cls, obj) -> "AtomicMeasure":
        """Parse {"atoms": [[point, mass], ...]}; rejects invariant violations."""
        if not isinstance(obj, dict) or "atoms" not in obj:
            raise ValueError('measure JSON must be an object with an "atoms" key')
        raw = obj["atoms"]
        if not isinstance(raw, list):
            raise ValueError('"atoms" must be a list of [point, mass] pairs')
        pairs = []
        for i, entry in enumerate(raw):
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise ValueError(f"atom {i}: expected a [point, mass] pair, got {entry!r}")
            pairs.append((float(entry[0]), float(entry[1])))
        return cls(tuple(pairs))

    def to_json(self) -> dict:
        return {"atoms": [[p, m] for p, m in self.atoms]}

    # -- basic queries ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.atoms

    def total_mass(self) -> float:
        return math.fsum(m for _, m in self.atoms)

    def support_min(self) -> float:
        """inf of the support; +inf for the zero measure."""
        return self.atoms[0][0] if self.atoms else math.inf

    def support_max(self) -> float:
        """sup of the support; -inf for the zero measure."""
        return self.atoms[-1][0] if self.atoms else -math.inf

    def mass_at(self, point: float) -> float:
        for p, m in self.atoms:
            if p == point:
                return m
        return 0.0

    def mass_on(self, lo: float, hi: float, include_lo=True, include_hi=True) -> float:
        """Mass of the interval between lo and hi."""
        total = 0.0
        for p, m in self.atoms:
            if (p > lo or (include_lo and p == lo)) and (p < hi or (include_hi and p == hi)):
                total += m
        return total

    # -- integrals ----------------------------------------------------------

    def moment(self, n: int) -> float:
        """n-th power moment, with the convention 0**0 = 1.

        Saturates to +inf past the double range; log_moment stays exact there.
        """
        if n < 0:
            raise ValueError("moment order must be nonnegative")
        if n == 0:
            return self.total_mass()
        try:
            return math.fsum(m * p**n for p, m in self.atoms)
        except OverflowError:
            return math.inf

    def log_moment(self, n: int) -> float:
        """log of the n-th moment, safe far beyond double-precision overflow."""
        if n == 0:
            return math.log(self.total_mass())
        terms = [math.log(m) + n * math.log(p) for p, m in self.atoms if p > 0.0]
        if not terms:
            return -math.inf
        top = max(terms)
        return top + math.log(math.fsum(math.exp(t - top) for t in terms))

    def integrate_q(self, n: int) -> float:
        """Integral of the kernel polynomial q_poly(n, .) against the measure."""
        return math.fsum(m * q_poly(n, p) for p, m in self.atoms)

    def resolvent_integrals(self) -> ResolventIntegrals:
        """First and second resolvent sums at the point 1 (sentinels at an atom on 1)."""
        if any(p == 1.0 for p, _ in self.atoms):
            return ResolventIntegrals(math.nan, math.inf)
        i1 = math.fsum(m / (p - 1.0) for p, m in self.atoms)
        i2 = math.fsum(m / (p - 1.0) ** 2 for p, m in self.atoms)
        return ResolventIntegrals(i1, i2)

    # -- transforms ---------------------------------------------------------

    def pushforward_sqrt(self) -> "AtomicMeasure":
        """Image measure under x -> sqrt(x)."""
        return AtomicMeasure.from_atoms((math.sqrt(p), m) for p, m in self.atoms)

    def pushforward_square(self) -> "AtomicMeasure":
        """Image measure under t -> t**2, merging colliding points."""
        return AtomicMeasure.from_atoms((p * p, m) for p, m in self.atoms)

    def normalize(self) -> "AtomicMeasure":
        """Scale to a probability measure; the zero measure cannot be normalized."""
        total = self.total_mass()
        if total <= 0.0:
            raise ValueError("cannot normalize zero measure")
        return AtomicMeasure(tuple((p, m / total) for p, m in self.atoms))

    def approx_equal(self, other: "AtomicMeasure", rtol: float = 1e-12) -> bool:
        if len(self.atoms) != len(other.atoms):
            return False
        for (p, m), (q, w) in zip(self.atoms, other.atoms):
            if abs(p - q) > rtol * max(1.0, abs(p)) or abs(m - w) > rtol * max(1.0, abs(m)):
                return False
        return True


def zero_measure() -> AtomicMeasure:
    return AtomicMeasure()


def point_mass(point: float, mass: float = 1.0) -> AtomicMeasure:
    return AtomicMeasure(((float(point), float(mass)),))
