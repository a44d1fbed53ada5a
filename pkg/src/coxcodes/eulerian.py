"""Descent-statistic profiles (W-Eulerian numbers) and exact code rates.

Profiles can be obtained four ways: by counting descents over an enumerated
group, by the classical recurrences for the A/B/D families, from the lookup
table for exceptional types, and by polynomial multiplication for direct
products.  All counts are arbitrary-precision integers; the boundary entries
are always 1 and the counts are palindromic and sum to |W|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .coxgroup import CoxeterSystem, GroupTable
from .errors import BadParameterError, UnknownNameError

# counts for descent numbers 1..m-1 (boundary 1's are padded on load)
_EXCEPTIONAL_INNER = {
    "E6": [1272, 12183, 24928, 12183, 1272],
    "E7": [17635, 309969, 1123915, 1123915, 309969, 17635],
    "E8": [881752, 28336348, 169022824, 300247750, 169022824, 28336348, 881752],
    "F4": [236, 678, 236],
    "H3": [59, 59],
    "H4": [2636, 9126, 2636],
}

_EXCEPTIONAL_ORDER = {
    "H3": 120,
    "H4": 14400,
    "F4": 1152,
    "E6": 51840,
    "E7": 2903040,
    "E8": 696729600,
}


@dataclass(frozen=True)
class EulerianProfile:
    """Counts of elements by descent number, indexed 0..m."""

    rank: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.rank + 1:
            raise ValueError("profile length must be rank + 1")
        if self.rank >= 0 and (self.counts[0] != 1 or self.counts[-1] != 1):
            raise ValueError("boundary Eulerian numbers must be 1")
        if any(self.counts[i] != self.counts[self.rank - i] for i in range(self.rank + 1)):
            raise ValueError("Eulerian counts must be palindromic")

    @property
    def group_order(self) -> int:
        return sum(self.counts)

    def prefix_sum(self, r: int) -> int:
        """Sum of counts for descent numbers 0..r (0 for r < 0)."""
        return sum(self.counts[: max(r + 1, 0)])

    def to_json(self) -> list[str]:
        return [str(c) for c in self.counts]

    @classmethod
    def from_json(cls, items) -> "EulerianProfile":
        counts = tuple(int(x) for x in items)
        return cls(rank=len(counts) - 1, counts=counts)


TRIVIAL_PROFILE = EulerianProfile(rank=0, counts=(1,))


def profile_by_counting(table: GroupTable) -> EulerianProfile:
    m = table.rank
    counts = [0] * (m + 1)
    for w in range(table.size):
        counts[int(table.descent[w]).bit_count()] += 1
    return EulerianProfile(rank=m, counts=tuple(counts))


def _recurrence_a(m: int) -> list[int]:
    row = [1, 1]  # A_1
    for k in range(2, m + 1):
        prev = row
        row = [1] * (k + 1)
        for i in range(1, k):
            row[i] = (k - i + 1) * prev[i - 1] + (i + 1) * prev[i]
    return row


def _recurrence_b(m: int) -> list[int]:
    row = [1, 1]  # B_1 coincides with A_1
    for k in range(2, m + 1):
        prev = row
        row = [1] * (k + 1)
        for i in range(1, k):
            row[i] = (2 * k - 2 * i + 1) * prev[i - 1] + (2 * i + 1) * prev[i]
    return row


def _recurrence_d(m: int) -> list[int]:
    b = _recurrence_b(m)
    a = [1] if m == 2 else _recurrence_a(m - 2)
    row = list(b)
    for i in range(1, m):
        row[i] = b[i] - m * (1 << (m - 1)) * a[i - 1]
    return row


def profile_by_recurrence(family: str, m: int) -> EulerianProfile:
    """A/B/D family profiles via the classical recurrences."""
    family = family.upper()
    if family == "A":
        if m < 1:
            raise BadParameterError("type A recurrence needs m >= 1")
        return EulerianProfile(rank=m, counts=tuple(_recurrence_a(m)))
    if family == "B":
        if m < 2:
            raise BadParameterError("type B recurrence needs m >= 2")
        return EulerianProfile(rank=m, counts=tuple(_recurrence_b(m)))
    if family == "D":
        # m in {2, 3} are the aliases D2 = A1 x A1 and D3 = A3
        if m < 2:
            raise BadParameterError("type D recurrence needs m >= 2")
        return EulerianProfile(rank=m, counts=tuple(_recurrence_d(m)))
    raise BadParameterError(f"no recurrence for family {family!r}")


def profile_exceptional(name: str) -> EulerianProfile:
    name = name.upper()
    if name not in _EXCEPTIONAL_INNER:
        raise UnknownNameError(f"unknown exceptional type {name!r}")
    counts = (1, *_EXCEPTIONAL_INNER[name], 1)
    prof = EulerianProfile(rank=len(counts) - 1, counts=counts)
    if prof.group_order != _EXCEPTIONAL_ORDER[name]:
        raise AssertionError(f"exceptional table for {name} does not sum to |W|")
    return prof


def profile_dihedral(n: int) -> EulerianProfile:
    if n < 2:
        raise BadParameterError("dihedral profile needs n >= 2")
    return EulerianProfile(rank=2, counts=(1, 2 * n - 2, 1))


def profile_product(p1: EulerianProfile, p2: EulerianProfile) -> EulerianProfile:
    """Polynomial multiplication of the two Eulerian polynomials."""
    m = p1.rank + p2.rank
    counts = [0] * (m + 1)
    for i, a in enumerate(p1.counts):
        for j, b in enumerate(p2.counts):
            counts[i + j] += a * b
    return EulerianProfile(rank=m, counts=tuple(counts))


def profile_for_system(system: CoxeterSystem) -> EulerianProfile:
    """Profile from the classification alone (no group enumeration)."""
    prof = TRIVIAL_PROFILE
    for comp in system.components:
        if comp.kind in ("A", "B", "D"):
            if comp.kind == "A" or comp.param >= 2:
                part = profile_by_recurrence(comp.kind, comp.param)
            else:
                part = profile_by_recurrence("A", 1)
        elif comp.kind == "I2":
            part = profile_dihedral(comp.param)
        else:
            part = profile_exceptional(comp.kind)
        prof = profile_product(prof, part)
    return prof


def code_rate_point(profile: EulerianProfile, r: int) -> tuple[Fraction, float]:
    """Exact rate of the order-r code plus the Gaussian reference value.

    Returns (sum_{i<=r} counts[i] / |W|, Phi((r - m/2) / sqrt(m/12))).  The
    Gaussian value is reported for comparison only; it is never used for
    exact checks.
    """
    m = profile.rank
    if not -1 <= r <= m:
        raise BadParameterError(f"order r = {r} outside -1..{m}")
    rate = Fraction(profile.prefix_sum(r), profile.group_order)
    if m == 0:
        phi = 1.0
    else:
        x = (r - m / 2.0) / math.sqrt(m / 12.0)
        phi = 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))
    return rate, phi
