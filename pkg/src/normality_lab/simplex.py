"""The coupled frequency simplex.

Probability vectors over length-k strings that can arise as limits of
overlapping window frequencies satisfy, beyond nonnegativity and sum one,
the shift-coupling constraints: for every length-(k-1) string s, the total
mass of strings obtained by prepending a digit to s equals the total mass
of strings obtained by appending one.  For k = 1 the coupling is vacuous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .freq import StringIndex
from .streams import DomainError

__all__ = [
    "SimplexPoint",
    "Violation",
    "MembershipReport",
    "is_member",
    "enumerate_rationals",
    "distance",
]


@dataclass(frozen=True)
class SimplexPoint:
    """An exact-rational member of the coupled simplex."""

    base: int
    k: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.base**self.k:
            raise DomainError("entry count must be base**k")

    @classmethod
    def from_entries(cls, entries, base: int, k: int) -> "SimplexPoint":
        fracs = tuple(Fraction(e) if not isinstance(e, tuple) else Fraction(*e)
                      for e in entries)
        point = cls(base, k, fracs)
        report = is_member(fracs, base, k, tol=0)
        if not report.ok:
            raise DomainError(f"not a simplex member: {report.violations}")
        return point

    @property
    def denominator(self) -> int:
        return math.lcm(*(e.denominator for e in self.entries))

    def floats(self) -> np.ndarray:
        return np.array([float(e) for e in self.entries])

    def entry(self, s) -> Fraction:
        return self.entries[StringIndex(self.base, self.k).encode(s)]

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "k": self.k,
            "entries": [[e.numerator, e.denominator] for e in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SimplexPoint":
        entries = [Fraction(n, d) for n, d in obj["entries"]]
        return cls.from_entries(entries, obj["base"], obj["k"])


@dataclass(frozen=True)
class Violation:
    constraint: str
    residual: float


@dataclass(frozen=True)
class MembershipReport:
    ok: bool
    violations: tuple[Violation, ...]


def _coupling_residuals(vec, base: int, k: int):
    """Residual (left-sum - right-sum) per length-(k-1) string."""
    if k == 1:
        return
    idx = StringIndex(base, k - 1)
    bk1 = base ** (k - 1)
    for code in range(idx.size):
        # prepend: s0 * b^(k-1) + code; append: code * b + sk
        left = sum(vec[s0 * bk1 + code] for s0 in range(base))
        right = sum(vec[code * base + sk] for sk in range(base))
        yield "".join(map(str, idx.decode(code))), left - right


def is_member(vec: Sequence, base: int, k: int, tol=0) -> MembershipReport:
    """Check membership in the coupled simplex within tolerance ``tol``.

    Exact (Fraction) inputs with tol = 0 give exact verdicts.  On failure
    the report lists every violated constraint with its residual.
    """
    if len(vec) != base**k:
        raise DomainError(f"vector length {len(vec)} != base**k = {base**k}")
    if tol < 0:
        raise DomainError("tol must be nonnegative")
    violations = []
    labels = StringIndex(base, k).labels()
    for label, p in zip(labels, vec):
        if p < -tol:
            violations.append(Violation(f"nonneg[{label}]", float(p)))
    total = sum(vec)
    if abs(total - 1) > tol:
        violations.append(Violation("sum", float(total - 1)))
    for label, res in _coupling_residuals(vec, base, k) or ():
        if abs(res) > tol:
            violations.append(Violation(f"coupling[{label}]", float(res)))
    return MembershipReport(not violations, tuple(violations))


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative ints summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def enumerate_rationals(base: int, k: int, max_denominator: int) -> list[SimplexPoint]:
    """All coupled-simplex points with common denominator <= max_denominator.

    Scans denominators N = 1..max_denominator, enumerates lattice
    compositions of N, filters by coupling, reduces and deduplicates.
    Output is sorted lexicographically by entries, so target enumerations
    are stable across runs; it is dense in the simplex as the bound grows.
    """
    if max_denominator < 1:
        raise DomainError("max_denominator must be >= 1")
    size = base**k
    seen: dict[tuple, SimplexPoint] = {}
    for den in range(1, max_denominator + 1):
        for comp in _compositions(den, size):
            entries = tuple(Fraction(c, den) for c in comp)
            if entries in seen:
                continue
            if k > 1 and any(
                res != 0 for _, res in _coupling_residuals(entries, base, k)
            ):
                continue
            seen[entries] = SimplexPoint(base, k, entries)
    return [seen[key] for key in sorted(seen)]


def distance(point: Sequence, target) -> float:
    """Euclidean distance between a vector and a simplex point (or vector)."""
    p = np.asarray(
        point.floats() if isinstance(point, SimplexPoint) else point, dtype=float
    )
    t = np.asarray(
        target.floats() if isinstance(target, SimplexPoint) else target, dtype=float
    )
    if p.shape != t.shape:
        raise DomainError(f"dimension mismatch: {p.shape} vs {t.shape}")
    return float(np.linalg.norm(p - t))
