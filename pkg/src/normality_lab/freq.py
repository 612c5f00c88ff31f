"""Overlapping k-string frequency vectors of digit streams.

For a stream x and window length k, the frequency vector at horizon n has
one entry per length-k string s: the fraction of start positions i <= n
whose window x_i .. x_{i+k-1} equals s.  Computing it therefore consumes
n + k - 1 digits.  Counts are exact integers; entries can be read either
as exact ``Fraction`` values (the oracle) or as floats (the fast path).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .streams import DigitStream, DomainError

__all__ = [
    "StringIndex",
    "FreqVector",
    "count_strings",
    "freq_vector",
    "freq_trajectory",
    "freq_matrix",
    "merge_counts",
]


class StringIndex:
    """Fixed bijection between length-k strings over {0..b-1} and 0..b^k-1.

    A string s_1 ... s_k maps to its big-endian radix value
    sum_j s_j * b^(k-j).
    """

    def __init__(self, base: int, k: int):
        if base < 2 or k < 1:
            raise DomainError("need base >= 2 and k >= 1")
        self.base = base
        self.k = k
        self.size = base**k

    def encode(self, s: Sequence[int] | str) -> int:
        if isinstance(s, str):
            s = [int(c, 36) for c in s]
        if len(s) != self.k:
            raise DomainError(f"string length {len(s)} != k={self.k}")
        code = 0
        for d in s:
            if not 0 <= d < self.base:
                raise DomainError(f"digit {d} out of range for base {self.base}")
            code = code * self.base + d
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        digits = []
        for _ in range(self.k):
            code, d = divmod(code, self.base)
            digits.append(d)
        return tuple(reversed(digits))

    def labels(self) -> list[str]:
        return ["".join(map(str, self.decode(c))) for c in range(self.size)]


def _window_codes(digits: np.ndarray, base: int, k: int, n: int) -> np.ndarray:
    """Radix codes of the n overlapping k-windows starting at 1..n."""
    if len(digits) < n + k - 1:
        raise DomainError(
            f"need {n + k - 1} digits for k={k}, n={n}, got {len(digits)}"
        )
    codes = np.zeros(n, dtype=np.int64)
    for j in range(k):
        codes = codes * base + digits[j : j + n]
    return codes


def count_strings(digits: np.ndarray, base: int, k: int, n: int) -> np.ndarray:
    """Exact window counts over start positions 1..n (length b^k array)."""
    codes = _window_codes(np.asarray(digits, dtype=np.int64), base, k, n)
    return np.bincount(codes, minlength=base**k)


@dataclass(frozen=True)
class FreqVector:
    """Window counts at a fixed horizon, readable exactly or as floats."""

    base: int
    k: int
    n: int
    counts: np.ndarray  # int64, length base**k

    def __post_init__(self):
        if int(self.counts.sum()) != self.n:
            raise DomainError("counts must sum to the horizon n")

    @property
    def index(self) -> StringIndex:
        return StringIndex(self.base, self.k)

    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(c), self.n) for c in self.counts)

    def floats(self) -> np.ndarray:
        return self.counts.astype(np.float64) / self.n

    def entry(self, s) -> Fraction:
        return Fraction(int(self.counts[self.index.encode(s)]), self.n)


def freq_vector(stream: DigitStream, k: int, n: int) -> FreqVector:
    """Frequency vector of the first n window starts of a stream."""
    if n < 1 or k < 1:
        raise DomainError("need n >= 1 and k >= 1")
    digits = stream.take(n + k - 1)
    counts = count_strings(digits, stream.base, k, n)
    return FreqVector(stream.base, k, n, counts)


def freq_trajectory(
    stream: DigitStream, k: int, horizons: Sequence[int]
) -> list[FreqVector]:
    """Frequency vectors at several horizons, from a single digit pass."""
    horizons = [int(h) for h in horizons]
    if not horizons or any(h < 1 for h in horizons):
        raise DomainError("horizons must be positive")
    if any(b >= a for a, b in zip(horizons[1:], horizons)):
        raise DomainError("horizons must be strictly increasing")
    n_max = horizons[-1]
    digits = stream.take(n_max + k - 1)
    codes = _window_codes(digits, stream.base, k, n_max)
    size = stream.base**k
    out = []
    counts = np.zeros(size, dtype=np.int64)
    prev = 0
    for h in horizons:
        counts = counts + np.bincount(codes[prev:h], minlength=size)
        prev = h
        out.append(FreqVector(stream.base, k, h, counts.copy()))
    return out


def freq_matrix(stream: DigitStream, k: int, horizon: int) -> np.ndarray:
    """Float frequency vectors for every n = 1..horizon, shape (horizon, b^k).

    Row n-1 equals ``freq_vector(stream, k, n).floats()``.  This is the
    bulk representation used for hit-set and core computations.
    """
    digits = stream.take(horizon + k - 1)
    codes = _window_codes(digits, stream.base, k, horizon)
    size = stream.base**k
    cum = np.zeros((horizon, size), dtype=np.float64)
    for s in range(size):
        cum[:, s] = np.cumsum(codes == s)
    return cum / np.arange(1, horizon + 1, dtype=np.float64)[:, None]


def merge_counts(
    left: np.ndarray,
    right: np.ndarray,
    boundary: Sequence[int],
    base: int,
    k: int,
) -> np.ndarray:
    """Combine window counts of two contiguous shards.

    ``left`` and ``right`` count only windows fully inside each shard.
    ``boundary`` supplies the 2(k-1) junction digits: the last k-1 digits
    of the left shard followed by the first k-1 digits of the right shard
    (empty for k = 1).  The result equals a single-pass count over the
    concatenated digits.
    """
    boundary = np.asarray(list(boundary), dtype=np.int64)
    if len(boundary) not in (0, 2 * (k - 1)):
        raise DomainError(
            f"boundary must have length {2 * (k - 1)} (or 0 for an empty "
            f"shard), got {len(boundary)}"
        )
    merged = np.asarray(left) + np.asarray(right)
    if k > 1 and len(boundary):
        crossing = count_strings(boundary, base, k, k - 1)
        merged = merged + crossing
    return merged
