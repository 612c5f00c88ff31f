"""Nonterminating base-b digit streams.

A stream is an immutable spec (rational number, periodic word, block
schedule, or seeded random source) that can materialize any prefix of its
digit sequence.  Digits are 1-indexed: ``take(n)[i-1]`` is the digit at
position ``i``.  Re-reading a prefix always reproduces the same digits,
including for the seeded random source (counter-based splitmix64).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "DigitStream",
    "RationalStream",
    "PeriodicStream",
    "BlocksStream",
    "RandomStream",
    "expand",
    "take",
    "stream_from_spec",
]


class DomainError(ValueError):
    """Invalid stream/operation parameters (maps to CLI exit code 2)."""


def _check_base(base: int) -> int:
    if not isinstance(base, (int, np.integer)) or base < 2:
        raise DomainError(f"base must be an integer >= 2, got {base!r}")
    return int(base)


def _parse_word(word, base: int) -> np.ndarray:
    if isinstance(word, str):
        digits = [int(c, 36) for c in word]
    else:
        digits = [int(d) for d in word]
    if not digits:
        raise DomainError("word must be nonempty")
    if any(d < 0 or d >= base for d in digits):
        raise DomainError(f"word digits must lie in [0, {base})")
    return np.asarray(digits, dtype=np.int64)


class DigitStream:
    """Base class for immutable digit-stream specs."""

    base: int
    is_number: bool = True  # False only for the all-zero symbol stream

    def digits(self) -> Iterator[int]:
        """Yield digits from position 1 onward."""
        raise NotImplementedError

    def take(self, n: int) -> np.ndarray:
        """First ``n`` digits as an int64 array.  Idempotent."""
        if n < 1:
            raise DomainError("n must be >= 1")
        out = np.fromiter(self.digits(), dtype=np.int64, count=n)
        return out

    def to_spec(self) -> dict:
        raise NotImplementedError


class RationalStream(DigitStream):
    """Digits of the unique nonterminating base-b expansion of p/q in (0, 1].

    Terminating expansions are rewritten by decrementing the final nonzero
    digit and appending repeating (b-1), so e.g. 1/2 in base 2 is 0.0111...
    """

    def __init__(self, numerator: int, denominator: int, base: int):
        base = _check_base(base)
        if denominator == 0 or not 0 < Fraction(numerator, denominator) <= 1:
            raise DomainError(
                f"rational {numerator}/{denominator} must lie in (0, 1]"
            )
        frac = Fraction(numerator, denominator)
        self.numerator = frac.numerator
        self.denominator = frac.denominator
        self.base = base

    def digits(self) -> Iterator[int]:
        b, q = self.base, self.denominator
        rem = self.numerator
        while True:
            d, rem = divmod(rem * b, q)
            if rem == 0:
                # terminating: decrement the last digit, then all (b-1)s
                yield d - 1
                while True:
                    yield b - 1
            yield d

    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def to_spec(self) -> dict:
        return {
            "kind": "rational",
            "base": self.base,
            "numerator": self.numerator,
            "denominator": self.denominator,
        }

    def __repr__(self):
        return f"RationalStream({self.numerator}/{self.denominator}, base={self.base})"


class PeriodicStream(DigitStream):
    """Infinite repetition of a fixed word.

    The all-zero word does not correspond to any number in (0, 1]; it is
    rejected unless ``symbol_ok=True``, in which case the stream is tagged
    ``is_number=False`` and frequency analysis remains available.
    """

    def __init__(self, word, base: int, symbol_ok: bool = False):
        self.base = _check_base(base)
        self.word = _parse_word(word, self.base)
        if not self.word.any():
            if not symbol_ok:
                raise DomainError(
                    "all-zero periodic word is not a number in (0, 1]; "
                    "pass symbol_ok=True for a pure symbol stream"
                )
            self.is_number = False

    def digits(self) -> Iterator[int]:
        while True:
            yield from self.word.tolist()

    def take(self, n: int) -> np.ndarray:
        if n < 1:
            raise DomainError("n must be >= 1")
        reps = -(-n // len(self.word))
        return np.tile(self.word, reps)[:n]

    def to_spec(self) -> dict:
        return {
            "kind": "periodic",
            "base": self.base,
            "word": "".join(map(str, self.word.tolist())),
            "is_number": self.is_number,
        }

    def __repr__(self):
        w = "".join(map(str, self.word.tolist()))
        return f"PeriodicStream({w!r}, base={self.base})"


class BlocksStream(DigitStream):
    """Digits from a schedule of (word, repeat-count) items.

    ``schedule`` is either a finite list of items, cycled forever when
    ``cycle=True`` (the default), or a rule: a callable mapping the item
    index q = 1, 2, ... to an item, for unbounded schedules.
    """

    def __init__(
        self,
        schedule: Sequence[tuple] | Callable[[int], tuple],
        base: int,
        cycle: bool = True,
        symbol_ok: bool = False,
    ):
        self.base = _check_base(base)
        self.cycle = cycle
        if callable(schedule):
            self._rule = schedule
            self._items = None
        else:
            items = [(_parse_word(w, self.base), int(r)) for w, r in schedule]
            if not items:
                raise DomainError("schedule must be nonempty")
            if any(r < 1 for _, r in items):
                raise DomainError("repeat counts must be >= 1")
            if cycle and not any(w.any() for w, _ in items):
                if not symbol_ok:
                    raise DomainError("all-zero cycled schedule is not a number")
                self.is_number = False
            self._rule = None
            self._items = items

    def _item(self, q: int) -> tuple[np.ndarray, int]:
        if self._rule is not None:
            word, rep = self._rule(q)
            return _parse_word(word, self.base), int(rep)
        items = self._items
        if self.cycle:
            return items[(q - 1) % len(items)]
        if q > len(items):
            raise DomainError("finite schedule exhausted")
        return items[q - 1]

    def digits(self) -> Iterator[int]:
        q = 1
        while True:
            word, rep = self._item(q)
            for _ in range(rep):
                yield from word.tolist()
            q += 1

    def take(self, n: int) -> np.ndarray:
        if n < 1:
            raise DomainError("n must be >= 1")
        chunks = []
        have = 0
        q = 1
        while have < n:
            word, rep = self._item(q)
            need = n - have
            full = min(rep, -(-need // len(word)))
            chunk = np.tile(word, full)
            chunks.append(chunk[:need])
            have += min(len(chunk), need)
            q += 1
        return np.concatenate(chunks)

    def to_spec(self) -> dict:
        if self._items is None:
            return {"kind": "blocks", "base": self.base, "schedule": "rule"}
        return {
            "kind": "blocks",
            "base": self.base,
            "cycle": self.cycle,
            "schedule": [
                ["".join(map(str, w.tolist())), r] for w, r in self._items
            ],
        }


_SM64_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM64_M1 = np.uint64(0xBF58476D1CE4E5B9)
_SM64_M2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(counters: np.ndarray) -> np.ndarray:
    """Counter-based splitmix64: mix(seed + i * gamma) for i = 1, 2, ..."""
    z = counters * _SM64_GAMMA
    z = (z ^ (z >> np.uint64(30))) * _SM64_M1
    z = (z ^ (z >> np.uint64(27))) * _SM64_M2
    return z ^ (z >> np.uint64(31))


class RandomStream(DigitStream):
    """Seeded random digit stream (uniform by default).

    Uses counter-based splitmix64 so that digit i depends only on
    (seed, i): prefixes of any length agree and are reproducible across
    implementations.  The algorithm name is recorded in the spec metadata.
    """

    def __init__(self, seed: int, base: int, weights: Sequence[float] | None = None):
        self.base = _check_base(base)
        self.seed = int(seed)
        if weights is not None:
            weights = [float(w) for w in weights]
            if len(weights) != self.base or any(w < 0 for w in weights) or sum(weights) <= 0:
                raise DomainError("weights must be base-many nonnegative values")
            total = sum(weights)
            self.weights = [w / total for w in weights]
        else:
            self.weights = None

    def _raw(self, start: int, count: int) -> np.ndarray:
        counters = np.uint64(self.seed) + np.arange(
            start, start + count, dtype=np.uint64
        )
        return _splitmix64(counters)

    def take(self, n: int) -> np.ndarray:
        if n < 1:
            raise DomainError("n must be >= 1")
        with np.errstate(over="ignore"):
            z = self._raw(1, n)
        top53 = (z >> np.uint64(11)).astype(np.float64) / float(1 << 53)
        if self.weights is None:
            return np.minimum((top53 * self.base).astype(np.int64), self.base - 1)
        cum = np.cumsum(self.weights)
        return np.searchsorted(cum, top53, side="right").astype(np.int64)

    def digits(self) -> Iterator[int]:
        pos = 1
        while True:
            block = self.take(pos + 4095)[pos - 1 :]
            yield from block.tolist()
            pos += 4096

    def to_spec(self) -> dict:
        spec = {
            "kind": "random",
            "base": self.base,
            "seed": self.seed,
            "prng": "splitmix64-counter",
        }
        if self.weights is not None:
            spec["weights"] = self.weights
        return spec

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, base={self.base})"


def expand(numerator: int, denominator: int, base: int, count: int) -> list[int]:
    """First ``count`` digits of the nonterminating base-b expansion of p/q."""
    if count < 1:
        raise DomainError("count must be >= 1")
    return RationalStream(numerator, denominator, base).take(count).tolist()


def take(stream: DigitStream, n: int) -> np.ndarray:
    """First n digits of a stream (positions 1..n)."""
    return stream.take(n)


def stream_from_spec(spec: dict) -> DigitStream:
    """Build a stream from its JSON spec dict."""
    if not isinstance(spec, dict) or "kind" not in spec or "base" not in spec:
        raise DomainError("stream spec must be an object with 'kind' and 'base'")
    kind = spec["kind"]
    base = spec["base"]
    if kind == "rational":
        return RationalStream(spec["numerator"], spec["denominator"], base)
    if kind == "periodic":
        return PeriodicStream(
            spec["word"], base, symbol_ok=not spec.get("is_number", True)
        )
    if kind == "blocks":
        return BlocksStream(
            [(w, r) for w, r in spec["schedule"]],
            base,
            cycle=spec.get("cycle", True),
            symbol_ok=not spec.get("is_number", True),
        )
    if kind == "random":
        return RandomStream(spec["seed"], base, weights=spec.get("weights"))
    raise DomainError(f"unknown stream kind {kind!r}")
