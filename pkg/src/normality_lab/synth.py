"""Construction of digit streams with prescribed frequency limits.

A rational point of the coupled simplex with common denominator N lifts to
a multigraph on length-(k-1) strings whose edges are the length-k strings,
with multiplicity N times the prescribed mass.  The coupling constraints
are exactly Eulerian balance (in-degree = out-degree at every vertex), so
a connected support admits an Eulerian circuit and the circuit's digit
word, repeated, realizes the target exactly at every multiple of N.

Witness streams interleave such realizer words over a block partition with
geometrically growing block lengths, making several targets simultaneous
statistical limit points of the frequency trajectory at finite horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .simplex import SimplexPoint, is_member
from .streams import BlocksStream, DigitStream, DomainError, PeriodicStream

__all__ = [
    "DeBruijnMultigraph",
    "debruijn_multigraph",
    "eulerian_word",
    "synthesizer_word",
    "synthesize",
    "BlockPartition",
    "WitnessPlan",
    "build_witness",
]


@dataclass(frozen=True)
class DeBruijnMultigraph:
    """Edge multiset on length-(k-1) string vertices.

    Edge code e in [0, b^k) goes from vertex e // b to vertex e mod b^(k-1)
    and appends digit e mod b.  For k = 1 there is a single empty vertex
    and edges are plain digits.
    """

    base: int
    k: int
    denominator: int
    multiplicity: np.ndarray  # int64, length base**k

    @property
    def n_vertices(self) -> int:
        return self.base ** (self.k - 1)

    def edge_head(self, e: int) -> int:
        return e % self.n_vertices

    def edge_tail(self, e: int) -> int:
        return e // self.base

    def out_degree(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        for e, m in enumerate(self.multiplicity):
            deg[self.edge_tail(e)] += m
        return deg

    def in_degree(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        for e, m in enumerate(self.multiplicity):
            deg[self.edge_head(e)] += m
        return deg

    def components(self) -> list[list[int]]:
        """Connected components (ignoring direction) of the support graph,
        as sorted lists of vertices with nonzero degree."""
        parent = list(range(self.n_vertices))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        touched = set()
        for e, m in enumerate(self.multiplicity):
            if m > 0:
                u, v = self.edge_tail(e), self.edge_head(e)
                touched.update((u, v))
                parent[find(u)] = find(v)
        groups: dict[int, list[int]] = {}
        for v in sorted(touched):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    @property
    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def restricted_to(self, vertices: Sequence[int]) -> "DeBruijnMultigraph":
        keep = set(vertices)
        mult = self.multiplicity.copy()
        for e in range(len(mult)):
            if self.edge_tail(e) not in keep:
                mult[e] = 0
        return DeBruijnMultigraph(self.base, self.k, self.denominator, mult)


def debruijn_multigraph(target: SimplexPoint) -> DeBruijnMultigraph:
    """Lift a rational simplex point to its edge multiset (scaled by the
    common denominator)."""
    report = is_member(target.entries, target.base, target.k, tol=0)
    if not report.ok:
        raise DomainError(f"target is not a simplex member: {report.violations}")
    den = target.denominator
    mult = np.array([int(e * den) for e in target.entries], dtype=np.int64)
    return DeBruijnMultigraph(target.base, target.k, den, mult)


def eulerian_word(graph: DeBruijnMultigraph) -> list[int]:
    """Digit word of an Eulerian circuit over the (connected) support.

    Hierholzer's algorithm with smallest-successor-first tie-breaking and
    smallest start vertex, for determinism.  The cyclic length-k windows
    of the word realize the edge multiset exactly.
    """
    comps = graph.components()
    if len(comps) > 1:
        raise DomainError(f"support graph is disconnected: {comps}")
    out_deg = graph.out_degree()
    if not np.array_equal(out_deg, graph.in_degree()):
        raise DomainError("edge multiset is not Eulerian-balanced")
    b = graph.base
    nv = graph.n_vertices
    # remaining[v][d]: multiplicity of the edge leaving v with appended digit d
    remaining = graph.multiplicity.reshape(nv, b).copy()
    start = comps[0][0] if comps else 0

    # Edge-based iterative Hierholzer: the stack holds (vertex, digit used
    # to enter it); a vertex with no remaining out-edges is popped and its
    # entering digit emitted.  Reversal yields the circuit's digit word.
    stack: list[tuple[int, int | None]] = [(start, None)]
    out: list[int] = []
    while stack:
        v, entered = stack[-1]
        row = remaining[v]
        d = 0
        while d < b and row[d] == 0:
            d += 1
        if d < b:
            row[d] -= 1
            stack.append(((v * b + d) % nv, d))
        else:
            stack.pop()
            if entered is not None:
                out.append(entered)
    out.reverse()
    if len(out) != int(graph.multiplicity.sum()):
        raise DomainError("failed to traverse every edge (unbalanced input?)")
    return out


def synthesizer_word(target: SimplexPoint) -> list[int]:
    """Realizer word for a connected-support rational target."""
    return eulerian_word(debruijn_multigraph(target))


def synthesize(target: SimplexPoint) -> DigitStream:
    """A deterministic stream whose frequency vectors converge to ``target``.

    Connected support: the Eulerian word repeated periodically; exact at
    every horizon that is a multiple of the common denominator.
    Disconnected support: each component's word is visited in runs whose
    repeat counts grow linearly with the stage and are proportional to
    component mass; the running component is then an O(1/stage) fraction
    of the prefix and junction windows are O(sqrt) of the digit count, so
    the frequency trajectory still converges to the target.
    """
    graph = debruijn_multigraph(target)
    comps = graph.components()
    if len(comps) <= 1:
        word = eulerian_word(graph)
        return PeriodicStream(word, target.base, symbol_ok=True)

    words = [eulerian_word(graph.restricted_to(c)) for c in comps]

    def rule(q: int) -> tuple[list[int], int]:
        stage, c = divmod(q - 1, len(words))
        # word lengths are already proportional to component mass; equal
        # repeat counts growing linearly per stage keep the running
        # component an O(1/stage) fraction of the prefix
        return words[c], stage + 1

    stream = BlocksStream(rule, target.base)
    if not any(any(w) for w in words):
        stream.is_number = False
    return stream


@dataclass(frozen=True)
class BlockPartition:
    """Consecutive finite intervals I_1, I_2, ... with geometric lengths
    |I_q| = ceil(ratio**q)."""

    ratio: float

    def __post_init__(self):
        if self.ratio <= 1:
            raise DomainError("partition ratio must be > 1")

    def block_length(self, q: int) -> int:
        return math.ceil(self.ratio**q)

    def block_end(self, q: int) -> int:
        return sum(self.block_length(i) for i in range(1, q + 1))

    def block_bounds(self, q: int) -> tuple[int, int]:
        """(first, last) position of I_q, 1-indexed inclusive."""
        end = self.block_end(q)
        return end - self.block_length(q) + 1, end

    def blocks_within(self, horizon: int) -> int:
        """Number of blocks that end at or before the horizon."""
        q = 0
        while self.block_end(q + 1) <= horizon:
            q += 1
        return q


@dataclass(frozen=True)
class WitnessPlan:
    """Targets plus a block schedule making each one a recurrent visit.

    ``assignment`` maps the block index q >= 1 to a target index; the
    default is round-robin over the target list, so every target is
    assigned infinitely often.
    """

    targets: tuple[SimplexPoint, ...]
    partition: BlockPartition
    assignment: Callable[[int], int] | None = None

    def __post_init__(self):
        if not self.targets:
            raise DomainError("witness plan needs at least one target")
        bases = {(t.base, t.k) for t in self.targets}
        if len(bases) > 1:
            raise DomainError("all targets must share base and k")

    @classmethod
    def round_robin(cls, targets, ratio: float = 9.0) -> "WitnessPlan":
        return cls(tuple(targets), BlockPartition(ratio))

    def target_of_block(self, q: int) -> int:
        if self.assignment is not None:
            return self.assignment(q)
        return (q - 1) % len(self.targets)

    def words(self) -> list[list[int]]:
        return [synthesizer_word(t) for t in self.targets]

    def block_indices_for_target(self, t: int, horizon: int) -> list[int]:
        """Blocks assigned to target t that end within the horizon."""
        q_max = self.partition.blocks_within(horizon)
        return [q for q in range(1, q_max + 1) if self.target_of_block(q) == t]


def build_witness(plan: WitnessPlan, horizon: int | None = None) -> DigitStream:
    """Digit stream following the plan's block schedule.

    Block q is filled with the assigned target's realizer word, restarted
    at the block start and truncated at the block end.  ``horizon`` is
    advisory (streams are unbounded); it is validated to be reachable.
    """
    words = plan.words()
    base = plan.targets[0].base
    part = plan.partition

    def rule(q: int) -> tuple[list[int], int]:
        word = words[plan.target_of_block(q)]
        length = part.block_length(q)
        reps = -(-length // len(word))
        return (word * reps)[:length], 1

    if horizon is not None and horizon < 1:
        raise DomainError("horizon must be >= 1")
    stream = BlocksStream(rule, base)
    if not any(any(w) for w in words):
        stream.is_number = False
    return stream
