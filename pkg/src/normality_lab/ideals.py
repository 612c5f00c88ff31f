"""Submeasure-backed ideals and finite-horizon cluster/limit-point scoring.

An ideal of "small" index sets is represented by a monotone subadditive
set function.  Three builtin kinds: counting (finite sets are small),
density (sets of upper asymptotic density zero), and weighted-sum (sets
with convergent weight sum, weights 1/n by default).  Counting and density
use the vanishing-tail-norm membership criterion; weighted-sum uses
finite total weight.

All scoring here is finite-horizon *evidence*, never asymptotic truth:
whether a target is genuinely a cluster or limit point of a frequency
trajectory is a tail property undecidable from any prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .simplex import SimplexPoint
from .streams import DomainError

__all__ = [
    "SubmeasureSpec",
    "counting_ideal",
    "density_ideal",
    "summable_ideal",
    "phi_eval",
    "tail_norm_estimate",
    "hit_set",
    "empirical_upper_density",
    "ClusterReport",
    "cluster_score",
    "estimate_gamma",
]


@dataclass(frozen=True)
class SubmeasureSpec:
    """A builtin or custom-weight submeasure.

    ``mode`` records how the induced ideal reads the submeasure:
    "exhaustive-norm" (small = vanishing tail norm; counting, density) or
    "finite-phi" (small = finite total value; weighted sums).
    """

    kind: str  # "counting" | "density" | "weighted"
    weight: Callable[[int], float] | None = None
    weight_name: str = "1/n"

    def __post_init__(self):
        if self.kind not in ("counting", "density", "weighted"):
            raise DomainError(f"unsupported submeasure kind {self.kind!r}")

    @property
    def mode(self) -> str:
        return "finite-phi" if self.kind == "weighted" else "exhaustive-norm"


def counting_ideal() -> SubmeasureSpec:
    return SubmeasureSpec("counting")


def density_ideal() -> SubmeasureSpec:
    return SubmeasureSpec("density")


def summable_ideal(weight: Callable[[int], float] | None = None,
                   name: str = "1/n") -> SubmeasureSpec:
    return SubmeasureSpec("weighted", weight=weight, weight_name=name)


def _as_index_array(index_set: Iterable[int]) -> np.ndarray:
    arr = np.asarray(sorted(set(int(i) for i in index_set)), dtype=np.int64)
    if len(arr) and arr[0] < 1:
        raise DomainError("index sets live on the positive integers")
    return arr


def phi_eval(spec: SubmeasureSpec, index_set: Iterable[int]) -> float:
    """Exact submeasure value of a finite index set.

    counting: cardinality.  density: sup over n of #(A intersect [1,n])/n,
    attained at some element of A.  weighted: sum of weights.
    """
    arr = _as_index_array(index_set)
    if len(arr) == 0:
        return 0.0
    if spec.kind == "counting":
        return float(len(arr))
    if spec.kind == "density":
        ranks = np.arange(1, len(arr) + 1, dtype=np.float64)
        return float(np.max(ranks / arr))
    weight = spec.weight or (lambda n: 1.0 / n)
    return float(sum(weight(int(n)) for n in arr))


def tail_norm_estimate(
    spec: SubmeasureSpec,
    index_set: Iterable[int],
    tail_cutoffs: Sequence[int],
) -> list[tuple[int, float]]:
    """Submeasure of the set beyond each cutoff: (m, phi(A minus [1, m])).

    A finite-horizon surrogate for the tail norm, which is the limit over
    cutoffs; values here are evidence only (an unseen tail could raise the
    true norm).  Estimates are nonincreasing in the cutoff.
    """
    cutoffs = [int(m) for m in tail_cutoffs]
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise DomainError("tail cutoffs must be increasing")
    arr = _as_index_array(index_set)
    return [(m, phi_eval(spec, arr[arr > m])) for m in cutoffs]


def _trajectory_floats(trajectory) -> np.ndarray:
    """Coerce a trajectory (FreqVector list, vector list, or array) to a
    float matrix with one row per index n = 1, 2, ..."""
    if isinstance(trajectory, np.ndarray) and trajectory.ndim == 2:
        return trajectory.astype(np.float64, copy=False)
    rows = []
    for item in trajectory:
        if hasattr(item, "floats"):
            rows.append(np.asarray(item.floats(), dtype=np.float64))
        else:
            rows.append(np.asarray(item, dtype=np.float64))
    return np.vstack(rows)


def _target_floats(target) -> np.ndarray:
    if isinstance(target, SimplexPoint):
        return target.floats()
    return np.asarray(target, dtype=np.float64)


def hit_set(trajectory, target, eps: float) -> np.ndarray:
    """Indices n (1-based) with Euclidean distance(trajectory[n], target) <= eps."""
    mat = _trajectory_floats(trajectory)
    t = _target_floats(target)
    if mat.shape[1] != len(t):
        raise DomainError(
            f"dimension mismatch: trajectory {mat.shape[1]} vs target {len(t)}"
        )
    dist = np.linalg.norm(mat - t[None, :], axis=1)
    return np.nonzero(dist <= eps)[0] + 1


def empirical_upper_density(hits: np.ndarray, horizon: int | None = None) -> float:
    """Exact sup over observed prefixes of #(hits in [1,n]) / n.

    Equals max over j of (j+1) / hits[j]; an upper-density surrogate (the
    true upper density is a limsup, so this is evidence, not proof).
    """
    hits = _as_index_array(hits)
    if horizon is not None:
        hits = hits[hits <= horizon]
    if len(hits) == 0:
        return 0.0
    ranks = np.arange(1, len(hits) + 1, dtype=np.float64)
    return float(np.max(ranks / hits))


@dataclass(frozen=True)
class ClusterReport:
    """Finite-horizon evidence that a target attracts a non-small index set."""

    target: tuple[float, ...]
    eps: float
    horizon: int
    hit_count: int
    tail_estimates: tuple[tuple[int, float], ...]
    score: float  # tail estimate at the largest cutoff
    cluster_evidence: bool
    limit_point_evidence: bool


def cluster_score(
    trajectory,
    target,
    eps: float,
    spec: SubmeasureSpec,
    tail_cutoffs: Sequence[int] | None = None,
    cluster_threshold: float | None = None,
    limit_threshold: float = 0.5,
) -> ClusterReport:
    """Tail submeasure of the eps-hit set of a target.

    The score is the tail estimate at the deepest cutoff.  Default verdict
    levels: cluster evidence at any positive tail mass (one hit beyond the
    cutoff for the counting kind), limit-point evidence at score >= 1/2,
    mirroring the half-mass level-set device in the limit-point analysis.
    Thresholds are nested, so limit-point evidence implies cluster
    evidence at the same resolution.
    """
    mat = _trajectory_floats(trajectory)
    horizon = mat.shape[0]
    hits = hit_set(mat, target, eps)
    if tail_cutoffs is None:
        tail_cutoffs = sorted({horizon // 8, horizon // 4, horizon // 2})
        tail_cutoffs = [m for m in tail_cutoffs if m >= 1] or [0]
    estimates = tail_norm_estimate(spec, hits, tail_cutoffs)
    score = estimates[-1][1]
    if cluster_threshold is None:
        cluster_threshold = 1.0 if spec.kind == "counting" else 1e-9
    limit = score >= limit_threshold
    cluster = limit or score >= cluster_threshold
    return ClusterReport(
        target=tuple(_target_floats(target)),
        eps=float(eps),
        horizon=horizon,
        hit_count=len(hits),
        tail_estimates=tuple(estimates),
        score=float(score),
        cluster_evidence=bool(cluster),
        limit_point_evidence=bool(limit),
    )


def estimate_gamma(
    trajectory,
    candidates: Sequence,
    eps: float,
    spec: SubmeasureSpec,
    threshold: float | None = None,
    tail_cutoffs: Sequence[int] | None = None,
) -> list[tuple[object, float]]:
    """Candidates whose cluster score clears the threshold, with scores.

    A finite-horizon estimate of the set of ideal-cluster points of the
    trajectory among the given candidate targets.
    """
    kept = []
    for cand in candidates:
        report = cluster_score(
            trajectory, cand, eps, spec,
            tail_cutoffs=tail_cutoffs,
            cluster_threshold=threshold,
        )
        effective = threshold
        if effective is None:
            effective = 1.0 if spec.kind == "counting" else 1e-9
        if report.score >= effective:
            kept.append((cand, report.score))
    return kept
