import math

import numpy as np
import pytest

from hypothesis import given, settings, strategies as st
from fractions import Fraction

from normality_lab import (
    DomainError,
    PeriodicStream,
    SimplexPoint,
    cluster_score,
    counting_ideal,
    density_ideal,
    empirical_upper_density,
    enumerate_rationals,
    estimate_gamma,
    freq_matrix,
    hit_set,
    phi_eval,
    summable_ideal,
    tail_norm_estimate,
)

F = Fraction
HALF = SimplexPoint.from_entries([F(1, 2), F(1, 2)], 2, 1)


def test_phi_examples():
    assert phi_eval(counting_ideal(), {3, 5, 9}) == 3
    assert phi_eval(density_ideal(), {2, 4, 6}) == 0.5
    assert phi_eval(summable_ideal(), {1, 2, 4}) == 1.75
    assert phi_eval(counting_ideal(), set()) == 0
    with pytest.raises(DomainError):
        phi_eval(counting_ideal(), {0, 1})


def test_ideal_modes():
    assert counting_ideal().mode == "exhaustive-norm"
    assert density_ideal().mode == "exhaustive-norm"
    assert summable_ideal().mode == "finite-phi"


def test_tail_norm_examples():
    est = tail_norm_estimate(counting_ideal(), {3, 5, 9}, [10, 20])
    assert est == [(10, 0.0), (20, 0.0)]

    evens = range(2, 10**4 + 1, 2)
    est = tail_norm_estimate(density_ideal(), evens, [10, 100, 1000])
    # exact finite-horizon values 0.5 - m/(2*10^4), trending to 0.5
    assert [v for _, v in est] == pytest.approx([0.4995, 0.495, 0.45])

    squares = [n * n for n in range(1, 101)]
    est = tail_norm_estimate(density_ideal(), squares, [10, 100, 1000])
    vals = [v for _, v in est]
    assert vals == sorted(vals, reverse=True)
    assert vals[-1] < 0.02

    with pytest.raises(DomainError):
        tail_norm_estimate(counting_ideal(), {1}, [10, 10])


def test_hit_set_examples():
    traj = freq_matrix(PeriodicStream("01", 2), 1, 200)
    hits = set(hit_set(traj, HALF, 0.01))
    evens = set(range(2, 201, 2))
    assert evens <= hits
    # odd n joins once the 1/(2n) imbalance falls inside eps
    assert hits - evens == {n for n in range(71, 201, 2)}

    ones = freq_matrix(PeriodicStream("1", 2), 1, 100)
    assert len(hit_set(ones, [1.0, 0.0], 0.1)) == 0
    with pytest.raises(DomainError):
        hit_set(traj, [1, 0, 0], 0.1)


def test_empirical_upper_density():
    assert empirical_upper_density(np.array([], dtype=int)) == 0.0
    assert empirical_upper_density([2, 4, 6]) == 0.5
    assert empirical_upper_density([1, 2, 3]) == 1.0
    assert empirical_upper_density([10, 11, 12], horizon=9) == 0.0


def test_cluster_score_examples():
    traj = freq_matrix(PeriodicStream("01", 2), 1, 4000)
    # the tail estimate at cutoff m is capped by (H - m)/H, so reading
    # "density ~1" needs cutoffs shallow relative to the horizon
    report = cluster_score(traj, HALF, 0.05, density_ideal(),
                           tail_cutoffs=[50, 100, 200])
    assert report.score > 0.9
    assert report.cluster_evidence and report.limit_point_evidence

    zeros = freq_matrix(PeriodicStream("0", 2, symbol_ok=True), 1, 500)
    report = cluster_score(zeros, [0.0, 1.0], 0.5, counting_ideal())
    assert report.score == 0.0
    assert not report.cluster_evidence


def test_estimate_gamma_convergent_trajectory():
    traj = freq_matrix(PeriodicStream("000011", 2), 2, 6000)
    candidates = enumerate_rationals(2, 2, 6)
    kept = estimate_gamma(traj, candidates, 0.05, counting_ideal())
    assert len(kept) == 1
    assert kept[0][0].entries == (F(1, 2), F(1, 6), F(1, 6), F(1, 6))


SETS = st.sets(st.integers(min_value=1, max_value=300), max_size=40)
KINDS = st.sampled_from([counting_ideal(), density_ideal(), summable_ideal()])


@settings(max_examples=150, deadline=None)
@given(a=SETS, b=SETS, spec=KINDS)
def test_phi_monotone_subadditive(a, b, spec):
    pa, pb = phi_eval(spec, a), phi_eval(spec, b)
    pu = phi_eval(spec, a | b)
    assert pu >= max(pa, pb) - 1e-12
    assert pu <= pa + pb + 1e-12
    assert phi_eval(spec, set()) == 0.0


@settings(max_examples=50, deadline=None)
@given(a=SETS, spec=KINDS)
def test_tail_estimates_nonincreasing(a, spec):
    est = tail_norm_estimate(spec, a, [5, 20, 80, 200])
    vals = [v for _, v in est]
    assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))


@settings(max_examples=25, deadline=None)
@given(
    eps_pair=st.tuples(
        st.floats(min_value=0.01, max_value=0.3),
        st.floats(min_value=0.01, max_value=0.3),
    ),
    seed=st.integers(min_value=0, max_value=10**6),
)
def test_score_monotone_in_eps_and_nested_thresholds(eps_pair, seed):
    rng = np.random.default_rng(seed)
    traj = rng.dirichlet([1.0, 1.0], size=400)
    lo, hi = sorted(eps_pair)
    spec = density_ideal()
    r_lo = cluster_score(traj, [0.5, 0.5], lo, spec)
    r_hi = cluster_score(traj, [0.5, 0.5], hi, spec)
    assert r_hi.score >= r_lo.score - 1e-12
    for r in (r_lo, r_hi):
        if r.limit_point_evidence:
            assert r.cluster_evidence
