"""Selecting a convergent subsequence with a selection matrix.

The frequency trajectory of the periodic stream 010101... oscillates: at
even n it sits exactly at (1/2, 1/2), at odd n it is off by 1/(2n).  The
selection matrix for the even-index rule (row n picks out entry 2n) turns
that into a trajectory constant at (1/2, 1/2), and the finite-horizon
cluster-point estimate over a rational candidate grid then retains that
single point.
"""

import numpy as np

from normality_lab import (
    PeriodicStream,
    counting_ideal,
    enumerate_rationals,
    estimate_gamma,
    freq_matrix,
    subsequence_matrix,
    transform,
)

horizon = 20_000
traj = freq_matrix(PeriodicStream("01", 2), 1, horizon)
print(f"raw trajectory at n = 5, 6, 7: {traj[4]}, {traj[5]}, {traj[6]}")

matrix = subsequence_matrix("even")
n_rows = matrix.rows_within(horizon)
transformed = np.vstack(transform(matrix, traj, range(1, n_rows + 1)))
print(f"transformed rows all equal (0.5, 0.5): {bool(np.all(transformed == 0.5))}")

candidates = enumerate_rationals(2, 1, 8)
kept = estimate_gamma(transformed, candidates, 1 / 16, counting_ideal())
print(f"\ncandidates considered: {len(candidates)}")
print("retained cluster-point candidates:")
for target, score in kept:
    print(f"  {[str(e) for e in target.entries]} (tail hits beyond cutoff: {score:g})")
