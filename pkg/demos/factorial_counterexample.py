"""A two-entry regular matrix that pushes digit frequencies outside [0, 1].

Take a fast growth rule g and the matrix with row n equal to -1 at column
g(2n-1) and +2 at column g(2n).  Feed it the frequency-of-ones trajectory
of the stream that is all 1s on [g(2i-1), g(2i)) and all 0s elsewhere.
The sampled frequencies alternate between two geometric-series values, and
the -1/+2 combination lands at (2r-1)/(r+1), which exceeds 1 for r > 2:
a regular matrix without the strong norm condition maps a [0,1]-valued
trajectory outside [0, 1].

The classical version uses factorial growth; that overflows any feasible
horizon after a couple of rows, so here g(i) = r^i with r = 20, which
keeps the mechanism intact at 10^7 digits.
"""

from normality_lab import BlocksStream, factorial_style_matrix, freq_trajectory, transform

RATIO = 20.0
g = lambda i: round(RATIO**i)
matrix = factorial_style_matrix(growth=g)
horizon = 10**7


def schedule(q):
    if q == 1:
        return "0", g(1) - 1
    stage, parity = divmod(q - 2, 2)
    if parity == 0:
        return "1", g(2 * stage + 2) - g(2 * stage + 1)
    return "0", g(2 * stage + 3) - g(2 * stage + 2)


stream = BlocksStream(schedule, 2)

n_rows = 0
while g(2 * (n_rows + 1)) <= horizon:
    n_rows += 1
sample_points = sorted({g(i) for i in range(1, 2 * n_rows + 1)})
print(f"rows with support inside 10^7: {n_rows}; sampling pi_1 at {sample_points}")

freqs = {fv.n: fv.floats()[1] for fv in freq_trajectory(stream, 1, sample_points)}
for n, v in freqs.items():
    print(f"  pi_1({n}) = {v:.6f}")

values = [float(v) for v in transform(matrix, freqs, range(1, n_rows + 1))]
target = (2 * RATIO - 1) / (RATIO + 1)
print(f"\ntransformed values A_n pi: {[f'{v:.6f}' for v in values]}")
print(f"closed-form limit (2r-1)/(r+1) = {target:.6f}")
print(f"all values > 1, so inclusion in [0, 1] is violated: "
      f"{all(v > 1 for v in values)}")
