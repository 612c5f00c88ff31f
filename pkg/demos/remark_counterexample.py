"""A regular matrix that breaks core inclusion.

The matrix with row n carrying -1 at column 2n-1 and +2 at column 2n has
row sums 1, vanishing columns, and bounded row norms, so it is regular.
But its absolute row sums are 3, not 1, and that gap is fatal for core
inclusion: applied to the alternating sequence -1, +1, -1, ... it produces
the constant 3, far outside the original accumulation interval [-1, 1].
"""

import numpy as np

from normality_lab import check_core_inclusion, remark_matrix, st_check, transform

matrix = remark_matrix()

report = st_check(matrix)
print(f"regular: {report.regular}")
print(f"absolute row-sum limit (strong norm): {report.strong_norm_limit}")
print(f"strong condition (norm limit = 1): {report.strong_condition}")

x = [(-1) ** n for n in range(1, 21)]
values = transform(matrix, x, range(1, 6))
print(f"\nA_n x for n = 1..5 on the alternating sequence: {values}")

horizon = 10_000
x_long = np.where(np.arange(1, horizon + 1) % 2 == 0, 1.0, -1.0)
inclusion = check_core_inclusion(matrix, x_long)
print(f"\noriginal core candidates: {inclusion.original_core.candidates.ravel()}")
print(f"transformed core candidates: {inclusion.transformed_core.candidates.ravel()}")
print(f"core inclusion verdict: {inclusion.verdict}")
print(f"violation (distance from 3 to [-1, 1]): {inclusion.max_violation:g}")
