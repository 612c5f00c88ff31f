"""One stream, several statistical limit points.

A witness stream fills geometrically growing blocks (|I_q| = ceil(r^q))
with realizer words for a rotating list of frequency targets.  Because
each block dwarfs everything before it, the frequency trajectory swings
close to the active block's target again and again, so every target's
eps-neighborhood is visited on an index set of positive upper density:
each target is a statistical limit point of the trajectory at any finite
horizon we can observe.
"""

from fractions import Fraction

from normality_lab import (
    SimplexPoint,
    WitnessPlan,
    build_witness,
    empirical_upper_density,
    freq_matrix,
    hit_set,
)

targets = [
    SimplexPoint.from_entries([1, 0], 2, 1),
    SimplexPoint.from_entries([Fraction(1, 2), Fraction(1, 2)], 2, 1),
    SimplexPoint.from_entries([0, 1], 2, 1),
]
plan = WitnessPlan.round_robin(targets, ratio=9.0)
horizon = 10**6

stream = build_witness(plan, horizon)
traj = freq_matrix(stream, 1, horizon)

print(f"horizon {horizon}, block ratio {plan.partition.ratio}, "
      f"{plan.partition.blocks_within(horizon)} complete blocks\n")

for t in targets:
    hits = hit_set(traj, t, 0.1)
    density = empirical_upper_density(hits)
    label = [str(e) for e in t.entries]
    print(f"target {label}: {len(hits):7d} hits at eps=0.1, "
          f"empirical upper density {density:.3f}")

print("\n0-block endpoints approach pi_0 = r/(r+1) = 0.9:")
for q in plan.block_indices_for_target(0, horizon):
    n = plan.partition.block_end(q)
    print(f"  block {q} ends at n = {n:6d}: pi_0 = {traj[n - 1, 0]:.4f}")
