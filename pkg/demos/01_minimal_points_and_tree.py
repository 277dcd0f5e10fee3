"""A first look at dominance, minimal points, and the rooted tree.

Run with:  python demos/01_minimal_points_and_tree.py
"""

import numpy as np

from mdstlab.geometry import ROOT, build_mdst, minimal_points_fast, rooted_alpha_length
from mdstlab.sampling import sample_poisson_cube

# Sample a Poisson cloud of expected size 25 in the unit square. The seed
# fixes everything: rerunning this script reproduces every number below.
sample = sample_poisson_cube(2, 25.0, seed=42)
pts = sample.points
print(f"sampled {sample.count} points in [0,1]^2 at intensity 25")

# A point is minimal when it dominates no other sample point, i.e. no other
# point sits inside the box [0, x]. These are the Pareto-optimal corners of
# the cloud, the ones closest to the origin in the partial order.
mins = minimal_points_fast(pts)
print(f"{mins.size} minimal points:")
for i in mins:
    print(f"  point {i:2d} at ({pts[i, 0]:.3f}, {pts[i, 1]:.3f})")

# The tree joins every point to the nearest point it dominates; points that
# dominate nothing attach to the origin. Since a dominated point is always
# strictly closer than the origin, the origin's children are exactly the
# minimal points.
tree = build_mdst(pts)
root_children = np.flatnonzero(tree.parents == ROOT)
assert np.array_equal(np.sort(root_children), mins)
print(f"tree total length {tree.total_length:.4f}")
print(f"origin degree {root_children.size} == number of minimal points")

# The statistic the limit theory is about: sum ||x||^alpha over minimal x.
# Only the root edges enter; everything else in the tree is short-range.
for alpha in (0.5, 1.0, 2.0):
    value = rooted_alpha_length(pts, alpha)
    assert np.isclose(value, tree.rooted_power_sum(alpha))
    print(f"rooted length, alpha={alpha}: {value:.4f}")

# Depth profile: the tree is shallow because dominance chains in a uniform
# cloud are short.
depth = np.zeros(sample.count, dtype=int)
order = np.argsort(pts.sum(axis=1))  # parents precede children in this order
for i in order:
    p = tree.parents[i]
    depth[i] = 0 if p == ROOT else depth[p] + 1
print(f"max tree depth {depth.max()}, mean depth {depth.mean():.2f}")
