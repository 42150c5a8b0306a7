"""
Periodic orbits of the pentagram map
====================================

The pentagram map replaces a convex polygon by the polygon cut out by its
short diagonals.  On signatures, some polygons come back to themselves:
hexagons with parallel, equal opposite sides return after two steps.
"""

import numpy as np

from centroflow import compute_signature, pentagram_step, regular_polygon, signature_distance
from centroflow.shapes import random_parallel_opposite_polygon

rng = np.random.default_rng(12)
hexagon = random_parallel_opposite_polygon(rng, 3)

P, sigs = hexagon, [compute_signature(hexagon)]
for _ in range(4):
    P, _ = pentagram_step(P)
    sigs.append(compute_signature(P))

for g, s in enumerate(sigs):
    dist, shift = signature_distance(sigs[0], s)
    print(f"step {g}: distance to start {dist:.2e} (shift {shift})")

# regular polygons, and their affine images, are fixed
stretched = regular_polygon(7).transformed(np.array([[1.5, 0.3], [0.2, 0.8]]))
s0 = compute_signature(stretched)
s1 = compute_signature(pentagram_step(stretched)[0])
print("regular heptagon moves by", np.abs(s0.values - s1.values).max())
