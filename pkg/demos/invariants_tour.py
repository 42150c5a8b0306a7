"""
Curvatures of a polygon
=======================

Every vertex of a polygon gets two numbers (kappa, kappa_bar) in the plane,
and three (kappa, kappa_bar, tau) in space.  They do not change under linear
maps, so they describe the shape up to a change of frame.
"""

import numpy as np

from centroflow import Polygon, compute_signature, reconstruct
from centroflow.io import format_signature

# a triangle and a parallelogram have the simplest possible signatures
triangle = Polygon([(0.3, -1.2), (4.1, 0.7), (-0.5, 2.9)])
parallelogram = Polygon([(0, 0), (3, 0.5), (4, 2.5), (1, 2)])
print(format_signature(compute_signature(triangle)))
print()
print(format_signature(compute_signature(parallelogram)))
print()

# a linear map leaves the invariants where they were
pentagon = Polygon([(0, 0), (4, -1), (6, 2), (3, 5), (-1, 3)])
A = np.array([[2.0, 0.7], [-0.4, 1.1]])
before = compute_signature(pentagon)
after = compute_signature(pentagon.transformed(A))
print("change under a linear map:", np.abs(before.values - after.values).max())

# three starting vertices plus the signature give the polygon back
rebuilt = reconstruct(pentagon.vertices[:3], before)
print("rebuild error:", np.abs(rebuilt.vertices - pentagon.vertices).max())
