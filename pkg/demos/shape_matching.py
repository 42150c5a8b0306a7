"""
Matching shapes up to an affine map
===================================

Two polygons are affine images of each other exactly when their signatures
agree up to a cyclic relabelling.  The matcher finds the shift and then the
map itself.
"""

import numpy as np

from centroflow import Polygon, match_polygons

rng = np.random.default_rng(5)
P = Polygon(rng.uniform(-5, 5, (6, 2)))
A = np.array([[1.2, -0.5], [0.3, 0.9]])
Q = P.transformed(A, (2.0, -1.0)).rolled(2)

report = match_polygons(P, Q, mode="affine2")
print("match:", report.matched, "shift:", report.shift)
print("recovered linear part:\n", np.round(report.transform.linear, 6))
print("recovered translation:", np.round(report.transform.translation, 6))

other = Polygon(rng.uniform(-5, 5, (6, 2)))
print("unrelated hexagon matches:", match_polygons(P, other).matched)
