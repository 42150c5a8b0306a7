"""Brute-force reference computations, written independently of the library."""

import numpy as np


def signature_bruteforce(vertices, closed=True):
    """Per-vertex (kappa, kappa_bar, tau) from explicit determinants, one window at a time."""
    R = np.asarray(vertices, dtype=float)
    n, d = R.shape
    ks = range(n) if closed else range(1, n - 2)
    rows = []
    for k in ks:
        rm, r0, r1, r2 = (R[(k + j) % n] for j in (-1, 0, 1, 2))
        tm, t0, t1 = r0 - rm, r1 - r0, r2 - r1
        if d == 2:
            D = np.linalg.det(np.array([tm, t0]))
            rows.append((np.linalg.det(np.array([t0, t1])) / D,
                         np.linalg.det(np.array([tm, t1])) / D, 0.0))
        else:
            D = np.linalg.det(np.array([rm, r0, r1]))
            rows.append((np.linalg.det(np.array([r0, r1, r2])) / D,
                         np.linalg.det(np.array([r1, tm, r2])) / D,
                         np.linalg.det(np.array([tm, t0, t1])) / D))
    return np.array(rows)


def line_intersection(a, b, c, d):
    """Meet of line ab with line cd in the plane (Cramer's rule)."""
    a, b, c, d = (np.asarray(x, dtype=float) for x in (a, b, c, d))
    M = np.column_stack([b - a, c - d])
    s, _ = np.linalg.solve(M, c - a)
    return a + s * (b - a)


def brute_force_period(L, max_period, tol=1e-8):
    P = np.eye(3)
    for p in range(1, max_period + 1):
        P = P @ L
        if p >= 3 and np.abs(P - np.eye(3)).max() < tol:
            return p
    return None


def random_matrix(rng, d, min_det=0.1):
    while True:
        A = rng.normal(size=(d, d))
        if abs(np.linalg.det(A)) > min_det:
            return A
