"""Convexity tests and polygon generators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CentroflowError, Not2D, NotClosed
from .polygon import Polygon, Signature, compute_signature, conditioning, is_admissible

MAX_RETRIES = 10_000


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a, b, c, eps) -> bool:
    """c is collinear with ab; is it inside the bounding box of ab?"""
    return (min(a[0], b[0]) - eps <= c[0] <= max(a[0], b[0]) + eps
            and min(a[1], b[1]) - eps <= c[1] <= max(a[1], b[1]) + eps)


def segments_intersect(p1, p2, q1, q2, eps: float = 0.0) -> bool:
    """Closed-segment intersection test built on orientation signs.

    Orientation values within ``eps`` of zero count as collinear.
    """
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    s1, s2, s3, s4 = (0 if abs(d) <= eps else (1 if d > 0 else -1) for d in (d1, d2, d3, d4))
    if s1 * s2 < 0 and s3 * s4 < 0:
        return True
    lin = eps ** 0.5 if eps else 0.0
    if s1 == 0 and _on_segment(q1, q2, p1, lin):
        return True
    if s2 == 0 and _on_segment(q1, q2, p2, lin):
        return True
    if s3 == 0 and _on_segment(p1, p2, q1, lin):
        return True
    if s4 == 0 and _on_segment(p1, p2, q2, lin):
        return True
    return False


def is_simple(polygon: Polygon) -> bool:
    """No two non-adjacent edges of the closed 2D polygon meet."""
    v = polygon.vertices
    n = len(v)
    eps = 1e-12 * float(np.abs(polygon.tangents).max()) ** 2
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue  # edges n-1 and 0 share vertex 0
            if segments_intersect(a, b, v[j], v[(j + 1) % n], eps):
                return False
    return True


@dataclass(frozen=True)
class ConvexityReport:
    is_simple: bool
    is_convex: bool
    diagnostics: list[str] = field(default_factory=list)


def convexity_check(polygon: Polygon) -> ConvexityReport:
    """Convexity of a closed planar polygon via its first curvatures.

    A simple polygon is convex exactly when every first curvature is
    positive.  For convex polygons other than triangles and parallelograms
    the second curvatures are also screened: all must exceed -1, at most two
    may be non-positive, and two non-positive ones must be neighbours.
    """
    if not polygon.closed:
        raise NotClosed("convexity is defined for closed polygons")
    if polygon.dimension != 2:
        raise Not2D("convexity check needs a 2D polygon")
    simple = is_simple(polygon)
    notes = []
    try:
        sig = compute_signature(polygon)
    except CentroflowError as exc:
        notes.append(f"invariants undefined: {exc}")
        return ConvexityReport(simple, False, notes)

    kappa, kbar = sig.kappa, sig.kappa_bar
    bad = np.flatnonzero(kappa <= 0)
    if len(bad):
        notes.append(f"non-positive first curvature at vertices {bad.tolist()}")
    if not simple:
        notes.append("polygon has self-intersections")
    convex = simple and len(bad) == 0

    p = len(polygon)
    parallelogram = p == 4 and np.allclose(kbar, 0.0, atol=1e-9)
    if convex and p > 3 and not parallelogram:
        low = np.flatnonzero(kbar <= -1)
        if len(low):
            notes.append(f"second curvature <= -1 at vertices {low.tolist()} (unexpected for convex)")
        nonpos = np.flatnonzero(kbar <= 0)
        if len(nonpos) > 2:
            notes.append(f"more than two non-positive second curvatures: {nonpos.tolist()}")
        elif len(nonpos) == 2:
            a, b = nonpos
            if (b - a) % p not in (1, p - 1):
                notes.append(f"non-positive second curvatures at non-adjacent vertices {a}, {b}")
    return ConvexityReport(simple, convex, notes)


# -- generators ---------------------------------------------------------------

def random_polygon(rng: np.random.Generator, n: int, dimension: int = 2, closed: bool = True,
                   box: float = 10.0, margin: float = 0.0) -> Polygon:
    """Uniform random vertices in ``[-box, box]^d``, rejecting inadmissible draws.

    ``margin > 0`` also rejects draws whose relative conditioning is below it.
    """
    for _ in range(MAX_RETRIES):
        poly = Polygon(rng.uniform(-box, box, size=(n, dimension)), closed=closed)
        if is_admissible(poly) and conditioning(poly) > margin:
            return poly
    raise RuntimeError("could not draw an admissible polygon")


def random_convex_polygon(rng: np.random.Generator, n: int, jitter: float = 0.6) -> Polygon:
    """Random convex polygon inscribed in a random ellipse (counter-clockwise)."""
    for _ in range(MAX_RETRIES):
        gaps = rng.uniform(1.0 - jitter, 1.0 + jitter, n)
        ang = np.cumsum(gaps) / gaps.sum() * 2 * np.pi + rng.uniform(0, 2 * np.pi)
        if np.max(np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))) >= np.pi:
            continue
        circle = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        A = rng.normal(size=(2, 2))
        if abs(np.linalg.det(A)) < 0.2:
            continue
        if np.linalg.det(A) < 0:
            A[:, 0] *= -1
        poly = Polygon(circle @ A.T + rng.uniform(-3, 3, 2))
        if is_admissible(poly) and np.all(compute_signature(poly).kappa > 0):
            return poly
    raise RuntimeError("could not draw a convex polygon")


def random_planar_space_polygon(rng: np.random.Generator, n: int, convex: bool = False) -> Polygon:
    """A closed planar polygon placed in a random plane of space (not through the origin)."""
    for _ in range(MAX_RETRIES):
        flat = random_convex_polygon(rng, n) if convex else random_polygon(rng, n)
        lifted = flat.lifted(rng.uniform(0.5, 5.0))
        A = rng.normal(size=(3, 3))
        if abs(np.linalg.det(A)) < 0.1:
            continue
        poly = lifted.transformed(A)
        if is_admissible(poly):
            return poly
    raise RuntimeError("could not draw a planar space polygon")


def parallel_opposite_polygon(half_edges) -> Polygon:
    """Closed ``2m``-gon whose edge ``k + m`` is the negative of edge ``k``.

    With ``half_edges`` turning counter-clockwise through less than a half
    turn the result is convex with parallel, equal-length opposite sides.
    """
    t = np.asarray(half_edges, dtype=float)
    edges = np.vstack([t, -t])
    pts = np.vstack([[0.0, 0.0], np.cumsum(edges, axis=0)[:-1]])
    return Polygon(pts - pts.mean(axis=0))


def random_parallel_opposite_polygon(rng: np.random.Generator, m: int) -> Polygon:
    for _ in range(MAX_RETRIES):
        ang = np.sort(rng.uniform(0, np.pi, m))
        if np.min(np.diff(ang)) < 0.05 or ang[-1] - ang[0] > np.pi - 0.05:
            continue
        lengths = rng.uniform(0.5, 2.0, m)
        poly = parallel_opposite_polygon(np.stack([np.cos(ang), np.sin(ang)], axis=1) * lengths[:, None])
        if is_admissible(poly):
            return poly
    raise RuntimeError("could not draw a parallel-opposite polygon")


def hexagon_signature(k1: float, k2: float) -> Signature:
    """Invariants of a parallel equal-opposite-sides hexagon from two first curvatures.

    The remaining values follow ``k3 = 1 / (k1 k2)``, ``k_{n+3} = k_n`` and
    ``kbar_{n+1} = 1 / k_n``.
    """
    k3 = 1.0 / (k1 * k2)
    kappa = np.array([k1, k2, k3, k1, k2, k3])
    kappa_bar = 1.0 / np.roll(kappa, 1)
    return Signature(np.stack([kappa, kappa_bar, np.zeros(6)], axis=1))
