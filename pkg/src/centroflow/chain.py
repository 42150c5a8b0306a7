"""Frenet-Serret chain of a discrete centroaffine curve.

The frame ``(r_{k+1}, r_k, r_{k-1})`` advances one vertex by right
multiplication with the 3x3 transition matrix built from the invariants at
vertex ``k``::

    (r_{k+2}, r_{k+1}, r_k) = (r_{k+1}, r_k, r_{k-1}) @ L_k

This module builds ``L_k`` and its inverse, rebuilds polygons from
invariants, and analyses closure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSeed, InvalidPeriod, SingularChain
from .polygon import Polygon, Signature, VertexInvariants

KAPPA_TOL = 1e-12
CLOSURE_TOL = 1e-8


def transition_matrix(inv) -> np.ndarray:
    k, kb, t = VertexInvariants(*inv)
    return np.array([
        [1.0 + kb + t, 1.0, 0.0],
        [-k - kb, 0.0, 1.0],
        [k, 0.0, 0.0],
    ])


def inverse_transition_matrix(inv) -> np.ndarray:
    """Closed-form inverse of :func:`transition_matrix`; needs ``kappa != 0``."""
    k, kb, t = VertexInvariants(*inv)
    if abs(k) < KAPPA_TOL:
        raise SingularChain(f"first curvature {k!r} is zero, chain is not invertible")
    return np.array([
        [0.0, 0.0, 1.0 / k],
        [1.0, 0.0, -(1.0 + kb + t) / k],
        [0.0, 1.0, (k + kb) / k],
    ])


def chain_product(signature: Signature) -> np.ndarray:
    """``L_0 @ L_1 @ ... @ L_{p-1}`` over the whole signature."""
    out = np.eye(3)
    for inv in signature:
        out = out @ transition_matrix(inv)
    return out


def _check_seed(seed: np.ndarray):
    if seed.shape[0] != 3 or seed.shape[1] not in (2, 3):
        raise DegenerateSeed(f"seed must be three 2D or 3D vertices, got shape {seed.shape}")
    scale = float(np.abs(seed).max()) or 1.0
    if seed.shape[1] == 3:
        d = np.linalg.det(seed)
        ok = abs(d) > 1e-12 * scale**3
    else:
        t0, t1 = seed[1] - seed[0], seed[2] - seed[1]
        ok = abs(t0[0] * t1[1] - t0[1] * t1[0]) > 1e-12 * scale**2
    if not ok:
        raise DegenerateSeed("seed vertices are degenerate")


def reconstruct(seed, signature: Signature, steps: int | None = None,
                direction: str = "forward", start_vertex: int = 0) -> Polygon:
    """Rebuild vertices from three consecutive seed vertices and invariants.

    ``seed`` holds vertices ``start_vertex .. start_vertex + 2``.  Going
    forward, vertex ``j + 2`` is produced from the invariants at vertex
    ``j``; going backward the inverse chain at vertex ``j`` produces vertex
    ``j - 1`` (starting from ``j = start_vertex``).  The
    returned vertices are in increasing index order.

    With ``steps=None`` a cyclic signature of length ``p`` is completed to a
    closed ``p``-gon; an open signature is consumed entirely.  An explicit
    ``steps`` returns the raw open vertex sequence of length ``3 + steps``,
    repeating cyclic signatures as needed.
    """
    seed = np.array(seed, dtype=float)
    _check_seed(seed)
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")

    closed = False
    if steps is None:
        if signature.cyclic:
            if direction == "backward":
                raise ValueError("backward reconstruction needs an explicit step count")
            steps = len(signature) - 3
            closed = True
        elif direction == "forward":
            steps = signature.offset + len(signature) - 1 - start_vertex
        else:
            steps = start_vertex - signature.offset + 1
    if steps < 0:
        raise ValueError("step count must be non-negative")

    pts = [seed[0], seed[1], seed[2]]
    if direction == "forward":
        for j in range(steps):
            v = start_vertex + 1 + j
            k, kb, t = signature[signature.entry_for_vertex(v)]
            nxt = k * pts[-3] - (k + kb) * pts[-2] + (t + kb + 1.0) * pts[-1]
            pts.append(nxt)
    else:
        for j in range(steps):
            v = start_vertex - j
            inv = signature[signature.entry_for_vertex(v)]
            Linv = inverse_transition_matrix(inv)
            # (r_{v+1}, r_v, r_{v-1}) = (r_{v+2}, r_{v+1}, r_v) @ L^{-1}
            frame = np.stack([pts[2], pts[1], pts[0]], axis=1)
            prev = frame @ Linv[:, 2]
            pts.insert(0, prev)
    return Polygon(np.array(pts), closed=closed)


@dataclass(frozen=True)
class ClosureReport:
    is_closed: bool
    matrix_product_defect: float
    kappa_product: float
    # "origin" for constant non-planar curves of even period, "center" for
    # constant planar ones of even period, None otherwise
    centrosymmetry: str | None = None


def _is_constant(signature: Signature, tol: float) -> bool:
    return bool(np.all(np.abs(signature.values - signature.values[0]) < tol))


def closure_check(signature: Signature, tol: float = CLOSURE_TOL) -> ClosureReport:
    """Does the chain of ``signature`` (read cyclically) return to its start?"""
    product = chain_product(signature)
    defect = float(np.abs(product - np.eye(3)).max())
    closed = defect < tol
    kappa_product = float(np.prod(signature.kappa))
    sym = None
    if closed and len(signature) % 2 == 0 and _is_constant(signature, tol):
        sym = "center" if abs(signature.tau[0]) < tol else "origin"
    return ClosureReport(closed, defect, kappa_product, sym)


def constant_eigenvalues(inv) -> np.ndarray:
    """Roots of ``l^3 - (tau + kb + 1) l^2 + (k + kb) l - k``."""
    k, kb, t = VertexInvariants(*inv)
    return np.roots([1.0, -(t + kb + 1.0), k + kb, -k]).astype(complex)


@dataclass(frozen=True)
class ClosureSpec:
    kappa: float
    kappa_bar: float
    tau: float
    theta: float
    period: int
    winding: int
    planar: bool
    kind: str  # "planar-regular", "planar-star" or "space"
    eigenvalues: np.ndarray = field(repr=False)


def classify_constant(inv, max_period: int = 64, tol: float = CLOSURE_TOL) -> ClosureSpec | None:
    """Closure data of the curve with the same invariants at every vertex.

    Searches the smallest ``p <= max_period`` with ``L^p = E``.  Returns None
    when no such period exists.
    """
    inv = VertexInvariants(*map(float, inv))
    L = transition_matrix(inv)
    eig = constant_eigenvalues(inv)
    power = np.eye(3)
    period = None
    for p in range(1, max_period + 1):
        power = power @ L
        if p >= 3 and np.abs(power - np.eye(3)).max() < tol:
            period = p
            break
    if period is None:
        return None

    # one eigenvalue equals kappa (+-1); the other two are exp(+-i theta)
    rest = np.delete(eig, np.argmin(np.abs(eig - inv.kappa)))
    theta = float(np.abs(np.angle(rest)).max())
    winding = int(round(period * theta / (2 * math.pi)))
    planar = abs(inv.tau) < tol
    if not planar:
        kind = "space"
    elif winding == 1:
        kind = "planar-regular"
    else:
        kind = "planar-star"
    return ClosureSpec(inv.kappa, inv.kappa_bar, inv.tau, theta, period, winding, planar, kind, eig)


def regular_polygon(p: int, winding: int = 1, center=(0.0, 0.0), radius: float = 1.0,
                    phase: float = 0.0) -> Polygon:
    """Closed planar polygon obtained by rotating a radius vector by ``2 pi l / p``.

    Its invariants are ``kappa = 1`` and ``kappa_bar = 2 cos(2 pi l / p)`` at
    every vertex; ``winding > 1`` gives a star with self-intersections.
    """
    if p < 3:
        raise InvalidPeriod(f"period must be at least 3, got {p}")
    if winding < 1 or math.gcd(p, winding) != 1 or 2 * winding >= p:
        raise InvalidPeriod(f"need gcd(p, l) = 1 and 2l < p, got p={p}, l={winding}")
    ang = phase + 2 * math.pi * winding * np.arange(p) / p
    pts = np.stack([np.cos(ang), np.sin(ang)], axis=1) * radius + np.asarray(center, float)
    return Polygon(pts, closed=True)


def constant_space_polygon(p: int, winding: int = 1, seed=None) -> Polygon:
    """Closed non-planar polygon with constant invariants ``kappa = -1``.

    Uses ``kappa_bar = 2 - 2 cos(2 pi l / p)`` and ``tau = -2 kappa_bar``;
    ``p`` must be even.  The result satisfies ``r_{k + p/2} = -r_k``.
    """
    if p < 4 or p % 2:
        raise InvalidPeriod(f"space constant curves need an even period >= 4, got {p}")
    if winding < 1 or math.gcd(p, winding) != 1 or 2 * winding >= p:
        raise InvalidPeriod(f"need gcd(p, l) = 1 and 2l < p, got p={p}, l={winding}")
    kb = 2.0 - 2.0 * math.cos(2 * math.pi * winding / p)
    sig = Signature.constant((-1.0, kb, -2.0 * kb), p)
    if seed is None:
        seed = np.eye(3)
    return reconstruct(seed, sig)
