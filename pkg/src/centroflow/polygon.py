"""Polygons and their discrete centroaffine invariants.

Indexing convention
-------------------
Vertices are numbered from 0.  For a closed polygon with ``p`` vertices the
signature has ``p`` entries and entry ``k`` holds the invariants *at vertex k*,
computed from the window ``r[k-1], r[k], r[k+1], r[k+2]`` (indices mod ``p``).
For an open polygon of ``n`` vertices only the interior windows exist, so the
signature has ``n - 3`` entries; entry ``i`` sits at vertex ``i + 1`` and the
signature records ``offset = 1``.

Planar (2D) polygons use edge-tangent determinants and are affine invariant;
their torsion is stored as 0.  Space (3D) polygons use position determinants
and are only centroaffine invariant.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateDeterminant, TooFewVertices

DEGENERACY_RTOL = 1e-12
DEFAULT_SIGNATURE_TOL = 1e-6


def signature_tolerance() -> float:
    """Default signature comparison tolerance, overridable by ``CENTROFLOW_TOLERANCE``."""
    raw = os.environ.get("CENTROFLOW_TOLERANCE")
    if raw:
        try:
            value = float(raw)
        except ValueError:
            raise ValueError(f"CENTROFLOW_TOLERANCE is not a number: {raw!r}") from None
        if not np.isfinite(value) or value <= 0:
            raise ValueError(f"CENTROFLOW_TOLERANCE must be positive, got {raw!r}")
        return value
    return DEFAULT_SIGNATURE_TOL


class VertexInvariants(NamedTuple):
    kappa: float
    kappa_bar: float
    tau: float = 0.0


@dataclass(frozen=True, eq=False)
class Polygon:
    """An ordered vertex sequence in the plane or in space.

    ``vertices`` is copied into a read-only ``(n, d)`` float array.
    """

    vertices: np.ndarray
    closed: bool = True
    label: str | None = None

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] not in (2, 3):
            raise ValueError(f"vertices must have shape (n, 2) or (n, 3), got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertices must be finite")
        minimum = 3 if self.closed else 4
        if len(v) < minimum:
            kind = "closed" if self.closed else "open"
            raise TooFewVertices(f"{kind} polygon needs at least {minimum} vertices, got {len(v)}")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        kind = "closed" if self.closed else "open"
        return f"Polygon({len(self)} vertices, {self.dimension}D, {kind})"

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]

    @property
    def tangents(self) -> np.ndarray:
        """Edge tangents ``t_k = r_{k+1} - r_k``; wraps around for closed polygons."""
        if self.closed:
            return np.roll(self.vertices, -1, axis=0) - self.vertices
        return np.diff(self.vertices, axis=0)

    def scale(self) -> float:
        return float(np.abs(self.vertices).max())

    def transformed(self, linear, translation=None) -> "Polygon":
        """Image under ``x -> A x + b``."""
        A = np.asarray(linear, dtype=float)
        v = self.vertices @ A.T
        if translation is not None:
            v = v + np.asarray(translation, dtype=float)
        return Polygon(v, self.closed, self.label)

    def rolled(self, shift: int) -> "Polygon":
        """Relabel so the new vertex ``k`` is the old vertex ``k + shift``."""
        return Polygon(np.roll(self.vertices, -shift, axis=0), self.closed, self.label)

    def reversed(self) -> "Polygon":
        return Polygon(self.vertices[::-1], self.closed, self.label)

    def lifted(self, height: float = 1.0) -> "Polygon":
        """Embed a planar polygon in the plane ``z = height`` of space."""
        if self.dimension != 2:
            raise ValueError("only 2D polygons can be lifted")
        z = np.full((len(self), 1), float(height))
        return Polygon(np.hstack([self.vertices, z]), self.closed, self.label)

    def allclose(self, other: "Polygon", atol: float = 1e-9) -> bool:
        return (
            self.closed == other.closed
            and self.vertices.shape == other.vertices.shape
            and np.allclose(self.vertices, other.vertices, rtol=0, atol=atol)
        )


@dataclass(frozen=True, eq=False)
class Signature:
    """Per-vertex invariants, stored as an ``(n, 3)`` array of (kappa, kappa_bar, tau)."""

    values: np.ndarray
    cyclic: bool = True
    offset: int = 0

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1, 3)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_entries(cls, entries, cyclic=True, offset=0) -> "Signature":
        rows = [tuple(VertexInvariants(*e)) for e in entries]
        return cls(np.array(rows, dtype=float), cyclic, offset)

    @classmethod
    def constant(cls, inv, count: int, cyclic=True) -> "Signature":
        inv = VertexInvariants(*inv)
        return cls(np.tile(np.array(inv, dtype=float), (count, 1)), cyclic, 0)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i) -> VertexInvariants:
        return VertexInvariants(*map(float, self.values[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def __repr__(self):
        kind = "cyclic" if self.cyclic else f"open, offset {self.offset}"
        return f"Signature({len(self)} entries, {kind})"

    @property
    def entries(self) -> list[VertexInvariants]:
        return list(self)

    @property
    def kappa(self) -> np.ndarray:
        return self.values[:, 0]

    @property
    def kappa_bar(self) -> np.ndarray:
        return self.values[:, 1]

    @property
    def tau(self) -> np.ndarray:
        return self.values[:, 2]

    def rolled(self, shift: int) -> "Signature":
        """Entry ``k`` of the result is entry ``k + shift`` of this signature."""
        return Signature(np.roll(self.values, -shift, axis=0), self.cyclic, self.offset)

    def entry_for_vertex(self, vertex: int) -> int:
        """Index of the entry carrying the invariants at ``vertex``."""
        i = vertex - self.offset
        if self.cyclic:
            return i % len(self)
        if not 0 <= i < len(self):
            raise IndexError(f"open signature has no invariants at vertex {vertex}")
        return i


def _windows(n: int, closed: bool) -> np.ndarray:
    """Index windows (k-1, k, k+1, k+2) for every vertex carrying an invariant."""
    if closed:
        k = np.arange(n)
        return np.stack([k - 1, k, k + 1, k + 2], axis=1) % n
    k = np.arange(1, n - 2)
    return np.stack([k - 1, k, k + 1, k + 2], axis=1)


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _det3(a, b, c):
    return np.einsum("...i,...i->...", a, np.cross(b, c))


def denominators(polygon: Polygon) -> np.ndarray:
    """The determinant each invariant is divided by, one per signature entry.

    2D: ``[t_{k-1}, t_k]``.  3D: ``[r_{k-1}, r_k, r_{k+1}]``.
    """
    w = _windows(len(polygon), polygon.closed)
    r = polygon.vertices[w]
    if polygon.dimension == 2:
        return _cross2(r[:, 1] - r[:, 0], r[:, 2] - r[:, 1])
    return _det3(r[:, 0], r[:, 1], r[:, 2])


def degeneracy_threshold(polygon: Polygon) -> float:
    # determinants scale quadratically (2D tangents) or cubically (3D positions)
    if polygon.dimension == 2:
        return DEGENERACY_RTOL * float(np.abs(polygon.tangents).max()) ** 2
    return DEGENERACY_RTOL * polygon.scale() ** 3


def _first_degenerate(polygon: Polygon, denom: np.ndarray):
    bad = np.flatnonzero(np.abs(denom) <= degeneracy_threshold(polygon))
    if len(bad) == 0:
        return None
    offset = 0 if polygon.closed else 1
    return int(bad[0]) + offset, float(denom[bad[0]])


def conditioning(polygon: Polygon) -> float:
    """Smallest denominator relative to its natural scale; 0 means degenerate."""
    d = np.abs(denominators(polygon)).min()
    if polygon.dimension == 2:
        return float(d / float(np.abs(polygon.tangents).max()) ** 2)
    return float(d / polygon.scale() ** 3)


def is_admissible(polygon: Polygon) -> bool:
    return _first_degenerate(polygon, denominators(polygon)) is None


def check_admissible(polygon: Polygon) -> None:
    hit = _first_degenerate(polygon, denominators(polygon))
    if hit is not None:
        raise DegenerateDeterminant(*hit)


def compute_signature(polygon: Polygon) -> Signature:
    """Per-vertex curvatures and torsion of ``polygon``.

    Raises DegenerateDeterminant (carrying the vertex index) if some
    denominator is numerically zero.
    """
    w = _windows(len(polygon), polygon.closed)
    r = polygon.vertices[w]
    r_prev, r0, r1, r2 = r[:, 0], r[:, 1], r[:, 2], r[:, 3]
    t_prev, t0, t1 = r0 - r_prev, r1 - r0, r2 - r1

    if polygon.dimension == 2:
        denom = _cross2(t_prev, t0)
        hit = _first_degenerate(polygon, denom)
        if hit is not None:
            raise DegenerateDeterminant(*hit)
        kappa = _cross2(t0, t1) / denom
        kappa_bar = _cross2(t_prev, t1) / denom
        tau = np.zeros_like(kappa)
    else:
        denom = _det3(r_prev, r0, r1)
        hit = _first_degenerate(polygon, denom)
        if hit is not None:
            raise DegenerateDeterminant(*hit)
        kappa = _det3(r0, r1, r2) / denom
        kappa_bar = _det3(r1, t_prev, r2) / denom
        tau = _det3(t_prev, t0, t1) / denom

    offset = 0 if polygon.closed else 1
    return Signature(np.stack([kappa, kappa_bar, tau], axis=1), polygon.closed, offset)


def is_planar(signature: Signature, tol: float = 1e-8) -> bool:
    """True when every torsion is below ``tol`` (2D signatures always are)."""
    return bool(np.all(np.abs(signature.tau) < tol))
