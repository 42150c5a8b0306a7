"""Detecting affine and centroaffine equivalence of polygons from their signatures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CentroflowError, InadmissibleInput, SizeMismatch
from .polygon import Polygon, Signature, compute_signature

SIGNATURE_TOL = 1e-6
GEOMETRIC_RTOL = 1e-6
CONDITION_LIMIT = 1e8
MODES = ("affine2", "centroaffine3")


@dataclass(frozen=True)
class AffineMap:
    """``x -> linear @ x + translation``."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        A = np.array(self.linear, dtype=float)
        b = np.array(self.translation, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or b.shape != (A.shape[0],):
            raise ValueError("linear must be square and translation must match its size")
        if abs(np.linalg.det(A)) < 1e-12:
            raise ValueError("affine map is singular")
        object.__setattr__(self, "linear", A)
        object.__setattr__(self, "translation", b)

    def apply(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.linear.T + self.translation

    def to_dict(self) -> dict:
        return {"linear": self.linear.tolist(), "translation": self.translation.tolist()}


@dataclass(frozen=True)
class MatchReport:
    matched: bool
    shift: int
    reversed: bool
    transform: AffineMap | None
    signature_residual: float
    geometric_residual: float

    def to_dict(self) -> dict:
        return {
            "matched": self.matched,
            "shift": self.shift,
            "reversed": self.reversed,
            "transform": None if self.transform is None else self.transform.to_dict(),
            "signature_residual": self.signature_residual,
            "geometric_residual": self.geometric_residual,
        }


def signature_distance(s1: Signature, s2: Signature, cyclic: bool = True) -> tuple[float, int]:
    """Max-norm distance, minimized over shifts with ``s2[k] ~ s1[k + shift]``.

    Ties go to the smallest shift.
    """
    if len(s1) != len(s2):
        raise SizeMismatch(f"signatures have {len(s1)} and {len(s2)} entries")
    shifts = range(len(s1)) if cyclic else [0]
    best, best_shift = np.inf, 0
    for s in shifts:
        d = float(np.abs(np.roll(s1.values, -s, axis=0) - s2.values).max())
        if d < best:
            best, best_shift = d, s
    return best, best_shift


def _solve_transform(src: np.ndarray, dst: np.ndarray, affine: bool) -> np.ndarray | None:
    """Exact solve on the best-conditioned consecutive window, then least squares.

    Returns the ``(d(+1), d)`` coefficient matrix ``X`` with ``[src, 1] @ X = dst``.
    """
    n, d = src.shape
    design = np.hstack([src, np.ones((n, 1))]) if affine else src
    w = design.shape[1]
    conds = [np.linalg.cond(design[np.arange(i, i + w) % n]) for i in range(n)]
    i = int(np.argmin(conds))
    if conds[i] > CONDITION_LIMIT:
        return None
    idx = np.arange(i, i + w) % n
    X = np.linalg.solve(design[idx], dst[idx])
    # refine over all vertices; equals the exact solve when the data are consistent
    X_ls, *_ = np.linalg.lstsq(design, dst, rcond=None)
    if np.abs(design @ X_ls - dst).max() <= np.abs(design @ X - dst).max():
        X = X_ls
    return X


def match_polygons(P: Polygon, Q: Polygon, mode: str = "affine2", allow_reversal: bool = False,
                   signature_tol: float = SIGNATURE_TOL,
                   geometric_rtol: float = GEOMETRIC_RTOL) -> MatchReport:
    """Find ``shift`` and a map ``T`` with ``Q[k] = T(P[k + shift])``.

    ``affine2`` compares planar polygons up to ``x -> A x + b``;
    ``centroaffine3`` compares space polygons up to ``x -> A x``.  The best
    candidate is returned even when nothing matches.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    dim = 2 if mode == "affine2" else 3
    if P.dimension != dim or Q.dimension != dim:
        raise SizeMismatch(f"{mode} needs {dim}D polygons, got {P.dimension}D and {Q.dimension}D")
    if len(P) != len(Q):
        raise SizeMismatch(f"polygons have {len(P)} and {len(Q)} vertices")
    if P.closed != Q.closed:
        raise SizeMismatch("cannot compare an open polygon with a closed one")
    try:
        sq = compute_signature(Q)
        candidates = [(False, P, compute_signature(P))]
        if allow_reversal:
            Pr = P.reversed()
            candidates.append((True, Pr, compute_signature(Pr)))
    except CentroflowError as exc:
        raise InadmissibleInput(str(exc)) from exc

    # invariants of nearly degenerate polygons are large; compare relative to their size
    sig_tol = signature_tol * max(1.0, float(np.abs(sq.values).max()))
    diameter = float(np.ptp(Q.vertices, axis=0).max()) or 1.0
    geo_tol = geometric_rtol * diameter
    best = None
    for rev, poly, sp in candidates:
        sig_res, shift = signature_distance(sp, sq, cyclic=P.closed)
        src = np.roll(poly.vertices, -shift, axis=0)
        X = _solve_transform(src, Q.vertices, affine=(mode == "affine2"))
        transform, geo_res = None, np.inf
        if X is not None:
            A = X[:dim].T
            b = X[dim] if mode == "affine2" else np.zeros(dim)
            try:
                transform = AffineMap(A, b)
                geo_res = float(np.abs(transform.apply(src) - Q.vertices).max())
            except ValueError:
                transform = None
        matched = sig_res < sig_tol and geo_res < geo_tol
        report = MatchReport(matched, shift, rev, transform, sig_res, geo_res)
        if matched:
            return report
        if best is None or (sig_res, geo_res) < (best.signature_residual, best.geometric_residual):
            best = report
    return best
