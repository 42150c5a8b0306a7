"""Discrete polygon flows and the recursions their invariants obey.

Every step function returns ``(new_polygon, predicted_signature)``.  The
prediction comes only from the old signature and the flow coefficients, never
from the new vertices, so comparing it with ``compute_signature(new_polygon)``
is an independent consistency check.

All flows act on closed polygons; vertex indices wrap around.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .chain import inverse_transition_matrix, transition_matrix
from .errors import (
    CentroflowError,
    DegenerateDeterminant,
    DegenerateResult,
    DenominatorVanishes,
    NonPositiveKappaBarWarning,
    NotClosed,
    NotConvex,
    Not2D,
    RankMismatch,
    SingularTransfer,
    ZeroBeta,
    ZeroDenominator,
    ZeroKappaBar,
)
from .polygon import Polygon, Signature, check_admissible, compute_signature, is_planar
from .shapes import is_simple

ZERO_TOL = 1e-12
RANK_RTOL = 1e-9

# Rows of the displayed matrices that convert between (tau, kbar, kappa) and
# the first column (1 + kbar + tau, -kappa - kbar, kappa) of a transition matrix.
_TO_INVARIANTS = np.array([[1.0, 1.0, 1.0], [0.0, -1.0, -1.0], [0.0, 0.0, 1.0]])
_FROM_INVARIANTS = np.array([[1.0, 1.0, 0.0], [0.0, -1.0, -1.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class FlowCoefficients:
    """Per-vertex tangent flow coefficients: ``r_k += a_k t_k + b_k t_{k-1}``."""

    alphas: np.ndarray
    betas: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.alphas, dtype=float))
        b = np.atleast_1d(np.asarray(self.betas, dtype=float))
        a, b = np.broadcast_arrays(a, b)
        object.__setattr__(self, "alphas", a.copy())
        object.__setattr__(self, "betas", b.copy())

    def expanded(self, n: int) -> "FlowCoefficients":
        if len(self.alphas) == 1:
            return FlowCoefficients(np.full(n, self.alphas[0]), np.full(n, self.betas[0]))
        if len(self.alphas) != n:
            raise ValueError(f"need {n} coefficients, got {len(self.alphas)}")
        return self


@dataclass(frozen=True)
class PentagramRatios:
    """Division ratios along the diagonals (forward map) or edges (inverse map)."""

    lam: np.ndarray
    lam_bar: np.ndarray | None = None
    mu: np.ndarray | None = None


def _require_closed(polygon: Polygon):
    if not polygon.closed:
        raise NotClosed("flows act on closed polygons")


def _signature_or_fail(polygon: Polygon) -> Signature:
    try:
        return compute_signature(polygon)
    except DegenerateDeterminant as exc:
        raise DegenerateResult(f"flow output is not admissible: {exc}") from exc


def _at(x, shift):
    """``x[k + shift]`` for every k, cyclically."""
    return np.roll(x, -shift, axis=0)


# -- transversal flow -----------------------------------------------------------

def predict_transversal(signature: Signature, betas) -> Signature:
    """Invariants after ``r_k -> beta_k r_k``, via an upper-triangular 4x4 update.

    The update is read off by multiplying the three-term recurrence for
    ``r_{n+2}`` by ``beta_{n+2}``.  The second-curvature row scales by
    ``beta_{n+2} / beta_n``.
    """
    b = np.asarray(betas, dtype=float)
    if len(b) != len(signature):
        raise ValueError("one beta per vertex is required")
    out = np.empty_like(signature.values)
    for n in range(len(b)):
        bm, b0, b1, b2 = b[n - 1], b[n], b[(n + 1) % len(b)], b[(n + 2) % len(b)]
        u1, u0, um = b2 / b1, b2 / b0, b2 / bm
        update = np.array([
            [u1, u1 - u0, um - u0, u1 - 1.0],
            [0.0, u0, u0 - um, 0.0],
            [0.0, 0.0, um, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
        k, kb, t = signature.values[n]
        t1, kb1, k1, _ = update @ np.array([t, kb, k, 1.0])
        out[n] = (k1, kb1, t1)
    return Signature(out, signature.cyclic, signature.offset)


def transversal_step(polygon: Polygon, betas) -> tuple[Polygon, Signature]:
    """Scale each vertex along its position vector: ``r_k' = beta_k r_k``."""
    _require_closed(polygon)
    if polygon.dimension != 3:
        raise ValueError("the transversal flow is a space (3D) flow; lift planar input first")
    b = np.asarray(betas, dtype=float)
    if b.shape != (len(polygon),):
        raise ValueError(f"need {len(polygon)} betas, got shape {b.shape}")
    small = np.flatnonzero(np.abs(b) < ZERO_TOL)
    if len(small):
        raise ZeroBeta(int(small[0]))
    sig = compute_signature(polygon)
    new = Polygon(polygon.vertices * b[:, None], closed=True, label=polygon.label)
    _signature_or_fail(new)
    return new, predict_transversal(sig, b)


@dataclass(frozen=True)
class PlanarityConstraintMatrix:
    """Linear system ``S x = 0`` that ``1/beta`` must satisfy to keep a planar polygon planar."""

    S: np.ndarray
    nullspace_basis: np.ndarray  # (p, 3), columns are the standardized coordinates
    start: int  # first index of the consecutive triple mapped to e1, e2, e3
    singular_values: np.ndarray

    @property
    def rank(self) -> int:
        s = self.singular_values
        return int(np.sum(s > RANK_RTOL * s[0]))


def planarity_matrix(signature: Signature) -> np.ndarray:
    """Cyclic ``p x p`` matrix whose row ``n`` is ``k_n, -k_n - kb_n, 1 + kb_n, -1``
    placed at columns ``n-1 .. n+2``."""
    p = len(signature)
    S = np.zeros((p, p))
    for n, (k, kb, _) in enumerate(signature.values):
        S[n, (n - 1) % p] += k
        S[n, n] += -k - kb
        S[n, (n + 1) % p] += 1.0 + kb
        S[n, (n + 2) % p] += -1.0
    return S


def standard_coordinates(positions: Polygon, start: int | None = None,
                         max_condition: float = 1e8) -> tuple[np.ndarray, int]:
    """Vertex coordinates after the linear map taking three consecutive vertices to e1, e2, e3.

    The first triple is used unless it is ill-conditioned, in which case
    the best-conditioned consecutive triple is taken.  Returns the
    ``(p, 3)`` coordinates and the start index used.
    """
    R = positions.vertices
    p = len(R)
    def frame(i):
        return R[[i % p, (i + 1) % p, (i + 2) % p]].T
    if start is None:
        start = 0
        if np.linalg.cond(frame(0)) > max_condition:
            start = int(np.argmin([np.linalg.cond(frame(i)) for i in range(p)]))
    A = np.linalg.inv(frame(start))
    return R @ A.T, start


@dataclass(frozen=True)
class TransversalRecipe:
    """Rule producing the three centroaffine-invariant weights of the standardized basis."""

    name: str
    weights: Callable[[Signature], tuple[float, float, float]]

    @classmethod
    def mean_curvatures(cls) -> "TransversalRecipe":
        def weights(sig):
            a1 = float(np.mean(sig.kappa))
            a2 = float(np.mean(sig.kappa_bar))
            return a1, a2, (a1 + a2) / 2.0
        return cls("mean-curvatures", weights)

    @classmethod
    def constant(cls, c: float) -> "TransversalRecipe":
        return cls(f"constant({c})", lambda sig: (c, c, c))


def planarity_system(signature: Signature, positions: Polygon) -> PlanarityConstraintMatrix:
    if not signature.cyclic or len(signature) < 4:
        raise ValueError("planarity system needs a closed polygon with at least 4 vertices")
    if positions.dimension != 3 or len(positions) != len(signature):
        raise ValueError("positions must be the 3D polygon the signature was computed from")
    S = planarity_matrix(signature)
    sv = np.linalg.svd(S, compute_uv=False)
    basis, start = standard_coordinates(positions)
    return PlanarityConstraintMatrix(S, basis, start, sv)


def planarity_betas(signature: Signature, positions: Polygon,
                    recipe: TransversalRecipe | None = None,
                    planar_tol: float = 1e-8) -> np.ndarray:
    """Transversal coefficients that keep a planar closed polygon planar.

    ``1/beta`` is the recipe-weighted combination of the standardized
    coordinate columns, which span the null space of the planarity matrix.
    """
    if recipe is None:
        recipe = TransversalRecipe.mean_curvatures()
    if not is_planar(signature, planar_tol):
        raise ValueError("polygon is not planar")
    system = planarity_system(signature, positions)
    p = len(signature)
    if system.rank != p - 3:
        raise RankMismatch(f"planarity matrix has numerical rank {system.rank}, expected {p - 3}")
    a = np.array(recipe.weights(signature), dtype=float)
    inv_beta = system.nullspace_basis @ a
    scale = max(float(np.abs(inv_beta).max()), 1.0)
    tiny = np.flatnonzero(np.abs(inv_beta) < ZERO_TOL * scale)
    if len(tiny):
        raise ZeroDenominator(f"recipe {recipe.name} gives 1/beta = 0 at vertex {int(tiny[0])}")
    return 1.0 / inv_beta


# -- tangent flows --------------------------------------------------------------

def transfer_matrix(signature: Signature, coeffs: FlowCoefficients, n: int) -> np.ndarray:
    """The 3x3 matrix advancing the frame ``(r_{n+1}, r_n, r_{n-1})`` to the next generation."""
    p = len(signature)
    a, b = coeffs.alphas, coeffs.betas
    am, a0, a1 = a[(n - 1) % p], a[n], a[(n + 1) % p]
    bm, b0, b1 = b[(n - 1) % p], b[n], b[(n + 1) % p]
    k, kb, t = signature.values[n]
    km, kbm, tm = signature.values[(n - 1) % p]
    return np.array([
        [1 + b1 + a1 * (t + kb), a0, -bm / km],
        [-a1 * (k + kb) - b1, b0 - a0 + 1, am + bm / km * (1 + tm + kbm)],
        [a1 * k, -b0, 1 - am - bm * kbm / km],
    ])


def predict_tangent(signature: Signature, coeffs: FlowCoefficients) -> Signature:
    """Invariants after one tangent flow step, solved from the zero-curvature condition."""
    p = len(signature)
    coeffs = coeffs.expanded(p)
    out = np.empty_like(signature.values)
    for n in range(p):
        if abs(signature.values[(n - 1) % p, 0]) < ZERO_TOL:
            raise SingularTransfer(n)
        M = transfer_matrix(signature, coeffs, n)
        if abs(np.linalg.det(M)) < ZERO_TOL * max(1.0, float(np.abs(M).max())) ** 3:
            raise SingularTransfer(n)
        L = transition_matrix(signature[n])
        MinvL = np.linalg.solve(M, L)
        a2, b2 = coeffs.alphas[(n + 2) % p], coeffs.betas[(n + 2) % p]
        k1, kb1, t1 = signature.values[(n + 1) % p]
        nxt = (a2 * _TO_INVARIANTS @ MinvL @ _FROM_INVARIANTS @ np.array([t1, kb1, k1])
               + _TO_INVARIANTS @ MinvL @ np.array([1 + b2, -b2, 0.0])
               - np.array([1.0, 0.0, 0.0]))
        t_new, kb_new, k_new = nxt
        out[n] = (k_new, kb_new, t_new)
    return Signature(out, signature.cyclic, signature.offset)


def tangent_step(polygon: Polygon, coeffs: FlowCoefficients) -> tuple[Polygon, Signature]:
    """``r_k' = a_k r_{k+1} + (1 - a_k + b_k) r_k - b_k r_{k-1}``."""
    _require_closed(polygon)
    coeffs = coeffs.expanded(len(polygon))
    sig = compute_signature(polygon)
    predicted = predict_tangent(sig, coeffs)
    R = polygon.vertices
    a, b = coeffs.alphas[:, None], coeffs.betas[:, None]
    new = Polygon(a * _at(R, 1) + (1 - a + b) * R - b * _at(R, -1), closed=True, label=polygon.label)
    _signature_or_fail(new)
    return new, predicted


def predict_proportional(signature: Signature, alpha: float) -> Signature:
    """Closed-form invariants after ``r_k' = (1 - alpha) r_k + alpha r_{k+1}``."""
    a = float(alpha)
    k, kb, t = signature.kappa, signature.kappa_bar, signature.tau
    base = (a - a * a) * kb + a * a * k + (1 - a) ** 2
    q = a * (1 - a) ** 2 * t + base
    ratio = _at(q, 1) / q
    q_short = a * (1 - a) * _at(t, 1) + _at(base, 1)
    tau_new = base / (a * (a - 1)) * ratio - q_short / (a * (a - 1))
    kb_new = (kb + a / (1 - a) * k) * ratio - a / (1 - a) * _at(k, 1)
    k_new = k * ratio
    return Signature(np.stack([k_new, kb_new, tau_new], axis=1), signature.cyclic, signature.offset)


def proportional_step(polygon: Polygon, alpha: float) -> tuple[Polygon, Signature]:
    """Move every vertex to the point dividing its forward edge in ratio ``alpha``."""
    _require_closed(polygon)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    sig = compute_signature(polygon)
    R = polygon.vertices
    new = Polygon((1 - alpha) * R + alpha * _at(R, 1), closed=True, label=polygon.label)
    _signature_or_fail(new)
    return new, predict_proportional(sig, alpha)


# -- pentagram maps -------------------------------------------------------------

def _require_convex(polygon: Polygon, sig: Signature):
    _require_closed(polygon)
    if polygon.dimension != 2:
        raise Not2D("pentagram maps act on planar (2D) polygons")
    if not np.all(sig.kappa > 0) or not is_simple(polygon):
        raise NotConvex("pentagram maps need a convex polygon")


def pentagram_ratios(signature: Signature) -> PentagramRatios:
    d = 1.0 + signature.kappa + signature.kappa_bar
    bad = np.flatnonzero(np.abs(d) < ZERO_TOL)
    if len(bad):
        raise DenominatorVanishes(int(bad[0]))
    return PentagramRatios(lam=1.0 / d, lam_bar=(1.0 + signature.kappa_bar) / d)


def inverse_pentagram_ratios(signature: Signature) -> PentagramRatios:
    kb = signature.kappa_bar
    bad = np.flatnonzero(np.abs(kb) < ZERO_TOL)
    if len(bad):
        raise ZeroKappaBar(int(bad[0]))
    return PentagramRatios(lam=signature.kappa / kb, mu=-1.0 / kb)


def pentagram_coefficients(signature: Signature) -> FlowCoefficients:
    """The pentagram map written as a tangent flow (``alpha - beta = 1``)."""
    d = 1.0 + signature.kappa + signature.kappa_bar
    alphas = (1.0 + signature.kappa_bar) / d
    # beta = -kappa / d; taking alpha - 1 keeps alpha - beta = 1 exact in floating point
    return FlowCoefficients(alphas, alphas - 1.0)


def inverse_pentagram_coefficients(signature: Signature) -> FlowCoefficients:
    kb = signature.kappa_bar
    return FlowCoefficients(np.zeros(len(signature)), signature.kappa / kb)


def predict_pentagram(signature: Signature) -> Signature:
    k, kb = signature.kappa, signature.kappa_bar
    d = 1.0 + k + kb
    kb_new = _at(d, 1) * (1.0 + _at(kb, 2)) / _at(d, 2) - 1.0
    denom = (1.0 + kb) - d / _at(d, -1)
    bad = np.flatnonzero(np.abs(denom) < ZERO_TOL)
    if len(bad):
        raise DenominatorVanishes(int(bad[0]))
    k_new = k / denom * kb_new
    return Signature(np.stack([k_new, kb_new, np.zeros_like(k)], axis=1),
                     signature.cyclic, signature.offset)


def pentagram_step(polygon: Polygon) -> tuple[Polygon, Signature]:
    """Vertex ``k`` moves to the meet of diagonals ``r_k r_{k+2}`` and ``r_{k-1} r_{k+1}``."""
    sig = compute_signature(polygon)
    _require_convex(polygon, sig)
    ratios = pentagram_ratios(sig)
    R = polygon.vertices
    new = Polygon(R + ratios.lam[:, None] * (_at(R, 2) - R), closed=True, label=polygon.label)
    _signature_or_fail(new)
    return new, predict_pentagram(sig)


def predict_inverse_pentagram(signature: Signature) -> Signature:
    k, kb = signature.kappa, signature.kappa_bar
    k1, kb1 = _at(k, 1), _at(kb, 1)
    kbm = _at(kb, -1)
    common = kb + kb * _at(k, 2) / _at(kb, 2) + 1.0
    denom = k1 * kbm + kb1 * (kbm + 1.0)
    bad = np.flatnonzero(np.abs(denom) < ZERO_TOL)
    if len(bad):
        raise ZeroDenominator(f"inverse pentagram recursion is singular at vertex {int(bad[0])}")
    k_new = k1 * kbm * common / denom
    kb_new = kb1 * (kbm + 1.0) * common / denom - 1.0
    return Signature(np.stack([k_new, kb_new, np.zeros_like(k)], axis=1),
                     signature.cyclic, signature.offset)


def inverse_pentagram_step(polygon: Polygon) -> tuple[Polygon, Signature]:
    """Vertex ``k`` moves along the backward edge: ``r_k' = r_k + (k_k / kb_k) t_{k-1}``.

    Warns with NonPositiveKappaBarWarning when some second curvature is not
    positive, since the image is then not convex.
    """
    sig = compute_signature(polygon)
    _require_convex(polygon, sig)
    ratios = inverse_pentagram_ratios(sig)
    if np.any(sig.kappa_bar <= 0):
        warnings.warn("non-positive second curvature: inverse pentagram image is not convex",
                      NonPositiveKappaBarWarning, stacklevel=2)
    R = polygon.vertices
    new = Polygon(R + ratios.lam[:, None] * (R - _at(R, -1)), closed=True, label=polygon.label)
    _signature_or_fail(new)
    return new, predict_inverse_pentagram(sig)


# -- endpoint flow --------------------------------------------------------------

def endpoint_flow_step(polygon: Polygon, c: float, variant: str = "verbatim") -> Polygon:
    """Proportional division on all edges but the last, which uses ``r_p' = c (r_1 + r_p)``.

    ``variant="convex"`` replaces the last rule by ``(1 - c) r_p + c r_1``,
    which is just the proportional-division map.
    """
    _require_closed(polygon)
    if len(polygon) < 4:
        raise ValueError("endpoint flow needs at least 4 vertices")
    if not 0.0 < c < 1.0:
        raise ValueError(f"c must lie in (0, 1), got {c}")
    R = polygon.vertices
    new = np.empty_like(R)
    new[:-1] = (1 - c) * R[:-1] + c * R[1:]
    if variant == "verbatim":
        new[-1] = c * (R[0] + R[-1])
    elif variant == "convex":
        new[-1] = (1 - c) * R[-1] + c * R[0]
    else:
        raise ValueError(f"unknown endpoint variant {variant!r}")
    out = Polygon(new, closed=True, label=polygon.label)
    try:
        check_admissible(out)
    except CentroflowError as exc:
        raise DegenerateResult(str(exc)) from exc
    return out
