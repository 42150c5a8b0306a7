"""Iterating flows, recording traces, and probing for (periodic) stability."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import flows
from .errors import CentroflowError
from .polygon import Polygon, Signature, compute_signature

FLOW_KINDS = ("transversal", "tangent", "proportional", "pentagram", "inverse-pentagram", "endpoint")
STABILITY_TOL = 1e-8
MAX_GENERATIONS = 500


def renormalize(polygon: Polygon, mode: str = "scale") -> tuple[Polygon, Any]:
    """Apply a centroaffine map that keeps coordinates of order one.

    ``"scale"`` divides by the largest coordinate magnitude.  ``"frame"``
    replaces the vertex matrix by the orthonormal factor of its QR
    decomposition, a linear change of coordinates that also undoes
    anisotropic collapse.  Returns the new polygon and the applied factor
    (a scalar for ``"scale"``, the inverse linear map for ``"frame"``).
    """
    if mode == "none":
        return polygon, 1.0
    if mode == "scale":
        s = polygon.scale()
        return Polygon(polygon.vertices / s, polygon.closed, polygon.label), 1.0 / s
    if mode == "frame":
        q, r = np.linalg.qr(polygon.vertices)
        # vertices = q @ r, so q = vertices @ inv(r): the linear map x -> inv(r).T @ x
        return Polygon(q, polygon.closed, polygon.label), np.linalg.inv(r).T
    raise ValueError(f"unknown renormalization {mode!r}")


@dataclass(frozen=True)
class Flow:
    """A flow kind together with its parameters.

    ``step`` returns the next polygon, the predicted signature (None for the
    endpoint flow, which has no closed-form recursion) and the coefficients used.
    """

    kind: str
    params: dict = field(default_factory=dict)
    rescale: str = "scale"

    def step(self, polygon: Polygon):
        p = self.params
        if self.kind == "transversal":
            sig = compute_signature(polygon)
            betas = flows.planarity_betas(sig, polygon, _recipe(p))
            new, pred = flows.transversal_step(polygon, betas)
            return new, pred, {"betas": betas}
        if self.kind == "tangent":
            coeffs = flows.FlowCoefficients(p.get("alpha", 0.0), p.get("beta", 0.0))
            new, pred = flows.tangent_step(polygon, coeffs)
            return new, pred, {"alpha": p.get("alpha", 0.0), "beta": p.get("beta", 0.0)}
        if self.kind == "proportional":
            new, pred = flows.proportional_step(polygon, p["alpha"])
            return new, pred, {"alpha": p["alpha"]}
        if self.kind == "pentagram":
            new, pred = flows.pentagram_step(polygon)
            return new, pred, {}
        if self.kind == "inverse-pentagram":
            new, pred = flows.inverse_pentagram_step(polygon)
            return new, pred, {}
        if self.kind == "endpoint":
            variant = p.get("variant", "verbatim")
            return flows.endpoint_flow_step(polygon, p["c"], variant), None, {"c": p["c"], "variant": variant}
        raise ValueError(f"unknown flow kind {self.kind!r}")


def _recipe(params: dict) -> flows.TransversalRecipe:
    name = params.get("recipe", "mean")
    if name == "mean":
        return flows.TransversalRecipe.mean_curvatures()
    if name == "constant":
        return flows.TransversalRecipe.constant(float(params.get("c", 1.0)))
    raise ValueError(f"unknown transversal recipe {name!r}")


def make_flow(kind: str, **params) -> Flow:
    """Validate parameters and pick the renormalization suited to ``kind``."""
    if kind not in FLOW_KINDS:
        raise ValueError(f"unknown flow kind {kind!r}; choose from {', '.join(FLOW_KINDS)}")
    rescale = params.pop("rescale", None)
    if kind == "proportional":
        alpha = float(params.get("alpha", 0.5))
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        params["alpha"] = alpha
    if kind == "tangent":
        params["alpha"] = float(params.get("alpha", 0.0))
        params["beta"] = float(params.get("beta", 0.0))
    if kind == "endpoint":
        c = float(params.get("c", 0.1))
        if not 0.0 < c < 1.0:
            raise ValueError(f"c must lie in (0, 1), got {c}")
        params["c"] = c
        if params.setdefault("variant", "verbatim") not in ("verbatim", "convex"):
            raise ValueError(f"unknown endpoint variant {params['variant']!r}")
    if kind == "transversal":
        _recipe(params)
    if rescale is None:
        # the verbatim endpoint map collapses anisotropically; a scalar is not enough
        rescale = "frame" if kind == "endpoint" else "scale"
    return Flow(kind, params, rescale)


@dataclass(frozen=True)
class GenerationRecord:
    polygon: Polygon
    signature: Signature
    coefficients: dict | None = None  # used to produce the next generation
    rescale: Any = 1.0  # factor applied to this polygon after stepping
    predicted: Signature | None = None  # prediction of this generation from the previous one

    @property
    def cross_check(self) -> float | None:
        if self.predicted is None:
            return None
        return float(np.abs(self.predicted.values - self.signature.values).max())


@dataclass
class FlowTrace:
    flow_kind: str
    generations: list[GenerationRecord] = field(default_factory=list)
    stop_reason: str = ""

    def __len__(self):
        return len(self.generations)

    @property
    def signatures(self) -> list[Signature]:
        return [g.signature for g in self.generations]

    @property
    def polygons(self) -> list[Polygon]:
        return [g.polygon for g in self.generations]

    def max_cross_check(self) -> float:
        vals = [g.cross_check for g in self.generations if g.cross_check is not None]
        return max(vals, default=0.0)


def _advance(flow: Flow, trace: FlowTrace) -> None:
    last = trace.generations[-1]
    new, predicted, coeffs = flow.step(last.polygon)
    trace.generations[-1] = GenerationRecord(last.polygon, last.signature, coeffs, last.rescale,
                                             last.predicted)
    new, factor = renormalize(new, flow.rescale)
    trace.generations.append(GenerationRecord(new, compute_signature(new), None, factor, predicted))


def run_flow(flow: Flow, polygon: Polygon, generations: int) -> FlowTrace:
    """Iterate exactly ``generations`` steps (or until the flow leaves its domain)."""
    trace = FlowTrace(flow.kind, [GenerationRecord(polygon, compute_signature(polygon))])
    for _ in range(generations):
        try:
            _advance(flow, trace)
        except CentroflowError as exc:
            if len(trace) == 1:
                raise
            trace.stop_reason = f"error at generation {len(trace) - 1}: {exc}"
            return trace
    trace.stop_reason = "completed"
    return trace


@dataclass(frozen=True)
class Periodicity:
    period: int
    cyclic_shift: int


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    periodic: Periodicity | None
    first_stable_generation: int | None
    residual: float
    ambiguous: bool = False  # two cyclic shifts matched equally well


def _shift_distances(s_old: Signature, s_new: Signature) -> np.ndarray:
    """Distance between ``s_new`` and ``s_old`` read from index ``k + shift``, per shift."""
    a, b = s_old.values, s_new.values
    return np.array([np.abs(np.roll(a, -s, axis=0) - b).max() for s in range(len(a))])


def stability_probe(flow: Flow, polygon: Polygon, max_generations: int = MAX_GENERATIONS,
                    max_period: int = 8, tol: float = STABILITY_TOL) -> tuple[StabilityReport, FlowTrace]:
    """Iterate until the signature repeats.

    Stable means the next generation has the same signature entry by entry.
    Periodic means generation ``m + q`` equals generation ``m`` read with
    a cyclic index shift, for some ``q <= max_period``; the smallest ``q`` and
    then the smallest shift are reported.  Running out of generations is
    reported in the trace's ``stop_reason``, not raised.
    """
    trace = FlowTrace(flow.kind, [GenerationRecord(polygon, compute_signature(polygon))])
    residual = np.inf
    for _ in range(max_generations):
        try:
            _advance(flow, trace)
        except CentroflowError as exc:
            if len(trace) == 1:
                raise
            trace.stop_reason = f"error at generation {len(trace) - 1}: {exc}"
            return StabilityReport(False, None, None, residual), trace
        sigs = trace.signatures
        g = len(sigs) - 1
        newest = sigs[g]
        strict = float(np.abs(newest.values - sigs[g - 1].values).max())
        residual = strict
        if strict < tol:
            trace.stop_reason = "stable"
            return StabilityReport(True, None, g - 1, strict), trace
        for q in range(1, min(max_period, g) + 1):
            d = _shift_distances(sigs[g - q], newest)
            hits = np.flatnonzero(d < tol)
            if len(hits):
                shift = int(hits[0])
                trace.stop_reason = "periodic"
                return StabilityReport(False, Periodicity(q, shift), g - q, float(d[shift]),
                                       ambiguous=len(hits) > 1), trace
    trace.stop_reason = f"no convergence after {max_generations} generations"
    return StabilityReport(False, None, None, residual), trace
