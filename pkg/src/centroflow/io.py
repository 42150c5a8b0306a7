"""JSON polygon documents, signature CSV tables and SVG snapshots."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .polygon import Polygon, Signature

CSV_HEADER = ("vertex", "kappa", "kappa_bar", "tau")


class DocumentError(ValueError):
    """A polygon document could not be parsed."""


def _reject_constant(name):
    raise DocumentError(f"non-finite number {name} in document")


@dataclass(frozen=True)
class PolygonDocument:
    dimension: int
    closed: bool
    vertices: list
    label: str | None = None

    @classmethod
    def from_polygon(cls, polygon: Polygon) -> "PolygonDocument":
        return cls(polygon.dimension, polygon.closed, polygon.vertices.tolist(), polygon.label)

    def to_polygon(self) -> Polygon:
        return Polygon(np.array(self.vertices, dtype=float), self.closed, self.label)

    def to_dict(self) -> dict:
        d = {"dimension": self.dimension, "closed": self.closed, "vertices": self.vertices}
        if self.label is not None:
            d["label"] = self.label
        return d

    @classmethod
    def from_dict(cls, data) -> "PolygonDocument":
        if not isinstance(data, dict):
            raise DocumentError("document must be a JSON object")
        missing = {"dimension", "vertices"} - set(data)
        if missing:
            raise DocumentError(f"document lacks {sorted(missing)}")
        dim = data["dimension"]
        if dim not in (2, 3) or isinstance(dim, bool):
            raise DocumentError(f"dimension must be 2 or 3, got {dim!r}")
        closed = data.get("closed", True)
        if not isinstance(closed, bool):
            raise DocumentError("closed must be a boolean")
        verts = data["vertices"]
        if not isinstance(verts, list):
            raise DocumentError("vertices must be a list")
        for i, v in enumerate(verts):
            if not isinstance(v, list) or len(v) != dim:
                raise DocumentError(f"vertex {i} must have {dim} coordinates")
            for x in v:
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise DocumentError(f"vertex {i} has a non-numeric coordinate {x!r}")
                if not math.isfinite(x):
                    raise DocumentError(f"vertex {i} has a non-finite coordinate")
        label = data.get("label")
        if label is not None and not isinstance(label, str):
            raise DocumentError("label must be a string")
        return cls(dim, closed, [[float(x) for x in v] for v in verts], label)


def dumps_polygon(polygon: Polygon) -> str:
    # json writes floats with repr, which round-trips doubles exactly
    return json.dumps(PolygonDocument.from_polygon(polygon).to_dict(), allow_nan=False)


def loads_polygon(text: str) -> Polygon:
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return PolygonDocument.from_dict(data).to_polygon()


def save_polygon(polygon: Polygon, path) -> None:
    Path(path).write_text(dumps_polygon(polygon) + "\n")


def load_polygon(path) -> Polygon:
    return loads_polygon(Path(path).read_text())


def signature_csv(signature: Signature) -> str:
    """Full-precision CSV with one row per vertex carrying invariants."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for i, (k, kb, t) in enumerate(signature.values):
        w.writerow([i + signature.offset, repr(float(k)), repr(float(kb)), repr(float(t))])
    return buf.getvalue()


def read_signature_csv(text: str, cyclic: bool = True) -> Signature:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise DocumentError(f"expected header {','.join(CSV_HEADER)}")
    body = rows[1:]
    if not body:
        raise DocumentError("empty signature table")
    offset = int(body[0][0])
    values = np.array([[float(x) for x in r[1:]] for r in body])
    return Signature(values, cyclic, offset)


def format_signature(signature: Signature, digits: int = 4) -> str:
    """Rounded table with one column per vertex and rows kappa, kappa_bar, tau."""
    cols = [str(i + signature.offset) for i in range(len(signature))]
    rows = [("vertex", cols)]
    for name, vals in (("kappa", signature.kappa), ("kappa_bar", signature.kappa_bar),
                       ("tau", signature.tau)):
        rows.append((name, [f"{v + 0.0:.{digits}f}" for v in vals]))  # + 0.0 drops the sign of -0.0
    width = max(len(c) for _, r in rows for c in r)
    return "\n".join(f"{name:<10}" + " ".join(c.rjust(width) for c in r) for name, r in rows)


def _project(polygon: Polygon) -> tuple[np.ndarray, str | None]:
    if polygon.dimension == 2:
        return polygon.vertices, None
    v = polygon.vertices
    drop = int(np.argmin(np.var(v, axis=0)))
    keep = [i for i in range(3) if i != drop]
    return v[:, keep], f"projected: dropped axis {'xyz'[drop]} (least variance)"


def polygon_svg(polygon: Polygon, size: int = 400, margin: int = 20) -> str:
    """A polyline snapshot; 3D input is projected by dropping its flattest axis."""
    pts, note = _project(polygon)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float((hi - lo).max()) or 1.0
    s = (size - 2 * margin) / span
    xy = [(margin + (x - lo[0]) * s, size - margin - (y - lo[1]) * s) for x, y in pts]
    tag = "polygon" if polygon.closed else "polyline"
    points = " ".join(f"{x:.3f},{y:.3f}" for x, y in xy)
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    if note:
        lines.append(f"  <!-- {note} -->")
    lines.append(f'  <{tag} points="{points}" fill="none" stroke="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
