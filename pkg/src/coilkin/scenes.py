"""Simulated environments: height fields for surface scans, tubes for exploration.

Scenes load from JSON. A height field document looks like

    {"type": "height_field", "origin": [0, 0], "cell_mm": 10,
     "heights": [[0, 0], [0, 40]]}

where heights[i][j] is the cell at (origin[0] + i*cell_mm,
origin[1] + j*cell_mm). A tube document looks like

    {"type": "tube", "inner_radius_mm": 174,
     "obstacle": {"center": [45, 0, -206], "edge_mm": 40}}

with "obstacle" optional.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import SceneError


@dataclass(frozen=True)
class HeightField:
    """Non-negative height grid over the floor plane; outside cells read 0."""

    origin: tuple
    cell_mm: float
    heights: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.heights, dtype=float)
        if h.ndim != 2 or h.size == 0:
            raise SceneError("heights must be a non-empty 2-D grid")
        if not np.isfinite(h).all() or (h < 0).any():
            raise SceneError("heights must be finite and >= 0")
        if self.cell_mm <= 0:
            raise SceneError("cell_mm must be > 0")
        object.__setattr__(self, "heights", h)
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    def height_at(self, x: float, y: float) -> float:
        i = math.floor((x - self.origin[0]) / self.cell_mm)
        j = math.floor((y - self.origin[1]) / self.cell_mm)
        nx, ny = self.heights.shape
        if 0 <= i < nx and 0 <= j < ny:
            return float(self.heights[i, j])
        return 0.0


@dataclass(frozen=True)
class Cube:
    """Axis-aligned cube obstacle."""

    center: tuple
    edge_mm: float

    def __post_init__(self):
        if self.edge_mm <= 0:
            raise SceneError("cube edge must be > 0")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def contains(self, p) -> bool:
        half = self.edge_mm / 2.0
        return all(abs(float(p[k]) - self.center[k]) <= half for k in range(3))


@dataclass(frozen=True)
class Tube:
    """Vertical tube around the arm start axis with an optional obstacle."""

    inner_radius_mm: float
    obstacle: Cube | None = None

    def __post_init__(self):
        if self.inner_radius_mm <= 0:
            raise SceneError("tube inner radius must be > 0")


def _require_fields(doc: dict, allowed: set, required: set, what: str):
    unknown = set(doc) - allowed
    if unknown:
        raise SceneError(f"unknown {what} fields: {sorted(unknown)}")
    missing = required - set(doc)
    if missing:
        raise SceneError(f"missing {what} fields: {sorted(missing)}")


def scene_from_dict(doc: dict):
    """Build a HeightField or Tube from a JSON-style dict."""
    if not isinstance(doc, dict):
        raise SceneError("scene document must be a JSON object")
    kind = doc.get("type")
    if kind == "height_field":
        _require_fields(
            doc, {"type", "origin", "cell_mm", "heights"}, {"cell_mm", "heights"}, "height_field"
        )
        origin = doc.get("origin", (0.0, 0.0))
        if len(origin) != 2:
            raise SceneError("height_field origin must be [x, y]")
        try:
            return HeightField(tuple(origin), float(doc["cell_mm"]), np.asarray(doc["heights"]))
        except (TypeError, ValueError) as exc:
            raise SceneError(f"bad height_field document: {exc}") from exc
    if kind == "tube":
        _require_fields(doc, {"type", "inner_radius_mm", "obstacle"}, {"inner_radius_mm"}, "tube")
        obstacle = doc.get("obstacle")
        cube = None
        if obstacle is not None:
            _require_fields(obstacle, {"center", "edge_mm"}, {"center", "edge_mm"}, "obstacle")
            if len(obstacle["center"]) != 3:
                raise SceneError("obstacle center must be [x, y, z]")
            cube = Cube(tuple(obstacle["center"]), float(obstacle["edge_mm"]))
        return Tube(float(doc["inner_radius_mm"]), cube)
    raise SceneError(f"scene type must be 'height_field' or 'tube', got {kind!r}")


def load_scene(path):
    """Load a scene JSON document from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SceneError(f"scene document is not valid JSON: {exc}") from exc
    return scene_from_dict(doc)
