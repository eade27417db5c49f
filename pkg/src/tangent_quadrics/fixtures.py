"""Built-in instances: the fully real (3,3,3) configuration and the
sparse coordinate-figure constructions used for seeding searches."""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

import numpy as np

from .geometry import (
    ProjPlane,
    ProjPoint,
    plane_from_span,
    plucker_from_span,
    span_from_plucker,
    twisted_cubic_tangent,
)
from .polysys import TangencyInstance

__all__ = [
    "fully_real_333_instance",
    "coordinate_lines_instance",
    "coordinate_planes_instance",
    "twisted_cubic_lines_instance",
    "record_261_instance",
    "load_instance",
    "CANONICAL_POINTS",
]

# Integer points that make the six-coordinate-line configuration fully real.
CANONICAL_POINTS = ((1, 2, 8, 7), (1, 1, 9, 2), (2, 5, 3, 1))


def _load_json(name: str) -> dict:
    with resources.files("tangent_quadrics.data").joinpath(name).open() as f:
        return json.load(f)


def load_instance(name: str) -> TangencyInstance:
    return TangencyInstance.from_json(_load_json(name))


def fully_real_333_instance() -> TangencyInstance:
    """Three points, three lines, three planes with all 104 tangent quadrics real."""
    return load_instance("instance_333_fully_real.json")


def record_261_instance() -> TangencyInstance:
    """A (2,6,1) instance with 96 of the 104 tangent quadrics real."""
    return load_instance("instance_261_record.json")


def _coordinate_line_spans():
    e = np.eye(4)
    return [np.stack([e[i], e[j]]) for i in range(4) for j in range(i + 1, 4)]


def coordinate_lines_instance(
    n_points: int = 3, n_planes: int = 0, perturbation: float = 1e-3, seed: int = 0
) -> TangencyInstance:
    """The six coordinate lines (perturbed) plus canonical points/planes.

    With zero perturbation the six lines meet pairwise and 48 of the 56
    tangent quadrics are cones; the default perturbation makes them smooth.
    Points come from CANONICAL_POINTS; planes reuse leftover canonical
    points as dual coordinates.
    """
    if n_points + n_planes > len(CANONICAL_POINTS):
        raise ValueError("at most three canonical figures available")
    rng = np.random.default_rng(seed)
    lines = []
    for span in _coordinate_line_spans():
        span = span + perturbation * rng.standard_normal(span.shape)
        lines.append(plucker_from_span(span.tolist()))
    points = [ProjPoint(p) for p in CANONICAL_POINTS[:n_points]]
    planes = [ProjPlane(p) for p in CANONICAL_POINTS[n_points : n_points + n_planes]]
    return TangencyInstance(points=points, lines=lines, planes=planes)


def coordinate_planes_instance(n_points: int = 5, seed: int = 0) -> TangencyInstance:
    """The four coordinate planes plus random real points (generic, degree 21)."""
    rng = np.random.default_rng(seed)
    e = np.eye(4)
    planes = [plane_from_span(np.delete(e, i, axis=0).tolist()) for i in range(4)]
    points = [ProjPoint(rng.standard_normal(4).tolist()) for _ in range(n_points)]
    return TangencyInstance(points=points, planes=planes)


def twisted_cubic_lines_instance(perturbation: float = 1e-3, seed: int = 0) -> TangencyInstance:
    """Nine perturbed tangent lines of the twisted cubic (signature (0,9,0,0))."""
    rng = np.random.default_rng(seed)
    ts = np.linspace(-2.0, 2.0, 9)
    lines = []
    for t in ts:
        l = np.asarray([complex(v).real for v in twisted_cubic_tangent(float(t)).l])
        # perturb a spanning pair of points instead of the coordinates, so the
        # perturbed figure is still a line
        span = span_from_plucker(l)
        span = span + perturbation * rng.standard_normal(span.shape)
        lines.append(plucker_from_span(span.tolist()))
    return TangencyInstance(lines=lines)
