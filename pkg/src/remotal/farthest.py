"""Farthest and nearest structures over finite point sets.

For a finite set F and probe x, the farthest radius is max ||x - y|| over F
and the almost-farthest set at level delta collects the indices y with
||x - y|| >= radius - delta.  The nearest-side mirror uses min and <=.
Index sets make containment identities exact and cheap to assert.

Threshold comparisons carry an absolute slack of 1e-12 to absorb
accumulated floating-point error; the same constant is used by the property
checks so assertions and implementation agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .norms import NormSpec, norm_values
from .sets import PointSet, Scheme, default_scheme, sample_sphere

THRESHOLD_SLACK = 1e-12


@dataclass(frozen=True)
class FarthestResult:
    """Farthest radius plus the index set within delta of attaining it."""

    radius: float
    delta: float
    indices: np.ndarray
    attained: bool = True

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "delta": self.delta,
            "indices": self.indices.tolist(),
        }


@dataclass(frozen=True)
class NearestResult:
    """Infimal distance plus the index set within delta of attaining it."""

    radius: float
    delta: float
    indices: np.ndarray
    attained: bool = True

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "delta": self.delta,
            "indices": self.indices.tolist(),
        }


def distances(F: PointSet, x, norm: NormSpec) -> np.ndarray:
    """||x - y|| for every y in F, in F's order."""
    x = _check_point(F, x, norm)
    return norm_values(norm, x[None, :] - F.points)


def _check_point(F: PointSet, x, norm: NormSpec) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (F.dim,) or F.dim != norm.dim:
        raise DimensionMismatch(
            f"probe of shape {x.shape} against a set in R^{F.dim} "
            f"and a norm on R^{norm.dim}"
        )
    return x


def farthest_radius(F: PointSet, x, norm: NormSpec) -> float:
    """Exact max of ||x - y|| over the finite set F."""
    return float(distances(F, x, norm).max())


def nearest_radius(A: PointSet, x, norm: NormSpec) -> float:
    """Exact min of ||x - y|| over the finite set A."""
    return float(distances(A, x, norm).min())


def farthest_mask(dists: np.ndarray, radius: float, delta: float) -> np.ndarray:
    return dists >= radius - delta - THRESHOLD_SLACK


def nearest_mask(dists: np.ndarray, radius: float, delta: float) -> np.ndarray:
    return dists <= radius + delta + THRESHOLD_SLACK


def almost_farthest_set(F: PointSet, x, norm: NormSpec, delta: float) -> FarthestResult:
    """Indices of F within delta of the farthest radius (delta = 0 gives the
    attained farthest points)."""
    if delta < 0:
        raise ValidationError(f"delta must be >= 0, got {delta}")
    d = distances(F, x, norm)
    r = float(d.max())
    idx = np.flatnonzero(farthest_mask(d, r, delta))
    return FarthestResult(radius=r, delta=float(delta), indices=idx)


def nearly_nearest_set(A: PointSet, x, norm: NormSpec, delta: float) -> NearestResult:
    """Indices of A within delta of the infimal distance."""
    if delta < 0:
        raise ValidationError(f"delta must be >= 0, got {delta}")
    d = distances(A, x, norm)
    r = float(d.min())
    idx = np.flatnonzero(nearest_mask(d, r, delta))
    return NearestResult(radius=r, delta=float(delta), indices=idx)


def polyhedral_farthest_radius(norm: NormSpec, polytope_vertices: PointSet, x) -> float:
    """Exact farthest radius from x over a polytope, via its vertices.

    A norm distance is convex, so its max over the polytope is attained at a
    vertex; the vertex max therefore equals the radius of both the full
    polytope and its boundary.  Used to certify sampled radii.
    """
    return farthest_radius(polytope_vertices, x, norm)


def maximizing_sequence(
    norm: NormSpec,
    x,
    delta_schedule,
    resolution: int,
    scheme: Scheme | None = None,
) -> np.ndarray:
    """One almost-farthest sphere point per schedule entry (lowest index).

    Each step draws a fresh sphere sample; with the default schemes this is
    the angle grid in dim 2 and a seeded sample with per-step seed k in
    dim >= 3, so the sequence is reproducible.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (norm.dim,):
        raise DimensionMismatch("probe dimension mismatch")
    if not np.any(x):
        raise ValidationError("maximizing sequences need a nonzero probe")
    deltas = [float(d) for d in delta_schedule]
    if not deltas:
        raise ValidationError("delta schedule must be non-empty")
    if any(d <= 0 for d in deltas) or any(
        d2 >= d1 for d1, d2 in zip(deltas, deltas[1:])
    ):
        raise ValidationError("delta schedule must be strictly decreasing and positive")
    out = []
    for k, delta in enumerate(deltas):
        step_scheme = scheme
        if step_scheme is None:
            step_scheme = default_scheme(norm.dim)
            if step_scheme.kind == "seeded":
                step_scheme = Scheme("seeded", seed=k)
        sphere = sample_sphere(norm, resolution, step_scheme)
        res = almost_farthest_set(sphere, x, norm, delta)
        out.append(sphere.points[int(res.indices[0])])
    pts = np.asarray(out)
    pts.setflags(write=False)
    return pts
