"""Norms on R^n: the lp family, weighted lp, and polyhedral gauges.

A :class:`NormSpec` is an immutable description of a norm with three kinds:

* ``lp``: the usual lp norm for 1 <= p <= inf; p = inf is a distinguished
  sentinel (``math.inf``), never a huge finite exponent.
* ``wlp``: weighted lp, ``(sum_i w_i |x_i|^p) ** (1/p)`` with strictly
  positive weights applied inside the p-th power.  At p = inf this family
  degenerates to plain max-abs (the weights wash out in the limit).
* ``poly``: the Minkowski gauge of a centrally symmetric polytope given by
  its vertices.  A facet (halfspace) description is computed once from the
  convex hull and normalized so the gauge is ``max_i <a_i, x>``, which is
  exact for polytopes and O(#facets) per evaluation.

Evaluation is vectorized over arrays of shape ``(..., dim)``.  Finite-p
powers are computed in scaled form to avoid overflow for large p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull

from .errors import DimensionMismatch, ValidationError

# Tolerance for the central-symmetry check of polyhedral vertex sets.
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class NormSpec:
    """Immutable norm description; validated on construction, safe to share."""

    kind: str  # "lp" | "wlp" | "poly"
    dim: int
    p: float | None = None
    weights: tuple[float, ...] | None = None
    vertices: tuple[tuple[float, ...], ...] | None = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def lp(p: float, dim: int) -> "NormSpec":
        return NormSpec(kind="lp", dim=dim, p=float(p))

    @staticmethod
    def weighted_lp(p: float, weights) -> "NormSpec":
        w = tuple(float(v) for v in weights)
        return NormSpec(kind="wlp", dim=len(w), p=float(p), weights=w)

    @staticmethod
    def polyhedral(vertices) -> "NormSpec":
        verts = tuple(tuple(float(c) for c in v) for v in vertices)
        if not verts:
            raise ValidationError("polyhedral norm needs a non-empty vertex set")
        return NormSpec(kind="poly", dim=len(verts[0]), vertices=verts)

    # -- validation --------------------------------------------------------

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValidationError(f"dim must be a positive integer, got {self.dim!r}")
        if self.kind == "lp":
            self._check_p()
        elif self.kind == "wlp":
            self._check_p()
            if self.weights is None or len(self.weights) != self.dim:
                raise ValidationError("weights length must equal dim")
            if any(not (w > 0) for w in self.weights):
                raise ValidationError("weights must all be > 0")
        elif self.kind == "poly":
            self._check_vertices()
        else:
            raise ValidationError(f"unknown norm kind {self.kind!r}")

    def _check_p(self):
        if self.p is None or math.isnan(self.p) or self.p < 1:
            raise ValidationError(f"p must satisfy 1 <= p <= inf, got {self.p!r}")

    def _check_vertices(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != self.dim:
            raise ValidationError("vertices must be a list of dim-dimensional points")
        if v.shape[0] < 2:
            raise ValidationError("polyhedral norm needs at least two vertices")
        if np.any(np.max(np.abs(v), axis=1) <= SYMMETRY_TOL):
            raise ValidationError("polyhedral vertex set must not contain the origin")
        # central symmetry: for every vertex v, -v is present within tolerance
        gaps = np.abs(v[:, None, :] + v[None, :, :]).max(axis=2).min(axis=1)
        if np.any(gaps > SYMMETRY_TOL):
            raise ValidationError("polyhedral vertex set is not centrally symmetric")
        if np.linalg.matrix_rank(v) < self.dim:
            raise ValidationError("polyhedral vertex set does not span R^dim")

    # -- derived data ------------------------------------------------------

    @cached_property
    def _facets(self) -> np.ndarray:
        """Facet functionals F with gauge(x) = max_i <F_i, x>.

        Rows are normalized so <F_i, v> <= 1 on the polytope.  The negated
        rows are appended so the evaluated gauge is bitwise symmetric,
        gauge(-x) == gauge(x), independent of hull output ordering.
        """
        v = np.asarray(self.vertices, dtype=np.float64)
        if self.dim == 1:
            vmax = float(np.abs(v).max())
            f = np.array([[1.0 / vmax]])
        else:
            hull = ConvexHull(v)
            a = hull.equations[:, :-1]
            b = hull.equations[:, -1]
            if np.any(b >= -1e-14):
                raise ValidationError(
                    "polyhedral vertex set does not enclose the origin"
                )
            f = a / (-b)[:, None]
        return np.vstack([f, -f])

    @cached_property
    def l2_equivalence(self) -> tuple[float, float]:
        """Constants (c1, c2) with c1*|z|_2 <= N(z) <= c2*|z|_2 on R^dim.

        Used by the pair-reduction engine to turn Euclidean bounding-box
        distances into certified bounds under this norm.
        """
        d = float(self.dim)
        if self.kind in ("lp", "wlp"):
            p = self.p
            if math.isinf(p):
                lo, hi = d ** -0.5, 1.0
            elif p >= 2.0:
                lo, hi = d ** (1.0 / p - 0.5), 1.0
            else:
                lo, hi = 1.0, d ** (1.0 / p - 0.5)
            if self.kind == "wlp" and not math.isinf(p):
                wmin = min(self.weights) ** (1.0 / p)
                wmax = max(self.weights) ** (1.0 / p)
                lo, hi = lo * wmin, hi * wmax
            return lo, hi
        facets = self._facets
        c2 = float(np.sqrt((facets * facets).sum(axis=1)).max())
        vnorms = np.sqrt((np.asarray(self.vertices, dtype=np.float64) ** 2).sum(axis=1))
        c1 = 1.0 / float(vnorms.max())
        return c1, c2

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == "lp":
            return {"kind": "lp", "p": _p_to_json(self.p), "dim": self.dim}
        if self.kind == "wlp":
            return {"kind": "wlp", "p": _p_to_json(self.p), "weights": list(self.weights)}
        return {"kind": "poly", "vertices": [list(v) for v in self.vertices]}

    @staticmethod
    def from_json(obj: dict) -> "NormSpec":
        if not isinstance(obj, dict):
            raise ValidationError("norm: expected a JSON object")
        kind = obj.get("kind")
        if kind == "lp":
            if "dim" not in obj:
                raise ValidationError("norm.dim: required for lp norms")
            spec = NormSpec.lp(_p_from_json(obj.get("p")), _int_field(obj, "dim"))
        elif kind == "wlp":
            if "weights" not in obj:
                raise ValidationError("norm.weights: required for wlp norms")
            spec = NormSpec.weighted_lp(_p_from_json(obj.get("p")), obj["weights"])
        elif kind == "poly":
            if "vertices" not in obj:
                raise ValidationError("norm.vertices: required for poly norms")
            spec = NormSpec.polyhedral(obj["vertices"])
        else:
            raise ValidationError(f"norm.kind: expected lp|wlp|poly, got {kind!r}")
        if "dim" in obj and _int_field(obj, "dim") != spec.dim:
            raise ValidationError("norm.dim: inconsistent with weights/vertices")
        return spec


def _p_to_json(p: float):
    return "inf" if math.isinf(p) else p


def _p_from_json(raw) -> float:
    if raw == "inf":
        return math.inf
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ValidationError(f"norm.p: expected a number or 'inf', got {raw!r}") from None


def _int_field(obj: dict, name: str) -> int:
    val = obj[name]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ValidationError(f"norm.{name}: expected an integer, got {val!r}")
    return val


# -- evaluation ------------------------------------------------------------

# Budget on the size of the facet-product intermediate for poly gauges.
_POLY_CHUNK_BUDGET = 1 << 24


def norm_values(spec: NormSpec, pts) -> np.ndarray:
    """Evaluate the norm on an array of shape (..., dim); returns (...)."""
    a = np.asarray(pts, dtype=np.float64)
    if a.ndim == 0 or a.shape[-1] != spec.dim:
        raise DimensionMismatch(
            f"points of dimension {a.shape[-1] if a.ndim else 0} "
            f"against a norm on R^{spec.dim}"
        )
    flat = a.reshape(-1, spec.dim)
    if spec.kind == "lp":
        out = _lp_values(flat, spec.p)
    elif spec.kind == "wlp":
        out = _wlp_values(flat, spec.p, np.asarray(spec.weights))
    else:
        out = _gauge_values(flat, spec._facets)
    return out.reshape(a.shape[:-1])


def norm_eval(spec: NormSpec, x) -> float:
    """Norm of a single point."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 1:
        raise DimensionMismatch("norm_eval expects a single point")
    return float(norm_values(spec, a[None, :])[0])


def normalize(spec: NormSpec, x) -> np.ndarray:
    """Return x / ||x||; rejects the zero vector instead of emitting NaN."""
    a = np.asarray(x, dtype=np.float64)
    n = norm_eval(spec, a)
    if n == 0.0:
        raise ValidationError("cannot normalize the zero vector")
    return a / n


def _scaled_power_sum(flat: np.ndarray, p: float, w: np.ndarray | None) -> np.ndarray:
    # Factor out the row max before raising to the p-th power; immune to
    # overflow and underflow for any finite p >= 1.
    ax = np.abs(flat)
    m = ax.max(axis=1)
    out = np.zeros_like(m)
    nz = m > 0
    scaled = ax[nz] / m[nz, None]
    powered = scaled**p if w is None else w * scaled**p
    out[nz] = m[nz] * powered.sum(axis=1) ** (1.0 / p)
    return out


def _rescue_extremes(fast: np.ndarray, flat: np.ndarray, p: float, w) -> np.ndarray:
    # The squared fast path can underflow to 0 on tiny nonzero rows or
    # overflow to inf on huge ones; recompute those rows in scaled form.
    bad = ~np.isfinite(fast) | ((fast == 0.0) & (np.abs(flat).max(axis=1) > 0.0))
    if np.any(bad):
        fast = fast.copy()
        fast[bad] = _scaled_power_sum(flat[bad], p, w)
    return fast


def _lp_values(flat: np.ndarray, p: float) -> np.ndarray:
    if math.isinf(p):
        return np.abs(flat).max(axis=1)
    if p == 1.0:
        return np.abs(flat).sum(axis=1)
    if p == 2.0:
        with np.errstate(over="ignore"):
            fast = np.sqrt(np.einsum("ij,ij->i", flat, flat))
        return _rescue_extremes(fast, flat, p, None)
    return _scaled_power_sum(flat, p, None)


def _wlp_values(flat: np.ndarray, p: float, w: np.ndarray) -> np.ndarray:
    if math.isinf(p):
        return np.abs(flat).max(axis=1)
    if p == 1.0:
        return (w * np.abs(flat)).sum(axis=1)
    if p == 2.0:
        with np.errstate(over="ignore"):
            fast = np.sqrt((w * flat * flat).sum(axis=1))
        return _rescue_extremes(fast, flat, p, w)
    return _scaled_power_sum(flat, p, w)


def _gauge_values(flat: np.ndarray, facets: np.ndarray) -> np.ndarray:
    n, nf = flat.shape[0], facets.shape[0]
    if n * nf <= _POLY_CHUNK_BUDGET:
        return (flat @ facets.T).max(axis=1)
    out = np.empty(n)
    step = max(1, _POLY_CHUNK_BUDGET // nf)
    for i in range(0, n, step):
        out[i : i + step] = (flat[i : i + step] @ facets.T).max(axis=1)
    return out
