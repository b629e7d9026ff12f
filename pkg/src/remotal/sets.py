"""Finite point sets: sphere/ball samplers and set algebra.

A :class:`PointSet` is an immutable, ordered multiset of points in R^dim
carrying provenance (what it samples and at what resolution).  Downstream
metrics are max/min reductions over pairs, so duplicate points are allowed
and harmless.

Sampler recipes are fixed so output is reproducible bit for bit:

* ``angle-grid`` (dim = 2): directions (cos t_k, sin t_k), t_k = 2*pi*k/M,
  scaled to gauge 1 under the target norm.  For even M only the first half
  is computed and the second half is its exact negation, so every sample
  point has its antipode present bitwise.
* ``seeded`` (dim >= 2): directions are Gaussian vectors from a SplitMix64
  stream (constants below) via the Box-Muller transform, scaled to gauge 1.
  Even resolutions are mirrored the same way.

SplitMix64 recipe, applied to ``seed + i * GAMMA`` for i = 1, 2, ...:
GAMMA = 0x9E3779B97F4A7C15, then z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31.  Uniform doubles take
the top 53 bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .norms import NormSpec, norm_values

SPHERE_NORM_TOL = 1e-9

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


@dataclass(frozen=True)
class Scheme:
    kind: str  # "angle-grid" | "seeded"
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("angle-grid", "seeded"):
            raise ValidationError(f"scheme.kind: expected angle-grid|seeded, got {self.kind!r}")
        if self.kind == "seeded" and not isinstance(self.seed, int):
            raise ValidationError("scheme.seed: seeded sampling needs an integer seed")

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @staticmethod
    def from_json(obj: dict) -> "Scheme":
        if not isinstance(obj, dict):
            raise ValidationError("scheme: expected a JSON object")
        return Scheme(kind=obj.get("kind"), seed=obj.get("seed"))


@dataclass(frozen=True)
class Provenance:
    kind: str  # "free" | "sphere" | "ball" | "derived"
    norm: NormSpec | None = None
    resolution: int | None = None
    scheme: Scheme | None = None
    op: str | None = None
    parents: tuple["Provenance", ...] = ()

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.norm is not None:
            out["norm"] = self.norm.to_json()
        if self.resolution is not None:
            out["resolution"] = self.resolution
        if self.scheme is not None:
            out["scheme"] = self.scheme.to_json()
        if self.op is not None:
            out["op"] = self.op
        if self.parents:
            out["parents"] = [p.to_json() for p in self.parents]
        return out

    @staticmethod
    def from_json(obj: dict) -> "Provenance":
        if not isinstance(obj, dict):
            raise ValidationError("provenance: expected a JSON object")
        return Provenance(
            kind=obj.get("kind", "free"),
            norm=NormSpec.from_json(obj["norm"]) if "norm" in obj else None,
            resolution=obj.get("resolution"),
            scheme=Scheme.from_json(obj["scheme"]) if "scheme" in obj else None,
            op=obj.get("op"),
            parents=tuple(Provenance.from_json(p) for p in obj.get("parents", ())),
        )


FREE = Provenance("free")


@dataclass(frozen=True, eq=False)
class PointSet:
    """Non-empty ordered list of points, immutable after construction."""

    points: np.ndarray
    provenance: Provenance = FREE

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise ValidationError("points must form a non-empty (m, dim) array")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("points contain non-finite coordinates")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        prov = self.provenance
        if prov.kind in ("sphere", "ball") and prov.norm is not None:
            vals = norm_values(prov.norm, pts)
            if prov.kind == "sphere" and float(np.abs(vals - 1.0).max()) > SPHERE_NORM_TOL:
                raise ValidationError("sphere sample contains points off the unit sphere")
            if prov.kind == "ball" and float(vals.max()) > 1.0 + SPHERE_NORM_TOL:
                raise ValidationError("ball sample contains points outside the unit ball")

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "points": self.points.tolist(),
            "provenance": self.provenance.to_json(),
        }

    @staticmethod
    def from_json(obj: dict) -> "PointSet":
        if not isinstance(obj, dict) or "points" not in obj:
            raise ValidationError("point set: expected a JSON object with 'points'")
        prov = Provenance.from_json(obj["provenance"]) if "provenance" in obj else FREE
        ps = PointSet(np.asarray(obj["points"], dtype=np.float64), prov)
        if "dim" in obj and obj["dim"] != ps.dim:
            raise ValidationError("point set: dim field inconsistent with points")
        return ps

    def to_csv(self) -> str:
        lines = [",".join(f"{c:.17g}" for c in row) for row in self.points]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_csv(text: str) -> "PointSet":
        rows = [
            [float(c) for c in line.split(",")]
            for line in text.strip().splitlines()
            if line.strip()
        ]
        return PointSet(np.asarray(rows, dtype=np.float64))


# -- reproducible pseudo-random streams -------------------------------------


def _splitmix64(seed: int, count: int, offset: int = 0) -> np.ndarray:
    i = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + i * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))


def _gaussians(seed: int, count: int) -> np.ndarray:
    half = (count + 1) // 2
    z1 = _splitmix64(seed, half, offset=0)
    z2 = _splitmix64(seed, half, offset=half)
    u1 = ((z1 >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53  # (0, 1]
    u2 = (z2 >> np.uint64(11)).astype(np.float64) * 2.0**-53  # [0, 1)
    r = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * np.pi * u2
    return np.concatenate([r * np.cos(ang), r * np.sin(ang)])[:count]


def splitmix64_indices(seed: int, count: int, modulus: int) -> np.ndarray:
    """Distinct reproducible indices in [0, modulus); used to draw probes."""
    if count > modulus:
        raise ValidationError("cannot draw more distinct indices than the modulus")
    picked: list[int] = []
    seen: set[int] = set()
    offset = 0
    while len(picked) < count:
        chunk = _splitmix64(seed, count, offset=offset) % np.uint64(modulus)
        for v in chunk.tolist():
            if v not in seen:
                seen.add(v)
                picked.append(v)
                if len(picked) == count:
                    break
        offset += count
    return np.asarray(picked, dtype=np.intp)


# -- samplers ----------------------------------------------------------------


def default_scheme(dim: int) -> Scheme:
    return Scheme("angle-grid") if dim == 2 else Scheme("seeded", seed=0)


def _gauge_normalize(norm: NormSpec, raw: np.ndarray) -> np.ndarray:
    vals = norm_values(norm, raw)
    bad = vals < 1e-150
    if np.any(bad):
        raw = raw.copy()
        raw[bad] = 0.0
        raw[bad, 0] = 1.0
        vals = norm_values(norm, raw)
    return raw / vals[:, None]


def _mirrored(norm: NormSpec, raw_half: np.ndarray, raw_full) -> np.ndarray:
    # Even resolutions: normalize half, append exact negations so antipodes
    # are present bitwise.  Odd resolutions fall through to the full set.
    if raw_full is None:
        half = _gauge_normalize(norm, raw_half)
        return np.vstack([half, -half])
    return _gauge_normalize(norm, raw_full)


def sample_sphere(norm: NormSpec, resolution: int, scheme: Scheme | None = None) -> PointSet:
    """Deterministic sample of the unit sphere of ``norm``."""
    if resolution < 3:
        raise ValidationError(f"resolution must be >= 3, got {resolution}")
    if norm.dim < 2:
        raise ValidationError("sphere sampling needs dim >= 2")
    if scheme is None:
        scheme = default_scheme(norm.dim)
    if scheme.kind == "angle-grid":
        if norm.dim != 2:
            raise DimensionMismatch("angle-grid sampling requires dim = 2")
        if resolution % 2 == 0:
            k = np.arange(resolution // 2, dtype=np.float64)
            theta = (2.0 * np.pi / resolution) * k
            pts = _mirrored(norm, np.column_stack([np.cos(theta), np.sin(theta)]), None)
        else:
            k = np.arange(resolution, dtype=np.float64)
            theta = (2.0 * np.pi / resolution) * k
            pts = _mirrored(norm, None, np.column_stack([np.cos(theta), np.sin(theta)]))
    else:
        seed = scheme.seed or 0
        if resolution % 2 == 0:
            raw = _gaussians(seed, (resolution // 2) * norm.dim)
            pts = _mirrored(norm, raw.reshape(resolution // 2, norm.dim), None)
        else:
            raw = _gaussians(seed, resolution * norm.dim)
            pts = _mirrored(norm, None, raw.reshape(resolution, norm.dim))
    prov = Provenance("sphere", norm=norm, resolution=resolution, scheme=scheme)
    return PointSet(pts, prov)


def ball_shell_count(resolution: int, dim: int) -> int:
    """Radial subdivisions of a ball sample: m = round(resolution ** (1/dim))."""
    return max(1, round(resolution ** (1.0 / dim)))


def sample_ball(norm: NormSpec, resolution: int, scheme: Scheme | None = None) -> PointSet:
    """Ball sample: the origin, then sphere samples scaled to radii j/m.

    Layout is the origin first, then shells in increasing radius; the outer
    shell (j = m) is bitwise identical to ``sample_sphere`` at the same
    arguments, which keeps shell/sphere comparisons exact.
    """
    sphere = sample_sphere(norm, resolution, scheme)
    m = ball_shell_count(resolution, norm.dim)
    parts = [np.zeros((1, norm.dim))]
    parts.extend((j / m) * sphere.points for j in range(1, m + 1))
    prov = Provenance("ball", norm=norm, resolution=resolution, scheme=sphere.provenance.scheme)
    return PointSet(np.vstack(parts), prov)


def ball_outer_shell_slice(resolution: int, dim: int) -> slice:
    """Index range of the outer (radius 1) shell inside a ball sample."""
    m = ball_shell_count(resolution, dim)
    start = 1 + (m - 1) * resolution
    return slice(start, start + resolution)


# -- set algebra -------------------------------------------------------------


def translate_set(F: PointSet, z) -> PointSet:
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (F.dim,):
        raise DimensionMismatch("translation vector dimension mismatch")
    prov = Provenance("derived", op="translate", parents=(F.provenance,))
    return PointSet(F.points + z, prov)


def scale_set(F: PointSet, k: float) -> PointSet:
    if k == 0:
        raise ValidationError("scale factor must be nonzero")
    prov = Provenance("derived", op="scale", parents=(F.provenance,))
    return PointSet(F.points * float(k), prov)


def union_sets(F1: PointSet, F2: PointSet) -> PointSet:
    if F1.dim != F2.dim:
        raise DimensionMismatch("cannot union point sets of different dimensions")
    prov = Provenance("derived", op="union", parents=(F1.provenance, F2.provenance))
    return PointSet(np.vstack([F1.points, F2.points]), prov)


# -- discretization error -----------------------------------------------------


def sampling_error_estimate(sample: PointSet) -> float:
    """Covering-radius estimate of a sphere sample under its own norm.

    Angle-grid samples are ordered along the curve, so half the largest
    adjacent gap is an exact covering radius of the sampled polygon.  Seeded
    samples in dim >= 3 use the heuristic 2 * M ** (-1/(dim-1)).
    """
    prov = sample.provenance
    if prov.kind != "sphere" or prov.norm is None or prov.scheme is None:
        raise ValidationError("sampling error estimate needs sphere provenance")
    if prov.scheme.kind == "angle-grid":
        pts = sample.points
        order = np.argsort(np.arctan2(pts[:, 1], pts[:, 0]), kind="stable")
        ring = pts[order]
        gaps = norm_values(prov.norm, ring - np.roll(ring, -1, axis=0))
        return float(gaps.max()) / 2.0
    return 2.0 * float(len(sample)) ** (-1.0 / (sample.dim - 1))


def sampling_floor(sample: PointSet) -> float:
    """Smallest usable delta: 10x the estimated sampling error."""
    return 10.0 * sampling_error_estimate(sample)
