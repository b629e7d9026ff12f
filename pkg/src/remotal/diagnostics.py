"""Rotundity diagnostics via decay profiles of almost-farthest sets.

Each profile walks a strictly decreasing delta schedule on a sphere sample
and records, per delta, the farthest radius, the diameter of the
almost-farthest set, its Hausdorff distance to the expected limit point
(the antipode of the normalized probe, snapped to the nearest sample
point), and the infimal distance to the antipodal almost-farthest set.
Uniform profiles take the max of each column over seeded probes drawn from
the sample itself, so every probe's antipode is representable.

Verdicts are "consistent with" statements at fixed thresholds, never
proofs: finite sampling cannot certify the universally quantified
definitions, and schedules are rejected below the sampling floor (10x the
discretization error estimate), where thresholded sets stop being
meaningful.  The antipodal-distance column is recorded for every profile
but is never used as positive evidence of a rotundity property; its limit
being 2 is a necessary condition only.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SamplingFloorError, ValidationError
from .farthest import farthest_mask, nearest_mask
from .norms import NormSpec, norm_values, normalize
from .sets import (
    PointSet,
    Scheme,
    default_scheme,
    sample_sphere,
    sampling_floor,
    splitmix64_indices,
)
from .setmetrics import pair_extreme_value

CSV_HEADER = "delta,radius,q_diam,h_to_limit,d_antipodal,gd_gap"
DISCLAIMER = "finite-sample diagnostic, not a proof"

# Monotonicity slack on the q_diam column (nested index sets make the
# column exactly monotone; the slack covers column-wise aggregation noise).
_DIAM_MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class ProfileRow:
    delta: float
    radius: float
    q_diam: float
    h_to_limit: float
    d_antipodal: float
    gd_gap: float | None = None


@dataclass(frozen=True)
class DecayProfile:
    kind: str  # "pointwise" | "uniform" | "gd" | "chebyshev"
    norm: NormSpec
    resolution: int
    rows: tuple[ProfileRow, ...]
    anchor: tuple[float, ...] | None = None
    anchor2: tuple[float, ...] | None = None
    probes: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        if not self.rows:
            raise ValidationError("decay profile must have at least one row")
        deltas = [r.delta for r in self.rows]
        if any(d2 >= d1 for d1, d2 in zip(deltas, deltas[1:])):
            raise ValidationError("profile deltas must be strictly decreasing")
        diams = [r.q_diam for r in self.rows]
        if any(d2 > d1 + _DIAM_MONOTONE_SLACK for d1, d2 in zip(diams, diams[1:])):
            raise ValidationError("q_diam column is not nonincreasing along the schedule")

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for r in self.rows:
            gd = "" if r.gd_gap is None else f"{r.gd_gap:.17g}"
            lines.append(
                f"{r.delta:.17g},{r.radius:.17g},{r.q_diam:.17g},"
                f"{r.h_to_limit:.17g},{r.d_antipodal:.17g},{gd}"
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "norm": self.norm.to_json(),
            "resolution": self.resolution,
            "anchor": list(self.anchor) if self.anchor is not None else None,
            "anchor2": list(self.anchor2) if self.anchor2 is not None else None,
            "probes": [list(p) for p in self.probes] if self.probes is not None else None,
            "rows": [
                {
                    "delta": r.delta,
                    "radius": r.radius,
                    "q_diam": r.q_diam,
                    "h_to_limit": r.h_to_limit,
                    "d_antipodal": r.d_antipodal,
                    "gd_gap": r.gd_gap,
                }
                for r in self.rows
            ],
        }


@dataclass(frozen=True)
class Verdict:
    property: str  # RotundConsistent | LURConsistentAt | URConsistent |
    #                NotRotund | NotLUR | NotUR | Indeterminate
    evidence: tuple[dict, ...]
    anchor: tuple[float, ...] | None = None
    disclaimer: str = DISCLAIMER

    def __post_init__(self):
        if not self.evidence:
            raise ValidationError("a verdict must carry at least one evidence row")

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "anchor": list(self.anchor) if self.anchor is not None else None,
            "evidence": list(self.evidence),
            "disclaimer": self.disclaimer,
        }


@dataclass(frozen=True)
class Thresholds:
    lur_eps: float = 1e-2
    tol: float = 1e-2
    stall_factor: float = 10.0


# -- shared plumbing ----------------------------------------------------------


@lru_cache(maxsize=16)
def _sphere_cached(norm: NormSpec, resolution: int, scheme: Scheme) -> PointSet:
    return sample_sphere(norm, resolution, scheme)


def get_sphere(norm: NormSpec, resolution: int, scheme: Scheme | None = None) -> PointSet:
    if scheme is None:
        scheme = default_scheme(norm.dim)
    return _sphere_cached(norm, resolution, scheme)


def worker_count() -> int:
    raw = os.environ.get("REMOTAL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_ordered(fn, items):
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _validate_schedule(deltas, floor: float):
    deltas = [float(d) for d in deltas]
    if not deltas:
        raise ValidationError("delta schedule must be non-empty")
    if any(d <= 0 for d in deltas):
        raise ValidationError("delta schedule entries must be positive")
    if any(d2 >= d1 for d1, d2 in zip(deltas, deltas[1:])):
        raise ValidationError("delta schedule must be strictly decreasing")
    if min(deltas) < floor:
        raise SamplingFloorError(
            f"schedule reaches {min(deltas):g}, below the sampling floor {floor:g}; "
            "raise the resolution or shorten the schedule"
        )
    return deltas


def _nonzero_probe(norm: NormSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (norm.dim,):
        raise ValidationError(f"probe must be a point in R^{norm.dim}")
    if not np.any(x):
        raise ValidationError("probe must be nonzero")
    return x


def snap_to_sample(target: np.ndarray, sample: PointSet, norm: NormSpec) -> int:
    """Index of the sample point nearest to target (lowest index on ties).

    Snapping the candidate limit point keeps Hausdorff comparisons free of
    the sampler's own discretization bias.
    """
    d = norm_values(norm, target[None, :] - sample.points)
    return int(np.argmin(d))


class _ProbeData:
    """Distance fields and thresholds for one probe over a fixed sample."""

    def __init__(self, sample: PointSet, norm: NormSpec, x: np.ndarray):
        pts = sample.points
        self.pts = pts
        self.norm = norm
        self.x = x
        self.d_x = norm_values(norm, x[None, :] - pts)
        self.d_neg = norm_values(norm, -x[None, :] - pts)
        self.r_x = float(self.d_x.max())
        self.r_neg = float(self.d_neg.max())
        limit = -normalize(norm, x)
        self.limit_idx = snap_to_sample(limit, sample, norm)

    def q_indices(self, delta: float) -> np.ndarray:
        return np.flatnonzero(farthest_mask(self.d_x, self.r_x, delta))

    def q_indices_neg(self, delta: float) -> np.ndarray:
        return np.flatnonzero(farthest_mask(self.d_neg, self.r_neg, delta))

    def row(self, delta: float) -> ProfileRow:
        q = self.pts[self.q_indices(delta)]
        q_neg = self.pts[self.q_indices_neg(delta)]
        diam = pair_extreme_value(q, q, self.norm, "max")
        limit_pt = self.pts[self.limit_idx]
        h = float(norm_values(self.norm, q - limit_pt[None, :]).max())
        d_ant = pair_extreme_value(q, q_neg, self.norm, "min")
        return ProfileRow(delta, self.r_x, diam, h, d_ant)


# -- profile operations --------------------------------------------------------


def q_decay_profile(
    norm: NormSpec,
    x,
    delta_schedule,
    resolution: int,
    scheme: Scheme | None = None,
) -> DecayProfile:
    """Decay profile of the almost-farthest sets of a sphere sample at x."""
    x = _nonzero_probe(norm, x)
    sample = get_sphere(norm, resolution, scheme)
    deltas = _validate_schedule(delta_schedule, sampling_floor(sample))
    probe = _ProbeData(sample, norm, x)
    rows = _map_ordered(probe.row, deltas)
    return DecayProfile(
        kind="pointwise",
        norm=norm,
        resolution=resolution,
        rows=tuple(rows),
        anchor=tuple(x.tolist()),
    )


def uniform_decay_profile(
    norm: NormSpec,
    probe_count: int,
    delta_schedule,
    resolution: int,
    seed: int,
    scheme: Scheme | None = None,
) -> DecayProfile:
    """Per delta, the worst (max) of each column over seeded sphere probes."""
    if probe_count < 1:
        raise ValidationError("probe_count must be >= 1")
    if probe_count != 1 and probe_count < 8:
        raise ValidationError("uniform profiles need probe_count >= 8 (or exactly 1)")
    sample = get_sphere(norm, resolution, scheme)
    deltas = _validate_schedule(delta_schedule, sampling_floor(sample))
    idx = splitmix64_indices(seed, probe_count, len(sample))
    probes = [_ProbeData(sample, norm, sample.points[i]) for i in idx]

    def worst_row(delta: float) -> ProfileRow:
        rows = [p.row(delta) for p in probes]
        return ProfileRow(
            delta=delta,
            radius=max(r.radius for r in rows),
            q_diam=max(r.q_diam for r in rows),
            h_to_limit=max(r.h_to_limit for r in rows),
            d_antipodal=max(r.d_antipodal for r in rows),
        )

    rows = _map_ordered(worst_row, deltas)
    return DecayProfile(
        kind="uniform",
        norm=norm,
        resolution=resolution,
        rows=tuple(rows),
        probes=tuple(tuple(sample.points[i].tolist()) for i in idx),
    )


def unique_remotality_check(
    norm: NormSpec,
    x,
    resolution: int,
    tol: float,
    scheme: Scheme | None = None,
) -> Verdict:
    """Single-delta check at the sampling floor: is the farthest set a point?"""
    x = _nonzero_probe(norm, x)
    sample = get_sphere(norm, resolution, scheme)
    delta0 = sampling_floor(sample)
    probe = _ProbeData(sample, norm, x)
    row = probe.row(delta0)
    evidence = (
        {
            "delta0": delta0,
            "radius": row.radius,
            "q_diam": row.q_diam,
            "h_to_limit": row.h_to_limit,
            "tol": tol,
        },
    )
    anchor = tuple(x.tolist())
    if row.q_diam <= tol and row.h_to_limit <= tol:
        return Verdict("RotundConsistent", evidence, anchor=anchor)
    if row.q_diam > 10.0 * tol:
        return Verdict("NotRotund", evidence, anchor=anchor)
    return Verdict("Indeterminate", evidence, anchor=anchor)


def gd_identity_profile(
    norm: NormSpec,
    x1,
    x2,
    delta_schedule,
    resolution: int,
    scheme: Scheme | None = None,
) -> DecayProfile:
    """Profile of r(Q(x1, d), Q(x2, d)) against ||x1^ - x2^||.

    The gd_gap column is the generalized diameter minus the distance of the
    normalized anchors; it is never meaningfully negative because both
    almost-farthest sets contain a point within sampling error of the
    relevant antipode.
    """
    x1 = _nonzero_probe(norm, x1)
    x2 = _nonzero_probe(norm, x2)
    sample = get_sphere(norm, resolution, scheme)
    deltas = _validate_schedule(delta_schedule, sampling_floor(sample))
    p1 = _ProbeData(sample, norm, x1)
    p2 = _ProbeData(sample, norm, x2)
    anchor_gap = float(
        norm_values(norm, (normalize(norm, x1) - normalize(norm, x2))[None, :])[0]
    )

    def row(delta: float) -> ProfileRow:
        base = p1.row(delta)
        q1 = p1.pts[p1.q_indices(delta)]
        q2 = p2.pts[p2.q_indices(delta)]
        gd = pair_extreme_value(q1, q2, norm, "max")
        return ProfileRow(
            delta=delta,
            radius=base.radius,
            q_diam=base.q_diam,
            h_to_limit=base.h_to_limit,
            d_antipodal=base.d_antipodal,
            gd_gap=gd - anchor_gap,
        )

    rows = _map_ordered(row, deltas)
    return DecayProfile(
        kind="gd",
        norm=norm,
        resolution=resolution,
        rows=tuple(rows),
        anchor=tuple(x1.tolist()),
        anchor2=tuple(x2.tolist()),
    )


def gd_normalization_bound_check(
    norm: NormSpec,
    x,
    x_prime,
    delta: float,
    resolution: int,
    scheme: Scheme | None = None,
) -> dict:
    """Check r(Q(x,d), Q(x',d)) <= r(Q(x^,l*d), Q(x'^,l*d)) + 1e-9 on one
    sample, with l = max(1, 1/||x||, 1/||x'||)."""
    x = _nonzero_probe(norm, x)
    xp = _nonzero_probe(norm, x_prime)
    if delta <= 0:
        raise ValidationError("delta must be positive")
    sample = get_sphere(norm, resolution, scheme)
    nx = float(norm_values(norm, x[None, :])[0])
    nxp = float(norm_values(norm, xp[None, :])[0])
    scale = max(1.0, 1.0 / nx, 1.0 / nxp)

    def q_points(probe, d):
        pd = _ProbeData(sample, norm, probe)
        return pd.pts[pd.q_indices(d)]

    lhs = pair_extreme_value(q_points(x, delta), q_points(xp, delta), norm, "max")
    rhs = pair_extreme_value(
        q_points(normalize(norm, x), scale * delta),
        q_points(normalize(norm, xp), scale * delta),
        norm,
        "max",
    )
    tolerance = 1e-9
    return {
        "holds": bool(lhs <= rhs + tolerance),
        "lhs": lhs,
        "rhs": rhs,
        "l": scale,
        "delta": delta,
        "tolerance": tolerance,
    }


def chebyshev_profile(
    norm: NormSpec,
    x,
    delta_schedule,
    resolution: int,
    scheme: Scheme | None = None,
) -> DecayProfile:
    """Mirror of the decay profile built on nearly-nearest sets.

    Columns map to: radius = infimal distance to the sample, q_diam = diam
    of the nearly-nearest set, h_to_limit = distance to the snapped
    normalized probe, d_antipodal = infimal distance to the antipodal
    nearly-nearest set.
    """
    x = _nonzero_probe(norm, x)
    sample = get_sphere(norm, resolution, scheme)
    deltas = _validate_schedule(delta_schedule, sampling_floor(sample))
    pts = sample.points
    d_x = norm_values(norm, x[None, :] - pts)
    d_neg = norm_values(norm, -x[None, :] - pts)
    r_x = float(d_x.min())
    r_neg = float(d_neg.min())
    limit_pt = pts[snap_to_sample(normalize(norm, x), sample, norm)]

    def row(delta: float) -> ProfileRow:
        p = pts[np.flatnonzero(nearest_mask(d_x, r_x, delta))]
        p_neg = pts[np.flatnonzero(nearest_mask(d_neg, r_neg, delta))]
        diam = pair_extreme_value(p, p, norm, "max")
        h = float(norm_values(norm, p - limit_pt[None, :]).max())
        d_ant = pair_extreme_value(p, p_neg, norm, "min")
        return ProfileRow(delta, r_x, diam, h, d_ant)

    rows = _map_ordered(row, deltas)
    return DecayProfile(
        kind="chebyshev",
        norm=norm,
        resolution=resolution,
        rows=tuple(rows),
        anchor=tuple(x.tolist()),
    )


# -- classification -------------------------------------------------------------


def classify(profiles, thresholds: Thresholds = Thresholds()) -> list[Verdict]:
    """Turn a family of profiles over one norm into consistency verdicts.

    Pointwise profiles drive the LUR verdicts (final q_diam against
    lur_eps) and, in aggregate, the rotundity verdict (final q_diam and
    h_to_limit against tol).  Uniform profiles drive the UR verdicts the
    same way.  A profile stalling above stall_factor times the threshold
    yields the corresponding Not* verdict; between the two thresholds the
    verdict is Indeterminate.  gd and chebyshev profiles are accepted as
    evidence but produce no verdict of their own.
    """
    profiles = list(profiles)
    if not profiles:
        raise ValidationError("classify needs at least one profile")
    norm_json = profiles[0].norm.to_json()
    if any(p.norm.to_json() != norm_json for p in profiles):
        raise ValidationError("classify requires profiles sharing a single norm")

    eps = thresholds.lur_eps
    tol = thresholds.tol
    stall = thresholds.stall_factor
    verdicts: list[Verdict] = []

    pointwise = [p for p in profiles if p.kind == "pointwise"]
    for p in pointwise:
        last = p.rows[-1]
        ev = ({"delta": last.delta, "q_diam": last.q_diam, "lur_eps": eps},)
        if last.q_diam <= eps:
            verdicts.append(Verdict("LURConsistentAt", ev, anchor=p.anchor))
        elif last.q_diam > stall * eps:
            verdicts.append(Verdict("NotLUR", ev, anchor=p.anchor))
        else:
            verdicts.append(Verdict("Indeterminate", ev, anchor=p.anchor))

    if pointwise:
        finals = [p.rows[-1] for p in pointwise]
        ev = tuple(
            {
                "anchor": list(p.anchor),
                "delta": r.delta,
                "q_diam": r.q_diam,
                "h_to_limit": r.h_to_limit,
                "tol": tol,
            }
            for p, r in zip(pointwise, finals)
        )
        if all(r.q_diam <= tol and r.h_to_limit <= tol for r in finals):
            verdicts.append(Verdict("RotundConsistent", ev))
        elif any(r.q_diam > stall * tol for r in finals):
            verdicts.append(Verdict("NotRotund", ev))
        else:
            verdicts.append(Verdict("Indeterminate", ev))

    for p in profiles:
        if p.kind != "uniform":
            continue
        last = p.rows[-1]
        ev = ({"delta": last.delta, "q_diam": last.q_diam, "lur_eps": eps},)
        if last.q_diam <= eps:
            verdicts.append(Verdict("URConsistent", ev))
        elif last.q_diam > stall * eps:
            verdicts.append(Verdict("NotUR", ev))
        else:
            verdicts.append(Verdict("Indeterminate", ev))

    return verdicts


def one_over_n_schedule(n_max: int, floor: float = 0.0) -> list[float]:
    """The schedule 1, 1/2, ..., 1/n_max; rejected if it dips below floor."""
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    deltas = [1.0 / n for n in range(1, n_max + 1)]
    if floor > 0 and deltas[-1] < floor:
        raise SamplingFloorError(
            f"1/n schedule reaches {deltas[-1]:g}, below the sampling floor {floor:g}"
        )
    return deltas
