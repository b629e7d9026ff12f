"""Randomized checks of the algebraic identities behind the solvers.

Every check is deterministic given (seed, trials): trial t draws from a
generator seeded with (seed, t), so a failing case replays in isolation.
Passing cases record a compact replay recipe; failing cases additionally
carry the full inputs and both sides of the violated identity.

Probes for the containment checks are taken along rays through sample
points.  On a finite sample that keeps the farthest radius along the ray
exact (the antipodal sample point is present bitwise), which is what makes
the index-set containments hold at the 1e-12 threshold slack instead of
failing by a sampling-asymmetry margin.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import ValidationError
from .farthest import almost_farthest_set, farthest_radius, nearly_nearest_set
from .norms import NormSpec
from .sets import (
    PointSet,
    ball_outer_shell_slice,
    sample_ball,
    sample_sphere,
)
from .setmetrics import (
    diameter,
    generalized_diameter,
    hausdorff_distance,
    infimal_distance,
)

REL_TOL = 1e-12
HULL_TOL = 1e-3

_BALL_RESOLUTION = 64
_SPHERE_RESOLUTION = 128


@dataclass(frozen=True)
class PropertyCase:
    name: str
    seed: int
    trial: int
    instance: dict
    outcome: str  # "pass" | "fail"
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "trial": self.trial,
            "instance": self.instance,
            "outcome": self.outcome,
            "counterexample": self.counterexample,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def default_palette() -> list[NormSpec]:
    """Test norms: a rotund one, polyhedral and lp flavors of non-rotund
    ones, and a weighted instance, in R^2 and R^3."""
    square = NormSpec.polyhedral([(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)])
    cube = NormSpec.polyhedral(list(itertools.product((-1.0, 1.0), repeat=3)))
    return [
        NormSpec.lp(2, 2),
        NormSpec.lp(1, 2),
        NormSpec.lp(math.inf, 2),
        square,
        NormSpec.weighted_lp(1.5, (0.5, 2.0)),
        NormSpec.lp(2, 3),
        NormSpec.lp(1, 3),
        NormSpec.lp(math.inf, 3),
        cube,
    ]


def _rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, trial])


def _random_set(rng: np.random.Generator, dim: int, lo: int = 5, hi: int = 50) -> PointSet:
    m = int(rng.integers(lo, hi + 1))
    return PointSet(rng.uniform(-1.0, 1.0, size=(m, dim)))


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= REL_TOL * max(1.0, abs(a), abs(b))


def _subset(small: np.ndarray, large: np.ndarray) -> bool:
    return np.isin(small, large, assume_unique=True).all()


def _check_trials(name, seed, trials, palette, run_one):
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    palette = palette if palette is not None else default_palette()
    cases = []
    for t in range(trials):
        norm = palette[t % len(palette)]
        rng = _rng(seed, t)
        instance, failure = run_one(norm, rng)
        instance["norm"] = norm.to_json()
        cases.append(
            PropertyCase(
                name=name,
                seed=seed,
                trial=t,
                instance=instance,
                outcome="pass" if failure is None else "fail",
                counterexample=failure,
            )
        )
    return cases


# -- almost-farthest set algebra ------------------------------------------------


def check_qf_algebra(seed: int, trials: int, palette=None) -> list[PropertyCase]:
    """Radius and index-set identities under translation, scaling, and
    threshold growth."""

    def run_one(norm, rng):
        dim = norm.dim
        F = _random_set(rng, dim)
        x = rng.uniform(-2.0, 2.0, dim)
        z = rng.uniform(-2.0, 2.0, dim)
        alpha = float(rng.uniform(0.25, 3.0) * rng.choice([-1.0, 1.0]))
        diam = diameter(F, norm).value
        delta = float(rng.uniform(0.0, 2.0 * max(diam, 0.1)))
        delta_small = float(delta * rng.uniform(0.0, 1.0))
        instance = {"alpha": alpha, "delta": delta, "delta_small": delta_small,
                    "size": len(F)}

        r = farthest_radius(F, x, norm)
        r_single = farthest_radius(PointSet(x[None, :]), x, norm)
        if r_single != 0.0:
            return instance, {"clause": "radius zero iff singleton",
                              "r_of_point_set_x": r_single}
        if r <= 0.0:
            return instance, {"clause": "radius positive for non-degenerate set",
                              "r": r}

        r_shift = farthest_radius(PointSet(F.points + z), x + z, norm)
        if not _close(r_shift, r):
            return instance, {"clause": "translation invariance of radius",
                              "lhs": r_shift, "rhs": r}

        r_scaled = farthest_radius(PointSet(F.points * alpha), alpha * x, norm)
        if not _close(r_scaled, abs(alpha) * r):
            return instance, {"clause": "scaling of radius",
                              "lhs": r_scaled, "rhs": abs(alpha) * r}

        q_small = almost_farthest_set(F, x, norm, delta_small).indices
        q_big = almost_farthest_set(F, x, norm, delta).indices
        if not _subset(q_small, q_big):
            return instance, {"clause": "threshold monotonicity",
                              "small": q_small.tolist(), "big": q_big.tolist()}

        q_shift = almost_farthest_set(PointSet(F.points + z), x + z, norm, delta).indices
        if not np.array_equal(q_shift, q_big):
            return instance, {"clause": "translation equivariance of indices",
                              "shifted": q_shift.tolist(), "base": q_big.tolist()}

        q_scaled = almost_farthest_set(
            PointSet(F.points * alpha), alpha * x, norm, delta
        ).indices
        q_ref = almost_farthest_set(F, x, norm, delta / abs(alpha)).indices
        if not np.array_equal(q_scaled, q_ref):
            return instance, {"clause": "scaling equivariance of indices",
                              "scaled": q_scaled.tolist(), "base": q_ref.tolist()}
        return instance, None

    return _check_trials("qf_algebra", seed, trials, palette, run_one)


# -- union lemma -----------------------------------------------------------------


def check_union_lemma(seed: int, trials: int, palette=None) -> list[PropertyCase]:
    """Almost-farthest sets of a union: dominated case below the radius gap,
    and the equal-radius union formula."""

    def run_one(norm, rng):
        dim = norm.dim
        F1 = _random_set(rng, dim)
        F2 = _random_set(rng, dim)
        x = rng.uniform(-2.0, 2.0, dim)
        r1 = farthest_radius(F1, x, norm)
        r2 = farthest_radius(F2, x, norm)
        u = float(rng.uniform(0.0, 1.0))
        eta = float(rng.uniform(0.0, 2.0 * max(r1, 0.1)))
        instance = {"r1": r1, "r2": r2, "u": u, "eta": eta,
                    "sizes": [len(F1), len(F2)]}
        n1 = len(F1)

        gap = abs(r1 - r2)
        if gap > 1e-9:
            delta = u * gap
            union = PointSet(np.vstack([F1.points, F2.points]))
            q_union = almost_farthest_set(union, x, norm, delta).indices
            if r1 > r2:
                expect = almost_farthest_set(F1, x, norm, delta).indices
            else:
                expect = almost_farthest_set(F2, x, norm, delta).indices + n1
            if not np.array_equal(q_union, expect):
                return instance, {"clause": "dominated union",
                                  "union": q_union.tolist(),
                                  "expected": expect.tolist()}

        if r2 > 1e-12:
            # Rescale F2 about x to force equal radii, then the union
            # almost-farthest set splits as the union of the parts.
            F2_eq = PointSet(x + (F2.points - x) * (r1 / r2))
            union = PointSet(np.vstack([F1.points, F2_eq.points]))
            q_union = almost_farthest_set(union, x, norm, eta).indices
            q1 = almost_farthest_set(F1, x, norm, eta).indices
            q2 = almost_farthest_set(F2_eq, x, norm, eta).indices + n1
            expect = np.concatenate([q1, q2])
            if not np.array_equal(q_union, expect):
                return instance, {"clause": "equal-radius union formula",
                                  "union": q_union.tolist(),
                                  "expected": expect.tolist()}
        return instance, None

    return _check_trials("union_lemma", seed, trials, palette, run_one)


# -- containment along rays --------------------------------------------------------


@lru_cache(maxsize=32)
def _cached_ball(norm: NormSpec) -> PointSet:
    return sample_ball(norm, _BALL_RESOLUTION)


@lru_cache(maxsize=32)
def _cached_sphere(norm: NormSpec, resolution: int = _SPHERE_RESOLUTION) -> PointSet:
    return sample_sphere(norm, resolution)


def check_containment_cont(seed: int, trials: int, palette=None) -> list[PropertyCase]:
    """Nested almost-farthest sets along a ray, on ball and sphere samples."""

    def run_one(norm, rng):
        ball = _cached_ball(norm)
        sphere = _cached_sphere(norm)
        shell = ball_outer_shell_slice(_BALL_RESOLUTION, norm.dim)
        t1 = float(rng.uniform(0.25, 5.0))
        t2 = float(t1 + rng.uniform(0.0, 5.0 - t1))
        delta = float(rng.uniform(0.0, 0.5))
        probe_ball = ball.points[shell][int(rng.integers(0, _BALL_RESOLUTION))]
        probe_sphere = sphere.points[int(rng.integers(0, len(sphere)))]
        instance = {"t1": t1, "t2": t2, "delta": delta,
                    "probe_ball": probe_ball.tolist(),
                    "probe_sphere": probe_sphere.tolist()}

        for label, sample, probe in (
            ("ball", ball, probe_ball),
            ("sphere", sphere, probe_sphere),
        ):
            q_t2 = almost_farthest_set(sample, t2 * probe, norm, delta).indices
            q_t1 = almost_farthest_set(sample, t1 * probe, norm, delta).indices
            q_t2_wide = almost_farthest_set(
                sample, t2 * probe, norm, (t2 / t1) * delta
            ).indices
            if not _subset(q_t2, q_t1):
                return instance, {"clause": f"{label}: outer probe set nested in inner",
                                  "outer": q_t2.tolist(), "inner": q_t1.tolist()}
            if not _subset(q_t1, q_t2_wide):
                return instance, {"clause": f"{label}: inner set nested in widened outer",
                                  "inner": q_t1.tolist(), "widened": q_t2_wide.tolist()}
        return instance, None

    return _check_trials("containment_cont", seed, trials, palette, run_one)


# -- nearly-nearest versus almost-farthest -------------------------------------------


def check_farclose(seed: int, trials: int, palette=None) -> list[PropertyCase]:
    """Nearly-nearest sets sit inside the antipodal almost-farthest sets;
    at delta = 0 the ball's farthest points are exactly the shell's."""

    def run_one(norm, rng):
        ball = _cached_ball(norm)
        sphere = _cached_sphere(norm)
        shell = ball_outer_shell_slice(_BALL_RESOLUTION, norm.dim)
        shell_start = shell.start
        p_ball = ball.points[shell][int(rng.integers(0, _BALL_RESOLUTION))]
        p_sphere = sphere.points[int(rng.integers(0, len(sphere)))]
        t_out = float(rng.uniform(1.0, 3.0))
        t_any = float(rng.uniform(0.1, 3.0))
        delta = float(rng.uniform(0.0, 2.0))
        instance = {"t_out": t_out, "t_any": t_any, "delta": delta}

        x = t_out * p_ball
        near = nearly_nearest_set(ball, x, norm, delta).indices
        far = almost_farthest_set(ball, -x, norm, delta).indices
        if not _subset(near, far):
            return instance, {"clause": "ball: near set inside antipodal far set",
                              "near": near.tolist(), "far": far.tolist()}

        xs = t_any * p_sphere
        near_s = nearly_nearest_set(sphere, xs, norm, delta).indices
        far_s = almost_farthest_set(sphere, -xs, norm, delta).indices
        if not _subset(near_s, far_s):
            return instance, {"clause": "sphere: near set inside antipodal far set",
                              "near": near_s.tolist(), "far": far_s.tolist()}

        # delta = 0: ball and shell farthest sets index the same points.
        y = rng.uniform(0.1, 3.0) * rng.standard_normal(norm.dim)
        if not np.any(y):
            y = p_ball
        q_ball = almost_farthest_set(ball, y, norm, 0.0)
        q_shell = almost_farthest_set(
            PointSet(ball.points[shell]), y, norm, 0.0
        )
        on_shell = q_ball.indices - shell_start
        if np.any(q_ball.indices < shell_start):
            return instance, {"clause": "ball farthest points lie on the shell",
                              "indices": q_ball.indices.tolist(),
                              "shell_start": shell_start}
        if not np.array_equal(np.sort(on_shell), q_shell.indices):
            return instance, {"clause": "ball and shell farthest sets agree",
                              "ball": on_shell.tolist(),
                              "shell": q_shell.indices.tolist()}
        if not _close(q_ball.radius, q_shell.radius):
            return instance, {"clause": "ball and shell radii agree",
                              "ball": q_ball.radius, "shell": q_shell.radius}
        return instance, None

    return _check_trials("farclose", seed, trials, palette, run_one)


# -- generalized diameter axioms -------------------------------------------------------


def _hull_boundary_sample(points: np.ndarray, per_edge: int = 24) -> np.ndarray:
    """Dense sample of the convex hull boundary (2D), endpoints included."""
    try:
        hull = ConvexHull(points)
        verts = points[hull.vertices]
    except QhullError:
        return points
    nxt = np.roll(verts, -1, axis=0)
    ts = np.linspace(0.0, 1.0, per_edge, endpoint=False)
    segs = verts[:, None, :] * (1.0 - ts[None, :, None]) + nxt[:, None, :] * ts[None, :, None]
    return segs.reshape(-1, points.shape[1])


def check_gd_axioms(seed: int, trials: int, palette=None) -> list[PropertyCase]:
    """Generalized diameter axioms, hull invariance (2D), the union-diameter
    formula, and the d <= H <= r sandwich tying the four metrics together."""

    def run_one(norm, rng):
        dim = norm.dim
        A = _random_set(rng, dim)
        B = _random_set(rng, dim)
        C = _random_set(rng, dim)
        x = rng.uniform(-2.0, 2.0, dim)
        k = float(rng.uniform(0.25, 3.0) * rng.choice([-1.0, 1.0]))
        extra = _random_set(rng, dim, lo=3, hi=10)
        instance = {"k": k, "sizes": [len(A), len(B), len(C)]}

        z = rng.uniform(-1.0, 1.0, dim)
        r_point = generalized_diameter(PointSet(z[None, :]), PointSet(z[None, :]), norm).value
        if r_point != 0.0:
            return instance, {"clause": "zero iff equal singletons", "r": r_point}

        r_ab = generalized_diameter(A, B, norm).value
        if r_ab <= 0.0:
            return instance, {"clause": "positive on distinct sets", "r": r_ab}

        r_shift = generalized_diameter(
            PointSet(A.points + x), PointSet(B.points + x), norm
        ).value
        if not _close(r_shift, r_ab):
            return instance, {"clause": "translation invariance",
                              "lhs": r_shift, "rhs": r_ab}

        r_scaled = generalized_diameter(
            PointSet(A.points * k), PointSet(B.points * k), norm
        ).value
        if not _close(r_scaled, abs(k) * r_ab):
            return instance, {"clause": "homogeneity",
                              "lhs": r_scaled, "rhs": abs(k) * r_ab}

        r_ba = generalized_diameter(B, A, norm).value
        if not _close(r_ba, r_ab):
            return instance, {"clause": "symmetry", "lhs": r_ba, "rhs": r_ab}

        r_ac = generalized_diameter(A, C, norm).value
        r_cb = generalized_diameter(C, B, norm).value
        if r_ab > r_ac + r_cb + REL_TOL * max(1.0, r_ab):
            return instance, {"clause": "triangle inequality",
                              "r_ab": r_ab, "r_ac": r_ac, "r_cb": r_cb}

        bigger = PointSet(np.vstack([A.points, extra.points]))
        if r_ab > generalized_diameter(bigger, B, norm).value:
            return instance, {"clause": "monotonicity under supersets"}

        if dim == 2:
            r_hulls = generalized_diameter(
                PointSet(_hull_boundary_sample(A.points)),
                PointSet(_hull_boundary_sample(B.points)),
                norm,
            ).value
            if abs(r_hulls - r_ab) > HULL_TOL * max(1.0, r_ab):
                return instance, {"clause": "hull invariance",
                                  "hull": r_hulls, "direct": r_ab}

        diam_a = diameter(A, norm).value
        r_sandwich = generalized_diameter(A, bigger, norm).value
        diam_sup = diameter(bigger, norm).value
        if not (diam_a <= r_sandwich <= diam_sup):
            return instance, {"clause": "subset sandwich",
                              "diam_A": diam_a, "r": r_sandwich, "diam_sup": diam_sup}

        union = PointSet(np.vstack([A.points, B.points]))
        diam_union = diameter(union, norm).value
        expect = max(diam_a, diameter(B, norm).value, r_ab)
        if not _close(diam_union, expect):
            return instance, {"clause": "union diameter formula",
                              "lhs": diam_union, "rhs": expect}

        d_ab = infimal_distance(A, B, norm).value
        h_ab = hausdorff_distance(A, B, norm).value
        if not (d_ab <= h_ab + REL_TOL and h_ab <= r_ab + REL_TOL):
            return instance, {"clause": "metric sandwich d <= H <= r",
                              "d": d_ab, "H": h_ab, "r": r_ab}
        return instance, None

    return _check_trials("gd_axioms", seed, trials, palette, run_one)


ALL_CHECKS = {
    "qf_algebra": check_qf_algebra,
    "union_lemma": check_union_lemma,
    "containment_cont": check_containment_cont,
    "farclose": check_farclose,
    "gd_axioms": check_gd_axioms,
}
