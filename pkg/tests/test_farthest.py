import math

import numpy as np
import pytest

from remotal.errors import ValidationError
from remotal.farthest import (
    almost_farthest_set,
    distances,
    farthest_radius,
    maximizing_sequence,
    nearest_radius,
    nearly_nearest_set,
    polyhedral_farthest_radius,
)
from remotal.norms import NormSpec, norm_values
from remotal.sets import PointSet, Scheme, sample_ball, sample_sphere


def test_radius_of_singleton_at_itself(l2):
    x = np.array([0.3, -0.7])
    assert farthest_radius(PointSet(x[None, :]), x, l2) == 0.0


def test_radius_on_l1_sphere_from_negative_axis_point(l1):
    # exhaustive oracle on the sample, plus the exact value 2 attained on
    # the whole face with nonnegative first coordinate
    s = sample_sphere(l1, 400)
    x = np.array([-1.0, 0.0])
    oracle = max(float(norm_values(l1, (x - p)[None, :])[0]) for p in s.points)
    got = farthest_radius(s, x, l1)
    assert got == oracle
    assert got == pytest.approx(2.0, abs=1e-12)


def test_radius_two_points_from_origin(l2):
    F = PointSet(np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert farthest_radius(F, np.zeros(2), l2) == 1.0


def test_almost_farthest_edge_on_max_norm(linf):
    s = sample_sphere(linf, 4000)
    res = almost_farthest_set(s, np.array([1.0, 0.0]), linf, 0.0)
    assert res.radius == 2.0
    members = s.points[res.indices]
    assert np.all(members[:, 0] <= -1.0 + 1e-9)
    # every sampled point of the far edge is present
    edge = np.flatnonzero(s.points[:, 0] <= -1.0 + 1e-12)
    assert np.array_equal(res.indices, edge)


def test_almost_farthest_vacuous_delta(l2):
    s = sample_sphere(l2, 64)
    x = np.array([0.25, 0.0])
    r = farthest_radius(s, x, l2)
    res = almost_farthest_set(s, x, l2, r + 2.5)
    assert np.array_equal(res.indices, np.arange(len(s)))


def test_almost_farthest_unique_point_on_circle(l2):
    s = sample_sphere(l2, 4000)
    res = almost_farthest_set(s, np.array([1.0, 0.0]), l2, 0.0)
    assert len(res.indices) == 1
    assert np.allclose(s.points[res.indices[0]], [-1.0, 0.0], atol=1e-9)


def test_negative_delta_rejected(l2):
    s = sample_sphere(l2, 16)
    with pytest.raises(ValidationError):
        almost_farthest_set(s, np.array([1.0, 0.0]), l2, -0.1)


def test_zero_probe_against_sphere_sample(l2):
    s = sample_sphere(l2, 64)
    res = almost_farthest_set(s, np.zeros(2), l2, 0.0)
    assert res.radius == pytest.approx(1.0, rel=1e-12)
    assert len(res.indices) == len(s)


def test_nearest_mirror(l2):
    s = sample_sphere(l2, 360)
    p = s.points[17]
    res = nearly_nearest_set(s, 2.0 * p, l2, 0.0)
    assert res.radius == pytest.approx(1.0, rel=1e-12)
    assert 17 in res.indices
    assert nearest_radius(s, 2.0 * p, l2) == res.radius


def test_nearest_arc_from_interior_probe(l2):
    s = sample_sphere(l2, 3600)
    res = nearly_nearest_set(s, np.array([0.5, 0.0]), l2, 0.01)
    members = s.points[res.indices]
    # exhaustive scan oracle: an arc around (1, 0)
    d = norm_values(l2, np.array([0.5, 0.0]) - s.points)
    oracle = np.flatnonzero(d <= d.min() + 0.01 + 1e-12)
    assert np.array_equal(res.indices, oracle)
    assert np.allclose(members.mean(axis=0)[1], 0.0, atol=1e-9)
    assert members[:, 0].min() > 0.9


def test_nearest_vacuous_delta(l2):
    s = sample_sphere(l2, 32)
    res = nearly_nearest_set(s, np.array([3.0, 0.0]), l2, 10.0)
    assert len(res.indices) == len(s)


def test_monotone_nesting_random(norm_palette):
    rng = np.random.default_rng(33)
    for spec in norm_palette:
        F = PointSet(rng.uniform(-1, 1, size=(30, spec.dim)))
        x = rng.uniform(-2, 2, spec.dim)
        deltas = np.sort(rng.uniform(0, 2, 5))
        prev = None
        for d in deltas:
            idx = almost_farthest_set(F, x, spec, float(d)).indices
            if prev is not None:
                assert np.isin(prev, idx).all()
            prev = idx


def test_translation_equivariance_of_indices(l1):
    rng = np.random.default_rng(4)
    F = PointSet(rng.uniform(-1, 1, size=(25, 2)))
    x = rng.uniform(-1, 1, 2)
    z = rng.uniform(-1, 1, 2)
    base = almost_farthest_set(F, x, l1, 0.3).indices
    moved = almost_farthest_set(PointSet(F.points + z), x + z, l1, 0.3).indices
    assert np.array_equal(base, moved)


def test_union_radius_is_max(linf):
    rng = np.random.default_rng(5)
    F1 = PointSet(rng.uniform(-1, 1, size=(12, 2)))
    F2 = PointSet(rng.uniform(-1, 1, size=(9, 2)))
    x = rng.uniform(-1, 1, 2)
    union = PointSet(np.vstack([F1.points, F2.points]))
    assert farthest_radius(union, x, linf) == max(
        farthest_radius(F1, x, linf), farthest_radius(F2, x, linf)
    )


def test_near_set_inside_antipodal_far_set(l2):
    s = sample_sphere(l2, 720)
    x = 1.5 * s.points[100]
    near = nearly_nearest_set(s, x, l2, 0.2).indices
    far = almost_farthest_set(s, -x, l2, 0.2).indices
    assert np.isin(near, far).all()


def test_ray_containment_on_ball_sample(linf):
    ball = sample_ball(linf, 64)
    x = np.array([1.0, 0.0])
    q_t2 = almost_farthest_set(ball, 2.0 * x, linf, 0.1).indices
    q_t1 = almost_farthest_set(ball, 1.0 * x, linf, 0.1).indices
    q_t2_wide = almost_farthest_set(ball, 2.0 * x, linf, 0.2).indices
    assert np.isin(q_t2, q_t1).all()
    assert np.isin(q_t1, q_t2_wide).all()


def test_distances_order_matches_points(l2):
    s = sample_sphere(l2, 12)
    d = distances(s, np.array([2.0, 0.0]), l2)
    assert d.shape == (12,)
    assert d[0] == pytest.approx(1.0, rel=1e-12)


def test_polyhedral_radius_square_examples(linf, square_gauge):
    square = PointSet(np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]))
    assert polyhedral_farthest_radius(linf, square, np.array([1.0, 0.0])) == 2.0
    for t in (0.5, 1.0, 2.5):
        got = polyhedral_farthest_radius(linf, square, np.array([t, 0.0]))
        assert got == pytest.approx(1.0 + t, rel=1e-12)
    # x = 0 gives the largest vertex norm, for any ambient norm
    assert polyhedral_farthest_radius(square_gauge, square, np.zeros(2)) == pytest.approx(1.0)


def test_polyhedral_radius_certifies_sampled_radius(linf):
    square = PointSet(np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]))
    x = np.array([0.3, -0.4])
    exact = polyhedral_farthest_radius(linf, square, x)
    prev = 0.0
    for res in (16, 64, 256, 1024):
        sampled = farthest_radius(sample_sphere(linf, res), x, linf)
        assert sampled <= exact + 1e-12
        assert sampled >= prev - 1e-12
        prev = sampled
    assert exact - prev <= 1e-4


def test_maximizing_sequence_converges_on_circle(l2):
    schedule = [0.5 / 2**k for k in range(8)]
    pts = maximizing_sequence(l2, np.array([1.0, 0.0]), schedule, 20000)
    errs = norm_values(l2, pts - np.array([-1.0, 0.0]))
    assert errs[-1] <= 3.0 * math.sqrt(schedule[-1])
    assert errs[-1] <= errs[0]


def test_maximizing_sequence_on_max_norm_edge(linf):
    schedule = [0.4, 0.2, 0.1, 0.05]
    pts = maximizing_sequence(linf, np.array([1.0, 0.0]), schedule, 8000)
    for p, d in zip(pts, schedule):
        assert p[0] <= -1.0 + d + 1e-9


def test_maximizing_sequence_single_entry(l2):
    pts = maximizing_sequence(l2, np.array([0.0, 1.0]), [0.25], 512)
    assert pts.shape == (1, 2)


def test_maximizing_sequence_validation(l2):
    with pytest.raises(ValidationError):
        maximizing_sequence(l2, np.zeros(2), [0.1], 64)
    with pytest.raises(ValidationError):
        maximizing_sequence(l2, np.array([1.0, 0.0]), [], 64)
    with pytest.raises(ValidationError):
        maximizing_sequence(l2, np.array([1.0, 0.0]), [0.1, 0.2], 64)


def test_maximizing_sequence_seeded_dim3():
    spec = NormSpec.lp(2, 3)
    a = maximizing_sequence(spec, np.array([1.0, 0.0, 0.0]), [0.2, 0.1], 256)
    b = maximizing_sequence(spec, np.array([1.0, 0.0, 0.0]), [0.2, 0.1], 256)
    assert np.array_equal(a, b)


def test_result_json(l2):
    s = sample_sphere(l2, 16)
    res = almost_farthest_set(s, np.array([1.0, 0.0]), l2, 0.1)
    obj = res.to_json()
    assert set(obj) == {"radius", "delta", "indices"}
    assert obj["delta"] == 0.1
