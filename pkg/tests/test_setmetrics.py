import math

import numpy as np
import pytest

from conftest import brute_extreme, brute_hausdorff

from remotal.errors import DimensionMismatch
from remotal.norms import NormSpec, norm_eval
from remotal.sets import PointSet, sample_sphere
from remotal.setmetrics import (
    DIRECT_PAIR_LIMIT,
    diameter,
    generalized_diameter,
    hausdorff_distance,
    infimal_distance,
    pair_extreme,
)


def test_diameter_singleton(l2):
    assert diameter(PointSet(np.array([[2.0, 3.0]])), l2).value == 0.0


def test_diameter_two_points(l2):
    A = PointSet(np.array([[1.0, 0.0], [-1.0, 0.0]]))
    m = diameter(A, l2)
    assert m.value == 2.0 and m.witness == (0, 1)


def test_diameter_of_max_norm_edge(linf):
    edge = PointSet(np.column_stack([np.full(41, -1.0), np.linspace(-1, 1, 41)]))
    assert diameter(edge, linf).value == 2.0


def test_generalized_diameter_against_origin(l2):
    A = PointSet(np.array([[0.0, 0.0]]))
    B = PointSet(np.array([[3.0, 4.0]]))
    assert generalized_diameter(A, B, l2).value == 5.0


def test_generalized_diameter_of_set_with_itself_is_diameter(l1):
    rng = np.random.default_rng(0)
    A = PointSet(rng.normal(size=(20, 2)))
    assert generalized_diameter(A, A, l1).value == diameter(A, l1).value


def test_random_cross_pairs_match_exhaustive_oracle(norm_palette):
    rng = np.random.default_rng(1)
    for spec in norm_palette:
        A = rng.normal(size=(20, spec.dim))
        B = rng.normal(size=(20, spec.dim))
        got = generalized_diameter(PointSet(A), PointSet(B), spec)
        want_v, want_w = brute_extreme(A, B, spec, "max")
        assert got.value == want_v and got.witness == want_w


def test_hausdorff_identity_and_one_sided(l2):
    A = PointSet(np.array([[0.0, 0.0]]))
    B = PointSet(np.array([[0.0, 0.0], [3.0, 0.0]]))
    assert hausdorff_distance(A, A, l2).value == 0.0
    m = hausdorff_distance(A, B, l2)
    assert m.value == 3.0 and m.witness == (0, 1)


def test_hausdorff_random_match_oracle(norm_palette):
    rng = np.random.default_rng(2)
    for spec in norm_palette:
        A = rng.normal(size=(15, spec.dim))
        B = rng.normal(size=(18, spec.dim))
        got = hausdorff_distance(PointSet(A), PointSet(B), spec).value
        assert got == brute_hausdorff(A, B, spec)


def test_hausdorff_duplicate_insensitive(l2):
    rng = np.random.default_rng(6)
    A = rng.normal(size=(10, 2))
    doubled = np.vstack([A, A])
    assert hausdorff_distance(PointSet(A), PointSet(doubled), l2).value == 0.0


def test_hausdorff_pseudometric_properties(norm_palette):
    rng = np.random.default_rng(7)
    for spec in norm_palette[:4]:
        A = PointSet(rng.normal(size=(8, spec.dim)))
        B = PointSet(rng.normal(size=(9, spec.dim)))
        C = PointSet(rng.normal(size=(7, spec.dim)))
        h = lambda X, Y: hausdorff_distance(X, Y, spec).value
        assert h(A, A) == 0.0
        assert h(A, B) == pytest.approx(h(B, A), rel=1e-12)
        assert h(A, B) <= h(A, C) + h(C, B) + 1e-12


def test_infimal_overlap_and_known_value(l2):
    A = PointSet(np.array([[0.0, 0.0], [1.0, 1.0]]))
    B = PointSet(np.array([[1.0, 1.0], [5.0, 5.0]]))
    assert infimal_distance(A, B, l2).value == 0.0
    assert infimal_distance(
        PointSet(np.array([[0.0, 0.0]])), PointSet(np.array([[3.0, 4.0]])), l2
    ).value == 5.0


def test_metric_sandwich_random(norm_palette):
    rng = np.random.default_rng(3)
    for spec in norm_palette:
        A = PointSet(rng.normal(size=(12, spec.dim)))
        B = PointSet(rng.normal(size=(11, spec.dim)))
        d = infimal_distance(A, B, spec).value
        h = hausdorff_distance(A, B, spec).value
        r = generalized_diameter(A, B, spec).value
        assert d <= h + 1e-12 and h <= r + 1e-12


def test_witness_reproduces_value(norm_palette):
    rng = np.random.default_rng(4)
    for spec in norm_palette:
        A = rng.normal(size=(25, spec.dim))
        B = rng.normal(size=(30, spec.dim))
        for fn in (generalized_diameter, infimal_distance, hausdorff_distance):
            m = fn(PointSet(A), PointSet(B), spec)
            i, j = m.witness
            assert norm_eval(spec, A[i] - B[j]) == m.value


def test_witness_tie_break_lowest_pair(l2):
    A = PointSet(np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 0.0], [1.0, 1.0]]))
    B = PointSet(np.array([[2.0, 2.0], [2.0, 2.0]]))
    assert infimal_distance(A, B, l2).witness == (1, 0)
    assert generalized_diameter(A, B, l2).witness == (0, 0)


def test_blocked_path_matches_direct_scan(norm_palette):
    rng = np.random.default_rng(5)
    for spec in norm_palette:
        # large enough to cross the blocked-path threshold
        a = rng.normal(size=(2100, spec.dim))
        b = rng.normal(size=(1100, spec.dim))
        assert a.shape[0] * b.shape[0] > DIRECT_PAIR_LIMIT
        for mode in ("min", "max"):
            v, w = pair_extreme(a, b, spec, mode)
            bv, bw = brute_extreme(a, b, spec, mode)
            assert v == bv and w == bw


def test_blocked_path_on_coherent_sphere_subsets(linf, l2):
    for spec in (linf, l2):
        s = sample_sphere(spec, 4000).points
        a, b = s[:1800], s[2000:3900]
        for mode in ("min", "max"):
            v, w = pair_extreme(a, b, spec, mode)
            bv, bw = brute_extreme(a, b, spec, mode)
            assert v == bv and w == bw


def test_dim_mismatch(l2):
    with pytest.raises(DimensionMismatch):
        diameter(PointSet(np.ones((3, 3))), l2)


def test_metric_json(l2):
    m = diameter(PointSet(np.array([[1.0, 0.0], [-1.0, 0.0]])), l2)
    assert m.to_json() == {"value": 2.0, "witness": [0, 1]}


def test_large_p_norm_blocked(norm_palette):
    spec = NormSpec.lp(7.0, 2)
    rng = np.random.default_rng(8)
    a = rng.normal(size=(1600, 2))
    b = rng.normal(size=(1400, 2))
    v, w = pair_extreme(a, b, spec, "min")
    bv, bw = brute_extreme(a, b, spec, "min")
    assert v == bv and w == bw
