import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from remotal.errors import DimensionMismatch, ValidationError
from remotal.norms import NormSpec, norm_eval, norm_values, normalize


def test_euclidean_norm():
    assert norm_eval(NormSpec.lp(2, 2), [3.0, 4.0]) == 5.0


def test_max_norm():
    assert norm_eval(NormSpec.lp(math.inf, 2), [1.0, -2.0]) == 2.0


def test_square_gauge_is_max_norm_on_axis_point(square_gauge):
    assert norm_eval(square_gauge, [1.0, 0.0]) == pytest.approx(1.0, abs=1e-12)


def test_square_gauge_matches_max_norm_on_random_points(square_gauge, linf):
    rng = np.random.default_rng(42)
    pts = rng.uniform(-5.0, 5.0, size=(1000, 2))
    got = norm_values(square_gauge, pts)
    want = norm_values(linf, pts)
    assert np.abs(got - want).max() <= 1e-9


def test_weighted_lp_convention():
    spec = NormSpec.weighted_lp(2.0, (4.0, 1.0))
    # weights sit inside the p-th power: sqrt(4*1 + 1*4) = sqrt(8)
    assert norm_eval(spec, [1.0, 2.0]) == pytest.approx(math.sqrt(8.0), rel=1e-15)


def test_weighted_lp_at_infinity_is_max_abs():
    spec = NormSpec.weighted_lp(math.inf, (0.5, 2.0))
    assert norm_eval(spec, [3.0, -1.0]) == 3.0


def test_large_finite_p_does_not_overflow():
    spec = NormSpec.lp(40.0, 2)
    v = norm_eval(spec, [1e200, 1e200])
    assert math.isfinite(v) and v == pytest.approx(1e200 * 2 ** (1 / 40), rel=1e-12)


def test_normalize_examples():
    assert np.allclose(normalize(NormSpec.lp(2, 2), [0.0, 3.0]), [0.0, 1.0])
    assert np.allclose(normalize(NormSpec.lp(1, 2), [2.0, 2.0]), [0.5, 0.5])
    assert np.allclose(normalize(NormSpec.lp(math.inf, 2), [-4.0, 2.0]), [-1.0, 0.5])


def test_normalize_result_has_unit_norm(norm_palette):
    rng = np.random.default_rng(3)
    for spec in norm_palette:
        for _ in range(20):
            x = rng.normal(size=spec.dim)
            assert norm_eval(spec, normalize(spec, x)) == pytest.approx(1.0, rel=1e-12)


def test_normalize_zero_vector_is_an_error(l2):
    with pytest.raises(ValidationError):
        normalize(l2, [0.0, 0.0])


def test_dimension_mismatch(l2):
    with pytest.raises(DimensionMismatch):
        norm_eval(l2, [1.0, 2.0, 3.0])


@pytest.mark.parametrize(
    "bad",
    [
        lambda: NormSpec.lp(0.5, 2),
        lambda: NormSpec.weighted_lp(2.0, (1.0, -1.0)),
        lambda: NormSpec.polyhedral([(1.0, 0.0), (0.0, 1.0)]),  # not symmetric
        lambda: NormSpec.polyhedral([(1.0, 0.0), (-1.0, 0.0)]),  # does not span
        lambda: NormSpec.polyhedral([(0.0, 0.0), (1.0, 1.0), (-1.0, -1.0)]),
    ],
)
def test_invalid_specs_rejected(bad):
    with pytest.raises(ValidationError):
        bad()


_scalars = st.floats(-1e6, 1e6, allow_nan=False)
_coords = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=2, max_size=2)


@settings(max_examples=80, deadline=None)
@given(x=_coords, y=_coords, k=_scalars)
def test_norm_axioms(x, y, k):
    for spec in (
        NormSpec.lp(2, 2),
        NormSpec.lp(1, 2),
        NormSpec.lp(math.inf, 2),
        NormSpec.lp(3.0, 2),
        NormSpec.weighted_lp(1.5, (0.5, 2.0)),
        NormSpec.polyhedral([(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]),
    ):
        xv, yv = np.asarray(x), np.asarray(y)
        nx, ny = norm_eval(spec, xv), norm_eval(spec, yv)
        scale = max(1.0, nx, abs(k) * nx)
        assert abs(norm_eval(spec, k * xv) - abs(k) * nx) <= 1e-12 * scale
        assert norm_eval(spec, xv + yv) <= nx + ny + 1e-12 * max(1.0, nx + ny)
        assert norm_eval(spec, np.zeros(2)) == 0.0
        if np.any(xv):
            assert nx > 0.0


def test_poly_gauge_symmetric_bitwise(square_gauge):
    rng = np.random.default_rng(11)
    pts = rng.normal(size=(200, 2))
    assert np.array_equal(norm_values(square_gauge, pts), norm_values(square_gauge, -pts))


def test_one_dimensional_polyhedral_gauge():
    spec = NormSpec.polyhedral([(2.0,), (-2.0,)])
    assert norm_eval(spec, [1.0]) == pytest.approx(0.5)


def test_json_round_trip(norm_palette):
    for spec in norm_palette:
        text = json.dumps(spec.to_json())
        again = NormSpec.from_json(json.loads(text))
        assert again == spec


def test_json_infinity_encoding():
    spec = NormSpec.lp(math.inf, 2)
    obj = spec.to_json()
    assert obj == {"kind": "lp", "p": "inf", "dim": 2}
    assert NormSpec.from_json(obj) == spec


def test_json_field_errors_are_named():
    with pytest.raises(ValidationError, match="norm.kind"):
        NormSpec.from_json({"kind": "bogus"})
    with pytest.raises(ValidationError, match="norm.dim"):
        NormSpec.from_json({"kind": "lp", "p": 2.0})
    with pytest.raises(ValidationError, match="norm.weights"):
        NormSpec.from_json({"kind": "wlp", "p": 1.0})
