"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the package's reduction engine: they
loop per point with scalar/row arithmetic so engine results are checked
against an independent path.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from remotal.norms import NormSpec, norm_values


def brute_extreme(a, b, spec, mode):
    """Row-by-row scan; lexicographically smallest witness on ties."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    best = None
    for i in range(a.shape[0]):
        d = norm_values(spec, a[i][None, :] - b)
        j = int(np.argmin(d) if mode == "min" else np.argmax(d))
        cand = (float(d[j]), i, j)
        if (
            best is None
            or (mode == "min" and cand[0] < best[0])
            or (mode == "max" and cand[0] > best[0])
            or (cand[0] == best[0] and (cand[1], cand[2]) < (best[1], best[2]))
        ):
            best = cand
    return best[0], (best[1], best[2])


def brute_hausdorff(a, b, spec):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    d_ab = max(float(norm_values(spec, a[i][None, :] - b).min()) for i in range(len(a)))
    d_ba = max(float(norm_values(spec, b[j][None, :] - a).min()) for j in range(len(b)))
    return max(d_ab, d_ba)


@pytest.fixture(scope="session")
def l2():
    return NormSpec.lp(2, 2)


@pytest.fixture(scope="session")
def l1():
    return NormSpec.lp(1, 2)


@pytest.fixture(scope="session")
def linf():
    return NormSpec.lp(math.inf, 2)


@pytest.fixture(scope="session")
def square_gauge():
    return NormSpec.polyhedral([(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)])


@pytest.fixture(scope="session")
def norm_palette(l2, l1, linf, square_gauge):
    return [
        l2,
        l1,
        linf,
        square_gauge,
        NormSpec.weighted_lp(1.5, (0.5, 2.0)),
        NormSpec.lp(2, 3),
        NormSpec.lp(1, 3),
        NormSpec.lp(math.inf, 3),
    ]
