import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hcsdr.core import SphereAngles, UnitDirection
from hcsdr.sphere import TWO_PI, angles_to_array, from_angles, to_angles


def unit(v):
    return UnitDirection.from_vector(v)


def test_axis_examples():
    np.testing.assert_allclose(to_angles(unit([1.0, 0.0])).phi, [0.0])
    np.testing.assert_allclose(to_angles(unit([0.0, 1.0])).phi, [math.pi / 2])
    np.testing.assert_allclose(to_angles(unit([1.0, 1.0, 1.0])).phi, [math.atan(math.sqrt(2)), math.pi / 4], atol=1e-15)
    np.testing.assert_allclose(from_angles(SphereAngles(np.array([0.0]))).coords, [1.0, 0.0])
    np.testing.assert_allclose(from_angles(SphereAngles(np.array([math.pi / 2] * 2))).coords, [0, 0, 1], atol=1e-15)


def test_angle_ranges():
    phi = to_angles(unit([-1.0, -1.0, -1.0, -1.0])).phi
    assert np.all((phi[:-1] >= 0) & (phi[:-1] <= math.pi))
    assert 0 <= phi[-1] < TWO_PI
    assert to_angles(unit([1.0, -0.0, -0.0])).phi[-1] == 0.0


@pytest.mark.parametrize("p", [2, 3, 5, 10, 25])
def test_round_trip_many(p):
    rng = np.random.default_rng(p)
    worst = 0.0
    for _ in range(4000 // 5):
        v = unit(rng.standard_normal(p))
        worst = max(worst, np.max(np.abs(from_angles(to_angles(v)).coords - v.coords)))
    assert worst <= 1e-10


def test_round_trip_axes_and_antipodes():
    for p in (2, 3, 6):
        for k in range(p):
            for sign in (1.0, -1.0):
                e = np.zeros(p)
                e[k] = sign
                np.testing.assert_allclose(from_angles(to_angles(unit(e))).coords, e, atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, st.integers(2, 12), elements=st.floats(-1e3, 1e3)))
def test_round_trip_property(v):
    if not (1e-6 < np.linalg.norm(v)):
        return
    a = unit(v)
    assert np.max(np.abs(from_angles(to_angles(a)).coords - a.coords)) <= 1e-10


def test_periodicity():
    rng = np.random.default_rng(1)
    for _ in range(100):
        phi = rng.uniform(0, math.pi, 4)
        shifted = phi.copy()
        shifted[-1] += TWO_PI
        np.testing.assert_allclose(angles_to_array(phi), angles_to_array(shifted), atol=1e-12)


def test_angles_to_array_is_unit_everywhere():
    rng = np.random.default_rng(2)
    for _ in range(200):
        assert abs(np.linalg.norm(angles_to_array(rng.normal(0, 10, 6))) - 1.0) < 1e-12
