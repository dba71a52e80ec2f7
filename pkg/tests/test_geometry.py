import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drsubmax.geometry import (FeasibleRegion, InvalidDelta, diameter_bound, lmo, membership,
                               min_inf_norm_point, region_constants, shrink)
from drsubmax.objectives import generate_region, sample_unit_sphere
from drsubmax.verify import brute_force_max


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def triangle():
    return FeasibleRegion([[1.0, 1.0]], [1.0], downward_closed=True)


def random_point(region, rng):
    """A random member of a downward-closed region: scale down an LMO vertex."""
    v = lmo(region, rng.normal(size=region.dim))
    return rng.uniform(size=region.dim) * v


def test_lmo_polygon():
    region = FeasibleRegion([[1.0, 1.0]], [1.5], downward_closed=True)
    assert np.allclose(lmo(region, [2.0, 1.0]), [1.0, 0.5])


def test_lmo_box_and_zero_direction():
    box = FeasibleRegion.box(2)
    assert np.allclose(lmo(box, [1.0, 1.0]), [1.0, 1.0])
    v = lmo(triangle(), [0.0, 0.0])
    assert membership(triangle(), v)


def test_membership_examples():
    assert membership(triangle(), [0.5, 0.5], 1e-9)
    assert not membership(triangle(), [0.6, 0.6], 1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lmo_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    d, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    region = generate_region(d, m, rng)
    c = rng.normal(size=d)
    v = lmo(region, c)
    assert membership(region, v, 1e-9)
    ref = brute_force_max(c, region.A, region.b, region.lower, region.upper)
    assert abs(c @ v - ref) <= 1e-8


def test_chebyshev_ball_inside(rng):
    region = generate_region(4, 6, rng)
    c, r = region.center, region.radius
    assert r > 0
    for _ in range(500):
        assert membership(region, c + r * sample_unit_sphere(4, rng), 1e-9)


def test_box_center_radius():
    region = FeasibleRegion(np.zeros((0, 3)), np.zeros(0))
    assert np.allclose(region.center, 0.5)
    assert region.radius == pytest.approx(0.5)


def test_shrink_zero_is_identity():
    region = triangle()
    small = shrink(region, 0.0)
    assert np.array_equal(small.b, region.b)
    assert np.array_equal(small.lower, region.lower)
    assert np.array_equal(small.upper, region.upper)


def test_shrink_box():
    box = FeasibleRegion.box(2)
    box = FeasibleRegion(box.A, box.b, center=[0.5, 0.5], radius=0.4)
    small = shrink(box, 0.04)
    assert np.allclose(small.lower, 0.05)
    assert np.allclose(small.upper, 0.95)


def test_shrink_rejects_large_delta():
    region = triangle()
    with pytest.raises(InvalidDelta):
        shrink(region, region.radius)


def test_shrunk_sandwich(rng):
    region = generate_region(3, 4, rng)
    delta = 0.6 * region.radius
    small = shrink(region, delta)
    D = diameter_bound(region)
    for _ in range(10_000 // 10):
        # inner inclusion: delta-balls around the shrunk set stay inside
        z = small.contract(random_point(region, rng))
        assert membership(small, z, 1e-9)
        for _ in range(10):
            assert membership(region, z + delta * sample_unit_sphere(3, rng), 1e-9)
    for _ in range(10_000 // 10):
        # outer inclusion through the explicit contraction map
        y = random_point(region, rng)
        y2 = small.contract(y)
        assert membership(small, y2, 1e-9)
        assert np.linalg.norm(y - y2) <= delta * D / region.radius + 1e-12


def test_shrunk_downward_closed_above_floor(rng):
    region = generate_region(3, 4, rng)
    small = shrink(region, 0.5 * region.radius)
    floor, _ = min_inf_norm_point(small)
    for _ in range(1000):
        z = small.contract(random_point(region, rng))
        w = floor + rng.uniform(size=3) * (z - floor)
        assert membership(small, w, 1e-9)


def test_min_inf_norm_origin():
    u, h = min_inf_norm_point(triangle())
    assert np.array_equal(u, np.zeros(2))
    assert h == 0.0


def test_min_inf_norm_shrunk_closed_form():
    region = FeasibleRegion(np.zeros((0, 2)), np.zeros(0), center=[0.3, 0.3], radius=0.2)
    u, h = min_inf_norm_point(shrink(region, 0.02))
    assert np.allclose(u, [0.03, 0.03], atol=1e-12)
    assert h == pytest.approx(0.03)


def test_min_inf_norm_shrunk_random(rng):
    for _ in range(20):
        region = generate_region(4, 3, rng)
        small = shrink(region, rng.uniform(0, 0.9) * region.radius)
        u, _ = min_inf_norm_point(small)
        assert np.max(np.abs(u - small.ratio * region.center)) <= 1e-12


def test_min_inf_norm_general_region():
    region = FeasibleRegion([[-1.0, -1.0]], [-1.0])
    # grid search at step 1e-3 over the box
    axis = np.linspace(0, 1, 1001)
    P = np.array(list(itertools.product(axis, axis)))
    P = P[P.sum(axis=1) >= 1 - 1e-12]
    h_grid = np.min(np.max(P, axis=1))
    u, h = min_inf_norm_point(region)
    assert h_grid == pytest.approx(0.5)
    assert h == pytest.approx(h_grid, abs=1e-9)
    assert np.allclose(u, [0.5, 0.5])


def test_min_inf_norm_lp_on_shrunk_general_region():
    region = FeasibleRegion([[-1.0, -1.0]], [-1.0])
    small = shrink(region, 0.5 * region.radius)
    u, h = min_inf_norm_point(small)
    assert membership(small, u, 1e-9)
    assert h == pytest.approx(np.max(u))
    # the contracted base minimizer is feasible, so it cannot beat the LP
    assert h <= np.max(small.contract([0.5, 0.5])) + 1e-9


@pytest.mark.parametrize("d, expected", [(4, 2.0), (25, 5.0), (2, np.sqrt(2))])
def test_diameter_bound(d, expected):
    assert diameter_bound(FeasibleRegion.box(d)) == pytest.approx(expected)


def test_region_constants():
    rc = region_constants(FeasibleRegion([[-1.0, -1.0]], [-1.0]))
    assert rc.h == pytest.approx(0.5)
    assert 0 <= rc.h <= 1
    assert rc.diameter <= np.sqrt(2) + 1e-12
    assert rc.d_prime == 2


def test_region_roundtrip(rng):
    region = generate_region(3, 2, rng)
    again = FeasibleRegion.from_dict(region.to_dict())
    assert np.array_equal(again.A, region.A)
    assert np.array_equal(again.center, region.center)
    assert again.radius == region.radius
    assert again.downward_closed
