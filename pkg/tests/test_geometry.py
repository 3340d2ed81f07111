import numpy as np
import pytest
from hypothesis import given, strategies as st

from hessval.errors import DegenerateFit
from hessval.geometry import (Body, OrthogonalSimplex, ball_intrinsic_volumes,
                              canonical_dissection, cylinder_check,
                              dissection_volume_mc, intrinsic_volumes,
                              parallel_volume, support_function)

vec2 = st.tuples(st.floats(-5, 5), st.floats(-5, 5)).map(np.array)


def test_support_function_examples():
    assert support_function(Body.ball([0, 0]), [3.0, 4.0]) == pytest.approx(5)
    sq = Body.box([0, 0], [1, 1])
    assert support_function(sq, [1.0, -1.0]) == pytest.approx(1.0)


@given(vec2, vec2, st.floats(0, 10))
def test_support_function_is_sublinear(y, z, lam):
    for k in (Body.box([0, -1], [2, 1]), Body.ball([0.5, 0.0], 2.0)):
        assert support_function(k, lam * y) == pytest.approx(
            lam * support_function(k, y), abs=1e-9)
        assert support_function(k, y + z) <= support_function(k, y) + \
            support_function(k, z) + 1e-9


def test_planar_intrinsic_volumes_are_exact():
    assert np.allclose(intrinsic_volumes(Body.box([0, 0], [1, 1])),
                       [1, 2, 1], atol=1e-12)
    assert np.allclose(intrinsic_volumes(Body.ball([0, 0])),
                       [1, np.pi, np.pi], atol=1e-12)
    assert np.allclose(intrinsic_volumes(Body.ball([0, 0, 0], 2.0)),
                       ball_intrinsic_volumes(3, 2.0), atol=1e-10)
    tri = Body.from_vertices([[0, 0], [3, 0], [0, 4]])
    assert np.allclose(intrinsic_volumes(tri), [1, 6, 6], atol=1e-12)


def test_intrinsic_volumes_monotone_on_nested_boxes():
    small = intrinsic_volumes(Body.box([0, 0], [1, 1]))
    big = intrinsic_volumes(Body.box([-0.5, 0], [1, 2]))
    assert np.all(big >= small - 1e-12)


def test_cube_steiner_fit_by_monte_carlo():
    v, err = intrinsic_volumes(Body.box([0, 0, 0], [1, 1, 1]),
                               samples=100_000, return_stderr=True)
    assert np.all(np.abs(v - [1, 3, 3, 1]) <= 4 * err + 1e-12)


def test_parallel_volume_of_cube_is_seeded():
    cube = Body.box([0, 0, 0], [1, 1, 1])
    a = parallel_volume(cube, 0.3, 20_000, seed=1)
    assert a == parallel_volume(cube, 0.3, 20_000, seed=1)
    exact = 1 + 6 * 0.3 + 3 * np.pi * 0.09 + 4 / 3 * np.pi * 0.027
    assert abs(a[0] - exact) < 4 * a[1]


def test_steiner_fit_needs_enough_nodes():
    with pytest.raises(DegenerateFit):
        intrinsic_volumes(Body.box([0, 0], [1, 1]), s_grid=[0.5, 1.0])


def test_canonical_dissection_of_unit_triangle():
    pieces = canonical_dissection(OrthogonalSimplex.standard(2), 0.5)
    assert [p.volume for p in pieces] == pytest.approx([1 / 8, 1 / 4, 1 / 8])


@pytest.mark.parametrize("t", [0.25, 0.5, 0.75])
def test_dissection_volumes_sum(t):
    s = OrthogonalSimplex(np.array([1.0, 0.0, -1.0]),
                          np.diag([1.0, 2.0, 0.5]))
    total = sum(p.volume for p in canonical_dissection(s, t))
    assert total == pytest.approx(s.volume, rel=1e-10)
    est, err, overlap = dissection_volume_mc(s, t, 200_000, seed=42)
    assert abs(est - s.volume) < 3 * err
    assert overlap == 1


@pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (3, 2)])
def test_middle_pieces_are_cylinders(n, k):
    assert cylinder_check(OrthogonalSimplex.standard(n), 0.3, k) < 1e-12


def test_simplex_validation():
    with pytest.raises(ValueError):
        OrthogonalSimplex(np.zeros(2), [[1.0, 0.0], [1.0, 1.0]])
    with pytest.raises(ValueError):
        canonical_dissection(OrthogonalSimplex.standard(2), 1.0)
