import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hessval.convexfun import (
    AffinePiece, Grid, IndicatorLinear, KinkSum, PiecewiseAffine,
    PiecewiseQuadratic1D, Quadratic, RadialConeU, RadialConeV, RadialProfile,
    dump, epi_multiply, from_dict, inf_convolve, is_convex, lattice_formal,
    load, pointwise_max, pointwise_min, rotate, scale, to_dict, to_grid,
    translate)
from hessval.errors import (DimensionMismatch, NonConvexMin, NonpositiveScale,
                            NotDifferentiable, SingularHessian)
from hessval.polytope import Polytope


def test_quadratic_value_gradient_hessian():
    u = Quadratic([[2.0, 0.5], [0.5, 1.0]], [1.0, -1.0], 0.25)
    x = np.array([0.3, -0.7])
    assert u(x) == pytest.approx(0.5 * x @ u.Q @ x + x @ u.b + 0.25)
    assert np.allclose(u.gradient(x), u.Q @ x + u.b)
    assert np.allclose(u.hessian(x), u.Q)
    assert np.allclose(u.gradient(u.minimizer()), 0.0)


def test_quadratic_validation():
    with pytest.raises(ValueError):
        Quadratic([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(DimensionMismatch):
        Quadratic(np.eye(2), [1.0, 2.0, 3.0])
    with pytest.raises(SingularHessian):
        Quadratic(np.diag([1.0, 0.0])).minimizer()


def test_cone_pair_values():
    u = RadialConeU(2, 0.5)
    assert u([0.6, 0.0]) == pytest.approx(0.3)
    assert u([1.2, 0.0]) == np.inf
    v = RadialConeV(3, 0.5, 2.0)
    assert v([0.3, 0.0, 0.0]) == 0.0
    assert v([0.0, 1.5, 0.0]) == pytest.approx(2.0)
    assert np.allclose(v.gradient([0.0, 1.5, 0.0]), [0.0, 2.0, 0.0])
    with pytest.raises(NotDifferentiable):
        v.gradient([0.5, 0.0, 0.0])


def test_kink_sum_and_prox():
    v = KinkSum([0.2, -0.1], [2.0, 1.0], linear=[0.1, 0.0], const=1.0)
    x = np.array([0.5, 0.4])
    assert v(x) == pytest.approx(0.3 + 0.25 + 0.05 + 1.0)
    z = np.array([[0.9, 0.9], [0.2, -0.1]])
    s = 0.3
    p = v.prox(z, s)
    # optimality: (z - p)/s lies in the subdifferential at p
    y = (z - p) / s - v.linear
    assert np.all(np.abs(y) <= 0.5 * v.weights + 1e-12)


def test_radial_profile_power_matches_quadratic():
    prof = RadialProfile.power(3, 2.0)
    q = Quadratic.isotropic(3, 2.0)
    x = np.array([[0.1, 0.2, -0.3], [1.0, 0.0, 0.5]])
    assert np.allclose(prof(x), q(x))
    assert np.allclose(prof.gradient(x), q.gradient(x))
    assert np.allclose(prof.hessian(x), q.hessian(x))
    assert prof.radius_of_level(1.0) == pytest.approx(1.0)


def test_grid_multilinear_and_inf_outside():
    g = to_grid(Quadratic(np.eye(2)), [[-1, 1], [-1, 1]], (21, 21))
    assert g([0.0, 0.0]) == pytest.approx(0.0)
    # halfway between nodes 0 and 0.1 (values 0 and 0.005)
    assert g([0.05, 0.0]) == pytest.approx(0.0025)
    assert g([1.5, 0.0]) == np.inf
    assert is_convex(g)


def test_epi_multiply_quadratic_and_cone():
    u = Quadratic([[2.0]], [0.5], 1.0)
    x = np.array([0.7])
    for lam in (0.5, 2.0, 3.0):
        assert epi_multiply(u, lam)(x) == pytest.approx(lam * u(x / lam))
    c = epi_multiply(RadialConeU(2, 0.5), 2.0)
    assert c.radius == 2.0 and c.t == 0.5
    with pytest.raises(NonpositiveScale):
        epi_multiply(u, 0.0)
    with pytest.raises(NonpositiveScale):
        scale(u, -1.0)


@given(st.floats(0.2, 3.0), st.floats(-1, 1), st.floats(-1, 1))
def test_epi_multiply_kinks_and_pq(lam, a, b):
    v = KinkSum([a, b], [1.0, 2.0], const=0.3)
    x = np.array([0.4, -0.2])
    assert epi_multiply(v, lam)(x) == pytest.approx(lam * v(x / lam))
    pq = PiecewiseQuadratic1D([0.0], [[1, 0, 0], [2, 1, 0]])
    assert epi_multiply(pq, lam)([a]) == pytest.approx(lam * pq([a / lam]))


def test_translate_and_rotate(rot2):
    u = Quadratic(np.diag([1.0, 4.0]), [0.1, 0.2])
    x = np.array([0.3, -0.4])
    shift = np.array([0.5, 0.1])
    assert translate(u, shift, 2.0)(x) == pytest.approx(u(x - shift) + 2.0)
    assert rotate(u, rot2)(x) == pytest.approx(u(rot2.T @ x))
    moved = translate(KinkSum([0.0, 0.0]), shift, 1.0)
    assert moved(x) == pytest.approx(KinkSum([0.0, 0.0])(x - shift) + 1.0)


def test_inf_convolution_of_quadratics_on_grid():
    # (a x^2/2) [] (b x^2/2) = (ab/(a+b)) x^2/2
    a, b = 2.0, 1.0
    box = [[-2.0, 2.0]]
    g = inf_convolve(to_grid(Quadratic([[a]]), box, (401,)),
                     to_grid(Quadratic([[b]]), box, (401,)))
    x = np.linspace(-1, 1, 9)[:, None]
    assert np.allclose(g(x), a * b / (a + b) * x[:, 0] ** 2 / 2, atol=1e-4)


def test_inf_convolution_separable_kernel_and_point_shift():
    box = [[-2.0, 2.0], [-2.0, 2.0]]
    u = to_grid(Quadratic(np.eye(2)), box, (81, 81))
    env = inf_convolve(u, Quadratic(np.eye(2)))
    x = np.array([[0.5, -0.3]])
    assert env(x)[0] == pytest.approx(0.25 * 0.34, abs=2e-3)
    shifted = inf_convolve(u, IndicatorLinear(Polytope.point([0.5, 0.0]),
                                              [1.0, 0.0], 0.2))
    assert shifted([0.5, 0.0]) == pytest.approx(0.5 + 0.2)


def test_lattice_of_one_dimensional_quadratics():
    sq = Quadratic([[1.0]])
    line = Quadratic([[0.0]], [1.0], -0.3)
    hi = pointwise_max(sq, line)
    xs = np.linspace(-2, 3, 41)
    assert np.allclose(hi(xs[:, None]), np.maximum(xs ** 2 / 2, xs - 0.3))
    with pytest.raises(NonConvexMin):
        pointwise_min(sq, Quadratic([[1.0]], [-0.3], 0.045))
    lo = lattice_formal(sq, Quadratic([[1.0]], [-0.3], 0.045), False)
    assert np.allclose(lo(xs[:, None]),
                       np.minimum(xs ** 2 / 2, (xs - 0.3) ** 2 / 2))


def test_lattice_of_adjacent_affine_cells():
    left = AffinePiece([0.2, 0.1], 0.0, Polytope.box([0, 0], [1, 1]))
    right = AffinePiece([0.5, 0.1], -0.3, Polytope.box([1, 0], [2, 1]))
    a, b = PiecewiseAffine((left,)), PiecewiseAffine((right,))
    lo = pointwise_min(a, b)
    assert lo([1.5, 0.5]) == pytest.approx(0.5 * 1.5 + 0.05 - 0.3)
    assert lo([0.5, 0.5]) == pytest.approx(0.15)
    assert not pointwise_max(a, b).pieces


@pytest.mark.parametrize("f", [
    Quadratic([[2.0, 0.5], [0.5, 1.0]], [1.0, 0.0], 0.5),
    RadialConeU(2, 0.5, 2.0), RadialConeV(3, 0.25, 1.5),
    KinkSum([0.1, 0.2], [1.0, 2.0], (0,), [0.3, 0.0], 0.1),
    IndicatorLinear(Polytope.box([0, 0], [1, 2]), [0.5, 0.5], 1.0),
    PiecewiseQuadratic1D([0.0, 1.0], [[1, 0, 0], [2, 0, 0], [2, 0, 0]]),
    Grid([[0, 1], [0, 1]], [[0.0, 1.0], [1.0, np.inf]]),
])
def test_json_round_trip(f, tmp_path):
    g = from_dict(json.loads(json.dumps(to_dict(f))))
    pts = np.array([[0.3, 0.2], [0.9, 0.1]]) if f.dim == 2 else (
        np.array([[0.3, 0.2, 0.1]]) if f.dim == 3 else np.array([[0.4]]))
    assert np.array_equal(g(pts), f(pts))
    dump(f, tmp_path / "f.json")
    assert np.array_equal(load(tmp_path / "f.json")(pts), f(pts))
