import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import minimize

from hessval.convexfun import (Grid, IndicatorLinear, KinkSum, PiecewiseAffine,
                               AffinePiece, Quadratic, RadialConeU,
                               RadialConeV, to_grid)
from hessval.errors import NonpositiveScale, UnsupportedVariant
from hessval.polytope import Polytope
from hessval.transforms import (biconjugate_check, conjugate, conjugate_at,
                                legendre, moreau_yosida, profile_gap,
                                rotation_directions,
                                rotational_episymmetrize, super_fibonacci)


def _sup_numeric(f, y, x0):
    res = minimize(lambda x: f(x) - y @ x, x0, method="BFGS")
    return -res.fun


def test_quadratic_conjugate_against_optimizer():
    u = Quadratic([[2.0, 0.5], [0.5, 1.0]], [0.3, -0.2], 0.4)
    v = conjugate(u)
    for y in ([0.1, 0.2], [-1.0, 0.7]):
        y = np.array(y)
        assert v(y) == pytest.approx(_sup_numeric(u, y, np.zeros(2)),
                                     abs=1e-8)
    assert np.allclose(conjugate(v).Q, u.Q)
    with pytest.raises(UnsupportedVariant):
        conjugate(Quadratic(np.diag([1.0, 0.0])))


@pytest.mark.parametrize("n,t,R", [(2, 0.5, 1.0), (3, 0.2, 2.0)])
def test_cone_pair_conjugate_by_enumeration(n, t, R):
    u = RadialConeU(n, t, R)
    v = conjugate(u)
    assert isinstance(v, RadialConeV) and v.scale == R
    # sup over the ball is attained on the ray through y
    rad = np.linspace(0.0, R, 20001)
    for ry in (0.1, 0.5, 1.3):
        brute = np.max(ry * rad - t * rad)
        y = np.zeros(n)
        y[0] = ry
        assert v(y) == pytest.approx(brute, abs=1e-12)
    assert isinstance(conjugate(v), RadialConeU)


def test_kink_and_box_indicator_are_conjugate():
    k = KinkSum([0.2, -0.1], [2.0, 1.0], linear=[0.1, 0.3], const=0.5)
    ind = conjugate(k)
    assert isinstance(ind, IndicatorLinear)
    back = conjugate(ind)
    xs = np.random.default_rng(0).normal(size=(20, 2))
    assert np.allclose(back(xs), k(xs))
    # conjugate values equal the enumeration over the box vertices
    assert np.allclose(conjugate_at(ind, xs), k(xs))


def test_legendre_of_sampled_quadratic():
    u = Quadratic(np.diag([1.0, 2.0]))
    g = to_grid(u, [[-2, 2], [-2, 2]], (161, 161))
    star = legendre(g, [[-1, 1], [-1, 1]], 41)
    y = star.nodes().reshape(-1, 2)
    exact = 0.5 * y[:, 0] ** 2 + 0.25 * y[:, 1] ** 2
    assert np.max(np.abs(star.values.ravel() - exact)) < 1e-3


def test_legendre_of_piecewise_affine_is_exact():
    left = AffinePiece([0.2, 0.1], 0.0, Polytope.box([0, 0], [1, 1]))
    right = AffinePiece([0.5, 0.1], -0.3, Polytope.box([1, 0], [2, 1]))
    f = PiecewiseAffine((left, right))
    star = legendre(f, [[-1, 1], [-1, 1]], 5)
    y = star.nodes().reshape(-1, 2)
    corners = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [2, 0], [2, 1.0]])
    brute = np.max(y @ corners.T - f(corners), axis=1)
    assert np.allclose(star.values.ravel(), brute)


def test_biconjugate_detects_nonconvexity():
    assert biconjugate_check(Quadratic(np.eye(2))) < 1e-12
    x = np.linspace(-1, 1, 33)
    vals = x ** 2 + 0.2 * np.cos(9 * x)
    assert biconjugate_check(Grid([[-1, 1]], vals)) > 0.05


@given(st.floats(0.1, 3.0))
def test_moreau_of_quadratic_matches_minimisation(lam):
    u = Quadratic([[2.0, 0.5], [0.5, 1.0]], [0.3, -0.2], 0.1)
    env = moreau_yosida(u, lam)
    z = np.array([0.4, -0.9])
    res = minimize(lambda x: u(x) + (x - z) @ (x - z) / (2 * lam),
                   np.zeros(2), method="BFGS", options={"gtol": 1e-10})
    assert env(z) == pytest.approx(res.fun, abs=1e-8)


@pytest.mark.parametrize("r", [0.1, 0.6, 1.4, 2.5])
def test_moreau_of_cones_matches_ray_minimisation(r):
    lam = 0.7
    u, v = RadialConeU(2, 0.5, 1.0), RadialConeV(2, 0.3, 1.5)
    mu, mv = moreau_yosida(u, lam), moreau_yosida(v, lam)
    # dense enumeration along the ray (endpoints included)
    p = np.linspace(-1.0, 4.0, 500001)
    bu = np.min(np.where((p >= 0) & (p <= 1), 0.5 * p, np.inf)
                + (r - p) ** 2 / (2 * lam))
    bv = np.min(1.5 * np.maximum(0.0, np.abs(p) - 0.3)
                + (r - p) ** 2 / (2 * lam))
    assert mu([r, 0.0]) == pytest.approx(bu, abs=1e-9)
    assert mv([0.0, r]) == pytest.approx(bv, abs=1e-9)
    # the envelope is C^1 with the kinks of its second derivative recorded
    assert mu.kinks == pytest.approx((lam * 0.5, lam * 0.5 + 1.0))


def test_moreau_of_point_indicator_and_grid():
    p = IndicatorLinear(Polytope.point([0.5, 0.0]), [1.0, 0.0], 0.2)
    env = moreau_yosida(p, 2.0)
    z = np.array([1.0, 1.0])
    assert env(z) == pytest.approx(0.5 + 0.2 + (0.25 + 1.0) / 4)
    g = to_grid(Quadratic(np.eye(1)), [[-2, 2]], (401,))
    mg = moreau_yosida(g, 1.0)
    assert mg([0.6]) == pytest.approx(0.25 * 0.36, abs=1e-4)
    with pytest.raises(NonpositiveScale):
        moreau_yosida(g, 0.0)
    with pytest.raises(UnsupportedVariant):
        moreau_yosida(KinkSum([0.0]), 1.0)


def test_rotation_samples_are_unit():
    q = super_fibonacci(50)
    assert np.allclose(np.linalg.norm(q, axis=1), 1.0)
    for n in (2, 3):
        d = rotation_directions(n, 40)
        assert np.allclose(np.linalg.norm(d, axis=1), 1.0)
        assert np.linalg.norm(d.mean(0)) < 0.05


@pytest.mark.parametrize("n", [2, 3])
def test_symmetrization_fixes_radial_cone(n):
    u = RadialConeU(n, 0.5)
    s = rotational_episymmetrize(u, 32)
    r = np.linspace(0, 1, 11)
    assert s.radius == pytest.approx(1.0)
    assert np.allclose(s.phi(r), 0.5 * r, atol=1e-3)


def test_symmetrization_of_square_converges():
    sq = IndicatorLinear(Polytope.box([-1, -1], [1, 1]))
    a, b, c = (rotational_episymmetrize(sq, m) for m in (16, 64, 256))
    assert profile_gap(b, c) < profile_gap(a, b)
    # the output radius is the mean width / 2 of the square
    assert c.radius == pytest.approx(4 / np.pi, rel=1e-3)
