import numpy as np
import pytest
from hypothesis import given, strategies as st

from hessval._numerics import kappa, omega
from hessval.convexfun import (Grid, KinkSum, PiecewiseQuadratic1D, Quadratic,
                               RadialConeU, RadialConeV, RadialProfile, scale,
                               to_grid)
from hessval.errors import (DegenerateFit, IndexOutOfRange, NonAlignedSubspaces,
                            NonRadial, OriginSingularity, UnsupportedVariant)
from hessval.hessmeasure import (
    Ball, Box, JointRegion, as_radial_profile, direct_sum, level_set_curvature,
    lipschitz_on_sublevel, phi_measure, product_decompose, ps_volume,
    psi_via_conjugate, theta_coefficients)
from hessval.zetaspace import ZetaProfile, hat


def indicator(radius):
    """Weight 1 on [0, radius): turns ``integrate`` into the mass of a ball."""
    return ZetaProfile.from_function(lambda s: np.ones_like(s), radius)


@pytest.mark.parametrize("f", [Quadratic(np.diag([1.0, 3.0])),
                               RadialConeV(2, 0.3), KinkSum([0.1, 0.2])])
def test_phi_zero_is_lebesgue(f):
    mu = phi_measure(f, 0)
    assert mu.mass([[0, 1], [-1, 1]]) == pytest.approx(2.0)
    assert mu.integrate(hat()) == pytest.approx(np.pi / 3)


def test_quadratic_density_is_principal_minor_sum():
    q = Quadratic([[2.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 3.0]])
    box = [[0, 1], [0, 2], [-1, 1]]
    assert phi_measure(q, 1).mass(box) == pytest.approx(6.0 * 4)
    assert phi_measure(q, 3).mass(box) == pytest.approx(
        np.linalg.det(q.Q) * 4)
    with pytest.raises(IndexOutOfRange):
        phi_measure(q, 4)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("R", [0.5, 1.7])
def test_cone_laplacian_mass_is_boundary_flux(n, R):
    # Phi_1 is the Laplacian; its mass in B_R is the flux sigma omega_n R^(n-1)
    v = RadialConeV(n, 0.4, 1.5)
    mass = phi_measure(v, 1).integrate(indicator(R))
    flux = 1.5 * omega(n) * R ** (n - 1) if R > 0.4 else 0.0
    assert mass == pytest.approx(flux, rel=1e-10, abs=1e-14)


@pytest.mark.parametrize("n", [2, 3])
def test_cone_monge_ampere_mass_is_gradient_image(n):
    for t in (0.0, 0.4):
        v = RadialConeV(n, t, 1.5)
        mu = phi_measure(v, n)
        assert mu.integrate(indicator(1.0)) == pytest.approx(
            kappa(n) * 1.5 ** n)
        assert mu.is_nonnegative()


def test_radial_profile_monge_ampere():
    # u = |x|^4/4 maps B_R onto B_{R^3}
    u = RadialProfile.power(2, 1.0, 4.0)
    assert phi_measure(u, 2).integrate(indicator(0.8)) == pytest.approx(
        np.pi * 0.8 ** 6, rel=1e-10)


def test_kink_flats_and_atoms():
    v = KinkSum([0.2, -0.3], [2.0, 0.5])
    box = [[0, 1], [-1, 1]]
    # lines x_1 = 0.2 (weight 2, length 2) and x_2 = -0.3 (weight .5, length 1)
    assert phi_measure(v, 1).mass(box) == pytest.approx(2 * 2 + 0.5 * 1)
    assert phi_measure(v, 2).mass(box) == pytest.approx(1.0)
    assert phi_measure(v, 2).mass([[0.5, 1], [-1, 1]]) == 0.0


def test_piecewise_quadratic_measure_is_slope_increment():
    f = PiecewiseQuadratic1D([0.0, 1.0], [[1, 0, 0], [0, 1, 0], [2, -1, 1.5]])
    mu = phi_measure(f, 1)
    # slopes: x on (-inf,0), 1 on (0,1), 2x-1 on (1,inf): u'(2) - u'(-1) = 4
    assert mu.mass([[-1.0, 2.0]], panels=8) == pytest.approx(4.0)
    with pytest.raises(UnsupportedVariant):
        phi_measure(PiecewiseQuadratic1D([], [[1, 0, 0]], lo=0.0), 1)


def test_grid_nodal_measure_of_sampled_quadratic():
    # each node carries its cell; centred differences are exact on quadratics
    q = Quadratic([[2.0, 0.5], [0.5, 1.0]])
    g = to_grid(q, [[-1, 1], [-1, 1]], (41, 41))
    box = [[-0.525, 0.525], [-0.525, 0.525]]
    assert phi_measure(g, 2).mass(box) == pytest.approx(1.75 * 1.05 ** 2)
    assert phi_measure(g, 1).mass(box) == pytest.approx(3.0 * 1.05 ** 2)


@given(st.floats(0.2, 4.0), st.integers(1, 2))
def test_phi_is_homogeneous_of_degree_j(lam, j):
    box = [[-1, 1], [-0.5, 1]]
    for f in (Quadratic([[2.0, 0.5], [0.5, 1.0]]), RadialConeV(2, 0.3),
              KinkSum([0.1, 0.2], [1.0, 2.0])):
        a = phi_measure(scale(f, lam), j).mass(box)
        b = phi_measure(f, j).mass(box)
        assert a == pytest.approx(lam ** j * b, rel=1e-9, abs=1e-12)


def test_psi_via_conjugate_on_cones():
    # Psi_1 of u_t is Phi_1 of v_t
    v = psi_via_conjugate(RadialConeU(2, 0.5), 1, hat())
    assert v == pytest.approx(3 * np.pi / 4)


def test_parallel_volume_at_zero_and_fit():
    q = Quadratic(np.eye(2))
    vol, err = ps_volume(q, JointRegion(Box([0, 0], [1, 2])), 0.0, 10_000)
    assert vol == pytest.approx(2.0) and err == 0.0
    fit = theta_coefficients(q, JointRegion(Ball(1.0)), samples=200_000)
    exact = np.array([np.pi, 2 * np.pi, np.pi])
    assert np.all(np.abs(fit.coefficients - exact) < 4 * fit.stderr)
    with pytest.raises(DegenerateFit):
        theta_coefficients(q, JointRegion(Ball(1.0)), s_grid=[0.0, 1.0],
                           samples=100)


def test_parallel_volume_is_seeded():
    q = Quadratic(np.eye(2))
    a = ps_volume(q, JointRegion(Ball(1.0)), 0.5, 20_000, seed=3)
    assert a == ps_volume(q, JointRegion(Ball(1.0)), 0.5, 20_000, seed=3)


def test_kink_parallel_volume_counts_singular_parts():
    # P_s of a kink contains the slab swept by its subdifferential
    v = KinkSum([0.0], [1.0])
    fit = theta_coefficients(v, JointRegion(Box([-1], [1])), samples=100_000)
    assert fit.coefficients == pytest.approx([2.0, 1.0], abs=5e-3)


def test_direct_sum_and_product_decomposition():
    ve, vf = Quadratic([[2.0]]), Quadratic([[1.0, 0.3], [0.3, 2.0]])
    v = direct_sum(ve, vf, axes_e=[1])
    assert np.allclose(v.Q[1, 1], 2.0) and np.allclose(v.Q[0, 2], 0.3)
    box = np.array([[0, 1], [-1, 1], [0, 0.5]])
    for l in range(4):
        assert product_decompose(ve, vf, l, box, [1]) == pytest.approx(
            phi_measure(v, l).mass(box))
    ke, kf = KinkSum([0.2], [2.0]), KinkSum([0.1, 0.3], [1.0, 3.0])
    k = direct_sum(ke, kf)
    box = np.array([[0, 1], [0, 1], [0, 1]])
    for l in range(4):
        assert product_decompose(ke, kf, l, box) == pytest.approx(
            phi_measure(k, l).mass(box))
    with pytest.raises(NonAlignedSubspaces):
        direct_sum(ve, vf, axes_e=[3])


def test_radial_helpers():
    u = Quadratic.isotropic(3)
    assert level_set_curvature(u, [2.0, 0, 0], 2) == pytest.approx(0.25)
    assert lipschitz_on_sublevel(u, 2.0) == pytest.approx(2.0)
    with pytest.raises(OriginSingularity):
        level_set_curvature(u, [0, 0, 0], 1)
    with pytest.raises(NonRadial):
        as_radial_profile(Quadratic(np.diag([1.0, 2.0])))
