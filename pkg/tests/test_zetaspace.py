import numpy as np
import pytest
from hypothesis import given, strategies as st

from hessval._numerics import omega
from hessval.errors import ClassViolation, NonSmoothXi
from hessval.zetaspace import (
    ZetaProfile, abel_forward, abel_inverse, bump, certify_class, cone_values,
    eta, eta_r, gaussian, generalized_kernel, hat, integral_equation_residual,
    moment, power_bump, read_profile, recover_zeta_from_cone_values, rho,
    rho_r, smooth_window, truncate, write_profile)

# symbolic antiderivatives (sympy), frozen
ETA_BUMP_3_1 = 0.12559516666666667      # int_0.3^1 s (1-s^2)^2 ds
RHO_BUMP_3_1 = 0.32571933333333336      # 0.3^2 zeta(0.3) + 2 eta
ABEL_HAT_HALF = 0.2683929647766172      # int_.5^1 s(1-s)/sqrt(s^2-1/4) ds


def test_stock_profiles():
    assert hat()(0.25) == pytest.approx(0.75)
    assert hat()(1.5) == 0.0
    assert bump(2.0)(1.0) == pytest.approx(0.5625)
    w = smooth_window(0.5, 1.0, 0.25)
    assert w(0.75) == 1.0 and w(0.2) == 0.0 and w(1.3) == 0.0


def test_moments_and_eta_rho():
    assert moment(bump(), 2) == pytest.approx(8 / 105, rel=1e-10)
    assert eta(bump(), 1, 3, 0.3) == pytest.approx(ETA_BUMP_3_1, rel=1e-10)
    assert rho(bump(), 1, 3, 0.3) == pytest.approx(RHO_BUMP_3_1, rel=1e-10)
    # hat in n = 2, j = 1: rho(t) = t(1-t) + (1-t)^2/2
    t = np.array([0.0, 0.25, 0.5, 0.9, 1.5])
    expect = np.where(t < 1, t * (1 - t) + (1 - t) ** 2 / 2, 0.0)
    assert np.allclose(rho(hat(), 1, 2, t), expect, atol=1e-14)


def test_sampled_profile_moments_are_exact_for_linear_data():
    s = np.linspace(0.0, 1.0, 11)
    prof = ZetaProfile.from_samples(s, 1 - s)
    assert moment(prof, 1, 0.35) == pytest.approx(moment(hat(), 1, 0.35),
                                                 rel=1e-12)


def test_class_certificate():
    certify_class(power_bump(-0.5), 1, 2)
    certify_class(hat(), 1, 3)
    with pytest.raises(ClassViolation):
        certify_class(power_bump(-1.5), 1, 2)
    with pytest.raises(ClassViolation):
        certify_class(power_bump(-2.5), 1, 3)


@given(st.floats(0.05, 0.9), st.floats(0.0, 1.2))
def test_truncation_formulas_match_truncated_profile(r, t):
    z = bump(1.0)
    zr = truncate(z, r)
    assert eta_r(z, 1, 3, r, t) == pytest.approx(eta(zr, 1, 3, t),
                                                 abs=1e-10, rel=1e-8)
    assert rho_r(z, 1, 3, r, t) == pytest.approx(rho(zr, 1, 3, t),
                                                 abs=1e-10, rel=1e-8)


def test_truncation_edge_cases():
    assert truncate(hat(), 0.3)(0.1) == pytest.approx(0.7)
    assert truncate(hat(), 2.0)(0.5) == 0.0
    with pytest.raises(ValueError):
        truncate(hat(), 0.0)


def test_abel_forward_and_kernel():
    assert abel_forward(hat(), 0.5) == pytest.approx(ABEL_HAT_HALF, rel=1e-9)
    assert generalized_kernel(hat(), 0, 0.5) == pytest.approx(ABEL_HAT_HALF,
                                                              rel=1e-9)
    assert generalized_kernel(hat(), 1, 0.5) == pytest.approx(1 / 12,
                                                              rel=1e-9)
    t = np.array([0.0, 0.5, 1.0, 2.0])
    assert np.allclose(abel_forward(gaussian(6.0), t),
                       np.sqrt(np.pi) / 2 * np.exp(-t * t), atol=1e-10)


def test_abel_inverse_of_gaussian_transform():
    grid = np.linspace(0.0, 5.0, 2001)
    xi = ZetaProfile.from_samples(grid, np.sqrt(np.pi) / 2 * np.exp(-grid ** 2))
    s = np.array([0.0, 0.5, 1.0, 1.5])
    assert np.allclose(abel_inverse(xi, s), np.exp(-s * s), atol=1e-4)


def test_abel_inverse_rejects_kinked_input():
    s = np.linspace(0.0, 1.0, 401)
    with pytest.raises(NonSmoothXi):
        abel_inverse(ZetaProfile.from_samples(s, np.minimum(1.0, 2 - 2 * s)),
                     [0.1])


@pytest.mark.parametrize("n", [2, 3])
def test_cone_values_identity_and_recovery(n):
    z = bump(1.0)
    t = np.concatenate([[0.0], np.geomspace(1e-5, 0.05, 300),
                        np.linspace(0.05, 1.0, 2000)[1:]])
    zv = ZetaProfile.from_samples(t, cone_values(z, n, t), 1.0)
    assert cone_values(z, n, 0.0) == pytest.approx(
        omega(n) * (n - 1) * moment(z, n - 2))
    rec = recover_zeta_from_cone_values(zv, n)
    s = rec.s[rec.s >= 0.05]
    assert np.max(np.abs(rec(s) - z(s))) < 1e-4
    assert rec.meta["limit_gap"] < 1e-3
    coarse = np.linspace(0.0, 1.0, 101)
    zc = ZetaProfile.from_samples(coarse, cone_values(z, n, coarse), 1.0)
    assert integral_equation_residual(zc, n, 0.3) < 1e-6


def test_recovery_flags_non_vanishing_edge():
    z = power_bump(-1.2)
    t = np.concatenate([[0.0], np.geomspace(1e-6, 0.05, 300),
                        np.linspace(0.05, 1.0, 500)[1:]])
    vals = cone_values(z, 2, t[1:])
    # finite stand-in for Z(u_0)
    zv = ZetaProfile.from_samples(t, np.concatenate([[vals[0]], vals]), 1.0)
    with pytest.raises(ClassViolation):
        recover_zeta_from_cone_values(zv, 2)


def test_profile_csv_round_trip(tmp_path):
    s = np.linspace(0.0, 2.0, 51)
    prof = ZetaProfile.from_samples(s, np.exp(-s), tag=(1, 2))
    write_profile(prof, tmp_path / "z.csv")
    back = read_profile(tmp_path / "z.csv")
    assert back.tag == (1, 2)
    assert back.support == pytest.approx(2.0)
    assert np.array_equal(back.values, prof.values)
