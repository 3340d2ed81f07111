import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hessval._numerics import (ball_intrinsic_volume, binom, box_rule, kappa,
                               omega, panel_rule, rng, solve_vandermonde,
                               sphere_rule)
from hessval.errors import IllConditionedVandermonde
from hessval.hessmeasure import elementary_symmetric


def test_ball_constants():
    assert kappa(0) == 1.0
    assert kappa(1) == pytest.approx(2.0)
    assert kappa(2) == pytest.approx(math.pi)
    assert kappa(3) == pytest.approx(4 * math.pi / 3)
    assert omega(2) == pytest.approx(2 * math.pi)
    assert omega(3) == pytest.approx(4 * math.pi)
    assert binom(3, 4) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_rule_weights_and_moments(n):
    dirs, w = sphere_rule(n)
    assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0)
    assert w.sum() == pytest.approx(omega(n), rel=1e-13)
    # second moments of the uniform measure are omega_n / n
    second = np.einsum("k,ki,kj->ij", w, dirs, dirs)
    assert np.allclose(second, omega(n) / n * np.eye(n), atol=1e-12)


def test_panel_and_box_rules_integrate_polynomials():
    x, w = panel_rule(np.array([0.0, 0.3, 1.0]), 6)
    assert np.sum(w * x ** 7) == pytest.approx(1 / 8, rel=1e-14)
    pts, wb = box_rule([[0, 1], [0, 2]], 4)
    assert np.sum(wb * pts[:, 0] ** 2 * pts[:, 1]) == pytest.approx(2 / 3)


def test_rng_is_deterministic_per_shard():
    a = rng(5, 0).random(4)
    assert np.array_equal(a, rng(5, 0).random(4))
    assert not np.array_equal(a, rng(5, 1).random(4))


def test_seed_env_override(monkeypatch):
    monkeypatch.setenv("HESSVAL_SEED", "9")
    assert np.array_equal(rng(None).random(3), rng(9).random(3))


def test_vandermonde_solve_and_condition():
    lam = np.array([1.0, 2.0, 3.0])
    mat = lam[:, None] ** np.arange(3)
    x, cond = solve_vandermonde(mat, mat @ [1.0, -2.0, 0.5])
    assert np.allclose(x, [1.0, -2.0, 0.5])
    assert cond > 1
    with pytest.raises(IllConditionedVandermonde):
        solve_vandermonde(np.array([[1.0, 1.0], [1.0, 1.0 + 1e-15]]),
                          np.ones(2))


def test_ball_intrinsic_volumes():
    assert ball_intrinsic_volume(2, 1) == pytest.approx(math.pi)
    assert ball_intrinsic_volume(3, 1, 2.0) == pytest.approx(8.0)
    assert ball_intrinsic_volume(3, 2) == pytest.approx(2 * math.pi)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=5))
def test_elementary_symmetric_vieta(roots):
    a = np.array(roots)
    coeffs = np.poly(a)  # prod (x - a_i)
    for k in range(a.size + 1):
        assert elementary_symmetric(np.diag(a), k) == pytest.approx(
            (-1) ** k * coeffs[k], abs=1e-9, rel=1e-9)


@given(st.integers(0, 2 ** 31), st.integers(1, 4))
def test_principal_minors_match_eigenvalues(seed, n):
    g = np.random.default_rng(seed)
    a = g.normal(size=(n, n))
    q = a + a.T
    coeffs = np.poly(np.linalg.eigvalsh(q))
    for k in range(n + 1):
        assert elementary_symmetric(q, k) == pytest.approx(
            (-1) ** k * coeffs[k], abs=1e-8, rel=1e-8)
    batch = elementary_symmetric(np.stack([q, 2 * q]), n)
    assert batch[1] == pytest.approx(2 ** n * batch[0], abs=1e-8, rel=1e-8)
