"""Unit tests for the metric, group actions, and basic field types."""

import numpy as np
import pytest

from minkstring.core import (
    KillingField,
    LorentzMap,
    PoincareMap,
    TwoForm,
    act_lorentz_2form,
    act_poincare,
    compose,
    eta,
    identity_map,
    invert,
    minkowski_inner,
)
from minkstring.errors import NotLorentz
from minkstring.randoms import boost_matrix, random_lorentz, random_poincare


def test_eta_signature():
    g = eta(3)
    assert np.array_equal(np.diag(g), [-1, 1, 1, 1])
    assert np.array_equal(g, np.diag(np.diag(g)))


def test_minkowski_inner():
    assert minkowski_inner([1, 0, 0], [1, 0, 0]) == -1.0
    assert minkowski_inner([1, 1, 0], [1, 1, 0]) == 0.0
    assert minkowski_inner([0, 2, 0], [0, 3, 0]) == 6.0


def test_two_form_rejects_symmetric_part():
    with pytest.raises(ValueError):
        TwoForm(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_lorentz_map_rejects_non_lorentz():
    with pytest.raises(NotLorentz):
        LorentzMap(2.0 * np.eye(3))


def test_boost_preserves_metric():
    L = boost_matrix(3, 1, 0.7)
    assert np.allclose(L.T @ eta(3) @ L, eta(3))


def test_random_lorentz_in_group():
    rng = np.random.default_rng(0)
    for n in range(1, 6):
        L = random_lorentz(rng, n)
        assert np.allclose(L.mat.T @ eta(n) @ L.mat, eta(n), atol=1e-10)


def test_compose_invert_identity():
    rng = np.random.default_rng(1)
    g = random_poincare(rng, 3)
    e = compose(invert(g), g)
    ide = identity_map(3)
    assert np.allclose(e.lam.mat, ide.lam.mat, atol=1e-10)
    assert np.allclose(e.c, ide.c, atol=1e-9)


def test_killing_covector_is_affine():
    rng = np.random.default_rng(2)
    F = TwoForm(np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.5], [0.0, -0.5, 0.0]]))
    f = np.array([0.3, -0.1, 0.2])
    xi = KillingField(F, f)
    x = rng.normal(size=3)
    assert np.allclose(xi.covector_at(x), F.mat.T @ x + f)
    assert np.allclose(xi.vector_at(x), eta(2) @ xi.covector_at(x))


def test_act_poincare_is_equivariant():
    """The covector transforms so that values at mapped points agree."""
    rng = np.random.default_rng(3)
    F = TwoForm(np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.5], [0.0, -0.5, 0.0]]))
    xi = KillingField(F, np.array([0.3, -0.1, 0.2]))
    g = random_poincare(rng, 2)
    xi2 = act_poincare(g, xi)
    x = rng.normal(size=3)
    y = g.lam.mat @ x + g.c
    lhs = xi2.covector_at(y)
    rhs = eta(2) @ g.lam.mat @ eta(2) @ xi.covector_at(x)
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_act_is_group_action():
    rng = np.random.default_rng(4)
    F = TwoForm(np.array([[0.0, 0.7], [-0.7, 0.0]]))
    xi = KillingField(F, np.array([0.1, 0.2]))
    g1, g2 = random_poincare(rng, 1), random_poincare(rng, 1)
    a = act_poincare(g2, act_poincare(g1, xi))
    b = act_poincare(compose(g2, g1), xi)
    assert np.allclose(a.F.mat, b.F.mat, atol=1e-10)
    assert np.allclose(a.f, b.f, atol=1e-9)


def test_act_lorentz_2form_preserves_invariants():
    rng = np.random.default_rng(5)
    F = TwoForm(np.array([[0.0, 1.0, 0.2], [-1.0, 0.0, 0.5], [-0.2, -0.5, 0.0]]))
    L = random_lorentz(rng, 2)
    F2 = act_lorentz_2form(L, F)
    M1 = eta(2) @ F.mat
    M2 = eta(2) @ F2.mat
    assert np.allclose(
        sorted(np.linalg.eigvals(M1).real), sorted(np.linalg.eigvals(M2).real),
        atol=1e-9,
    )
