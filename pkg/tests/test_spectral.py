"""Unit tests for eigenstructure snapping and kernel causal types."""

import numpy as np
import pytest

from minkstring.core import TwoForm
from minkstring.errors import DegenerateSignature
from minkstring.spectral import (
    eigen_structure,
    kernel_basis,
    kernel_causal_type,
    invariants,
)


def two_form(n, entries):
    F = np.zeros((n + 1, n + 1))
    for (i, j), v in entries.items():
        F[i, j], F[j, i] = v, -v
    return TwoForm(F)


def test_boost_real_pair():
    F = two_form(2, {(0, 1): 1.3})
    spec = eigen_structure(F)
    assert spec.real_pair == pytest.approx(1.3)
    assert spec.imag_moduli == ()


def test_rotation_imaginary_pair():
    F = two_form(2, {(1, 2): 0.9})
    spec = eigen_structure(F)
    assert spec.real_pair is None
    assert spec.imag_moduli == pytest.approx((0.9,))


def test_null_form_fully_nilpotent():
    F = two_form(2, {(0, 1): 1.0, (1, 2): 1.0})
    spec = eigen_structure(F)
    assert spec.real_pair is None and spec.imag_moduli == ()
    assert spec.nilpotent_index == 3


def test_kernel_types():
    # rotation: kernel contains the time axis -> Timelike
    kt = kernel_causal_type(kernel_basis(two_form(2, {(1, 2): 1.0})))
    assert kt.tag == "Timelike"
    # boost in n=2: kernel is the spatial axis 2 -> Spacelike
    kt = kernel_causal_type(kernel_basis(two_form(2, {(0, 1): 1.0})))
    assert kt.tag == "Spacelike"
    # null 2-form: kernel spanned by the null direction e0 + e2
    kt = kernel_causal_type(kernel_basis(two_form(2, {(0, 1): 1.0, (1, 2): 1.0})))
    assert kt.tag == "Null"
    # zero form
    kt = kernel_causal_type(kernel_basis(TwoForm(np.zeros((3, 3)))))
    assert kt.tag == "Full"


def test_degenerate_signature_rejected():
    with pytest.raises(DegenerateSignature):
        kernel_causal_type([np.array([1.0, 0.0, 0.0]), np.array([1.0, 0.0, 0.0])])


def test_invariants_are_lorentz_invariant():
    from minkstring.core import act_lorentz_2form
    from minkstring.randoms import random_lorentz

    rng = np.random.default_rng(7)
    F = two_form(3, {(0, 1): 0.8, (2, 3): 1.1})
    spec1, kt1 = invariants(F)
    for _ in range(10):
        F2 = act_lorentz_2form(random_lorentz(rng, 3), F)
        spec2, kt2 = invariants(F2)
        assert kt2.tag == kt1.tag
        assert spec2.real_pair == pytest.approx(spec1.real_pair)
        assert np.allclose(spec2.imag_moduli, spec1.imag_moduli)
