"""Unit tests for Killing-field canonical forms and classification."""

import numpy as np
import pytest

from conftest import random_killing_class
from minkstring.core import KillingField, TwoForm, act_poincare, eta
from minkstring.errors import (
    DimensionTooSmall,
    NotCanonical,
    ParamViolation,
    ZeroField,
)
from minkstring.killing import (
    KillingClass,
    canonical_killing,
    classify_killing,
    decompose_blocks,
    reduce_translation,
)
from minkstring.randoms import random_poincare


def test_param_validation():
    with pytest.raises(ParamViolation):
        KillingClass("a", 1, f0=1.0)  # f0 must be negative
    with pytest.raises(ParamViolation):
        KillingClass("b", 1, fn=-1.0)  # fn must be positive
    with pytest.raises(ParamViolation):
        KillingClass("d", 1, a=-1.0)
    with pytest.raises(ParamViolation):
        KillingClass("g", 2, f0=-1.0, fn=1.0)  # spurious parameter


def test_dimension_guards():
    with pytest.raises(DimensionTooSmall):
        canonical_killing(KillingClass("g", 1, f0=-1.0))  # N-form needs n >= 2
    with pytest.raises(DimensionTooSmall):
        canonical_killing(KillingClass("f", 1, a=1.0, fn=1.0))


def test_canonical_forms_match_tags():
    xi = canonical_killing(KillingClass("c", 1))
    assert np.allclose(xi.f, [-1.0, 1.0])
    assert xi.F.norm() == 0.0

    xi = canonical_killing(KillingClass("g", 2, f0=-0.5))
    assert xi.F.mat[0, 1] == 1.0 and xi.F.mat[1, 2] == 1.0
    assert np.allclose(xi.f, [-0.5, 0.0, 0.0])


def test_decompose_blocks_roundtrip():
    xi = canonical_killing(KillingClass("n", 5, b=(1.3,), fn=0.7))
    dec = decompose_blocks(xi.F)
    assert len(dec.s_blocks) == 1
    assert dec.n_block and dec.o_indices == (5,)


def test_decompose_blocks_rejects_generic():
    rng = np.random.default_rng(0)
    from minkstring.randoms import random_two_form

    with pytest.raises(NotCanonical):
        decompose_blocks(random_two_form(rng, 3))


def test_zero_field_rejected():
    with pytest.raises(ZeroField):
        classify_killing(KillingField(TwoForm(np.zeros((3, 3))), np.zeros(3)))


def test_reduce_translation_rotation_block():
    """A translation inside a rotation plane is absorbed entirely."""
    F = canonical_killing(KillingClass("e", 2, b=(2.0,), f0=-1.0)).F
    f = np.array([-1.0, 0.7, -0.4])
    f_red, g = reduce_translation(F, f)
    assert np.allclose(f_red, [-1.0, 0.0, 0.0], atol=1e-12)
    # g is a pure translation preserving F
    assert np.allclose(g.lam.mat, np.eye(3))


def test_classified_witness_maps_to_canonical():
    rng = np.random.default_rng(42)
    for tag in "adgjn":
        for n in range(1, 8):
            try:
                cls = random_killing_class(tag, n, rng)
            except (DimensionTooSmall, ParamViolation):
                continue
            xi0 = canonical_killing(cls)
            h = random_poincare(rng, n)
            xi = act_poincare(h, xi0)
            got, g = classify_killing(xi)
            out = act_poincare(g, xi)
            tgt = canonical_killing(got)
            assert np.allclose(out.F.mat, tgt.F.mat, atol=1e-7)
            assert np.allclose(out.f, tgt.f, atol=1e-7 * (1 + np.abs(xi.f).max()))
            break


def test_sign_conventions_normalized():
    """A time-reversed timelike translation still lands in class (a)."""
    xi = KillingField(TwoForm(np.zeros((3, 3))), np.array([2.0, 0.0, 0.0]))
    cls, _ = classify_killing(xi)
    assert cls.tag == "a" and cls.f0 == pytest.approx(-2.0)


def test_killing_field_norm_function():
    xi = canonical_killing(KillingClass("d", 2, a=1.5))
    x = np.array([1.0, 0.0, 0.0])
    # boost field has squared norm a^2 (x0^2 - x1^2) at (1,0,0)
    v = xi.covector_at(x)
    assert v @ eta(2) @ v == pytest.approx(2.25)
