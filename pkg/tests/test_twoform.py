"""Unit tests for canonical 2-form matrices and the canonicalization map."""

import numpy as np
import pytest

from conftest import random_twoform_class
from minkstring.core import TwoForm, act_lorentz_2form, eta
from minkstring.errors import DimensionTooSmall, ParamViolation
from minkstring.randoms import random_lorentz
from minkstring.twoform import (
    TwoFormClass,
    canonical_2form_matrix,
    canonicalize_2form,
    skew_canonical,
    superdiagonal_reduce,
)


def test_class_param_validation():
    with pytest.raises(ParamViolation):
        TwoFormClass("c", a=0.0)
    with pytest.raises(ParamViolation):
        TwoFormClass("b", b=())
    with pytest.raises(ParamViolation):
        TwoFormClass("b", b=(1.0, 2.0))  # must be non-increasing
    with pytest.raises(ParamViolation):
        TwoFormClass("e", a=1.0)  # class e carries no boost parameter


def test_canonical_matrices():
    Fc = canonical_2form_matrix(TwoFormClass("c", a=2.0), 2).mat
    expect = np.zeros((3, 3))
    expect[0, 1], expect[1, 0] = 2.0, -2.0
    assert np.array_equal(Fc, expect)

    Fe = canonical_2form_matrix(TwoFormClass("e"), 2).mat
    expect = np.zeros((3, 3))
    expect[0, 1], expect[1, 0] = 1.0, -1.0
    expect[1, 2], expect[2, 1] = 1.0, -1.0
    assert np.array_equal(Fe, expect)

    Fb = canonical_2form_matrix(TwoFormClass("b", b=(1.5,)), 3).mat
    expect = np.zeros((4, 4))
    expect[1, 2], expect[2, 1] = 1.5, -1.5
    assert np.array_equal(Fb, expect)


def test_canonical_matrix_dimension_guard():
    with pytest.raises(DimensionTooSmall):
        canonical_2form_matrix(TwoFormClass("f", b=(1.0,)), 3)


def test_superdiagonal_examples():
    # dx^1 dx^2 at n=2 is already superdiagonal
    F = np.zeros((3, 3))
    F[1, 2], F[2, 1] = 1.0, -1.0
    u, R = superdiagonal_reduce(TwoForm(F))
    assert np.allclose(u, [0.0, 1.0])
    assert np.allclose(R.mat, np.eye(3))

    # dx^1 dx^3 at n=3 needs one spatial rotation
    F = np.zeros((4, 4))
    F[1, 3], F[3, 1] = 1.0, -1.0
    u, R = superdiagonal_reduce(TwoForm(F))
    assert np.isclose(np.abs(u).max(), 1.0)
    assert np.count_nonzero(np.abs(u) > 1e-12) == 1
    # R is spatial: first row/column untouched
    assert np.allclose(R.mat[0], [1, 0, 0, 0]) and np.allclose(R.mat[:, 0], [1, 0, 0, 0])
    out = R.mat @ F @ R.mat.T
    assert np.allclose(np.triu(out, 2), 0.0, atol=1e-12)


def test_skew_canonical_sorted_moduli():
    rng = np.random.default_rng(11)
    A = rng.normal(size=(4, 4))
    H = A - A.T
    R, bs = skew_canonical(H, 1e-9)
    assert all(x >= y for x, y in zip(bs, bs[1:]))
    assert np.allclose(R @ R.T, np.eye(4), atol=1e-12)
    out = R @ H @ R.T
    assert abs(out[0, 1]) == pytest.approx(bs[0])


def test_zero_form_class_a():
    cls, W = canonicalize_2form(TwoForm(np.zeros((4, 4))))
    assert cls.tag == "a"


def test_witness_is_lorentz():
    rng = np.random.default_rng(12)
    for tag in "bcdef":
        for n in range(1, 6):
            try:
                cls = random_twoform_class(tag, n, rng)
            except DimensionTooSmall:
                continue
            F = act_lorentz_2form(random_lorentz(rng, n), canonical_2form_matrix(cls, n))
            got, W = canonicalize_2form(F)
            assert got.tag == tag
            assert np.allclose(W.mat.T @ eta(n) @ W.mat, eta(n), atol=1e-9)


def test_near_degenerate_blocks_merge_cleanly():
    """Two rotation rates differing below tolerance classify stably."""
    cls = TwoFormClass("b", b=(1.0, 1.0))
    F = canonical_2form_matrix(cls, 4)
    got, _ = canonicalize_2form(F)
    assert got.tag == "b"
    assert np.allclose(got.b, (1.0, 1.0))
