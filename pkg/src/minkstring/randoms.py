"""Seeded random generators for property checks and the verify command."""

import numpy as np

from .core import LorentzMap, PoincareMap, TwoForm

__all__ = [
    "random_rotation",
    "random_lorentz",
    "random_poincare",
    "random_two_form",
]


def random_rotation(rng, m):
    """Haar-ish random element of SO(m) via QR of a Gaussian matrix."""
    if m == 0:
        return np.zeros((0, 0))
    a = rng.standard_normal((m, m))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def boost_matrix(n, axis, chi):
    """Boost along a spatial axis with rapidity chi."""
    L = np.eye(n + 1)
    c, s = np.cosh(chi), np.sinh(chi)
    L[0, 0] = c
    L[0, axis] = -s
    L[axis, 0] = -s
    L[axis, axis] = c
    return L


def random_lorentz(rng, n, max_rapidity=2.0):
    """Random proper orthochronous Lorentz map: rotation * boost * rotation."""
    r1 = np.eye(n + 1)
    r1[1:, 1:] = random_rotation(rng, n)
    r2 = np.eye(n + 1)
    r2[1:, 1:] = random_rotation(rng, n)
    chi = rng.uniform(-max_rapidity, max_rapidity)
    return LorentzMap(r1 @ boost_matrix(n, 1, chi) @ r2)


def random_poincare(rng, n, max_rapidity=2.0, max_translation=10.0):
    lam = random_lorentz(rng, n, max_rapidity)
    c = rng.uniform(-max_translation, max_translation, size=n + 1)
    return PoincareMap(lam, c)


def random_two_form(rng, n, scale=1.0):
    a = rng.standard_normal((n + 1, n + 1)) * scale
    return TwoForm(0.5 * (a - a.T))
