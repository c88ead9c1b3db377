"""Minkowski-space primitives.

Conventions used everywhere in the package:

* metric eta = diag(-1, +1, ..., +1), index 0 is time;
* a Lorentz map is stored as the matrix L = Lambda^mu_nu of the coordinate
  change x' = L x + c; the index-lowered matrix Lambda_mu^nu is then
  eta L eta, which for a Lorentz matrix equals the inverse transpose;
* a Killing field is the pair (F, f) of a constant antisymmetric matrix and
  a constant covector, xi_nu(x) = F_{mu nu} x^mu + f_nu.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotLorentz

__all__ = [
    "eta",
    "minkowski_inner",
    "TwoForm",
    "LorentzMap",
    "PoincareMap",
    "KillingField",
    "sharp",
    "sharp_covector",
    "act_lorentz_2form",
    "act_poincare",
    "compose",
    "invert",
    "identity_map",
]


def eta(n):
    """Minkowski metric matrix diag(-1, 1, ..., 1) on R^{n,1}."""
    e = np.eye(n + 1)
    e[0, 0] = -1.0
    return e


def minkowski_inner(u, v):
    """eta(u, v) = -u^0 v^0 + sum_i u^i v^i."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1:
        raise DimensionMismatch(f"incompatible shapes {u.shape} and {v.shape}")
    return float(-u[0] * v[0] + u[1:] @ v[1:])


class TwoForm:
    """Constant antisymmetric matrix F_{mu nu}, stored exactly antisymmetric.

    The constructor antisymmetrizes (F - F^T)/2 and rejects input whose
    symmetric part exceeds 1e-12 relative norm.
    """

    __slots__ = ("mat",)

    def __init__(self, mat):
        mat = np.array(mat, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"2-form must be square, got {mat.shape}")
        sym = 0.5 * (mat + mat.T)
        scale = np.linalg.norm(mat)
        if scale > 0 and np.linalg.norm(sym) > 1e-12 * scale:
            raise ValueError("matrix is not antisymmetric within 1e-12 relative")
        self.mat = 0.5 * (mat - mat.T)
        self.mat.flags.writeable = False

    @property
    def n(self):
        """Spatial dimension (spacetime dimension is n+1)."""
        return self.mat.shape[0] - 1

    def norm(self):
        return float(np.linalg.norm(self.mat, 2))

    def __repr__(self):
        return f"TwoForm(n={self.n}, norm={self.norm():.3g})"

    @classmethod
    def zero(cls, n):
        return cls(np.zeros((n + 1, n + 1)))

    @classmethod
    def from_planes(cls, n, planes):
        """Build sum of u * dx^i dx^j terms from (i, j, u) triples."""
        mat = np.zeros((n + 1, n + 1))
        for i, j, u in planes:
            mat[i, j] += u
            mat[j, i] -= u
        return cls(mat)


class LorentzMap:
    """Lorentz matrix L = Lambda^mu_nu acting as x' = L x."""

    __slots__ = ("mat",)

    def __init__(self, mat, check=True):
        mat = np.array(mat, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"Lorentz map must be square, got {mat.shape}")
        if check:
            n = mat.shape[0] - 1
            e = eta(n)
            defect = np.max(np.abs(mat.T @ e @ mat - e))
            # scale-aware: boost entries grow with rapidity
            tau = 1e-9 * (1.0 + np.max(np.abs(mat)) ** 2)
            if defect > tau:
                raise NotLorentz(f"L^T eta L - eta has max entry {defect:.3e}")
        self.mat = mat
        self.mat.flags.writeable = False

    @property
    def n(self):
        return self.mat.shape[0] - 1

    def lowered(self):
        """Lambda_mu^nu = eta L eta; equals the inverse transpose."""
        e = eta(self.n)
        return e @ self.mat @ e

    def __repr__(self):
        return f"LorentzMap(n={self.n})"

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n + 1), check=False)


@dataclass(frozen=True)
class PoincareMap:
    """Coordinate change x' = L x + c."""

    lam: LorentzMap
    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (self.lam.n + 1,):
            raise DimensionMismatch("translation length does not match Lorentz map")
        object.__setattr__(self, "c", c)

    @property
    def n(self):
        return self.lam.n


@dataclass(frozen=True)
class KillingField:
    """xi = F_{mu nu} x^mu dx^nu + f_nu dx^nu."""

    F: TwoForm
    f: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.shape != (self.F.n + 1,):
            raise DimensionMismatch("covector length does not match 2-form")
        object.__setattr__(self, "f", f)

    @property
    def n(self):
        return self.F.n

    def covector_at(self, x):
        """xi_nu(x) = F_{mu nu} x^mu + f_nu."""
        return self.F.mat.T @ np.asarray(x, dtype=float) + self.f

    def vector_at(self, x):
        """xi^mu(x), index raised with eta."""
        return eta(self.n) @ self.covector_at(x)

    def norm(self):
        return self.F.norm() + float(np.linalg.norm(self.f))


def sharp(F):
    """Mixed operator M^mu_nu = eta^{mu lam} F_{lam nu} (row 0 of F negated)."""
    return eta(F.n) @ F.mat


def sharp_covector(f):
    """f^mu = eta^{mu nu} f_nu (sign flip on the time component)."""
    f = np.asarray(f, dtype=float)
    out = f.copy()
    out[0] = -out[0]
    return out


def act_lorentz_2form(lam, F):
    """Tensor transform of F under x' = L x: F' = K F K^T with K = eta L eta."""
    K = lam.lowered()
    return TwoForm(K @ F.mat @ K.T)


def act_poincare(g, xi):
    """Transform a Killing field under the coordinate change x' = L x + c.

    F'_{mu nu} = Lam_mu^lam Lam_nu^rho F_{lam rho},
    f'_nu = Lam_nu^lam f_lam - F'_{mu nu} c^mu.
    """
    if g.n != xi.n:
        raise DimensionMismatch("Poincare map and Killing field dimensions differ")
    K = g.lam.lowered()
    Fp = TwoForm(K @ xi.F.mat @ K.T)
    fp = K @ xi.f - Fp.mat.T @ g.c
    return KillingField(Fp, fp)


def compose(g2, g1):
    """Composition: apply g1 first, then g2."""
    if g2.n != g1.n:
        raise DimensionMismatch("cannot compose maps of different dimension")
    return PoincareMap(
        LorentzMap(g2.lam.mat @ g1.lam.mat, check=False),
        g2.lam.mat @ g1.c + g2.c,
    )


def invert(g):
    linv = g.lam.lowered().T  # eta L^T eta = L^{-1}
    return PoincareMap(LorentzMap(linv, check=False), -linv @ g.c)


def identity_map(n):
    return PoincareMap(LorentzMap.identity(n), np.zeros(n + 1))
