"""Two-dimensional noncommutative Killing algebras: [xi#, eta#] = xi#.

The bracket relation forces #F to be nilpotent, so xi is either a null
translation (F = 0, f null) or the null rotation with F = dx^0dx^1 + dx^1dx^2.
Each case admits a canonical pair form (built by canonical_pair);
classify_pair reduces an arbitrary valid pair to it with a single PoincareMap
witness applied to both fields.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL
from .core import (
    KillingField,
    LorentzMap,
    PoincareMap,
    TwoForm,
    act_poincare,
    compose,
    eta,
    identity_map,
    minkowski_inner,
    sharp,
)
from .errors import (
    ClassificationUnstable,
    DimensionTooSmall,
    ImpossibleTranslation,
    NotABracketPair,
    ParamViolation,
    ZeroField,
)
from .killing import _coord_flip, _time_flip
from .twoform import (
    _embed_skew,
    _lightcone_scale,
    _shear_null,
    _spatial_rotation,
    canonical_2form_matrix,
    TwoFormClass,
)

__all__ = [
    "LiePairClass",
    "verify_bracket",
    "bracket_residuals",
    "has_isolated_nonzero",
    "nilpotency_index",
    "classify_pair",
    "canonical_pair",
]


@dataclass(frozen=True)
class LiePairClass:
    """family 1: null-rotation xi; family 2: null-translation xi."""

    family: int
    b: tuple[float, ...] = ()
    q: float = 0.0

    def __post_init__(self):
        if self.family not in (1, 2):
            raise ParamViolation("family must be 1 or 2")
        if self.q < 0:
            raise ParamViolation("q must be nonnegative")
        if any(x <= 0 for x in self.b) or any(
            self.b[i] < self.b[i + 1] for i in range(len(self.b) - 1)
        ):
            raise ParamViolation("rotation strengths must be descending positive")

    @property
    def r(self):
        return len(self.b)


def canonical_pair(cls, n):
    """The exact canonical (xi, eta) of a family in dimension n."""
    r = cls.r
    if cls.family == 1:
        top = 2 * r + 2
        if n < top:
            raise DimensionTooSmall(f"family 1 with r={r} needs n >= {top}")
        if cls.q > 0 and n <= top:
            raise DimensionTooSmall("family 1 with q > 0 needs a free coordinate")
        xi = KillingField(
            canonical_2form_matrix(TwoFormClass("e"), n), np.zeros(n + 1)
        )
        planes = [(0, 2, 1.0)] + [
            (2 * i + 3, 2 * i + 4, b) for i, b in enumerate(cls.b)
        ]
    else:
        top = 2 * r + 1 if r else 1
        if n < top:
            raise DimensionTooSmall(f"family 2 with r={r} needs n >= {top}")
        if cls.q > 0 and n <= top:
            raise DimensionTooSmall("family 2 with q > 0 needs a free coordinate")
        f = np.zeros(n + 1)
        f[0], f[1] = -1.0, 1.0
        xi = KillingField(TwoForm.zero(n), f)
        planes = [(0, 1, 1.0)] + [
            (2 * i + 2, 2 * i + 3, b) for i, b in enumerate(cls.b)
        ]
    g = np.zeros(n + 1)
    g[n] = cls.q
    eta_field = KillingField(TwoForm.from_planes(n, planes), g)
    return xi, eta_field


def bracket_residuals(xi, eta_field):
    """Residuals of the two bracket conditions (matrix part, translation part)."""
    e = eta(xi.F.n)
    MF, MG = sharp(xi.F), sharp(eta_field.F)
    comm = MF @ MG - MG @ MF
    r1 = float(np.linalg.norm(comm - MF))
    lhs = (MG + np.eye(MG.shape[0])) @ (e @ xi.f)
    rhs = MF @ (e @ eta_field.f)
    r2 = float(np.linalg.norm(lhs - rhs))
    return r1, r2


def verify_bracket(xi, eta_field, tol=None):
    tol = DEFAULT_TOL if tol is None else tol
    r1, r2 = bracket_residuals(xi, eta_field)
    return r1 <= tol and r2 <= tol


def has_isolated_nonzero(u, tol):
    """True iff some superdiagonal entry above tol has no neighbor above tol."""
    u = np.asarray(u, float)
    big = np.abs(u) > tol
    for i in range(u.size):
        if big[i]:
            left = big[i - 1] if i > 0 else False
            right = big[i + 1] if i + 1 < u.size else False
            if not (left or right):
                return True
    return False


def nilpotency_index(F, tol=None):
    """Smallest k with (#F)^k = 0 within tol-scaled norm, or None."""
    tol = DEFAULT_TOL if tol is None else tol
    M = sharp(F)
    scale = max(np.linalg.norm(M, 2), 1.0)
    P = np.eye(M.shape[0])
    for k in range(1, M.shape[0] + 1):
        P = P @ M
        if np.linalg.norm(P, 2) <= tol * scale**k:
            return k
    return None


def _norm_scale(xi, eta_field):
    return 1.0 + xi.norm() + eta_field.norm()


class _PairReducer:
    """Applies Poincare moves to both fields and accumulates one witness."""

    def __init__(self, xi, eta_field):
        self.xi = xi
        self.eta = eta_field
        self.n = xi.F.n
        self.g = identity_map(self.n)

    def apply(self, step):
        self.xi = act_poincare(step, self.xi)
        self.eta = act_poincare(step, self.eta)
        self.g = compose(step, self.g)

    def lorentz(self, lam):
        self.apply(PoincareMap(lam, np.zeros(self.n + 1)))

    def translate(self, c):
        self.apply(PoincareMap(LorentzMap.identity(self.n), np.asarray(c, float)))


def _shear_solve(red, coords, read_vals):
    """Null shear in the (x^0-x^2 for family 1) plane zeroing affine targets.

    read_vals(eta) must be exactly affine in the shear parameters; solved
    column by column, then verified.
    """
    m = len(coords)
    if m == 0:
        return
    v0 = read_vals(red.eta)
    J = np.empty((len(v0), m))
    for k in range(m):
        b = np.zeros(m)
        b[k] = 1.0
        step = PoincareMap(
            _shear_null(red.n, 0, red._shear_q, coords, b), np.zeros(red.n + 1)
        )
        J[:, k] = read_vals(act_poincare(step, red.eta)) - v0
    beta, *_ = np.linalg.lstsq(J, -v0, rcond=None)
    red.lorentz(_shear_null(red.n, 0, red._shear_q, coords, beta))
    resid = np.max(np.abs(read_vals(red.eta)))
    if resid > 1e-7 * _norm_scale(red.xi, red.eta):
        raise ClassificationUnstable(
            f"shear reduction left residual {resid:.3e}", margin=resid
        )


def _rotate_tail_to_q(red, free):
    """Rotate the free-coordinate part of g onto +dx^n; returns q >= 0."""
    n = red.n
    demote = 1e-10 * _norm_scale(red.xi, red.eta)
    if not free:
        return 0.0
    w = red.eta.f[free]
    nw = float(np.linalg.norm(w))
    if nw <= demote:
        return 0.0
    t = np.zeros(len(free))
    t[-1] = 1.0
    red.lorentz(_spatial_rotation(n, free, w / nw, t))
    return float(red.eta.f[n])


def _classify_family2(xi, eta_field, tol):
    n = xi.F.n
    scale = _norm_scale(xi, eta_field)
    f = xi.f
    q_f = minkowski_inner(f, f)  # covector norm w.r.t. the inverse metric
    if abs(q_f) > 1e-8 * scale**2:
        raise ImpossibleTranslation(
            "a timelike or spacelike translation admits no bracket partner"
        )
    red = _PairReducer(xi, eta_field)
    red._shear_q = 1
    # normalize xi to -dx^0 + dx^1
    w = red.xi.f[1:]
    nw = np.linalg.norm(w)
    t = np.zeros(n)
    t[0] = 1.0
    red.lorentz(_spatial_rotation(n, list(range(1, n + 1)), w / nw, t))
    if red.xi.f[0] > 0:
        red.lorentz(_time_flip(n))
    s = abs(red.xi.f[0])
    red.lorentz(_lightcone_scale(n, 0, 1, s))
    if abs(red.xi.f[0] + 1.0) > 1e-6:
        red.lorentz(_lightcone_scale(n, 0, 1, 1.0 / (s * s)))

    # shear away the (dx^0 - dx^1) dx^k components of G, k >= 2
    coords = list(range(2, n + 1))
    _shear_solve(red, coords, lambda ef: ef.F.mat[0, 2:])
    # rotate the spatial block of G to canonical planes at (2,3),(4,5),...
    if coords:
        lam, bs = _embed_skew(
            n, coords, red.eta.F.mat[2:, 2:], tol, scale=max(red.eta.F.norm(), 1.0)
        )
        red.lorentz(lam)
    else:
        bs = ()
    # translation kills g on the invertible blocks of G
    block_pairs = [(0, 1, red.eta.F.mat[0, 1])] + [
        (2 + 2 * i, 3 + 2 * i, bs[i]) for i in range(len(bs))
    ]
    c = np.zeros(n + 1)
    gvec = red.eta.f
    for p, q, sgn in block_pairs:
        c[q] = -gvec[p] / sgn
        c[p] = gvec[q] / sgn
    # a translation along xi's block must not disturb f (F = 0), it does not
    red.translate(c)
    free = [i for i in range(2 + 2 * len(bs), n + 1)]
    qv = _rotate_tail_to_q(red, free)
    return LiePairClass(2, tuple(bs), qv), red


def _classify_family1(xi, eta_field, tol):
    from .twoform import canonicalize_2form

    n = xi.F.n
    fcls, W = canonicalize_2form(xi.F, tol)
    if fcls.tag != "e":
        raise NotABracketPair(
            f"F of a bracket pair must vanish or be the null rotation, got ({fcls.tag})"
        )
    red = _PairReducer(xi, eta_field)
    red._shear_q = 2
    red.lorentz(W)
    # alpha-shear (coordinate 1) kills the (dx^0-dx^2)dx^1 part of G,
    # then the beta-shear over the tail kills (dx^0-dx^2)dx^k, k >= 3
    _shear_solve(red, [1], lambda ef: ef.F.mat[0:1, 1])
    tail = list(range(3, n + 1))
    _shear_solve(red, tail, lambda ef: ef.F.mat[0, 3:])
    if abs(red.eta.F.mat[0, 2] - 1.0) > 1e-7 * _norm_scale(red.xi, red.eta):
        raise NotABracketPair("G lacks the unit dx^0 dx^2 component")
    if tail:
        lam, bs = _embed_skew(
            n, tail, red.eta.F.mat[3:, 3:], tol, scale=max(red.eta.F.norm(), 1.0)
        )
        red.lorentz(lam)
    else:
        bs = ()
    # combined translation: kill g on the blocks of G and f entirely
    block_coords = [0, 1, 2] + list(range(3, 3 + 2 * len(bs)))
    targets = len(block_coords)

    def residuals(xi_f, eta_f):
        out = np.empty(2 + targets)
        out[0] = xi_f.f[0]
        out[1] = xi_f.f[1]
        out[2:] = eta_f.f[block_coords]
        return out

    v0 = residuals(red.xi, red.eta)
    J = np.empty((v0.size, targets))
    for k, i in enumerate(block_coords):
        c = np.zeros(n + 1)
        c[i] = 1.0
        step = PoincareMap(LorentzMap.identity(n), c)
        J[:, k] = (
            residuals(act_poincare(step, red.xi), act_poincare(step, red.eta)) - v0
        )
    csol, *_ = np.linalg.lstsq(J, -v0, rcond=None)
    c = np.zeros(n + 1)
    c[block_coords] = csol
    red.translate(c)
    leftover = max(
        float(np.max(np.abs(red.xi.f))),
        float(np.max(np.abs(red.eta.f[block_coords]))),
    )
    if leftover > 1e-7 * _norm_scale(red.xi, red.eta):
        raise NotABracketPair(
            f"translation parts are incompatible with the bracket (residual {leftover:.1e})"
        )
    free = [i for i in range(3 + 2 * len(bs), n + 1)]
    qv = _rotate_tail_to_q(red, free)
    return LiePairClass(1, tuple(bs), qv), red


def classify_pair(xi, eta_field, tol=None):
    """Classify a bracket pair; returns (LiePairClass, shared witness)."""
    tol = DEFAULT_TOL if tol is None else tol
    n = xi.F.n
    scale = _norm_scale(xi, eta_field)
    if xi.norm() == 0.0:
        raise ZeroField("xi must be a nonzero Killing field")
    if xi.F.norm() <= tol * scale:
        # translation field: the bracket demands a null f (reported before
        # the residual check so callers can distinguish the failure mode)
        q_f = minkowski_inner(xi.f, xi.f)
        if abs(q_f) > 1e-8 * scale**2:
            raise ImpossibleTranslation(
                "a timelike or spacelike translation admits no bracket partner"
            )
    r1, r2 = bracket_residuals(xi, eta_field)
    if max(r1, r2) > 1e3 * tol * scale:
        raise NotABracketPair(
            f"bracket residuals ({r1:.2e}, {r2:.2e}) exceed tolerance"
        )

    if xi.F.norm() <= tol * scale:
        cls, red = _classify_family2(xi, eta_field, tol)
    else:
        cls, red = _classify_family1(xi, eta_field, tol)

    # demote a vanishing q and verify the witness on both fields
    if cls.q <= 1e-10 * scale:
        cls = LiePairClass(cls.family, cls.b, 0.0)
    xi_c, eta_c = canonical_pair(cls, n)
    out_xi = act_poincare(red.g, xi)
    out_eta = act_poincare(red.g, eta_field)
    resid = max(
        np.max(np.abs(out_xi.F.mat - xi_c.F.mat)),
        np.max(np.abs(out_xi.f - xi_c.f)),
        np.max(np.abs(out_eta.F.mat - eta_c.F.mat)),
        np.max(np.abs(out_eta.f - eta_c.f)),
    )
    if resid > 1e-8 * scale:
        raise ClassificationUnstable(
            f"pair witness residual {resid:.3e}", margin=resid
        )
    return cls, red.g
