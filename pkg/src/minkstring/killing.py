"""Poincare classification of Killing fields on R^{n,1} into 14 canonical types.

A Killing field xi = (F, f) acts as the covector field xi_nu(x) = F_{mu nu} x^mu
+ f_nu.  After the 2-form F is brought to canonical form, the residual freedom
is the stabilizer G_F of F; reduce_translation uses translations, rotations of
the free coordinates, boosts and null shears inside G_F to normalize f.  The
result is one of 14 types (tags a..n), each returned with a PoincareMap
witness g such that act_poincare(g, xi) equals the canonical representative.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL
from .core import (
    LorentzMap,
    KillingField,
    PoincareMap,
    act_poincare,
    compose,
    identity_map,
    minkowski_inner,
)
from .errors import (
    ClassificationUnstable,
    DimensionTooSmall,
    NotCanonical,
    ParamViolation,
    ZeroField,
)
from .twoform import (
    TwoFormClass,
    canonical_2form_matrix,
    canonicalize_2form,
    _boost,
    _lightcone_scale,
    _shear_null,
    _spatial_rotation,
)

__all__ = [
    "BlockDecomposition",
    "KillingClass",
    "decompose_blocks",
    "reduce_translation",
    "classify_killing",
    "canonical_killing",
]

DEMOTE_TOL = 1e-10

# tag -> (F class tag, translation pattern); pattern: "f0", "fn", "null", "none"
_TAG_STRUCTURE = {
    "a": ("a", "f0"),
    "b": ("a", "fn"),
    "c": ("a", "null"),
    "d": ("c", "none"),
    "e": ("b", "f0"),
    "f": ("c", "fn"),
    "g": ("e", "f0"),
    "h": ("b", "fn"),
    "i": ("b", "null"),
    "j": ("d", "none"),
    "k": ("e", "fn"),
    "l": ("d", "fn"),
    "m": ("f", "f0"),
    "n": ("f", "fn"),
}
_STRUCTURE_TAG = {v: k for k, v in _TAG_STRUCTURE.items()}

# highest coordinate index occupied by each canonical F class (r rotation planes)
def _top_coord(ftag, r):
    return {"a": -1, "b": 2 * r, "c": 1, "d": 2 * r + 1, "e": 2, "f": 2 * r + 2}[ftag]


@dataclass(frozen=True)
class KillingClass:
    """Canonical Killing type: tag a..n, ambient dim, continuous parameters."""

    tag: str
    dim: int
    a: float | None = None
    b: tuple[float, ...] = ()
    f0: float | None = None
    fn: float | None = None

    def __post_init__(self):
        if self.tag not in _TAG_STRUCTURE:
            raise ParamViolation(f"unknown Killing class {self.tag!r}")
        ftag, pat = _TAG_STRUCTURE[self.tag]
        if ftag in "cd":
            if self.a is None or self.a <= 0:
                raise ParamViolation(f"class ({self.tag}) requires a > 0")
        elif self.a is not None:
            raise ParamViolation(f"class ({self.tag}) carries no boost parameter")
        if ftag in "bdf":
            if not self.b or any(x <= 0 for x in self.b):
                raise ParamViolation(f"class ({self.tag}) requires positive b")
            if any(self.b[i] < self.b[i + 1] for i in range(len(self.b) - 1)):
                raise ParamViolation("rotation strengths must be descending")
        elif self.b:
            raise ParamViolation(f"class ({self.tag}) carries no rotation parameters")
        if pat == "f0":
            if self.f0 is None or self.f0 > 0:
                raise ParamViolation(f"class ({self.tag}) requires f0 <= 0")
            if self.tag == "a" and self.f0 >= 0:
                raise ParamViolation("class (a) requires f0 < 0")
            if self.fn is not None:
                raise ParamViolation(f"class ({self.tag}) carries no fn")
        elif pat == "fn":
            if self.fn is None or self.fn <= 0:
                raise ParamViolation(f"class ({self.tag}) requires fn > 0")
            if self.f0 is not None:
                raise ParamViolation(f"class ({self.tag}) carries no f0")
        else:
            if self.f0 is not None or self.fn is not None:
                raise ParamViolation(f"class ({self.tag}) carries no f parameters")

    @property
    def r(self):
        return len(self.b)

    @property
    def two_form_class(self):
        ftag = _TAG_STRUCTURE[self.tag][0]
        return TwoFormClass(ftag, a=self.a if ftag in "cd" else None, b=self.b)


def canonical_killing(cls):
    """The exact canonical (F, f) pair of a class in its own dimension."""
    n = cls.dim
    ftag, pat = _TAG_STRUCTURE[cls.tag]
    F = canonical_2form_matrix(cls.two_form_class, n)
    top = _top_coord(ftag, cls.r)
    f = np.zeros(n + 1)
    if pat == "f0":
        f[0] = cls.f0
    elif pat == "fn":
        if n <= top:
            raise DimensionTooSmall(
                f"class ({cls.tag}) needs a free coordinate: n >= {top + 1}"
            )
        f[n] = cls.fn
    elif pat == "null":
        if n <= max(top, 0):
            raise DimensionTooSmall(f"class ({cls.tag}) needs n >= {max(top, 0) + 1}")
        f[0], f[n] = -1.0, 1.0
    return KillingField(F, f)


@dataclass(frozen=True)
class BlockDecomposition:
    """Index partition of a canonical F: S blocks, optional N triple, O rest."""

    s_blocks: tuple[tuple[tuple[int, int], float], ...]
    n_block: tuple[int, int, int] | None
    o_indices: tuple[int, ...]


def decompose_blocks(F):
    """Read the S/N/O block partition off a canonical F matrix."""
    n = F.n
    M = F.mat
    scale = max(F.norm(), 1.0)
    s_blocks = []
    n_block = None
    used = set()

    if abs(M[0, 1]) > 0 and n >= 2 and abs(M[1, 2]) > 0:
        if abs(M[0, 1] - 1) > 1e-12 * scale or abs(M[1, 2] - 1) > 1e-12 * scale:
            raise NotCanonical("N block must have unit strengths")
        n_block = (0, 1, 2)
        used |= {0, 1, 2}
        start = 3
    elif abs(M[0, 1]) > 0:
        s_blocks.append(((0, 1), M[0, 1]))
        used |= {0, 1}
        start = 2
    elif n >= 2 and abs(M[1, 2]) > 0:
        start = 1
    else:
        start = n + 1
        if F.norm() > 1e-12:
            raise NotCanonical("nonzero F with no leading block")

    i = start
    while i + 1 <= n and abs(M[i, i + 1]) > 0:
        s_blocks.append(((i, i + 1), M[i, i + 1]))
        used |= {i, i + 1}
        i += 2

    o_indices = tuple(k for k in range(n + 1) if k not in used)

    # verify the pattern reproduces F exactly
    R = np.zeros_like(M)
    if n_block:
        R[0, 1] = R[1, 2] = 1.0
        R[1, 0] = R[2, 1] = -1.0
    for (p, q), s in s_blocks:
        R[p, q], R[q, p] = s, -s
    if np.max(np.abs(R - M)) > 1e-12 * scale:
        raise NotCanonical("F does not match any canonical block pattern")
    rot = [s for (p, q), s in s_blocks if p != 0]
    if any(s <= 0 for s in rot) or any(
        rot[i] < rot[i + 1] for i in range(len(rot) - 1)
    ):
        raise NotCanonical("rotation strengths not descending positive")
    if s_blocks and s_blocks[0][0] == (0, 1) and s_blocks[0][1] <= 0:
        raise NotCanonical("boost strength must be positive")
    return BlockDecomposition(tuple(s_blocks), n_block, o_indices)


# ---------------------------------------------------------------------------
# stabilizer moves used by reduce_translation


def _time_flip(n):
    L = np.eye(n + 1)
    L[0, 0] = -1.0
    return LorentzMap(L, check=False)


def _coord_flip(n, coords):
    L = np.eye(n + 1)
    for i in coords:
        L[i, i] = -1.0
    return LorentzMap(L, check=False)


class _Reducer:
    """Accumulates G_F moves acting on (F, f) and composes the witness."""

    def __init__(self, F, f, tol):
        self.F = F
        self.n = F.n
        self.f = np.asarray(f, float).copy()
        self.g = identity_map(F.n)
        self.tol = tol
        self.scale = 1.0 + float(np.linalg.norm(f)) + F.norm()

    def apply(self, step):
        xi = act_poincare(step, KillingField(self.F, self.f))
        drift = np.max(np.abs(xi.F.mat - self.F.mat))
        if drift > 1e-10 * (1.0 + self.F.norm()):
            raise ClassificationUnstable(
                f"stabilizer move perturbed F by {drift:.3e}", margin=drift
            )
        self.f = xi.f
        self.g = compose(step, self.g)

    def translate(self, c):
        self.apply(PoincareMap(LorentzMap.identity(self.n), np.asarray(c, float)))

    def lorentz(self, lam):
        self.apply(PoincareMap(lam, np.zeros(self.n + 1)))


def _reduce_o_block(red, o_indices, demote):
    """Normalize the residual covector on an O block containing x^0.

    Produces one of: 0, f0 dx^0 (f0 < 0), fn dx^n (fn > 0), -dx^0 + dx^n.
    """
    n = red.n
    spat = [i for i in o_indices if i != 0]
    v = red.f[list(o_indices)]
    if np.linalg.norm(v) <= demote:
        red.f[list(o_indices)] = 0.0
        return
    # rotate the spatial part onto the last free coordinate
    if spat:
        w = red.f[spat]
        nw = np.linalg.norm(w)
        if nw > demote:
            t = np.zeros(len(spat))
            t[-1] = 1.0
            red.lorentz(_spatial_rotation(n, spat, w / nw, t))
        else:
            red.f[spat] = 0.0
    last = spat[-1] if spat else None
    f0 = red.f[0]
    fl = red.f[last] if last is not None else 0.0
    if abs(fl) <= demote:
        fl = 0.0
    if abs(f0) <= demote:
        f0 = 0.0
    q = -f0 * f0 + fl * fl
    if fl == 0.0:  # timelike already aligned
        if f0 > 0:
            red.lorentz(_time_flip(n))
        return
    if f0 == 0.0:  # spacelike already aligned
        if red.f[last] < 0:
            red.lorentz(_coord_flip(n, [last]))
        return
    if abs(q) <= demote * red.scale * max(abs(f0), abs(fl)):
        # null: normalize sign and scale to -dx^0 + dx^last
        if red.f[last] < 0:
            red.lorentz(_coord_flip(n, [last]))
        if red.f[0] > 0:
            red.lorentz(_time_flip(n))
        s = abs(red.f[0])
        cand = _lightcone_scale(n, 0, last, s)
        red.lorentz(cand)
        if abs(red.f[0] + 1.0) > 1e-6:
            red.lorentz(_lightcone_scale(n, 0, last, 1.0 / (s * s)))
        red.f[0], red.f[last] = -1.0, 1.0
        return
    if q < 0:  # timelike: boost away the spatial component
        chi = np.arctanh(fl / f0)
        red.lorentz(_boost(n, last, chi))
        if abs(red.f[last]) > 1e-6 * abs(red.f[0]):
            red.lorentz(_boost(n, last, -2 * chi))
        red.f[last] = 0.0
        if red.f[0] > 0:
            red.lorentz(_time_flip(n))
    else:  # spacelike: boost away the time component
        chi = np.arctanh(f0 / fl)
        red.lorentz(_boost(n, last, chi))
        if abs(red.f[0]) > 1e-6 * abs(red.f[last]):
            red.lorentz(_boost(n, last, -2 * chi))
        red.f[0] = 0.0
        if red.f[last] < 0:
            red.lorentz(_coord_flip(n, [last]))


def _absorb_n_translation(red):
    """Zero f_1, f_2 on the N block by a translation; f_0 gains f_2."""
    c = np.zeros(red.n + 1)
    c[0] = red.f[1]
    c[1] = red.f[2]
    red.translate(c)


def reduce_translation(F_canonical, f, tol=None):
    """Reduce f over the stabilizer of a canonical F; returns (f_canonical, g)."""
    tol = DEFAULT_TOL if tol is None else tol
    bd = decompose_blocks(F_canonical)
    n = F_canonical.n
    red = _Reducer(F_canonical, f, tol)
    demote = DEMOTE_TOL * red.scale

    # translations kill f on every invertible S block
    if bd.s_blocks:
        c = np.zeros(n + 1)
        for (p, q), s in bd.s_blocks:
            c[q] = -red.f[p] / s
            c[p] = red.f[q] / s
        red.translate(c)

    if bd.n_block:
        _absorb_n_translation(red)
        free = [i for i in bd.o_indices]
        if free:
            w = red.f[free]
            nw = np.linalg.norm(w)
            if nw > demote:
                t = np.zeros(len(free))
                t[-1] = 1.0
                red.lorentz(_spatial_rotation(n, free, w / nw, t))
            else:
                red.f[free] = 0.0
        last = free[-1] if free else None
        f0 = red.f[0] if abs(red.f[0]) > demote else 0.0
        fl = red.f[last] if last is not None and abs(red.f[last]) > demote else 0.0
        if f0 != 0.0 and fl != 0.0:
            # null shear in the (x^0, x^2, x^last) factor kills f_last;
            # its coefficient is exactly affine in beta
            def fn_after(beta):
                step = PoincareMap(
                    _shear_null(n, 0, 2, [last], np.array([beta])), np.zeros(n + 1)
                )
                return act_poincare(step, KillingField(red.F, red.f)).f[last]

            v0, v1 = fn_after(0.0), fn_after(1.0)
            beta = -v0 / (v1 - v0)
            red.lorentz(_shear_null(n, 0, 2, [last], np.array([beta])))
            _absorb_n_translation(red)
            red.f[last] = 0.0
            fl = 0.0
            f0 = red.f[0] if abs(red.f[0]) > demote else 0.0
        if fl == 0.0:
            if f0 > 0:
                red.lorentz(_coord_flip(n, [0, 1, 2]))
        else:
            if red.f[last] < 0:
                red.lorentz(_coord_flip(n, [last]))
    elif bd.s_blocks and bd.s_blocks[0][0] == (0, 1):
        # boost classes: residual lives on free spatial coordinates
        free = list(bd.o_indices)
        if free:
            w = red.f[free]
            nw = np.linalg.norm(w)
            if nw > demote:
                t = np.zeros(len(free))
                t[-1] = 1.0
                red.lorentz(_spatial_rotation(n, free, w / nw, t))
            else:
                red.f[free] = 0.0
    else:
        # O block contains x^0 (rotation-only or zero F)
        _reduce_o_block(red, bd.o_indices, demote)

    # snap sub-threshold leftovers and return
    f_can = red.f.copy()
    f_can[np.abs(f_can) <= demote] = 0.0
    return f_can, red.g


def classify_killing(xi, tol=None):
    """Classify a Killing field; returns (KillingClass, witness PoincareMap)."""
    tol = DEFAULT_TOL if tol is None else tol
    n = xi.F.n
    scale = xi.norm()
    if scale == 0.0:
        raise ZeroField("the zero Killing field has no canonical type")

    fcls, W = canonicalize_2form(xi.F, tol)
    F_can = canonical_2form_matrix(fcls, n)
    xi1 = act_poincare(PoincareMap(W, np.zeros(n + 1)), xi)
    f_can, g_red = reduce_translation(F_can, xi1.f, tol)
    g = compose(g_red, PoincareMap(W, np.zeros(n + 1)))

    demote = DEMOTE_TOL * (1.0 + scale)
    f0 = f_can[0] if abs(f_can[0]) > demote else 0.0
    fn = f_can[n] if n >= 1 and abs(f_can[n]) > demote else 0.0
    if fcls.tag == "a" and f0 == 0.0 and fn == 0.0:
        raise ZeroField("Killing field vanished under reduction")

    if f0 != 0.0 and fn != 0.0:
        pat = "null"
    elif fn != 0.0:
        pat = "fn"
    elif f0 != 0.0 or fcls.tag in ("b", "e", "f"):
        pat = "f0"  # f0 <= 0 boundary includes 0 for rotation/N classes
    else:
        pat = "none"
    tag = _STRUCTURE_TAG[(fcls.tag, pat)]
    cls = KillingClass(
        tag,
        n,
        a=fcls.a,
        b=fcls.b,
        f0=f0 if pat == "f0" else None,
        fn=fn if pat == "fn" else None,
    )

    target = canonical_killing(cls)
    out = act_poincare(g, xi)
    resid = max(
        np.max(np.abs(out.F.mat - target.F.mat)), np.max(np.abs(out.f - target.f))
    )
    if resid > 1e-8 * (1.0 + scale):
        raise ClassificationUnstable(
            f"Killing witness residual {resid:.3e}", margin=resid
        )
    return cls, g
