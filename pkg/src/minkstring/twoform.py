"""Constructive canonical forms of constant 2-forms under the Lorentz group.

Every constant antisymmetric F on R^{n,1} is equivalent to exactly one of

    (a)  0
    (b)  sum_i b_i dx^{2i-1} dx^{2i}                     (rotations)
    (c)  a dx^0 dx^1                                     (boost)
    (d)  a dx^0 dx^1 + sum_i b_i dx^{2i} dx^{2i+1}       (boost + rotations)
    (e)  dx^0 dx^1 + dx^1 dx^2                           (null rotation)
    (f)  dx^0 dx^1 + dx^1 dx^2 + sum_i b_i dx^{2i+1} dx^{2i+2}

with a > 0 and b_1 >= ... >= b_r > 0.  The reduction is built from explicit
Lorentz factors (frame changes, null shears, spatial rotations, boosts)
whose product is returned as a verifiable witness.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOL
from .core import LorentzMap, TwoForm, act_lorentz_2form, minkowski_inner, sharp
from .errors import ClassificationUnstable, DimensionTooSmall, ParamViolation
from .spectral import eigen_structure, kernel_basis, kernel_causal_type

__all__ = [
    "TwoFormClass",
    "superdiagonal_reduce",
    "canonical_2form_matrix",
    "canonicalize_2form",
    "skew_canonical",
]


@dataclass(frozen=True)
class TwoFormClass:
    """Canonical class tag with continuous parameters."""

    tag: str  # one of a..f
    a: float | None = None
    b: tuple[float, ...] = ()

    def __post_init__(self):
        if self.tag not in "abcdef":
            raise ParamViolation(f"unknown 2-form class {self.tag!r}")
        if self.tag in "cd":
            if self.a is None or self.a <= 0:
                raise ParamViolation("classes (c)/(d) require a > 0")
        elif self.a is not None:
            raise ParamViolation(f"class ({self.tag}) carries no boost parameter")
        if self.tag in "bdf":
            bs = self.b
            if not bs or any(x <= 0 for x in bs):
                raise ParamViolation("rotation strengths must be positive")
            if any(bs[i] < bs[i + 1] for i in range(len(bs) - 1)):
                raise ParamViolation("rotation strengths must be descending")
        elif self.b:
            raise ParamViolation(f"class ({self.tag}) carries no rotation parameters")

    @property
    def r(self):
        return len(self.b)


def _plane_indices(tag, r):
    """Rotation-plane index pairs of the canonical matrix for each class."""
    if tag == "b":
        return [(2 * i + 1, 2 * i + 2) for i in range(r)]
    if tag == "d":
        return [(2 * i + 2, 2 * i + 3) for i in range(r)]
    if tag == "f":
        return [(2 * i + 3, 2 * i + 4) for i in range(r)]
    return []


def canonical_2form_matrix(cls, n):
    """The canonical matrix of a class; raises DimensionTooSmall if it cannot fit."""
    r = cls.r
    need = {
        "a": 1,
        "b": 2 * r,
        "c": 1,
        "d": 2 * r + 1,
        "e": 2,
        "f": 2 * r + 2,
    }[cls.tag]
    if n < need:
        raise DimensionTooSmall(f"class ({cls.tag}) with r={r} needs n >= {need}")
    planes = []
    if cls.tag in "cd":
        planes.append((0, 1, cls.a))
    if cls.tag in "ef":
        planes += [(0, 1, 1.0), (1, 2, 1.0)]
    planes += [(i, j, b) for (i, j), b in zip(_plane_indices(cls.tag, r), cls.b)]
    return TwoForm.from_planes(n, planes)


# ---------------------------------------------------------------------------
# elementary Lorentz factors


def _householder_to_axis(w, target):
    """Orthogonal map (Householder or identity) sending unit w to unit target."""
    m = len(w)
    if np.linalg.norm(w - target) < 1e-14:
        return np.eye(m)
    h = w - target
    h /= np.linalg.norm(h)
    return np.eye(m) - 2.0 * np.outer(h, h)


def _spatial_rotation(n, coords, w, target):
    """Embed a rotation on the given spatial coords sending w to target."""
    q = _householder_to_axis(np.asarray(w, float), np.asarray(target, float))
    L = np.eye(n + 1)
    L[np.ix_(coords, coords)] = q
    return LorentzMap(L, check=False)


def _boost(n, axis, chi):
    L = np.eye(n + 1)
    L[0, 0] = L[axis, axis] = np.cosh(chi)
    L[0, axis] = L[axis, 0] = -np.sinh(chi)
    return LorentzMap(L, check=False)


def _null_frame(n, ell, spatial_axis):
    """Lorentz map sending the null vector ell to e_0 + e_axis."""
    ell = np.asarray(ell, float)
    if ell[0] < 0:
        ell = -ell
    ell = ell / ell[0]
    target = np.zeros(n)
    target[spatial_axis - 1] = 1.0
    rot = _spatial_rotation(n, list(range(1, n + 1)), ell[1:], target)
    return rot


def _boost_eigframe(n, v):
    """Lorentz map sending the real null eigenvector v to (e_0 - e_1)/sqrt(2)."""
    v = np.asarray(v, float)
    if v[0] < 0:
        v = -v
    target = np.zeros(n)
    target[0] = -1.0
    rot = _spatial_rotation(n, list(range(1, n + 1)), v[1:] / np.linalg.norm(v[1:]), target)
    chi = -np.log(np.sqrt(2.0) * v[0])
    boost = _boost(n, 1, chi)
    return LorentzMap(boost.mat @ rot.mat, check=False)


def _shear_null(n, p, q, coords, beta):
    """Null rotation fixing e_p + e_q (p time-ish slot 0), shearing with beta.

    Coordinate map: x'^0 = (1+B/2)x^0 - (B/2)x^q + sum beta_i x^i,
    x'^q = (B/2)x^0 + (1-B/2)x^q + sum beta_i x^i,
    x'^i = x^i + beta_i (x^0 - x^q), with B = |beta|^2.
    """
    L = np.eye(n + 1)
    B = float(np.dot(beta, beta))
    L[p, p] = 1 + B / 2
    L[p, q] = -B / 2
    L[q, p] = B / 2
    L[q, q] = 1 - B / 2
    for i, b in zip(coords, beta):
        L[p, i] = b
        L[q, i] = b
        L[i, p] = b
        L[i, q] = -b
    return LorentzMap(L, check=False)


def _shear_boost(n, coords, beta):
    """Null rotation fixing e_0 - e_1, shearing with beta over the coords."""
    L = np.eye(n + 1)
    B = float(np.dot(beta, beta))
    L[0, 0] = 1 + B / 2
    L[0, 1] = B / 2
    L[1, 0] = -B / 2
    L[1, 1] = 1 - B / 2
    for i, b in zip(coords, beta):
        L[0, i] = b
        L[1, i] = -b
        L[i, 0] = b
        L[i, 1] = b
    return LorentzMap(L, check=False)


def _lightcone_scale(n, p, q, s):
    """Lorentz map with x'^p - x'^q = s (x^p - x^q), x'^p + x'^q = (x^p + x^q)/s."""
    L = np.eye(n + 1)
    L[p, p] = L[q, q] = (s + 1.0 / s) / 2
    L[p, q] = L[q, p] = (1.0 / s - s) / 2
    return LorentzMap(L, check=False)


def _solve_affine_shear(F, shear_of_beta, read_g, m):
    """Solve for beta such that the sheared F has vanishing g-components.

    The g-components are exactly affine in beta for the null-rotation
    families used here, so the Jacobian is assembled column by column.
    """
    g0 = read_g(F)
    if m == 0:
        return F, None
    J = np.empty((len(g0), m))
    for k in range(m):
        e = np.zeros(m)
        e[k] = 1.0
        J[:, k] = read_g(act_lorentz_2form(shear_of_beta(e), F)) - g0
    beta, *_ = np.linalg.lstsq(J, -g0, rcond=None)
    sh = shear_of_beta(beta)
    return act_lorentz_2form(sh, F), sh


# ---------------------------------------------------------------------------
# superdiagonal sweep


def superdiagonal_reduce(F):
    """Rotate F into sum u_k dx^k dx^{k+1} by a purely spatial SO(n) map.

    Returns the superdiagonal array u and the witness R (block diag(1, SO(n)))
    with conjugate(R, F) superdiagonal.
    """
    n = F.n
    Fc = F.mat.copy()
    R = np.eye(n + 1)
    for k in range(n - 1):
        w = Fc[k, k + 1 :].copy()
        nw = np.linalg.norm(w)
        if nw < 1e-300 or np.linalg.norm(w[1:]) == 0.0:
            continue
        target = np.zeros(n - k)
        target[0] = 1.0
        q = _householder_to_axis(w / nw, target)
        L = np.eye(n + 1)
        L[k + 1 :, k + 1 :] = q
        Fc = L @ Fc @ L.T
        R = L @ R
    if np.linalg.det(R[1:, 1:]) < 0:
        flip = np.eye(n + 1)
        flip[n, n] = -1.0
        Fc = flip @ Fc @ flip
        R = flip @ R
    u = np.array([Fc[k, k + 1] for k in range(n)])
    return u, LorentzMap(R, check=False)


# ---------------------------------------------------------------------------
# spatial skew-diagonalization


def skew_canonical(H, tol, scale=None):
    """Orthogonal R with R H R^T = blockdiag([[0,b_i],[-b_i,0]], 0...), b descending.

    Entries are compared against tol*scale; scale defaults to the norm of H
    but should be the norm of the ambient 2-form when H is a sub-block.
    """
    m = H.shape[0]
    if m == 0:
        return np.eye(0), ()
    if scale is None:
        scale = np.linalg.norm(H, 2)
    if np.linalg.norm(H, 2) <= tol * scale or scale == 0.0:
        return np.eye(m), ()
    T, Z = scipy.linalg.schur(np.asarray(H, float), output="real")
    T = 0.5 * (T - T.T)
    blocks, zeros = [], []
    i = 0
    while i < m:
        if i + 1 < m and abs(T[i, i + 1]) > tol * scale:
            blocks.append((i, T[i, i + 1]))
            i += 2
        else:
            zeros.append(i)
            i += 1
    blocks.sort(key=lambda ib: -abs(ib[1]))
    rows = []
    bs = []
    for i, th in blocks:
        rows += [i, i + 1] if th > 0 else [i + 1, i]
        bs.append(abs(th))
    rows += zeros
    R = Z.T[rows, :]
    return R, tuple(bs)


def _embed_skew(n, coords, H, tol, scale=None, skip_slots=0):
    """Skew-diagonalize H living on the given coords, leaving leading slots zero.

    With skip_slots = s, rotation blocks are placed starting at coords[s],
    and a kernel direction of H is routed to each of coords[0..s-1].
    """
    R, bs = skew_canonical(H, tol, scale)
    m = H.shape[0]
    if skip_slots:
        nblock = 2 * len(bs)
        if m - nblock < skip_slots:
            raise ClassificationUnstable(
                "skew form has no kernel direction left for the shear slot"
            )
        order = (
            list(range(nblock, nblock + skip_slots))
            + list(range(nblock))
            + list(range(nblock + skip_slots, m))
        )
        R = R[order, :]
    L = np.eye(n + 1)
    L[np.ix_(coords, coords)] = R
    return LorentzMap(L, check=False), bs


# ---------------------------------------------------------------------------
# the classifier


def _real_eigvec(F, lam, tol):
    M = sharp(F)
    w, V = np.linalg.eig(M)
    i = int(np.argmin(np.abs(w - lam)))
    v = V[:, i]
    k = int(np.argmax(np.abs(v)))
    v = v / v[k]
    v = np.real(v)
    v /= np.linalg.norm(v)
    res = np.linalg.norm(M @ v - lam * v)
    if res > 1e3 * tol * max(F.norm(), abs(lam)):
        raise ClassificationUnstable(
            f"eigenvector residual {res:.3e} for eigenvalue {lam:.3e}", margin=res
        )
    return v


def _kernel_direction(F, tol, kind):
    """Timelike or null direction inside ker(eta F) from the Gram eigenproblem."""
    basis = kernel_basis(F, tol)
    B = np.array(basis)
    e = np.eye(F.n + 1)
    e[0, 0] = -1.0
    gram = B @ e @ B.T
    w, C = np.linalg.eigh(gram)
    i = int(np.argmin(w)) if kind == "timelike" else int(np.argmin(np.abs(w)))
    v = C[:, i] @ B
    if kind == "timelike":
        v = v / np.sqrt(-w[np.argmin(w)]) if w[np.argmin(w)] < 0 else v
    return v


def canonicalize_2form(F, tol=None):
    """Classify F and return (class, witness) with conj(witness, F) canonical.

    Raises ClassificationUnstable when spectral margins fall below tolerance
    or the constructed witness fails its residual check.
    """
    tol = DEFAULT_TOL if tol is None else tol
    n = F.n
    normF = F.norm()
    if normF == 0.0:
        return TwoFormClass("a"), LorentzMap.identity(n)

    spec = eigen_structure(F, tol)
    kct = kernel_causal_type(kernel_basis(F, tol), tol)
    maps = []

    def push(lam, cur):
        maps.append(lam)
        return act_lorentz_2form(lam, cur)

    if spec.real_pair is not None:
        # boost classes (c)/(d); kernel must be spacelike or trivial
        if kct.tag not in ("Spacelike",):
            raise ClassificationUnstable(
                f"real eigenvalue pair with {kct.tag} kernel", margin=spec.margin
            )
        a = spec.real_pair
        v = _real_eigvec(F, a, tol)
        cur = push(_boost_eigframe(n, v), F)
        coords = list(range(2, n + 1))

        def read_g(G):
            return G.mat[0, 2:]

        cur, sh = _solve_affine_shear(
            cur, lambda b: _shear_boost(n, coords, b), read_g, len(coords)
        )
        if sh is not None:
            maps.append(sh)
        if coords:
            lam, bs = _embed_skew(n, coords, cur.mat[2:, 2:], tol, scale=normF)
            cur = push(lam, cur)
        else:
            bs = ()
        cls = TwoFormClass("d" if bs else "c", a=cur.mat[0, 1], b=bs)

    elif kct.tag in ("Timelike", "Full"):
        t = _kernel_direction(F, tol, "timelike")
        if t[0] < 0:
            t = -t
        # eta-orthonormal frame starting with t; its inverse maps t to e_0
        cols = [t]
        for cand in np.eye(n + 1):
            u = cand.copy()
            for j, c in enumerate(cols):
                sgn = -1.0 if j == 0 else 1.0
                u -= sgn * (minkowski_inner(u, c)) * c
            nu = np.linalg.norm(u)
            if nu > 1e-8:
                q = minkowski_inner(u, u)
                if q <= 0:
                    raise ClassificationUnstable("frame completion failed")
                cols.append(u / np.sqrt(q))
            if len(cols) == n + 1:
                break
        E = np.array(cols).T
        e = np.eye(n + 1)
        e[0, 0] = -1.0
        cur = push(LorentzMap(e @ E.T @ e, check=False), F)
        lam, bs = _embed_skew(n, list(range(1, n + 1)), cur.mat[1:, 1:], tol, scale=normF)
        cur = push(lam, cur)
        cls = TwoFormClass("b", b=bs)

    elif kct.tag == "Null":
        ell = _kernel_direction(F, tol, "null")
        cur = push(_null_frame(n, ell, 2), F)
        sub = [1] + list(range(3, n + 1))
        lam, bs = _embed_skew(n, sub, cur.mat[np.ix_(sub, sub)], tol, scale=normF, skip_slots=1)
        cur = push(lam, cur)
        block = list(range(3, 3 + 2 * len(bs)))

        def read_g_block(G):
            return G.mat[0, block]

        cur, sh = _solve_affine_shear(
            cur, lambda b: _shear_null(n, 0, 2, block, b), read_g_block, len(block)
        )
        if sh is not None:
            maps.append(sh)
        # residual g lives in ker H: coords {1} and the tail
        ker_slots = [1] + list(range(3 + 2 * len(bs), n + 1))
        g = cur.mat[0, ker_slots]
        gn = np.linalg.norm(g)
        if gn <= tol * (1 + normF):
            raise ClassificationUnstable(
                "null-class g-vector vanished; kernel type is borderline", margin=gn
            )
        target = np.zeros(len(ker_slots))
        target[0] = 1.0
        cur = push(_spatial_rotation(n, ker_slots, g / gn, target), cur)
        s = cur.mat[0, 1]
        cur = push(_lightcone_scale(n, 0, 2, s), cur)
        cls = TwoFormClass("f" if bs else "e", b=bs)

    else:
        raise ClassificationUnstable(f"unexpected kernel type {kct.tag}")

    witness = LorentzMap.identity(n).mat
    for lam in maps:
        witness = lam.mat @ witness
    witness = LorentzMap(witness)

    target = canonical_2form_matrix(cls, n)
    resid = np.linalg.norm(act_lorentz_2form(witness, F).mat - target.mat)
    if resid > 1e-8 * (1 + normF):
        raise ClassificationUnstable(
            f"witness residual {resid:.3e} exceeds tolerance", margin=resid
        )
    return cls, witness
