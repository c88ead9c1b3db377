"""Eigenstructure of the raised 2-form operator and kernel causal typing.

For a constant 2-form F on R^{n,1} the operator M = eta F has eigenvalues
that are real or pure imaginary, occurring in {lam, -lam} pairs, with at
most one real pair.  These invariants, together with the causal type of
ker M, drive and validate the canonical-form reduction.
"""

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL
from .core import minkowski_inner, sharp
from .errors import DegenerateSignature, SnapFailure

__all__ = [
    "SpectrumSummary",
    "KernelCausalType",
    "eigen_structure",
    "kernel_basis",
    "kernel_causal_type",
    "invariants",
]


@dataclass(frozen=True)
class SpectrumSummary:
    """Snapped spectrum of eta F.

    real_pair: a > 0 when eigenvalues +-a are present, else None.
    imag_moduli: descending positive moduli b_i of pure imaginary pairs,
        repeated with multiplicity.
    zero_multiplicity: algebraic multiplicity of the zero eigenvalue.
    nilpotent_index: size of the largest Jordan block at zero (1 when the
        zero block is semisimple or absent; 3 for the null-rotation block).
    snap_distance: largest axis-snap applied to a nonzero eigenvalue.
    margin: smallest separation between distinct snapped values; small
        margins flag borderline inputs.
    """

    real_pair: float | None
    imag_moduli: tuple[float, ...]
    zero_multiplicity: int
    nilpotent_index: int
    snap_distance: float = field(default=0.0, compare=False)
    margin: float = field(default=np.inf, compare=False)

    @property
    def r(self):
        return len(self.imag_moduli)


@dataclass(frozen=True)
class KernelCausalType:
    """Causal type of the real kernel of eta F.

    tag is one of Timelike / Spacelike / Null / Full; a zero-dimensional
    kernel is reported as Spacelike with dim 0.
    """

    tag: str
    dim: int


def _rank(mat, threshold):
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(s > threshold))


def eigen_structure(F, tol=None):
    """Classify the spectrum of eta F, snapping eigenvalues onto the axes.

    Raises SnapFailure when a nonzero eigenvalue lies farther than
    tol * ||F|| from both axes, or when the pair structure guaranteed in
    Lorentzian signature cannot be recovered.
    """
    tol = DEFAULT_TOL if tol is None else tol
    n = F.n
    M = sharp(F)
    norm = F.norm()
    if norm == 0.0:
        return SpectrumSummary(None, (), n + 1, 1)

    # All rank decisions route through singular values for consistency.
    geo_kernel = n + 1 - _rank(M, tol * norm)
    # Jordan blocks at zero have size <= 3, so M^3 isolates the invertible part.
    alg_zero = n + 1 - _rank(M @ M @ M, tol * norm**3)
    if geo_kernel == alg_zero:
        nilpotent_index = 1
    elif n + 1 - _rank(M @ M, tol * norm**2) == alg_zero:
        nilpotent_index = 2
    else:
        nilpotent_index = 3

    lam = np.linalg.eigvals(M)
    order = np.argsort(np.abs(lam))
    nonzero = lam[order[alg_zero:]]

    reals, imags = [], []
    snap_distance = 0.0
    for z in nonzero:
        if abs(z.real) >= abs(z.imag):
            dist = abs(z.imag)
            reals.append(z.real)
        else:
            dist = abs(z.real)
            imags.append(z.imag)
        if dist > tol * norm:
            raise SnapFailure(dist, tol * norm)
        snap_distance = max(snap_distance, dist)

    pos_reals = sorted(x for x in reals if x > 0)
    neg_reals = sorted(-x for x in reals if x < 0)
    if len(pos_reals) != len(neg_reals) or len(pos_reals) > 1:
        raise SnapFailure(snap_distance, tol * norm)
    real_pair = None
    if pos_reals:
        real_pair = 0.5 * (pos_reals[0] + neg_reals[0])

    pos_imag = sorted((x for x in imags if x > 0), reverse=True)
    neg_imag = sorted((-x for x in imags if x < 0), reverse=True)
    if len(pos_imag) != len(neg_imag):
        raise SnapFailure(snap_distance, tol * norm)
    moduli = tuple(0.5 * (p + q) for p, q in zip(pos_imag, neg_imag))

    if 2 * (real_pair is not None) + 2 * len(moduli) + alg_zero != n + 1:
        raise SnapFailure(snap_distance, tol * norm)

    values = ([real_pair] if real_pair is not None else []) + list(moduli) + [0.0]
    gaps = [
        abs(a - b) for i, a in enumerate(values) for b in values[i + 1 :] if a != b
    ]
    margin = min(gaps) if gaps else np.inf

    return SpectrumSummary(
        real_pair, moduli, alg_zero, nilpotent_index, snap_distance, margin
    )


def kernel_basis(F, tol=None):
    """Orthonormal (Euclidean) basis of the real kernel of eta F."""
    tol = DEFAULT_TOL if tol is None else tol
    norm = F.norm()
    if norm == 0.0:
        return [np.eye(F.n + 1)[i] for i in range(F.n + 1)]
    _, s, vh = np.linalg.svd(sharp(F))
    rank = int(np.sum(s > tol * norm))
    return [vh[i] for i in range(rank, F.n + 1)]


def kernel_causal_type(basis, tol=None):
    """Causal type from the eta-Gram signature of a kernel basis."""
    tol = DEFAULT_TOL if tol is None else tol
    dim = len(basis)
    if dim == 0:
        return KernelCausalType("Spacelike", 0)
    full = len(basis[0])
    gram = np.array([[minkowski_inner(u, v) for v in basis] for u in basis])
    scale = max(
        np.linalg.norm(gram, 2), max(float(np.dot(v, v)) for v in basis)
    )
    w = np.linalg.eigvalsh(gram)
    zeros = int(np.sum(np.abs(w) <= tol * scale))
    negs = int(np.sum(w < -tol * scale))
    poss = dim - zeros - negs
    if dim == full:
        return KernelCausalType("Full", dim)
    if negs == 1 and zeros == 0:
        return KernelCausalType("Timelike", dim)
    if negs == 0 and zeros == 0:
        return KernelCausalType("Spacelike", dim)
    if negs == 0 and zeros == 1 and poss == dim - 1:
        return KernelCausalType("Null", dim)
    raise DegenerateSignature(
        f"signature ({negs} neg, {zeros} zero, {poss} pos) is impossible "
        "for a subspace of a Lorentzian space"
    )


def invariants(F, tol=None):
    """Spectrum and kernel causal type; Lorentz invariants of F."""
    spec = eigen_structure(F, tol)
    kct = kernel_causal_type(kernel_basis(F, tol), tol)
    return spec, kct
