"""Reduced Hamiltonian dynamics of cohomogeneity-one Nambu-Goto strings.

A Killing field xi on R^{n,1} turns the string equation of motion into the
particle system H(x, P) = (eta^{mu nu} P_mu P_nu + X)/2 with potential
X(x) = |xi|^2, subject to the constraint xi^mu P_mu = 0.  Everything here is
quadratic in the phase point z = (x, P), so Poisson brackets and flows are
closed-form: brackets are coefficient arithmetic and flows are matrix
exponentials.  The modules also rebuilds worldsheets x(tau, sigma) from
constrained geodesics and measures the Nambu-Goto residual on a grid.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

import mpmath

from .core import KillingField, eta
from .errors import (
    ConstraintViolated,
    DegenerateSheet,
    DimensionMismatch,
    NonSeparable,
    NotCanonical,
)
from .killing import decompose_blocks

__all__ = [
    "PhaseState",
    "QuadraticObservable",
    "ConservedSet",
    "Worldsheet",
    "potential_X",
    "build_hamiltonian",
    "conserved_set",
    "poisson_bracket",
    "independence_rank",
    "flow_exact",
    "flow_exact_mp",
    "flow_drift_mp",
    "flow_symplectic",
    "killing_flow",
    "build_worldsheet",
    "ng_residual",
]


@dataclass(frozen=True)
class PhaseState:
    """Phase point (x, P) of the reduced particle system."""

    x: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, float))
        object.__setattr__(self, "P", np.asarray(self.P, float))
        if self.x.shape != self.P.shape or self.x.ndim != 1:
            raise DimensionMismatch("x and P must be vectors of equal length")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.P))):
            raise ValueError("phase state must be finite")

    @property
    def z(self):
        return np.concatenate([self.x, self.P])

    @classmethod
    def from_z(cls, z):
        z = np.asarray(z, float)
        m = z.size // 2
        return cls(z[:m], z[m:])


def symplectic_matrix(m):
    """J with dz/dsigma = J grad(H), z = (x, P)."""
    J = np.zeros((2 * m, 2 * m))
    J[:m, m:] = np.eye(m)
    J[m:, :m] = -np.eye(m)
    return J


@dataclass(frozen=True)
class QuadraticObservable:
    """Observable Q(z) = z^T A z / 2 + b^T z + c on phase space."""

    A: np.ndarray
    b: np.ndarray
    c: float = 0.0
    label: str = ""

    def __post_init__(self):
        A = np.asarray(self.A, float)
        b = np.asarray(self.b, float)
        if A.shape != (b.size, b.size):
            raise DimensionMismatch("A and b sizes disagree")
        if np.max(np.abs(A - A.T), initial=0.0) > 1e-12 * (1 + np.max(np.abs(A), initial=0.0)):
            raise ValueError("A must be symmetric")
        object.__setattr__(self, "A", 0.5 * (A + A.T))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", float(self.c))

    @property
    def m(self):
        return self.b.size // 2

    def value(self, z):
        z = np.asarray(z, float)
        return float(0.5 * z @ self.A @ z + self.b @ z + self.c)

    def gradient(self, z):
        return self.A @ np.asarray(z, float) + self.b

    def coeff_norm(self):
        return float(np.max(np.abs(self.A), initial=0.0) + np.max(np.abs(self.b), initial=0.0) + abs(self.c))

    @classmethod
    def zero(cls, m, label=""):
        return cls(np.zeros((2 * m, 2 * m)), np.zeros(2 * m), 0.0, label)

    def relabel(self, label):
        return QuadraticObservable(self.A, self.b, self.c, label)

    def __add__(self, other):
        return QuadraticObservable(self.A + other.A, self.b + other.b, self.c + other.c)


def potential_X(xi):
    """X(x) = eta^{mu nu} xi_mu(x) xi_nu(x) as a quadratic observable in x."""
    n = xi.F.n
    m = n + 1
    e = eta(n)
    F = xi.F.mat
    A = np.zeros((2 * m, 2 * m))
    A[:m, :m] = 2.0 * F @ e @ F.T
    b = np.zeros(2 * m)
    b[:m] = 2.0 * F @ e @ xi.f
    c = float(xi.f @ e @ xi.f)
    return QuadraticObservable(A, b, c, "X")


def _hamiltonian_of(xi, label):
    """H = (eta^{mu nu} P_mu P_nu + X)/2 for the (possibly partial) field xi."""
    n = xi.F.n
    m = n + 1
    X = potential_X(xi)
    A = 0.5 * X.A.copy()
    A[m:, m:] = eta(n)
    return QuadraticObservable(A, 0.5 * X.b, 0.5 * X.c, label)


def _restrict(xi, idx):
    """The Killing field with F and f truncated to the given coordinates."""
    n = xi.F.n
    Fm = np.zeros_like(xi.F.mat)
    Fm[np.ix_(idx, idx)] = xi.F.mat[np.ix_(idx, idx)]
    f = np.zeros(n + 1)
    f[list(idx)] = xi.f[list(idx)]
    from .core import TwoForm

    return KillingField(TwoForm(Fm), f)


def _block_index_sets(xi):
    """(N indices, S indices, O indices) with f components routed per block."""
    bd = decompose_blocks(xi.F)
    n_idx = list(bd.n_block) if bd.n_block else []
    s_idx = sorted(i for (p, q), _ in bd.s_blocks for i in (p, q))
    o_idx = list(bd.o_indices)
    # the translation part: f_0 belongs to N when present, otherwise to O
    f = xi.f
    bad = [i for i in s_idx + (n_idx[1:] if n_idx else []) if abs(f[i]) > 1e-12 * (1 + np.linalg.norm(f))]
    if bad:
        raise NotCanonical(f"f has components {bad} inside invertible blocks")
    return bd, n_idx, s_idx, o_idx


def build_hamiltonian(xi_canonical):
    """Full H plus its exact N/S/O part decomposition."""
    xi = xi_canonical
    n = xi.F.n
    m = n + 1
    bd, n_idx, s_idx, o_idx = _block_index_sets(xi)
    H = _hamiltonian_of(xi, "H")

    def part(idx, label):
        if not idx:
            return QuadraticObservable.zero(m, label)
        sub = _hamiltonian_of(_restrict(xi, idx), label)
        A = sub.A.copy()
        A[m:, m:] = 0.0
        kin = np.zeros((m, m))
        kin[np.ix_(idx, idx)] = eta(n)[np.ix_(idx, idx)]
        A[m:, m:] = kin
        return QuadraticObservable(A, sub.b, sub.c, label)

    parts = {
        "H_N": part(n_idx, "H_N"),
        "H_S": part(s_idx, "H_S"),
        "H_O": part(o_idx, "H_O"),
    }
    total = parts["H_N"] + parts["H_S"] + parts["H_O"]
    assert np.allclose(total.A, H.A) and np.allclose(total.b, H.b)
    return H, parts


@dataclass(frozen=True)
class ConservedSet:
    """n+1 commuting conserved quantities plus the H and p_s aliases."""

    observables: tuple
    hamiltonian: QuadraticObservable
    p_s: QuadraticObservable

    def __iter__(self):
        return iter(self.observables)

    def __len__(self):
        return len(self.observables)


def _linear_in_P(m, terms, const_terms=()):
    """Observable sum c_ij x_i P_j + sum d_j P_j from sparse term lists."""
    A = np.zeros((2 * m, 2 * m))
    b = np.zeros(2 * m)
    for i, j, cval in terms:
        A[i, m + j] += cval
        A[m + j, i] += cval
    for j, d in const_terms:
        b[m + j] += d
    return QuadraticObservable(A, b)


def momentum_observable(xi):
    """p_s = xi^mu P_mu as a quadratic observable."""
    n = xi.F.n
    m = n + 1
    e = eta(n)
    terms = []
    M = e @ xi.F.mat.T  # xi^mu = (eta F^T x + eta f)^mu
    for mu in range(m):
        for lam in range(m):
            if M[mu, lam] != 0.0:
                terms.append((lam, mu, M[mu, lam]))
    consts = [(mu, v) for mu, v in enumerate(e @ xi.f) if v != 0.0]
    return _linear_in_P(m, terms, consts).relabel("p_s")


def conserved_set(xi_canonical):
    """The per-block commuting conserved quantities: N -> {C_N, D_N, E_N},
    each S plane -> {C_S, D_S}, each O direction -> {F_O}; n+1 in total."""
    xi = xi_canonical
    n = xi.F.n
    m = n + 1
    bd, n_idx, s_idx, o_idx = _block_index_sets(xi)
    obs = []
    if n_idx:
        f0 = xi.f[0]
        H_N = _hamiltonian_of(_restrict(xi, n_idx), "C_N")
        A = H_N.A.copy()
        kin = np.zeros((m, m))
        kin[np.ix_(n_idx, n_idx)] = eta(n)[np.ix_(n_idx, n_idx)]
        A[m:, m:] = kin
        obs.append(QuadraticObservable(A, H_N.b, H_N.c, "C_N"))
        obs.append(
            _linear_in_P(
                m,
                [(1, 0, 1.0), (0, 1, 1.0), (2, 1, -1.0), (1, 2, 1.0)],
                [(0, -f0)],
            ).relabel("D_N")
        )
        obs.append(_linear_in_P(m, [], [(0, 1.0), (2, 1.0)]).relabel("E_N"))
    for (p, q), s in bd.s_blocks:
        A = np.zeros((2 * m, 2 * m))
        if p == 0:  # boost plane
            A[m + p, m + p] = -1.0
            A[m + q, m + q] = 1.0
            A[p, p] = s * s
            A[q, q] = -s * s
            obs.append(QuadraticObservable(A, np.zeros(2 * m), 0.0, "C_S^0"))
            obs.append(_linear_in_P(m, [(p, q, 1.0), (q, p, 1.0)]).relabel("D_S^0"))
        else:  # rotation plane
            A[m + p, m + p] = 1.0
            A[m + q, m + q] = 1.0
            A[p, p] = s * s
            A[q, q] = s * s
            obs.append(QuadraticObservable(A, np.zeros(2 * m), 0.0, f"C_S^{p}"))
            obs.append(
                _linear_in_P(m, [(p, q, 1.0), (q, p, -1.0)]).relabel(f"D_S^{p}")
            )
    for i in o_idx:
        obs.append(_linear_in_P(m, [], [(i, 1.0)]).relabel(f"F_O^{i}"))
    assert len(obs) == n + 1
    H, _ = build_hamiltonian(xi)
    return ConservedSet(tuple(obs), H, momentum_observable(xi))


def poisson_bracket(Q1, Q2):
    """Exact bracket of quadratics: again quadratic, by coefficient arithmetic."""
    if Q1.b.size != Q2.b.size:
        raise DimensionMismatch("observables live on different phase spaces")
    J = symplectic_matrix(Q1.m)
    A = Q1.A @ J @ Q2.A - Q2.A @ J @ Q1.A
    b = Q1.A @ J @ Q2.b - Q2.A @ J @ Q1.b
    c = float(Q1.b @ J @ Q2.b)
    return QuadraticObservable(A, b, c, f"{{{Q1.label},{Q2.label}}}")


def independence_rank(cset, z, threshold=1e-9):
    """Rank of the gradient matrix of the conserved set at the phase point z."""
    z = z.z if isinstance(z, PhaseState) else np.asarray(z, float)
    G = np.array([Q.gradient(z) for Q in cset])
    s = np.linalg.svd(G, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > threshold * s[0]))


# ---------------------------------------------------------------------------
# flows


def _augmented(H):
    """The affine generator [[JA, Jb], [0, 0]] of dz/dsigma = J(Az + b)."""
    J = symplectic_matrix(H.m)
    M = np.zeros((2 * H.m + 1, 2 * H.m + 1))
    M[:-1, :-1] = J @ H.A
    M[:-1, -1] = J @ H.b
    return M


def flow_exact(H, z0, sigma):
    """Closed-form Hamiltonian flow of a quadratic H via matrix exponential."""
    z0 = z0.z if isinstance(z0, PhaseState) else np.asarray(z0, float)
    E = scipy.linalg.expm(sigma * _augmented(H))
    out = E @ np.concatenate([z0, [1.0]])
    return PhaseState.from_z(out[:-1])


def flow_exact_mp(H, z0, sigma, dps=60):
    """The same flow evaluated in extended precision (mpmath matrix).

    Useful when coordinates grow exponentially and float64 evaluation of
    conserved quantities would be dominated by cancellation round-off.
    """
    z0 = z0.z if isinstance(z0, PhaseState) else np.asarray(z0, float)
    with mpmath.workdps(dps):
        M = mpmath.matrix(_augmented(H).tolist())
        E = mpmath.expm(M * mpmath.mpf(float(sigma)))
        v = mpmath.matrix(list(z0) + [1.0])
        out = E * v
        return [out[i] for i in range(len(z0))]


def _value_mp(Q, z_mp, dps=60):
    with mpmath.workdps(dps):
        A = mpmath.matrix(Q.A.tolist())
        b = mpmath.matrix(Q.b.tolist())
        z = mpmath.matrix(z_mp)
        return (z.T * (A * z))[0] / 2 + (b.T * z)[0] + mpmath.mpf(Q.c)


def flow_drift_mp(H, observables, z0, sigma, dps=60):
    """Drift |Q(z(sigma)) - Q(z0)| of each observable, in extended precision."""
    z0 = z0.z if isinstance(z0, PhaseState) else np.asarray(z0, float)
    z1 = flow_exact_mp(H, z0, sigma, dps)
    with mpmath.workdps(dps):
        z0m = [mpmath.mpf(float(v)) for v in z0]
        return [
            float(abs(_value_mp(Q, z1, dps) - _value_mp(Q, z0m, dps)))
            for Q in observables
        ]


def flow_symplectic(H, z0, h, steps):
    """Leapfrog (kick-drift-kick) trajectory for separable quadratic H.

    Returns the array of phase points of shape (steps+1, 2(n+1)).
    """
    m = H.m
    cross = H.A[:m, m:]
    if np.max(np.abs(cross), initial=0.0) > 1e-14 * (1 + np.max(np.abs(H.A))):
        raise NonSeparable("H has x-P cross terms; leapfrog needs T(P) + V(x)")
    if h <= 0:
        raise ValueError("step size must be positive")
    Axx, bx = H.A[:m, :m], H.b[:m]
    App, bp = H.A[m:, m:], H.b[m:]
    z = z0.z if isinstance(z0, PhaseState) else np.asarray(z0, float)
    x, P = z[:m].copy(), z[m:].copy()
    out = np.empty((steps + 1, 2 * m))
    out[0] = np.concatenate([x, P])
    for k in range(steps):
        P -= 0.5 * h * (Axx @ x + bx)
        x += h * (App @ P + bp)
        P -= 0.5 * h * (Axx @ x + bx)
        out[k + 1] = np.concatenate([x, P])
    return out


def killing_flow(xi, x0, tau):
    """Flow of dx/dtau = xi^sharp(x): exact affine solution by expm."""
    n = xi.F.n
    e = eta(n)
    M = np.zeros((n + 2, n + 2))
    M[:-1, :-1] = e @ xi.F.mat.T
    M[:-1, -1] = e @ xi.f
    E = scipy.linalg.expm(tau * M)
    out = E @ np.concatenate([np.asarray(x0, float), [1.0]])
    return out[:-1]


# ---------------------------------------------------------------------------
# worldsheets


@dataclass(frozen=True)
class Worldsheet:
    """Embedding samples x(tau_i, sigma_j) on a uniform rectangular grid."""

    grid: np.ndarray  # shape (n_tau, n_sigma, n+1)
    tau_step: float
    sigma_step: float

    def __post_init__(self):
        if self.grid.ndim != 3:
            raise DimensionMismatch("grid must be (n_tau, n_sigma, n+1)")
        if self.tau_step <= 0 or self.sigma_step <= 0:
            raise ValueError("grid steps must be positive")


def build_worldsheet(xi_canonical, geodesic, tau_grid, sigma_grid):
    """Sweep a constrained geodesic along the Killing flow.

    geodesic: array of phase points (len(sigma_grid), 2(n+1)) with
    xi^mu P_mu = 0 along it (checked to 1e-8 relative).
    """
    xi = xi_canonical
    n = xi.F.n
    tau_grid = np.asarray(tau_grid, float)
    sigma_grid = np.asarray(sigma_grid, float)
    pts = np.asarray(geodesic, float)
    if pts.shape != (sigma_grid.size, 2 * (n + 1)):
        raise DimensionMismatch("geodesic samples must match the sigma grid")
    ps = momentum_observable(xi)
    scale = 1.0 + float(np.max(np.abs(pts)))
    for z in pts:
        v = ps.value(z)
        if abs(v) > 1e-8 * scale:
            raise ConstraintViolated(
                f"xi^mu P_mu = {v:.3e} violates the cohomogeneity constraint"
            )
    e = eta(n)
    M = np.zeros((n + 2, n + 2))
    M[:-1, :-1] = e @ xi.F.mat.T
    M[:-1, -1] = e @ xi.f
    X = np.hstack([pts[:, : n + 1], np.ones((pts.shape[0], 1))])
    grid = np.empty((tau_grid.size, sigma_grid.size, n + 1))
    for i, tau in enumerate(tau_grid):
        E = scipy.linalg.expm(tau * M)
        grid[i] = (X @ E.T)[:, :-1]
    return Worldsheet(
        grid,
        float(tau_grid[1] - tau_grid[0]) if tau_grid.size > 1 else 1.0,
        float(sigma_grid[1] - sigma_grid[0]) if sigma_grid.size > 1 else 1.0,
    )


def ng_residual(ws):
    """Max interior residual of the minimal-surface equation, plus det G range.

    The flux W^{A mu} = sqrt(-det G) G^{AB} dx^mu/ds^B is formed from
    second-order differences; the residual is dW^tau/dtau + dW^sigma/dsigma
    at doubly-interior points.
    """
    g = ws.grid
    if g.shape[0] < 3 or g.shape[1] < 3:
        raise DimensionMismatch("residual needs at least a 3x3 grid")
    n = g.shape[2] - 1
    e = np.diag([-1.0] + [1.0] * n)
    xt = np.gradient(g, ws.tau_step, axis=0, edge_order=2)
    xs = np.gradient(g, ws.sigma_step, axis=1, edge_order=2)
    Gtt = np.einsum("ijm,mk,ijk->ij", xt, e, xt)
    Gts = np.einsum("ijm,mk,ijk->ij", xt, e, xs)
    Gss = np.einsum("ijm,mk,ijk->ij", xs, e, xs)
    det = Gtt * Gss - Gts * Gts
    report = {"det_min": float(det.min()), "det_max": float(det.max())}
    if det.max() >= 0.0:
        raise DegenerateSheet(
            f"det G reaches {det.max():.3e} >= 0: sheet not timelike"
        )
    w = np.sqrt(-det)
    # inverse metric: G^{tt} = Gss/det, G^{ss} = Gtt/det, G^{ts} = -Gts/det
    Wt = (w / det)[..., None] * (Gss[..., None] * xt - Gts[..., None] * xs)
    Ws = (w / det)[..., None] * (Gtt[..., None] * xs - Gts[..., None] * xt)
    R = np.gradient(Wt, ws.tau_step, axis=0, edge_order=2) + np.gradient(
        Ws, ws.sigma_step, axis=1, edge_order=2
    )
    interior = np.abs(R[2:-2, 2:-2, :])
    if interior.size == 0:
        interior = np.abs(R[1:-1, 1:-1, :])
    return float(interior.max()), report
