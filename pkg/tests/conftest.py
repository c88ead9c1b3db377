"""Shared helpers for the test suite: class samplers and on-shell data."""

import numpy as np
from scipy.linalg import null_space

from minkstring.core import eta
from minkstring.dynamics import conserved_set, momentum_observable
from minkstring.errors import DimensionTooSmall, ParamViolation
from minkstring.killing import _TAG_STRUCTURE, _top_coord, KillingClass
from minkstring.twoform import TwoFormClass

ALL_KILLING_TAGS = "abcdefghijklmn"
ALL_TWOFORM_TAGS = "abcdef"


def random_twoform_class(tag, n, rng):
    """A TwoFormClass with random generic parameters, admissible at dimension n.

    Raises DimensionTooSmall when no parameter choice fits.
    """
    if tag == "a":
        return TwoFormClass("a")
    if tag == "c":
        return TwoFormClass("c", a=float(rng.uniform(0.3, 2.0)))
    if tag == "e":
        if n < 2:
            raise DimensionTooSmall(f"class e needs n >= 2, got {n}")
        return TwoFormClass("e")
    room = {"b": n // 2, "d": (n - 1) // 2, "f": (n - 2) // 2}[tag]
    if room < 1:
        raise DimensionTooSmall(f"class {tag} needs a rotation block, n={n}")
    r = int(rng.integers(1, room + 1))
    b = tuple(sorted(rng.uniform(0.3, 2.0, size=r), reverse=True))
    if tag == "b":
        return TwoFormClass("b", b=b)
    if tag == "d":
        return TwoFormClass("d", a=float(rng.uniform(0.3, 2.0)), b=b)
    return TwoFormClass("f", b=b)


def random_killing_class(tag, n, rng):
    """A KillingClass with random generic parameters, admissible at (tag, n).

    Raises DimensionTooSmall / ParamViolation when the tag does not fit.
    """
    ftag, pattern = _TAG_STRUCTURE[tag]
    kw = {}
    if ftag in ("c", "d"):
        kw["a"] = float(rng.uniform(0.3, 2.0))
    if ftag in ("b", "d", "f"):
        top = {"b": 0, "d": 1, "f": 2}[ftag]
        extra = 1 if pattern in ("fn", "null") else 0
        room = (n - top - extra) // 2
        if room < 1:
            raise DimensionTooSmall(f"class {tag} needs a rotation block, n={n}")
        r = int(rng.integers(1, room + 1))
        kw["b"] = tuple(sorted(rng.uniform(0.3, 2.0, size=r), reverse=True))
    top = _top_coord(ftag, len(kw.get("b", ())))
    if n < top:
        raise DimensionTooSmall(f"class {tag} needs n >= {top}")
    if pattern in ("fn", "null") and n <= top:
        raise DimensionTooSmall(f"class {tag} needs a free coordinate")
    if pattern == "f0":
        kw["f0"] = float(-rng.uniform(0.1, 2.0))
    elif pattern == "fn":
        kw["fn"] = float(rng.uniform(0.1, 2.0))
    return KillingClass(tag, n, **kw)


def killing_classes_at(n, rng):
    """All Killing classes constructible at dimension n, one instance each."""
    out = []
    for tag in ALL_KILLING_TAGS:
        try:
            out.append(random_killing_class(tag, n, rng))
        except (DimensionTooSmall, ParamViolation):
            pass
    return out


def minimal_killing_classes(rng):
    """One instance of every tag at its smallest admissible dimension."""
    out = []
    for tag in ALL_KILLING_TAGS:
        for n in range(1, 8):
            try:
                out.append(random_killing_class(tag, n, rng))
                break
            except (DimensionTooSmall, ParamViolation):
                continue
    assert len(out) == 14
    return out


def on_shell_state(xi, x0, mix=0.4):
    """Phase point over x0 satisfying H = 0 and xi.P = 0 exactly.

    The momentum is a timelike direction inside the constraint plane scaled to
    cancel the potential, plus a spacelike admixture (weight `mix`) so the
    resulting sheet is generically curved.
    """
    x0 = np.asarray(x0, float)
    m = xi.F.n + 1
    H = conserved_set(xi).hamiltonian
    ps = momentum_observable(xi)
    X0 = 2.0 * H.value(np.concatenate([x0, np.zeros(m)]))
    if X0 <= 0:
        raise ValueError(f"potential not positive at base point: {X0}")
    base = ps.value(np.concatenate([x0, np.zeros(m)]))
    w = np.array([ps.value(np.concatenate([x0, e])) - base for e in np.eye(m)])
    B = null_space(w[None]) if np.linalg.norm(w) > 0 else np.eye(m)
    G = B.T @ eta(m - 1) @ B
    lam, V = np.linalg.eigh(G)
    if lam[0] >= 0:
        raise ValueError("constraint plane contains no timelike direction")
    c2 = mix if lam.size > 1 and lam[-1] > 0 else 0.0
    c1 = np.sqrt((X0 + c2 * c2 * lam[-1]) / -lam[0])
    P = B @ (c1 * V[:, 0] + c2 * V[:, -1])
    if P[0] < 0:
        P = -P
    z0 = np.concatenate([x0, P])
    assert abs(H.value(z0)) < 1e-10 and abs(ps.value(z0)) < 1e-10
    return z0


def close_rel(x, y, tol=1e-8):
    return abs(x - y) <= tol * (1.0 + abs(x) + abs(y))
