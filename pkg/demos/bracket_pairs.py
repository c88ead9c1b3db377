"""Two-dimensional noncommutative symmetry algebras.

Killing pairs obeying [xi, eta] = xi fall into exactly two families:
family 1 has a null-rotation xi, family 2 a null-translation xi; in both,
eta contains a boost that scales xi.  This demo classifies scrambled
canonical pairs back to normal form and shows the structural laws: the
first field is nilpotent of index 1 or 3, and timelike or spacelike
translations admit no bracket partner at all.

Run:  python3 demos/bracket_pairs.py
"""

import numpy as np

from minkstring import (
    ImpossibleTranslation,
    KillingField,
    LiePairClass,
    TwoForm,
    act_poincare,
    canonical_pair,
    classify_pair,
    nilpotency_index,
    verify_bracket,
)
from minkstring.randoms import random_poincare

rng = np.random.default_rng(11)

print("=== round trips ===")
print(f"{'family':>6} {'n':>3} {'b':<14} {'q':>6}   recovered (b, q)          residual")
for cls, n in [
    (LiePairClass(1, (), 0.0), 2),
    (LiePairClass(1, (1.5,), 0.7), 5),
    (LiePairClass(2, (), 1.0), 2),
    (LiePairClass(2, (2.0, 0.5), 0.0), 5),
]:
    xi0, eta0 = canonical_pair(cls, n)
    assert verify_bracket(xi0, eta0)
    h = random_poincare(rng, n)
    xi, ef = act_poincare(h, xi0), act_poincare(h, eta0)
    got, g = classify_pair(xi, ef)
    oxi, oeta = act_poincare(g, xi), act_poincare(g, ef)
    resid = max(
        np.max(np.abs(oxi.F.mat - xi0.F.mat)),
        np.max(np.abs(oeta.F.mat - eta0.F.mat)),
        np.max(np.abs(oxi.f - xi0.f)),
        np.max(np.abs(oeta.f - eta0.f)),
    )
    idx = nilpotency_index(xi.F)
    print(
        f"{got.family:>6} {n:>3} {str(list(cls.b)):<14} {cls.q:>6.2f}   "
        f"b={[float(round(x, 6)) for x in got.b]}, q={got.q:.6f}   {resid:.1e}"
        f"   (nilpotency index {idx})"
    )

print("\n=== impossible partners ===")
for name, f in [
    ("timelike translation", np.array([1.0, 0.0, 0.0])),
    ("spacelike translation", np.array([0.0, 0.0, 1.0])),
]:
    xi = KillingField(TwoForm(np.zeros((3, 3))), f)
    partner = canonical_pair(LiePairClass(2, (), 0.0), 2)[1]
    try:
        classify_pair(xi, partner)
        print(f"  {name}: unexpectedly classified")
    except ImpossibleTranslation as exc:
        print(f"  {name}: rejected ({exc})")
