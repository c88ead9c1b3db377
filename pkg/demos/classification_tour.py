"""Tour of the two classification layers.

Builds each canonical constant 2-form and each canonical Killing field,
scrambles them with random Lorentz / Poincare maps, and shows that the
classifiers recover the class tag, the parameters, and an explicit group
element mapping the input back to normal form.

Run:  python3 demos/classification_tour.py
"""

import numpy as np

from minkstring import (
    KillingClass,
    TwoFormClass,
    act_lorentz_2form,
    act_poincare,
    canonical_2form_matrix,
    canonical_killing,
    canonicalize_2form,
    classify_killing,
)
from minkstring.randoms import random_lorentz, random_poincare

rng = np.random.default_rng(2026)

print("=== constant 2-forms on R^{n,1} ===")
print(f"{'class':>6} {'n':>3} {'params':<24} {'recovered':<24} {'residual':>10}")
cases = [
    (TwoFormClass("a"), 3),
    (TwoFormClass("b", b=(1.7, 0.4)), 4),
    (TwoFormClass("c", a=0.9), 2),
    (TwoFormClass("d", a=1.2, b=(0.8,)), 3),
    (TwoFormClass("e"), 2),
    (TwoFormClass("f", b=(1.1,)), 4),
]
for cls, n in cases:
    F0 = canonical_2form_matrix(cls, n)
    F = act_lorentz_2form(random_lorentz(rng, n), F0)
    got, W = canonicalize_2form(F)
    resid = np.max(np.abs(act_lorentz_2form(W, F).mat - F0.mat))
    params = f"a={cls.a} b={list(cls.b)}"
    recov = f"a={None if got.a is None else round(got.a, 6)} b={[float(round(x, 6)) for x in got.b]}"
    print(f"{got.tag:>6} {n:>3} {params:<24} {recov:<24} {resid:>10.1e}")

print()
print("=== Killing fields (F, f), 14 classes ===")
print(f"{'class':>6} {'n':>3} {'recovered parameters':<40} {'residual':>10}")
killing_cases = [
    KillingClass("a", 1, f0=-1.0),
    KillingClass("b", 1, fn=0.6),
    KillingClass("c", 1),
    KillingClass("d", 1, a=1.3),
    KillingClass("e", 2, b=(0.9,), f0=-0.4),
    KillingClass("f", 2, a=0.7, fn=1.1),
    KillingClass("g", 2, f0=-2.0),
    KillingClass("h", 3, b=(1.5,), fn=0.3),
    KillingClass("i", 3, b=(1.5,)),
    KillingClass("j", 3, a=0.5, b=(2.0,)),
    KillingClass("k", 3, fn=0.8),
    KillingClass("l", 4, a=1.0, b=(1.4,), fn=0.9),
    KillingClass("m", 4, b=(0.6,), f0=-0.2),
    KillingClass("n", 5, b=(1.2,), fn=0.5),
]
for cls in killing_cases:
    xi0 = canonical_killing(cls)
    xi = act_poincare(random_poincare(rng, cls.dim), xi0)
    got, g = classify_killing(xi)
    out = act_poincare(g, xi)
    resid = max(np.max(np.abs(out.F.mat - xi0.F.mat)), np.max(np.abs(out.f - xi0.f)))
    parts = []
    for name in ("a", "f0", "fn"):
        v = getattr(got, name)
        if v is not None:
            parts.append(f"{name}={v:.6f}")
    if got.b:
        parts.append(f"b={[float(round(x, 6)) for x in got.b]}")
    print(f"{got.tag:>6} {cls.dim:>3} {', '.join(parts):<40} {resid:>10.1e}")
