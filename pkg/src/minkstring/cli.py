"""Command-line front end: JSON documents in, JSON/CSV out.

Subcommands: classify-2form, classify-killing, classify-pair, simulate,
worldsheet, verify, make-testcase.  Exit codes: 0 success, 2 parse error,
3 unstable classification, 4 impossible translation pair, 5 parameter
violation, 6 constraint violation.  The KC_TOL environment variable
overrides the default numerical tolerance (1e-9).
"""

import argparse
import json
import sys

import numpy as np

from .config import DEFAULT_TOL
from .core import KillingField, TwoForm, act_lorentz_2form, act_poincare
from .dynamics import (
    PhaseState,
    build_worldsheet,
    conserved_set,
    flow_exact,
    flow_symplectic,
    momentum_observable,
    ng_residual,
)
from .errors import (
    ClassificationUnstable,
    ConstraintViolated,
    DegenerateSheet,
    DimensionTooSmall,
    ImpossibleTranslation,
    NonSeparable,
    NotABracketPair,
    ParamViolation,
    ZeroField,
)
from .killing import KillingClass, canonical_killing, classify_killing
from .liepairs import canonical_pair, classify_pair, LiePairClass
from .randoms import random_lorentz, random_poincare
from .twoform import canonical_2form_matrix, canonicalize_2form

PARSE_ERROR = 2
UNSTABLE = 3
IMPOSSIBLE = 4
PARAM_ERROR = 5
CONSTRAINT_ERROR = 6


def _fmt(x):
    return float(f"{float(x):.17g}")


def _jsonify(obj):
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return obj


def _emit(doc):
    print(json.dumps(_jsonify(doc), indent=2))


def _read_document(path):
    try:
        text = sys.stdin.read() if path in (None, "-") else open(path).read()
        doc = json.loads(text)
        n = int(doc["n"])
        F = np.array(doc["F"], float)
        f = np.array(doc.get("f", np.zeros(n + 1)), float)
        if F.shape != (n + 1, n + 1) or f.shape != (n + 1,):
            raise ValueError("array shapes inconsistent with n")
        out = {"n": n, "F": TwoForm(F), "f": f}
        if "G" in doc:
            G = np.array(doc["G"], float)
            g = np.array(doc.get("g", np.zeros(n + 1)), float)
            if G.shape != (n + 1, n + 1) or g.shape != (n + 1,):
                raise ValueError("pair array shapes inconsistent with n")
            out["G"], out["g"] = TwoForm(G), g
        return out
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: cannot parse input document: {exc}", file=sys.stderr)
        raise SystemExit(PARSE_ERROR)


def _witness_doc(g):
    if hasattr(g, "lam"):
        return {"lambda": g.lam.mat, "c": g.c}
    return {"lambda": g.mat, "c": [0.0] * g.mat.shape[0]}


def cmd_classify_2form(args):
    doc = _read_document(args.input)
    cls, W = canonicalize_2form(doc["F"])
    target = canonical_2form_matrix(cls, doc["n"])
    resid = float(np.max(np.abs(act_lorentz_2form(W, doc["F"]).mat - target.mat)))
    out = {"class": cls.tag, "b": list(cls.b), "witness": _witness_doc(W), "residual": resid}
    if cls.a is not None:
        out["a"] = cls.a
    _emit(out)


def cmd_classify_killing(args):
    doc = _read_document(args.input)
    xi = KillingField(doc["F"], doc["f"])
    cls, g = classify_killing(xi)
    tgt = canonical_killing(cls)
    out_xi = act_poincare(g, xi)
    resid = float(
        max(np.max(np.abs(out_xi.F.mat - tgt.F.mat)), np.max(np.abs(out_xi.f - tgt.f)))
    )
    params = {"b": list(cls.b)}
    for p in ("a", "f0", "fn"):
        v = getattr(cls, p)
        if v is not None:
            params[p] = v
    _emit(
        {
            "class": cls.tag,
            "dim": cls.dim,
            "params": params,
            "witness": _witness_doc(g),
            "residual": resid,
        }
    )


def cmd_classify_pair(args):
    doc = _read_document(args.input)
    if "G" not in doc:
        print("error: pair document needs G (and optionally g)", file=sys.stderr)
        raise SystemExit(PARSE_ERROR)
    xi = KillingField(doc["F"], doc["f"])
    ef = KillingField(doc["G"], doc["g"])
    cls, g = classify_pair(xi, ef)
    xi_c, eta_c = canonical_pair(cls, doc["n"])
    oxi, oeta = act_poincare(g, xi), act_poincare(g, ef)
    resid = float(
        max(
            np.max(np.abs(oxi.F.mat - xi_c.F.mat)),
            np.max(np.abs(oxi.f - xi_c.f)),
            np.max(np.abs(oeta.F.mat - eta_c.F.mat)),
            np.max(np.abs(oeta.f - eta_c.f)),
        )
    )
    _emit(
        {
            "family": cls.family,
            "b": list(cls.b),
            "q": cls.q,
            "witness": _witness_doc(g),
            "residual": resid,
        }
    )


def _killing_class_from_args(args):
    try:
        params = json.loads(args.params) if args.params else {}
    except json.JSONDecodeError as exc:
        print(f"error: bad --params JSON: {exc}", file=sys.stderr)
        raise SystemExit(PARSE_ERROR)
    n = int(params.pop("n"))
    b = tuple(params.pop("b", ()))
    return KillingClass(args.cls, n, b=b, **params)


def cmd_simulate(args):
    cls = _killing_class_from_args(args)
    xi = canonical_killing(cls)
    cs = conserved_set(xi)
    H = cs.hamiltonian
    try:
        z0doc = json.loads(args.z0)
        z0 = np.concatenate([np.array(z0doc["x"], float), np.array(z0doc["P"], float)])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"error: bad --z0 JSON: {exc}", file=sys.stderr)
        raise SystemExit(PARSE_ERROR)
    if z0.size != 2 * (cls.dim + 1):
        print("error: z0 size mismatch", file=sys.stderr)
        raise SystemExit(PARSE_ERROR)
    steps = args.steps
    if steps < 0 or args.sigma_max < 0:
        raise ParamViolation("steps and sigma-max must be nonnegative")
    if args.method == "exact":
        sigmas = (
            np.linspace(0.0, args.sigma_max, steps + 1) if steps else np.array([0.0])
        )
        traj = np.array([flow_exact(H, z0, s).z for s in sigmas])
    else:
        h = args.sigma_max / steps if steps else 1.0
        traj = flow_symplectic(H, z0, h, steps)
        sigmas = np.arange(steps + 1) * (args.sigma_max / steps if steps else 0.0)
    m = cls.dim + 1
    labels = [Q.label for Q in cs]
    header = (
        ["sigma"]
        + [f"x{i}" for i in range(m)]
        + [f"P{i}" for i in range(m)]
        + labels
    )
    print(",".join(header))
    vals0 = np.array([Q.value(z0) for Q in cs])
    drift = 0.0
    for s, z in zip(sigmas, traj):
        vals = np.array([Q.value(z) for Q in cs])
        drift = max(drift, float(np.max(np.abs(vals - vals0))))
        row = [s] + list(z) + list(vals)
        print(",".join(f"{v:.17g}" for v in row))
    print(f"# max_drift={drift:.17g}")


def _parse_grid(spec):
    try:
        a, b, m = spec.split(":")
        return np.linspace(float(a), float(b), int(m))
    except ValueError as exc:
        print(f"error: bad grid spec {spec!r} (want a:b:m): {exc}", file=sys.stderr)
        raise SystemExit(PARSE_ERROR)


def cmd_worldsheet(args):
    cls = _killing_class_from_args(args)
    xi = canonical_killing(cls)
    cs = conserved_set(xi)
    H = cs.hamiltonian
    try:
        z0doc = json.loads(args.geodesic_z0)
        z0 = np.concatenate([np.array(z0doc["x"], float), np.array(z0doc["P"], float)])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"error: bad --geodesic-z0 JSON: {exc}", file=sys.stderr)
        raise SystemExit(PARSE_ERROR)
    ps = momentum_observable(xi).value(z0)
    if abs(ps) > 1e-8 * (1.0 + float(np.max(np.abs(z0)))):
        raise ConstraintViolated(f"xi^mu P_mu = {ps:.3e} at z0 (must vanish)")
    tau = _parse_grid(args.tau)
    sigma = _parse_grid(args.sigma)
    geo = np.array([flow_exact(H, z0, s).z for s in sigma])
    ws = build_worldsheet(xi, geo, tau, sigma)
    resid, report = ng_residual(ws)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(
                _jsonify({"tau": tau, "sigma": sigma, "x": ws.grid}), fh
            )
    print(
        f"max_residual={resid:.6e} det_min={report['det_min']:.6e} "
        f"det_max={report['det_max']:.6e}"
    )


# ---------------------------------------------------------------------------
# verification suites


def _suite_spectral(rng, trials):
    from .spectral import eigen_structure, kernel_basis, kernel_causal_type
    from .randoms import random_two_form
    from .core import eta as eta_mat

    fails = 0
    for _ in range(trials):
        n = int(rng.integers(1, 8))
        F = random_two_form(rng, n)
        spec = eigen_structure(F)
        if spec.snap_distance > DEFAULT_TOL * max(F.norm(), 1.0):
            fails += 1
            continue
        basis = kernel_basis(F)
        kct = kernel_causal_type(basis, DEFAULT_TOL)
        # brute-force signature oracle on the kernel Gram matrix
        if len(basis):
            B = np.array(basis)
            w = np.linalg.eigvalsh(B @ eta_mat(n) @ B.T)
            thr = 1e-9 * max(1.0, np.max(np.abs(w)))
            neg, zero = int(np.sum(w < -thr)), int(np.sum(np.abs(w) <= thr))
            expect = (
                "Timelike" if neg else ("Null" if zero else "Spacelike")
            )
            if len(basis) == n + 1:
                expect = "Full"
        else:
            expect = "Spacelike"
        if kct.tag != expect:
            fails += 1
    return fails


def _sample_killing_classes(rng):
    out = []
    for tag in "abcdefghijklmn":
        for n in range(1, 8):
            try:
                cls = _make_class(tag, n, rng)
                canonical_killing(cls)
                out.append(cls)
                break
            except (DimensionTooSmall, ParamViolation):
                continue
    return out


def _make_class(tag, n, rng):
    from .killing import _TAG_STRUCTURE

    ftag, pat = _TAG_STRUCTURE[tag]
    kw = {}
    if ftag in "cd":
        kw["a"] = float(rng.uniform(0.5, 2.0))
    if ftag in "bdf":
        kw["b"] = tuple(sorted(rng.uniform(0.5, 2.0, size=1), reverse=True))
    if pat == "f0":
        kw["f0"] = float(-rng.uniform(0.1, 2.0))
    elif pat == "fn":
        kw["fn"] = float(rng.uniform(0.1, 2.0))
    return KillingClass(tag, n, **kw)


def _suite_classify(rng, trials):
    fails = 0
    classes = _sample_killing_classes(rng)
    for k in range(trials):
        cls = classes[k % len(classes)]
        xi0 = canonical_killing(cls)
        h = random_poincare(rng, cls.dim)
        try:
            got, g = classify_killing(act_poincare(h, xi0))
        except Exception:
            fails += 1
            continue
        if got.tag != cls.tag:
            fails += 1
    return fails


def _suite_dynamics(rng, trials):
    from .dynamics import poisson_bracket
    import itertools

    fails = 0
    classes = _sample_killing_classes(rng)
    for k in range(trials):
        cls = classes[k % len(classes)]
        xi = canonical_killing(cls)
        cs = conserved_set(xi)
        if len(cs) != cls.dim + 1:
            fails += 1
            continue
        worst = max(
            poisson_bracket(q1, q2).coeff_norm()
            for q1, q2 in itertools.combinations(list(cs) + [cs.hamiltonian, cs.p_s], 2)
        )
        if worst > 1e-12:
            fails += 1
            continue
        z0 = rng.normal(size=2 * (cls.dim + 1))
        z1 = flow_exact(cs.hamiltonian, z0, 1.0).z
        scale = 1.0 + float(np.max(np.abs(np.concatenate([z0, z1])))) ** 2
        if max(abs(Q.value(z1) - Q.value(z0)) for Q in cs) > 1e-9 * scale:
            fails += 1
    return fails


def _suite_pairs(rng, trials):
    fails = 0
    specs = [
        LiePairClass(1, (), 0.0),
        LiePairClass(1, (1.5,), 0.8),
        LiePairClass(2, (), 1.0),
        LiePairClass(2, (2.0, 1.0), 0.0),
    ]
    dims = {0: 2, 1: 5, 2: 2, 3: 5}
    for k in range(trials):
        cls = specs[k % len(specs)]
        n = dims[k % len(specs)]
        xi0, eta0 = canonical_pair(cls, n)
        h = random_poincare(rng, n)
        try:
            got, g = classify_pair(act_poincare(h, xi0), act_poincare(h, eta0))
        except Exception:
            fails += 1
            continue
        if (
            got.family != cls.family
            or not np.allclose(got.b, cls.b, atol=1e-7)
            or abs(got.q - cls.q) > 1e-7
        ):
            fails += 1
    return fails


SUITES = {
    "spectral": _suite_spectral,
    "classify": _suite_classify,
    "dynamics": _suite_dynamics,
    "pairs": _suite_pairs,
}


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if args.trials == 0:
        print("warning: 0 trials requested; suites pass vacuously", file=sys.stderr)
    rng = np.random.default_rng(args.seed)
    all_ok = True
    print(f"{'suite':<12}{'trials':>8}{'failures':>10}  result")
    for name in names:
        fails = SUITES[name](rng, args.trials)
        ok = fails == 0
        all_ok &= ok
        print(f"{name:<12}{args.trials:>8}{fails:>10}  {'PASS' if ok else 'FAIL'}")
    raise SystemExit(0 if all_ok else 1)


def cmd_make_testcase(args):
    rng = np.random.default_rng(args.seed)
    if args.pair:
        try:
            p = json.loads(args.params)
            cls = LiePairClass(int(p["family"]), tuple(p.get("b", ())), float(p.get("q", 0.0)))
            n = int(p["n"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            print(f"error: bad --params JSON: {exc}", file=sys.stderr)
            raise SystemExit(PARSE_ERROR)
        xi0, eta0 = canonical_pair(cls, n)
        h = random_poincare(rng, n)
        xi, ef = act_poincare(h, xi0), act_poincare(h, eta0)
        _emit({"n": n, "F": xi.F.mat, "f": xi.f, "G": ef.F.mat, "g": ef.f})
    else:
        cls = _killing_class_from_args(args)
        xi0 = canonical_killing(cls)
        h = random_poincare(rng, cls.dim)
        xi = act_poincare(h, xi0)
        _emit({"n": cls.dim, "F": xi.F.mat, "f": xi.f})


def build_parser():
    p = argparse.ArgumentParser(
        prog="minkstring",
        description="Killing-field classification and integrable string dynamics",
    )
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn in (
        ("classify-2form", cmd_classify_2form),
        ("classify-killing", cmd_classify_killing),
        ("classify-pair", cmd_classify_pair),
    ):
        sp = sub.add_parser(name)
        sp.add_argument("--input", default=None, help="JSON file (default stdin)")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("simulate")
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--params", required=True, help='e.g. {"n":2,"a":1.0}')
    sp.add_argument("--z0", required=True, help='{"x":[...],"P":[...]}')
    sp.add_argument("--sigma-max", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--method", choices=["exact", "leapfrog"], default="exact")
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("worldsheet")
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--params", required=True)
    sp.add_argument("--geodesic-z0", required=True)
    sp.add_argument("--tau", required=True, help="a:b:m")
    sp.add_argument("--sigma", required=True, help="c:d:k")
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_worldsheet)

    sp = sub.add_parser("verify")
    sp.add_argument("--suite", choices=["all"] + list(SUITES), default="all")
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("make-testcase")
    sp.add_argument("--class", dest="cls", default=None)
    sp.add_argument("--params", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--pair", action="store_true")
    sp.set_defaults(fn=cmd_make_testcase)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
    except ClassificationUnstable as exc:
        print(f"error: unstable classification: {exc} (margin={exc.margin})", file=sys.stderr)
        raise SystemExit(UNSTABLE)
    except ImpossibleTranslation as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(IMPOSSIBLE)
    except (ParamViolation, DimensionTooSmall, ZeroField, NotABracketPair) as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        raise SystemExit(PARAM_ERROR)
    except (ConstraintViolated, DegenerateSheet, NonSeparable) as exc:
        print(f"error: constraint violated: {exc}", file=sys.stderr)
        raise SystemExit(CONSTRAINT_ERROR)
    return 0


if __name__ == "__main__":
    sys.exit(main())
