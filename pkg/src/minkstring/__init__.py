"""minkstring: Killing-field classification and integrable string dynamics on R^{n,1}."""

from .config import DEFAULT_TOL
from .core import (
    KillingField,
    LorentzMap,
    PoincareMap,
    TwoForm,
    act_lorentz_2form,
    act_poincare,
    compose,
    eta,
    identity_map,
    invert,
    minkowski_inner,
    sharp,
)
from .dynamics import (
    ConservedSet,
    PhaseState,
    QuadraticObservable,
    Worldsheet,
    build_hamiltonian,
    build_worldsheet,
    conserved_set,
    flow_exact,
    flow_exact_mp,
    flow_drift_mp,
    flow_symplectic,
    independence_rank,
    killing_flow,
    momentum_observable,
    ng_residual,
    poisson_bracket,
    potential_X,
)
from .errors import (
    ClassificationUnstable,
    ConstraintViolated,
    DegenerateSheet,
    DimensionMismatch,
    DimensionTooSmall,
    ImpossibleTranslation,
    MinkstringError,
    NonSeparable,
    NotABracketPair,
    NotCanonical,
    NotLorentz,
    ParamViolation,
    SnapFailure,
    ZeroField,
)
from .killing import (
    BlockDecomposition,
    KillingClass,
    canonical_killing,
    classify_killing,
    decompose_blocks,
    reduce_translation,
)
from .liepairs import (
    LiePairClass,
    canonical_pair,
    classify_pair,
    has_isolated_nonzero,
    nilpotency_index,
    verify_bracket,
)
from .spectral import (
    KernelCausalType,
    SpectrumSummary,
    eigen_structure,
    invariants,
    kernel_basis,
    kernel_causal_type,
)
from .twoform import (
    TwoFormClass,
    canonical_2form_matrix,
    canonicalize_2form,
    skew_canonical,
    superdiagonal_reduce,
)

__version__ = "1.0.0"
