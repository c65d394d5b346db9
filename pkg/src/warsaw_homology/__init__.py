"""Milnor-Thurston homology computations for the Warsaw circle.

Chains are l1 sequences of Dirac masses; the homology class of a 0-chain in
H_0(W) is decided by exact summability tests on its alternating partial sums.
"""

from .berlanga import (
    DEFAULT_SUITE,
    ConvergenceReport,
    FunctionalValue,
    TestFunction,
    lambda_functional,
    non_hausdorff_demo,
    weak_convergence_report,
)
from .chains import (
    CarrierViolation,
    DiracChain,
    DimensionMismatch,
    boundary_1,
    l1_norm,
    parity_boundary,
    pushforward,
    total_mass,
)
from .arith import Estimate
from .sequences import (
    AltDiff,
    Combo,
    FiniteSupport,
    GeometricBase,
    PowerFamilyBase,
    SeqSpec,
    Truncation,
    Variant,
    alt_partial_sum,
    combine,
    eval_term,
    limit_alt_sum,
)
from .tails import DominatedCombo, PSeries, Summability, SummabilityVerdict, summability_decide
from .traces import PartialSumTrace, Transform, partial_sum_trace
from .warsaw import (
    Category,
    Family,
    HomologyClassVerdict,
    InvalidInput,
    NotInL1Error,
    PreconditionFailure,
    Side,
    WarsawPoint,
    classify,
    combo_class,
    connecting_chain,
    interleave,
    limit_seq,
    mv_forward,
    mv_invert,
    split,
    truncation_seq,
    warsaw_point,
)

__version__ = "0.1.0"
