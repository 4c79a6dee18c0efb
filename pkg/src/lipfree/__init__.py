"""Exact analysis of finite pointed metric spaces and their Lipschitz-free spaces."""

__version__ = "0.1.0"

from .errors import (
    LipfreeError,
    MetricError,
    NoMissingBranchPoint,
    NormExceedsOne,
    NotOnePointed,
    NotZeroHyperbolic,
    ParseError,
    SeparationZero,
    TooFewPoints,
    TriangleViolation,
)
from .metric import (
    FiniteMetricSpace,
    diam,
    four_point_check,
    gromov_product,
    is_ultrametric,
    is_zero_hyperbolic,
    sep,
    ultrametric_violation,
    validate_metric,
)
from .tree import (
    RealizedTree,
    TreePoint,
    branching_points,
    missing_branch_points,
    project,
    realize,
    segment_interior_points,
    tree_distance,
)
from .freespace import (
    FreeVector,
    LipFunction,
    free_norm,
    free_norm_lp,
    free_norm_tree,
    godard_embed,
    lip_norm,
    molecule,
    pairing,
    transport_norm,
)
from .extremal import (
    Certificate,
    dual_witness,
    ell1_verdict,
    extend_inf,
    extend_sup,
    is_extreme_lip,
    is_extreme_lip_lp,
    is_extreme_molecule,
    primal_witness,
)
from .bm import BmCertificate, bm_lower_certified, bm_lower_formula, peaking_family

