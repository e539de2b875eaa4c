"""Conditionally positive definite unilateral weighted shifts.

Generate shifts from scalar representing triplets, classify them, decide
subnormality and similarity to subnormal shifts, build the model subnormal
shift, and test quasi-affinity and similarity between shift pairs.
"""

from .core import (
    DiagonalTriplet,
    ScalarTriplet,
    ShiftSequences,
    TypeLabel,
    beta,
    classify_type,
    diagonal_triplet,
    gamma,
    sequences,
    validate_triplet,
    weight,
)
from .measures import AtomicMeasure, ResolventIntegrals, point_mass, zero_measure
from .qpoly import q_poly, q_recurrence_check
from .quasiaffine import (
    MomentSource,
    alevy_scenario,
    as_moment_source,
    intertwiner_check,
    intertwiner_defect,
    quasi_affine_test,
    shift_matrix,
    similarity_test,
)
from .similarity import (
    ModelDegenerateError,
    ModelShift,
    b2_identity_check,
    criterion_ineqsuf,
    criterion_kdwq,
    criterion_nyttrs,
    criterion_weight_band,
    defect_moment_measure,
    model_subnormal,
    similar_by_beta,
)
from .subnormality import (
    NecessaryReport,
    berger_measure,
    dichotomy_check,
    hankel_psd_oracle,
    is_subnormal,
    necessary_conditions,
)
from .verdict import (
    INCONCLUSIVE,
    NO,
    YES,
    InvalidTripletError,
    NotApplicableError,
    Verdict,
)
from .wab import (
    GrowthFamilyExample,
    WabClassification,
    example_t0,
    generate_3uwre,
    wab_classify,
    wab_weight_list,
    wab_weights,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure",
    "DiagonalTriplet",
    "GrowthFamilyExample",
    "INCONCLUSIVE",
    "InvalidTripletError",
    "ModelDegenerateError",
    "ModelShift",
    "MomentSource",
    "NecessaryReport",
    "NO",
    "NotApplicableError",
    "ResolventIntegrals",
    "ScalarTriplet",
    "ShiftSequences",
    "TypeLabel",
    "Verdict",
    "WabClassification",
    "YES",
    "alevy_scenario",
    "as_moment_source",
    "b2_identity_check",
    "berger_measure",
    "beta",
    "classify_type",
    "criterion_ineqsuf",
    "criterion_kdwq",
    "criterion_nyttrs",
    "criterion_weight_band",
    "defect_moment_measure",
    "diagonal_triplet",
    "dichotomy_check",
    "example_t0",
    "gamma",
    "generate_3uwre",
    "hankel_psd_oracle",
    "intertwiner_check",
    "intertwiner_defect",
    "is_subnormal",
    "model_subnormal",
    "necessary_conditions",
    "point_mass",
    "q_poly",
    "q_recurrence_check",
    "quasi_affine_test",
    "sequences",
    "shift_matrix",
    "similar_by_beta",
    "similarity_test",
    "validate_triplet",
    "wab_classify",
    "wab_weight_list",
    "wab_weights",
    "weight",
    "zero_measure",
]
