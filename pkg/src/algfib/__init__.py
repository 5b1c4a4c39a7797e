"""Finite truncated simplicial sets with distinguished horn fillers.

Free algebraic Kan complexes and quasi-categories by staged filler gluing,
levelwise colimits, filler identification for families, and
groupoidification, all at a fixed truncation and stage budget.
"""

from .algebraic import (
    AlgebraicComplex,
    AlgMorphism,
    Defect,
    alg_product,
    algebraic_defects,
    check_alg_morphism,
    choose_fillers,
    find_alg_isomorphism,
    forget_outer,
    make_algebraic,
    split_coequalizer,
)
from .colimits import (
    ColimitResult,
    DiagramSpec,
    Edge,
    chain_colimit,
    coequalizer,
    coproduct,
    equalizer,
    general_colimit,
    product,
    pushout,
    quotient,
)
from .errors import (
    AlgfibError,
    BudgetExhausted,
    CellLimitExceeded,
    DefectError,
    SchemaError,
    SimplicialError,
    TruncationError,
)
from .free import (
    Attachment,
    StagedComplex,
    canonical_retract,
    counit_eval,
    extend_along_fillers,
    free,
    free_map,
    growth_csv,
    growth_stats,
    unit,
)
from .groupoid import generating_maps, groupoidify, interval_nerve
from .horns import (
    Horn,
    Mode,
    check_fibrancy,
    enumerate_horns,
    factors_through,
    find_fillers,
    horns_brute_force,
)
from .io import parse_presentation
from .solid import (
    SolidFamily,
    alg_colimit,
    alg_filtered_colimit,
    identify_fillers,
    pushout_along_free,
    solid_lift,
    solid_mediator,
)
from .sset import (
    ComplexBuilder,
    FiniteCategory,
    Functor,
    SimplicialMap,
    TruncatedSimplicialSet,
    boundary_complex,
    empty_complex,
    find_isomorphism,
    horn_complex,
    nerve,
    nerve_map,
    nondegenerate_simplices,
    standard_simplex,
    validate_map,
    validate_sset,
)

__version__ = "0.1.0"

__all__ = [
    "alg_colimit",
    "alg_filtered_colimit",
    "alg_product",
    "algebraic_defects",
    "AlgebraicComplex",
    "AlgfibError",
    "AlgMorphism",
    "Attachment",
    "boundary_complex",
    "BudgetExhausted",
    "canonical_retract",
    "CellLimitExceeded",
    "chain_colimit",
    "check_alg_morphism",
    "check_fibrancy",
    "choose_fillers",
    "coequalizer",
    "ColimitResult",
    "ComplexBuilder",
    "coproduct",
    "counit_eval",
    "Defect",
    "DefectError",
    "DiagramSpec",
    "Edge",
    "empty_complex",
    "enumerate_horns",
    "equalizer",
    "extend_along_fillers",
    "factors_through",
    "find_alg_isomorphism",
    "find_fillers",
    "find_isomorphism",
    "FiniteCategory",
    "forget_outer",
    "free",
    "free_map",
    "Functor",
    "general_colimit",
    "generating_maps",
    "groupoidify",
    "growth_csv",
    "growth_stats",
    "Horn",
    "horn_complex",
    "horns_brute_force",
    "identify_fillers",
    "interval_nerve",
    "make_algebraic",
    "Mode",
    "nerve",
    "nerve_map",
    "nondegenerate_simplices",
    "parse_presentation",
    "product",
    "pushout",
    "pushout_along_free",
    "quotient",
    "SchemaError",
    "SimplicialError",
    "SimplicialMap",
    "solid_lift",
    "solid_mediator",
    "SolidFamily",
    "split_coequalizer",
    "StagedComplex",
    "standard_simplex",
    "TruncatedSimplicialSet",
    "TruncationError",
    "unit",
    "validate_map",
    "validate_sset",
]
