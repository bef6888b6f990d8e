"""Rigorous numerics for general position of parametrized iterated function systems."""
from .cases import (
    ExactOverlapParams,
    OnePointParams,
    WspWitness,
    build_exact_overlap,
    build_one_point,
    classify_exact_overlap,
    classify_one_point,
    dmn_interval_exact,
    dmn_interval_onepoint,
    margin_exact_overlap,
    margin_one_point,
    wsp_witness_search,
)
from .certify import (
    Certificate,
    HolderData,
    corollary_preset,
    displacement_bound,
    empirical_displacement_check,
    genpos_bound,
    theorem3_certificate,
    translation_corollary_single,
    translation_corollary_ssc,
)
from .errors import (
    BracketError,
    DomainError,
    GenposError,
    HypothesisError,
    InapplicableError,
    NonMonotoneError,
    PreconditionError,
)
from .families import (
    FamilyDescriptor,
    exact_overlap_family,
    one_point_family,
    translation_all_family,
    translation_single_family,
)
from .ifs import (
    Address,
    AffineMap,
    IFSystem,
    RatioVector,
    address_point,
    coding_distance,
    compose,
    similarity_system,
    word_meet,
)
from .moran import DimensionEquation, similarity_dimension, solve_dimension_equation
from .separation import (
    SeparationVerdict,
    SweepReport,
    check_pair_disjoint,
    check_ssc,
    exceptional_set_sweep,
)

__version__ = "0.1.0"
