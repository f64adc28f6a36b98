"""Exact perfection ranks, perfection relations and glue codes of Euclidean lattices."""

from __future__ import annotations

from .exactla import (
    GramPolynomial,
    RationalMatrix,
    formal_norm,
    nullspace_basis,
    rank_exact,
    smith_normal_form,
    verify_formal_identity,
)
from .lattice import (
    Lattice,
    MinimalVectorSet,
    components_in_basis,
    is_well_rounded,
    minimal_vectors,
    sublattice_gram,
)
from .perfection import (
    PerfectionProfile,
    PerfectionRelation,
    ProjectionLine,
    TwoBasisRelation,
    a_coefficients,
    decompose_perf_irreducible,
    duality_report,
    inertia_signature,
    perfection_rank,
    relation_space,
    split_two_sided,
    verify_vmin,
)
from .quotient import (
    ALPHA,
    Code,
    QuotientStructure,
    RegularityVerdict,
    classify_regularity,
    extract_code,
    match_classification,
    nu_statistics,
    quotient_structure,
)
from .watson import (
    WatsonDatum,
    length_condition,
    watson_condition_checks,
    watson_defect,
    watson_relation,
    zahareva_relation,
)

