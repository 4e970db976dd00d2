"""Exact matchability toolkit for finite abelian groups and finite field
extensions."""

__version__ = "0.1.0"

from .errors import (
    EmptyInputError,
    MatchkitError,
    NotUnmatchableError,
    ParseError,
    ScaleExceededError,
    SizeMismatchError,
)
from .fields import (
    AtomReport,
    FieldExtension,
    IntermediateField,
    Subspace,
    all_subspaces,
    atom_report,
    count_subspaces,
    element_degree,
    fmt_element,
    fmt_field,
    fmt_subspace,
    full_subspace,
    gaussian_binomial,
    intermediate_fields,
    intersect,
    is_chowla_subspace,
    is_primitive_subspace,
    is_sidon_subspace,
    make_extension,
    p_of_extension,
    scale_subspace,
    span,
    span_product,
    stabilizer_subfield,
    subspace_elements,
    subspace_sum,
    subspaces_of_dim,
    subspaces_within,
    zero_subspace,
)
from .group_matching import (
    ConditionEntry,
    HallViolator,
    MatchingCertificate,
    ScanOutcome,
    StructureWitness,
    check_all_conditions,
    check_condition,
    find_matching,
    hall_violator,
    has_matching,
    lemma_violation_scan,
    matched_by_permutation_scan,
    matching_property_scan,
    semicoset_representative_check,
    structure_witness,
    verify_certificate,
)
from .groups import (
    Group,
    ProgressionWitness,
    QuasiPeriodicWitness,
    Subgroup,
    coset_cover_count,
    element_order,
    find_progression,
    generated_subgroup,
    is_chowla_subset,
    is_coset_of,
    is_progression,
    is_sidon_subset,
    multiplicity,
    p_of_group,
    product_set,
    quasi_periodic_witness,
    stabilizer,
    subgroups,
)
from .linear_matching import (
    LinearConditionEntry,
    MatchedBasisCertificate,
    SpaceMatchVerdict,
    SubfieldAtomWitness,
    basis_matched_criterion,
    check_all_linear_conditions,
    check_linear_condition,
    find_criterion_violation,
    find_matched_basis,
    space_matchable,
    subfield_atom_witness,
    verify_matched_certificate,
)
from .literals import (
    Instance,
    fmt_group,
    fmt_group_element,
    fmt_group_subset,
    fmt_instance,
    parse_field,
    parse_field_element,
    parse_group,
    parse_group_element,
    parse_group_range,
    parse_group_subset,
    parse_instance,
    parse_subspace,
)
from .search import (
    FieldDomain,
    GroupDomain,
    MaxChowlaResult,
    ScanReport,
    SearchBudget,
    conjecture_5_1_scan,
    conjecture_5_2_scan,
    max_chowla_dimension,
    merge_reports,
    run_sharded,
    unmatchable_pair_search,
)
