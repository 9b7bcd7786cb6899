"""Isomorphism testing for central colored Cayley graphs over almost simple groups.

The top-level namespace re-exports the main types and operations; see the
README for the pipeline overview and the CLI.
"""

from .errors import CapExceededError, CencayError, InternalError, InvalidInputError
from .group import (
    ClassPartition,
    Epimorphism,
    FiniteGroup,
    Subgroup,
    automorphism_group,
    conjugacy_classes,
    group_from_generators,
    group_isomorphisms,
    is_almost_simple,
    quotient_with_epimorphism,
    socle,
    subgroups_over_socle,
)
from .perm import (
    D2Subgroup,
    PermutationGroup,
    RegularReps,
    RelationPartition,
    block_action_with_kernel,
    d2_group,
    full_d2_subgroup,
    orbitals,
    regular_representations,
    regular_subgroups,
    stabilizer_chain,
    symmetric_group_on,
    wreath_group_on_blocks,
)
from .coherent import (
    AlgebraicIso,
    CoherentConfiguration,
    EquivalenceInClosure,
    extend_algebraic_iso,
    induced_iso_on_restriction_and_quotient,
    is_boxplus_trivial,
    is_wreath_wrt,
    quotient_cc,
    restriction,
    wl_closure,
)
from .cayley import (
    CayleyScheme,
    ColorCayleyGraph,
    PrincipalSection,
    build_central_cayley,
    cayley_wl,
    compute_H0,
    compute_H1,
    partition_from_class_merge,
    principal_section,
)
from .iso import (
    IsoCoset,
    IsoResult,
    Majorant,
    QuotientGraph,
    automorphisms,
    brute_force_oracle,
    c0_search,
    iso_test,
    lift_and_intersect,
    majorant,
    quotient_isos,
    schemes_with_phi,
)
from .fixtures import BUILTIN_NAMES, builtin_group

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
