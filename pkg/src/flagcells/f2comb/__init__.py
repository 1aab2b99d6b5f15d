"""F2 combinatorics of upper-triangular matrices: the moves, the involution,
slices and heights, named elements, and orbit enumeration."""

from .triangular import (
    F2Tri,
    apply_generator,
    generator_indices,
    iota,
    height,
    slice_iota_height,
    is_symmetric_height,
    is_special_height,
    special_heights,
    is_singleton,
    pairing,
    translate,
    phi,
    phi_star,
    matrix_E,
    matrix_R,
    m_corner_minus,
    m_corner_plus,
    n_corner_minus,
    p_odd_grid,
    n_corner_plus,
    hbar,
    mbar_minus,
    mbar_plus,
    nbar_minus,
    nbar_plus,
    f_append,
    named_matrix,
    orbit_members,
)
from .orbits import (
    OrbitReport,
    orbit_of,
    all_orbits,
    orbits_in_slice,
    slice_reachable,
    max_states_limit,
    DEFAULT_MAX_STATES,
)

__all__ = [
    "F2Tri",
    "apply_generator",
    "generator_indices",
    "iota",
    "height",
    "slice_iota_height",
    "is_symmetric_height",
    "is_special_height",
    "special_heights",
    "is_singleton",
    "pairing",
    "translate",
    "phi",
    "phi_star",
    "matrix_E",
    "matrix_R",
    "m_corner_minus",
    "m_corner_plus",
    "n_corner_minus",
    "p_odd_grid",
    "n_corner_plus",
    "hbar",
    "mbar_minus",
    "mbar_plus",
    "nbar_minus",
    "nbar_plus",
    "f_append",
    "named_matrix",
    "orbit_members",
    "OrbitReport",
    "orbit_of",
    "all_orbits",
    "orbits_in_slice",
    "slice_reachable",
    "max_states_limit",
    "DEFAULT_MAX_STATES",
]
