"""Exact orbital-graph diameters of affine groups over prime fields,
with explicit decomposition certificates for the cubic length bound."""

from .diameter import (
    DiameterReport,
    IndexedSet,
    directed_orbit_diameter,
    directed_orbit_diameter_bfs,
    instance_diameter,
    sumset_add,
    undirected_orbit_diameter,
    undirected_orbit_diameter_bfs,
)
from .families import build_family, singer_control, sl_natural, wreath_c2_cp
from .fpmat import (
    binom_mod,
    binomial_expansion_check,
    mat_mul,
    mat_pow,
    nilpotency_degree,
    vec_act,
)
from .groups import (
    AffineInstance,
    GroupClosure,
    Orbit,
    OrbitPartition,
    VectorSpace,
    close_group,
    element_order,
    find_order_p_element,
    is_irreducible,
    single_orbit,
    spanning_translates,
    vector_orbits,
)
from .powersums import (
    PowerSumSystem,
    binomial_moment_system,
    solvability_frontier,
    solve,
    verify_solution,
)
from .witness import (
    CertificationResult,
    DecompositionWitness,
    LineWitness,
    build_line_witness,
    certify_instance,
    decompose_target,
    decompose_target_trivial,
    pick_witness_vector,
    span_line,
)

__version__ = "0.1.0"
