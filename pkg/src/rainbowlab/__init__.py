"""Exact tools for rainbow fractional matchings in matroid intersections."""

__version__ = "0.1.0"

from .chains import Chain, SetFamily, close_family, extract_chain, span_dimension, verify_chain
from .collapse import (
    CollapseCertificate,
    CollapseStep,
    ComplexSpec,
    compute_kbar,
    enumerate_faces,
    enumerate_faces_independent,
    ensure_genericity,
    greedy_collapsibility_probe,
    pick_collapsor,
    reweight,
    run_collapse,
    unique_facet,
    verify_certificate,
)
from .errors import InputError, InvariantError
from .lp import LinearProgram, LPSolution, dual_solution, is_optimum_unique, solve
from .matroids import (
    ExplicitMatroid,
    GroundSet,
    Hypergraph,
    PartitionMatroid,
    UniformMatroid,
    check_rank_axioms,
    star_matroids,
)
from .polytopes import (
    IntersectionSystem,
    SkewPolytope,
    is_dual_unique,
    membership,
    nu_star,
    round_two_matroids,
    tau_star,
    tight_sets,
)
from .rainbow import (
    RainbowInstance,
    RainbowResult,
    canonical_instances,
    find_integral_rainbow,
    find_rainbow,
    kz_rainbow,
    random_instance,
    validate_instance,
)
from .setfunctions import (
    PDSTuple,
    SetFunction,
    check_pds,
    check_product_submodular,
    interior_pds,
    perturb_tuple,
)
