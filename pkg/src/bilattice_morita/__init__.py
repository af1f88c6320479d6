"""Finite calculus of CSLs, masa-bimodule supports, bilattices and spatial Morita equivalence."""
from .errors import (
    BilatticeError, DegenerateRelation, GroundMismatch, InternalInconsistency, InvalidInstance,
    SizeLimitExceeded,
)
from .limits import Limits, current_limits, use_limits
from .spaces import GroundSpace, Proj
from .report import LawOutcome, Report
from .bimodule import (
    Relation, check_erdos_laws, erdos_reconstruct, is_nondegenerate, is_preorder, map_of, nonzero_witness, ref_hull,
    s_phi, span_compose, transpose,
)
from .lattice import (
    CSL, JoinIrreducibles, LatticeHom, alg_of_lattice, check_csl_laws, csl_generate, hom_validate,
    join_irreducibles, lat_of_relation, lattice_iso_search, lattice_isomorphisms,
)
from .bilattice import (
    Bilattice, BilatticeHom, as_csl, bil_of, check_bil_intersection, bilattice_generate, bilattice_isomorphisms,
    check_bilattice_laws, essential_bilattice, essential_of_csl_algebra, hom_check, is_onto,
    iso_search, m_of, slices,
)
from .morita import (
    Blocks, MoritaConfig, MoritaWitness, check_doubling_blocks, check_lemma_identities, check_nonzero_transfer_hom,
    check_onto_hom_laws, check_op_blocks, check_op_theta_identities, combined_lattice_iso,
    decide_morita, double_diag, double_graph, omega_patterns, op_of_hom, verify_morita,
    witnesses_from_hom,
)
from .inverse_image import (
    PointMap, RectanglePresentation, check_inverse_image, check_nonzero_transfer, generated_bilattice,
    hom_from_point_maps, pullback, rectangle_presentation,
)

__version__ = "0.1.0"
