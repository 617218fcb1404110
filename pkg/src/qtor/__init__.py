"""Exact-arithmetic toolkit for quasitoric manifolds: integral
cohomology rings, K-theory as Chern-character lattices, generalized
Adams e-invariants, and per-prime stable rigidity certificates."""

from .cohomology import (
    GradedRing,
    RingElement,
    RingMap,
    cohomology,
    cup,
    identity_ring_map,
    mod2_square_rank,
    ring_map_from_degree2,
    verify_ring_map,
)
from .einvariant import (
    ConeData,
    EInvariantReport,
    TrivialityVerdict,
    classical_e,
    generalized_e,
    make_cone,
    p_local_triviality,
    realizability_check,
    skeleton_consistency,
)
from .ktheory import (
    KLattice,
    admissible_basis,
    chern_image,
    lift_iso,
    make_klattice,
    quotient_data,
    skeleton_truncate,
)
from .linalg import Lattice, det_int, integer_hnf
from .manifold import (
    QuasitoricData,
    ValidatedManifold,
    h_vector,
    load_manifold,
    manifold_from_dict,
    validate,
)
from .rigidity import RigidityVerdict, find_ring_iso, verdict

__version__ = "0.1.0"

__all__ = [
    "GradedRing", "RingElement", "RingMap", "cohomology", "cup",
    "identity_ring_map", "mod2_square_rank", "ring_map_from_degree2",
    "verify_ring_map",
    "ConeData", "EInvariantReport", "TrivialityVerdict", "classical_e",
    "generalized_e", "make_cone", "p_local_triviality",
    "realizability_check", "skeleton_consistency",
    "KLattice", "admissible_basis", "chern_image", "lift_iso",
    "make_klattice", "quotient_data", "skeleton_truncate",
    "Lattice", "det_int", "integer_hnf",
    "QuasitoricData", "ValidatedManifold", "h_vector", "load_manifold",
    "manifold_from_dict", "validate",
    "RigidityVerdict", "find_ring_iso", "verdict",
    "__version__",
]
