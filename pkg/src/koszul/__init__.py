"""Exact-arithmetic engine for quadratic and nonhomogeneous quadratic
algebras: Koszul duality, Koszulity certificates, global dimension,
Poincare duality via the graded Frobenius test, twisted potentials, PBW
conditions, curved differential duals, Lie prealgebras and generalized
Chevalley-Eilenberg cohomology."""

from .errors import (
    DegreeError,
    DimensionMismatch,
    EngineError,
    InternalInconsistency,
    NotGorenstein,
    NotTwistedCyclic,
    OneSiteDegenerate,
    RepresentationError,
    SpecError,
)
from .linalg import (
    Matrix,
    SolveResult,
    Subspace,
    annihilator,
    intersect,
    kernel,
    rref_canonicalize,
    solve_linear,
    subspace_sum,
)
from .quadratic import (
    GradedComponent,
    QuadraticAlgebra,
    exterior_algebra,
    koszul_dual,
    koszul_subspace,
    presentation_matrices,
    relation_span,
    symmetric_algebra,
    tensor_algebra,
)
from .homology import (
    FrobeniusReport,
    GorensteinReport,
    KoszulityCertificate,
    frobenius_check,
    global_dimension,
    gorenstein_check,
    koszul_boundary,
    koszulity_certificate,
    l_complex_cohomology,
)
from .potential import (
    TwistedPotential,
    calabi_yau_check,
    extract_potential,
    relations_from_potential,
    solve_qw,
)
from .nonhomog import (
    CurvedDGA,
    NonhomogeneousPresentation,
    PbwConditions,
    build_curved_dual,
    check_pbw_conditions,
    classify,
    overlap_space,
    pbw_verdict,
    verify_curved_dual,
)
from .prealgebra import (
    CEComplex,
    Prealgebra,
    Representation,
    ce_chain_complex,
    ce_cochain_complex,
    lie_prealgebra_check,
    verify_representation,
)
from .specfile import AlgebraSpec, parse_spec, spec_to_text
from .report import emit_report, parse_machine_report, run_analysis

__version__ = "0.1.0"
