"""Spectral toolkit for periodic Jacobi matrices on universal-cover trees.

The finite input is a connected leafless multigraph with edge weights
``a > 0`` and vertex potentials ``b``.  The package computes spectra of
the lifted operator on the universal cover: band/point-mass scans via
the directed-edge m-function recursion, closed-form Green's functions
for the solvable models (with their second sheet), truncated-ball
eigenvalue checks, and two-sided comparison bounds for the spectral gap
at the top (and, on bipartite graphs, the bottom) of the spectrum.
"""

from ._kernels import HAVE_COMPILED
from .cover import (
    BallBudgetError,
    LiftedVector,
    TreeBall,
    apply_H,
    build_ball,
    ground_state_identity,
    lanczos_top,
    lift_psi,
)
from .gap import (
    GapBounds,
    GapReport,
    gap_minus_quantities,
    gap_quantities,
    gap_report,
    reference_gap_free,
    reference_gap_rg,
)
from .graphs import (
    Bipartition,
    FiniteGraph,
    GraphError,
    GraphParseError,
    GraphValidationError,
    IndexedGraph,
    JacobiParams,
    alternating_model,
    assemble_jacobi,
    cycle_graph,
    free_model,
    from_edge_list,
    indexed,
    is_bipartite,
    negate_b,
    parse_graph,
    rg_model,
    serialize_graph,
)
from .green_models import (
    AltBModel,
    FreeModel,
    LimitInconsistencyError,
    PoleAudit,
    PoleEvaluationError,
    RGModel,
    SheetedPoint,
    eval_alt,
    eval_free,
    eval_rg,
    evaluate,
    pole_audit,
)
from .mfunction import (
    MVector,
    SolverError,
    SpectrumReport,
    dos_density,
    green_diag,
    solve_m,
    spectrum_scan,
)
from .rgmodel import (
    RgEigenfunction,
    build_u,
    dos_zero_weight,
    residue_check,
    u_norm_sq,
    verify_Hu_zero,
)
from .spectral import (
    PerronPair,
    SpectrumFinite,
    eigen_sym,
    gershgorin_bound,
    perron,
    perron_minus,
)

__version__ = "0.1.0"

__all__ = [
    "HAVE_COMPILED",
    "__version__",
    # graphs
    "FiniteGraph", "JacobiParams", "Bipartition", "IndexedGraph",
    "GraphError", "GraphParseError", "GraphValidationError", "parse_graph",
    "serialize_graph", "is_bipartite", "assemble_jacobi", "negate_b",
    "indexed", "free_model", "alternating_model", "rg_model", "cycle_graph",
    "from_edge_list",
    # spectral
    "PerronPair", "SpectrumFinite", "eigen_sym", "perron", "perron_minus",
    "gershgorin_bound",
    # cover
    "TreeBall", "LiftedVector", "BallBudgetError", "build_ball", "apply_H",
    "lift_psi", "lanczos_top", "ground_state_identity",
    # m-function
    "MVector", "SpectrumReport", "SolverError", "solve_m", "green_diag",
    "dos_density", "spectrum_scan",
    # closed forms
    "SheetedPoint", "FreeModel", "RGModel", "AltBModel", "PoleAudit",
    "PoleEvaluationError", "LimitInconsistencyError", "evaluate",
    "eval_free", "eval_rg", "eval_alt", "pole_audit",
    # kernel eigenfunction model
    "RgEigenfunction", "build_u", "u_norm_sq", "verify_Hu_zero",
    "residue_check", "dos_zero_weight",
    # gap bounds
    "GapBounds", "GapReport", "gap_quantities", "gap_minus_quantities",
    "reference_gap_free", "reference_gap_rg", "gap_report",
]
