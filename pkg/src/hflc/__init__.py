"""Curved link Floer complexes from grid diagrams.

The package computes the curved chain complex of a multi-based link in
the three-sphere from a grid diagram, together with the chain-level maps
of the associated cobordism calculus (basepoint actions, quasi-
stabilization, births and handles, relative homology actions, flow-graph
actions), and machine-checks the algebraic relations between them.
"""

from .complexes import (
    CurvedComplex,
    Generator,
    GradingError,
    Morphism,
    complex_from_json,
    complex_to_json,
    compose,
    msum,
    phi_action,
    psi_action,
    same_complex,
    specialize_complex,
    specialize_morphism,
    verify_curvature,
)
from .grid import GridDiagram, GridPath, build_complex, load_grid, parse_grid
from .homology import (
    cancel_units,
    hat_dims,
    homology,
    over_u,
    over_u_graded,
    truncated_dims,
    u_tower_report,
)
from .poly import (
    Coloring,
    Poly,
    Ucolor,
    Uvar,
    VarId,
    Vcolor,
    Vvar,
    curvature,
    d1,
    d2,
    parse_poly,
)
from .solver import SolveReport, chain_map_space, homotopy_solve
from .stab import (
    StabError,
    StabSite,
    S_minus,
    S_plus,
    T_minus,
    T_plus,
    birth,
    death,
    four_handle,
    free_stabilize,
    one_handle,
    quasi_stabilize,
    recognize_site,
    three_handle,
    zero_handle,
)

__version__ = "0.1.0"

__all__ = [
    "Coloring",
    "CurvedComplex",
    "Generator",
    "GradingError",
    "GridDiagram",
    "GridPath",
    "Morphism",
    "Poly",
    "S_minus",
    "S_plus",
    "SolveReport",
    "StabError",
    "StabSite",
    "T_minus",
    "T_plus",
    "Ucolor",
    "Uvar",
    "VarId",
    "Vcolor",
    "Vvar",
    "birth",
    "build_complex",
    "cancel_units",
    "chain_map_space",
    "complex_from_json",
    "complex_to_json",
    "compose",
    "curvature",
    "d1",
    "d2",
    "death",
    "four_handle",
    "free_stabilize",
    "hat_dims",
    "homology",
    "homotopy_solve",
    "load_grid",
    "msum",
    "one_handle",
    "over_u",
    "over_u_graded",
    "parse_grid",
    "phi_action",
    "psi_action",
    "quasi_stabilize",
    "recognize_site",
    "same_complex",
    "specialize_complex",
    "specialize_morphism",
    "three_handle",
    "truncated_dims",
    "u_tower_report",
    "verify_curvature",
    "zero_handle",
    "__version__",
]
