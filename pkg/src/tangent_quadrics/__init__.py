"""Quadric surfaces in 3-space tangent to nine figures: polynomial systems,
homotopy continuation, interval certification and enumerative counts."""

from .certify import CertificateBox, VerdictSummary, krawczyk_certify, nondegeneracy_check, verdicts
from .conditions import (
    ConditionProgram,
    DegenerationFamily,
    coefficients_of_pencil,
    leading_form,
    line_condition,
    plane_condition,
    point_condition,
    quadric_condition,
)
from .geometry import (
    CompleteQuadricPoint,
    Flag,
    PluckerLine,
    ProjPlane,
    ProjPoint,
    SymQuadric,
    complete_quadric,
    generator_check,
    incidence_residuals,
    plane_from_span,
    plucker_from_span,
    twisted_cubic_tangent,
    wedge,
)
from .homotopy import (
    TrackedSolution,
    TrackerSettings,
    count_real,
    parameter_homotopy,
    solve_total_degree,
    track_path,
)
from .intervals import ComplexInterval
from .polysys import SlpSystem, TangencyInstance, assemble, evaluate, jacobian, with_det_variable
from .schubert import (
    CountTable,
    Signature,
    bezout_count,
    census,
    flag_power_aggregate,
    flag_systems,
    pyramid_entry,
    q9_aggregate,
)
from .search import SearchState, hill_climb, seed_instance

__version__ = "0.1.0"
