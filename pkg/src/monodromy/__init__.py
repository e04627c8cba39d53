"""Numerical monodromy engine.

Tracks polynomial roots and candidate radical formulas continuously
along closed loops in coefficient space, and reports the induced root
permutations against the closure of the formula traces.  Commutator
loops (and commutators of commutators) close every admissible formula's
trace while still permuting the roots, which is the mechanical reason a
general root formula in radicals cannot exist at degree five.
"""

from .paths import (
    DEFAULT_CLOSURE_TOL,
    DEFAULT_MAX_STEP,
    CircularArc,
    ComplexPath,
    Composite,
    FullCircle,
    PathError,
    PolarForm,
    Segment,
    commutator,
    concat,
    constant_path,
    is_closed,
    polar,
    reverse,
    sample,
    winding_angle,
    winding_number,
)
from .permutations import (
    PermGroup,
    Permutation,
    PermutationError,
    commutator_perm,
    compose,
    derived_series,
    find_nested_commutator_witness,
    generate,
    is_solvable,
    nested_commutator,
    symmetric_group,
)
from .polynomials import (
    CoefficientPath,
    MatchError,
    MonicPolynomial,
    RootSolveError,
    RootTrack,
    TrackingError,
    all_roots,
    match_permutation,
    pairwise_separation,
    root_motion_to_coeffs,
    track_roots,
    vieta,
)
from .expressions import (
    BranchAssignment,
    BranchTrack,
    BranchTrackingError,
    EvaluationError,
    Expression,
    ExpressionSyntaxError,
    ExpressionTrack,
    default_branches,
    eval_at,
    nth_roots,
    parse,
    track_branch,
    track_expression,
)
from .scenarios import (
    SCENARIO_IDS,
    FalsificationVerdict,
    MonodromySurvey,
    NoWitnessResult,
    RootMotion,
    ScenarioError,
    ScenarioTrace,
    commutator_scenario,
    eq1_branch_points,
    eq1_monodromy,
    nested_commutator_scenario,
    quintic_monodromy,
    realize_permutation,
    run_scenario,
    swap_scenario,
)
from .trace import TraceDocument, TraceReadError, read_trace, write_trace
from .runner import RunRequest, run_request

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
