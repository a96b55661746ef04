"""Half-positionality of objectives recognized by deterministic Buchi
automata: the three-condition decision procedure, checkable witnesses in both
directions, an independent game-solving oracle, and ordered monotone graphs
with canonical morphisms.
"""

from .automata import (
    Alphabet,
    Dba,
    Lasso,
    alpha_free_components,
    extend_to_safe_cycle,
    format_dba,
    is_safe,
    is_saturated,
    parse_dba,
    residual,
    run_state,
    saturate,
)
from .congruence import (
    Classifier,
    PrefixOrder,
    Rel,
    build_classifier,
    candidate_acceptance,
    compute_prefix_order,
    has_total_prefix_order,
    is_total,
    recognizable_by_classifier,
)
from .decider import (
    CounterexampleArena,
    Verdict,
    counterexample_arena,
    decide,
    decide_prefix_independent,
)
from .errors import (
    BudgetError,
    ContractError,
    HalfposError,
    InputError,
    InternalError,
    SearchExhausted,
)
from .games import (
    Arena,
    PositionalStrategy,
    ProductGame,
    exists_positional_optimal,
    format_arena,
    parse_arena,
    product,
    solve_buchi_game,
    strategy_wins_from,
    verify_no_positional_optimal,
    winning_vertices,
)
from .languages import (
    InclusionOutcome,
    Nba,
    complement_dba,
    dba_equivalent,
    dba_included,
    dba_to_nba,
    intersect_nba,
    lasso_accepted,
    nba_empty,
    reach_language_meets_safe_cycles,
)
from .progress import ProgressWitness, is_progress_consistent
from .universal import (
    MonotoneGraph,
    Morphism,
    build_universal_graph,
    check_completely_well_monotonic,
    compute_morphism,
    vertex_satisfies,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
