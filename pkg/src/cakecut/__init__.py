"""Compositional cake-cutting games with exact arithmetic.

Two ways to chain cut-and-choose rounds over a shared cake: plain chaining,
whose equilibrium is exponentially unequal, and the biggest-player rule,
whose equilibrium hands every one of n players exactly 1/n with n-1 cuts.
The package provides the game engines, an equivalent lens-composed pipeline,
a grid-based Nash certifier, inequality and welfare statistics, and a CLI
that emits figure data and plots.
"""

from .core import (
    Cake,
    Distribution,
    Partition,
    Piece,
    Valuation,
    fair_partition,
    frac,
    gini_pairwise,
    gini_rank,
    is_envy_free,
    is_equitable,
    is_proportional,
    measure,
    pareto_dominates,
    welfare,
)
from .engines import (
    ChoiceContext,
    ChoiceEvent,
    CutContext,
    CutEvent,
    ExitEvent,
    GameConfig,
    GameState,
    GameTrace,
    HandoffEvent,
    Pick,
    QueryCounter,
    Rule,
    StrategyProfile,
    bp_best_response,
    choose_bigger,
    deviate,
    equilibrium_profile,
    halve_cut,
    play,
    proportional_cut,
    replay_jsonl,
    trace_to_jsonl,
)
from .equilibrium import (
    DEFAULT_GRID,
    Grid,
    NashCertificate,
    PlayerDeviation,
    backward_induction,
    certify_nash,
    first_cut_payoff,
    payoff_curve,
)
from .lenses import (
    Lens,
    compose_game,
    compose_seq,
    count_queries,
    identity_lens,
    make_choose_unit,
    make_cut_unit,
    play_composed,
    vanilla_player_unit,
)
from .metrics import (
    PoAReport,
    gini_asymptotic,
    gini_idealized_bruteforce,
    gini_limit,
    gini_vanilla_exact,
    poa,
    rw_complexity,
    vanilla_distribution,
)

__version__ = "0.1.0"
