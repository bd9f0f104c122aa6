"""Graphical games on digraphs under Markov and a priori realizations.

Exact rational solvers for limiting outcome distributions, pure and mixed
(uniform) Nash equilibrium checks, and the cycle-game families.
"""

from .apriori import apriori_limit, best_pure_response_at, sample_apriori
from .core import (
    CYCLE,
    BudgetExceeded,
    GameError,
    GameStructure,
    OutcomeDistribution,
    Payoff,
    Position,
    contract_forced_moves,
    effective_payoff,
    initializing_extension,
    normal_form,
    play_pure,
    validate,
)
from .equilibria import (
    APRIORI,
    MARKOV,
    find_mixed_deviation,
    improvement_graph,
    is_mixed_ne,
    is_mixed_une,
    is_pure_ne,
    is_pure_une,
    pure_equilibria,
)
from .families import build_g1, build_g2, build_g3, build_gn, gn_mixed, gn_payoff, gn_pure
from .io import load_game, save_game
from .markov import markov_limit, sample_markov, uniformly_best_pure_response

__all__ = [
    "APRIORI",
    "CYCLE",
    "MARKOV",
    "BudgetExceeded",
    "GameError",
    "GameStructure",
    "OutcomeDistribution",
    "Payoff",
    "Position",
    "apriori_limit",
    "best_pure_response_at",
    "build_g1",
    "build_g2",
    "build_g3",
    "build_gn",
    "contract_forced_moves",
    "effective_payoff",
    "find_mixed_deviation",
    "gn_mixed",
    "gn_payoff",
    "gn_pure",
    "improvement_graph",
    "initializing_extension",
    "is_mixed_ne",
    "is_mixed_une",
    "is_pure_ne",
    "is_pure_une",
    "load_game",
    "markov_limit",
    "normal_form",
    "play_pure",
    "pure_equilibria",
    "sample_apriori",
    "sample_markov",
    "save_game",
    "uniformly_best_pure_response",
    "validate",
]
