from .builders import (
    BUILTIN,
    CHSH_OPTIMAL,
    GHZ_CONSTRAINTS,
    MERMIN_PERES_CONSTRAINTS,
    chsh_scenario,
    ghz_scenario,
    ghz_state,
    kcbs_scenario,
    leggett_garg_oracle,
    leggett_garg_scenario,
    mermin_peres_scenario,
    pentagram_vectors,
)
from .classical import (
    FineResult,
    JointDistribution,
    KSResult,
    analyze,
    classical_bound,
    joint_distribution_feasible,
    ks_assignment_search,
    outcome_values,
)
from .evaluate import correlation, quantum_value, temporal_correlator, temporal_embed, term_values
from .model import BoundReport, DeterministicStrategy, Inequality, Scenario, Term
from .simplex import LPResult, linprog_eq
