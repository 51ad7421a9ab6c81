"""Linear parsing strategies for synchronous context-free grammar rules."""

from .grammar import (
    SCFG, BoundExceeded, GrammarError, InfiniteAmbiguity, SentencePair, SynchronousRule, count_derivations_oracle,
    enumerate_translations, pair_membership_oracle, parse_grammar, rule_permutation,
)
from .multigraph import (
    LinearArrangement, Multigraph, PermutationMultigraph, arrangement_to_strategy, brute_force_cutwidth,
    cutwidth_exact, extended_cutwidth_exact, extended_modified_cutwidth_exact, extended_modified_width_profile,
    extended_width_profile, from_permutation, modified_width_profile, parse_graph, strategy_to_arrangement,
    width_profile,
)
from .parser import ParseState, ParseStats, compile_strategies, count_derivations, recognize
from .strategy import (
    LinearStrategy, Permutation, StrategyReport, brute_force_optimize, decoding_exponents, evaluate,
    external_boundaries, fan_out, independent_boundaries, internal_boundaries, optimize_space, optimize_time,
    step_time_exponent,
)

__version__ = "0.1.0"
