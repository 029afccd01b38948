from genmakespan._core import (
    AssertionReport,
    BruteForceResult,
    DiscreteDistribution,
    FamilyKind,
    GuessOutcome,
    InfeasibleError,
    Instance,
    McEstimate,
    ResourceLimitError,
    Solution,
    SolveOptions,
    ValidationError,
    brute_force_opt,
    effective_size,
    evaluate_exact,
    evaluate_mc,
    gen_general_gap,
    gen_line_gap,
    gen_random,
    result_json,
    scale,
    solve,
    split_at_one,
)

__all__ = [
    "AssertionReport",
    "BruteForceResult",
    "DiscreteDistribution",
    "FamilyKind",
    "GuessOutcome",
    "InfeasibleError",
    "Instance",
    "McEstimate",
    "ResourceLimitError",
    "Solution",
    "SolveOptions",
    "ValidationError",
    "brute_force_opt",
    "effective_size",
    "evaluate_exact",
    "evaluate_mc",
    "gen_general_gap",
    "gen_line_gap",
    "gen_random",
    "result_json",
    "scale",
    "solve",
    "split_at_one",
]
