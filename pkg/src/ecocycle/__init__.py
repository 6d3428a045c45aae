"""Ecological Cycle Optimizer (ECO) and supporting experiment tooling.

The package bundles the optimizer itself, a particle swarm baseline, the 23
classic benchmark functions, five constrained engineering design problems,
nonparametric comparison statistics, and a command line experiment harness.
"""

from .problems import (
    Bounds,
    BudgetExhausted,
    DimensionMismatch,
    EvalBudget,
    Evaluation,
    Problem,
    TOL_FEAS,
    clamp_or_resample,
    compare,
    evaluate,
)
from .classic import CLASSIC_IDS, ClassicFunction, UnknownFunction, make_classic, spot_values
from .engineering import (
    ENGINEERING_IDS,
    EngineeringProblem,
    constraint_report,
    make_engineering,
)
from .eco import EcoOptimizer
from .pso import PsoOptimizer, run_pso
from .base import RunTrace
from .analysis import (
    DiversityCurve,
    FriedmanResult,
    PairwiseVerdict,
    RunSummary,
    diversity_curve,
    friedman,
    population_diversity,
    summarize,
    wilcoxon_rank_sum,
    win_tie_loss,
)
from .harness import (
    ExperimentSpec,
    RunRecord,
    make_problem,
    resolve_budget,
    run_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "Bounds",
    "BudgetExhausted",
    "CLASSIC_IDS",
    "ClassicFunction",
    "DimensionMismatch",
    "DiversityCurve",
    "ENGINEERING_IDS",
    "EcoOptimizer",
    "EngineeringProblem",
    "EvalBudget",
    "Evaluation",
    "ExperimentSpec",
    "FriedmanResult",
    "PairwiseVerdict",
    "Problem",
    "PsoOptimizer",
    "RunRecord",
    "RunSummary",
    "RunTrace",
    "TOL_FEAS",
    "UnknownFunction",
    "clamp_or_resample",
    "compare",
    "constraint_report",
    "diversity_curve",
    "evaluate",
    "friedman",
    "make_classic",
    "make_engineering",
    "make_problem",
    "population_diversity",
    "resolve_budget",
    "run_experiment",
    "run_pso",
    "spot_values",
    "summarize",
    "wilcoxon_rank_sum",
    "win_tie_loss",
]
