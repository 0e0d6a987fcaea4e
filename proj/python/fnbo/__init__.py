"""Cost-aware Bayesian optimization of function networks."""

from fnbo._core import (
    AggregateReport,
    AlgoCurve,
    CompareReport,
    CompareRow,
    ExperimentConfig,
    InnerSetConfig,
    IterRow,
    LoopConfig,
    MultiStartConfig,
    Problem,
    RunRecord,
    algo_names,
    compare_optimizers,
    make_problem,
    problem_names,
    run_bo,
    run_experiment,
    with_noise,
)

__all__ = [
    "AggregateReport",
    "AlgoCurve",
    "CompareReport",
    "CompareRow",
    "ExperimentConfig",
    "InnerSetConfig",
    "IterRow",
    "LoopConfig",
    "MultiStartConfig",
    "Problem",
    "RunRecord",
    "algo_names",
    "compare_optimizers",
    "make_problem",
    "problem_names",
    "run_bo",
    "run_experiment",
    "with_noise",
]
