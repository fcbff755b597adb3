"""Projected stochastic subgradient optimization with iterate averaging.

Solves strongly convex problems of the form min_w f(w) over a convex set by
the recurrence w_t = project(w_{t-1} - gamma_t g_t), where g_t is a
stochastic subgradient, under the 1/(mu t), 2/(mu (t+1)), and c/(mu (t+b))
step families. A family of online iterate-averaging schemes runs alongside
the raw iterates, and a regularized hinge-loss SVM provides the concrete
benchmark problem. See the `bench` console script for the experiment
harness.
"""

from ._backend import backend_name
from .averaging import (
    AveragerState,
    Doubling,
    NoAveraging,
    PolyDecay,
    PolyWeight,
    SuffixHalf,
    UniformAll,
    closed_form_average,
    fresh_state,
    rho,
    scheme_cli_name,
    scheme_from_name,
    update_average,
)
from .bench import (
    ExperimentConfig,
    FStarEstimate,
    SyntheticSpec,
    estimate_fstar,
    run_experiment,
    verify_suite,
)
from .core import (
    Ball,
    ClassicalStep,
    GeneralStep,
    ProposedStep,
    WholeSpace,
    as_weight_vector,
    l2_norm,
    project,
    step_size,
)
from .data import (
    Dataset,
    Sample,
    add_bias,
    load_libsvm,
    parse_libsvm,
    save_libsvm,
    serialize_libsvm,
    standardize,
    synthesize,
)
from .solver import (
    DivergenceError,
    RunConfig,
    RunRecord,
    RunResult,
    evaluation_times,
    run,
)
from .svm import (
    SampleIndexer,
    SvmObjective,
    SvmProblem,
    full_subgradient,
    svm_objective,
    svm_stochastic_subgradient,
    variance_bound,
    variance_bound_ball,
)

__version__ = "0.1.0"

__all__ = [
    "AveragerState",
    "Ball",
    "ClassicalStep",
    "Dataset",
    "DivergenceError",
    "Doubling",
    "ExperimentConfig",
    "FStarEstimate",
    "GeneralStep",
    "NoAveraging",
    "PolyDecay",
    "PolyWeight",
    "ProposedStep",
    "RunConfig",
    "RunRecord",
    "RunResult",
    "Sample",
    "SampleIndexer",
    "SuffixHalf",
    "SvmObjective",
    "SvmProblem",
    "SyntheticSpec",
    "UniformAll",
    "WholeSpace",
    "add_bias",
    "as_weight_vector",
    "backend_name",
    "closed_form_average",
    "estimate_fstar",
    "evaluation_times",
    "fresh_state",
    "full_subgradient",
    "l2_norm",
    "load_libsvm",
    "parse_libsvm",
    "project",
    "rho",
    "run",
    "run_experiment",
    "save_libsvm",
    "scheme_cli_name",
    "scheme_from_name",
    "serialize_libsvm",
    "standardize",
    "step_size",
    "svm_objective",
    "svm_stochastic_subgradient",
    "synthesize",
    "update_average",
    "variance_bound",
    "variance_bound_ball",
    "verify_suite",
]
