"""Two-sample testing for latent distance random graphs.

Tests whether two samples of graphs on a shared vertex set were generated by
latent positions that agree up to a similarity transformation. Edge
probabilities are estimated by rank-K spectral truncation of the averaged
adjacency matrices; the test statistic is the Spearman rank correlation of
the two estimates, calibrated by permutation, parametric bootstrap, or (in
simulations) a null-model reference distribution.
"""

from .align import SimilarityTransform, procrustes_distance
from .errors import (
    CalibrationError,
    EstimationError,
    InputError,
    ParameterError,
    RankGraphError,
)
from .estimator import (
    EstimateResult,
    EstimatorConfig,
    FixedRank,
    ProfileLikelihoodRank,
    RankSelection,
    ThresholdRank,
    average_adjacency,
    discretize,
    estimate_details,
    estimate_prob_matrix,
    estimate_rho,
    resolve_rank,
)
from .graphio import (
    read_graph,
    write_dense_graph,
    write_edgelist,
    write_prob_matrix,
)
from .harness import (
    ExperimentSpec,
    PowerTable,
    convergence_diagnostic,
    run_experiment,
)
from .model import (
    GaussianLink,
    GraphModel,
    LinkKernel,
    LogisticLink,
    SqExponentialLink,
    build_prob_matrix,
    generate_std_normal_positions,
    perturb_m1,
    perturb_m2,
    sample_graph,
)
from .ranktest import (
    PipelineResult,
    TestStatistic,
    midranks,
    rank_upper_triangle,
    spearman_statistic,
    statistic_pipeline,
)
from .resampling import (
    TestReport,
    bootstrap_p_value,
    bootstrap_test,
    null_reference_test,
    permutation_test,
)
from .symmat import SpectralDecomp, SymMatrix, eigendecompose, low_rank_approx

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "EstimateResult",
    "EstimationError",
    "EstimatorConfig",
    "ExperimentSpec",
    "FixedRank",
    "GaussianLink",
    "GraphModel",
    "InputError",
    "LinkKernel",
    "LogisticLink",
    "ParameterError",
    "PipelineResult",
    "PowerTable",
    "ProfileLikelihoodRank",
    "RankGraphError",
    "RankSelection",
    "SimilarityTransform",
    "SpectralDecomp",
    "SqExponentialLink",
    "SymMatrix",
    "TestReport",
    "TestStatistic",
    "ThresholdRank",
    "average_adjacency",
    "bootstrap_p_value",
    "bootstrap_test",
    "build_prob_matrix",
    "convergence_diagnostic",
    "discretize",
    "eigendecompose",
    "estimate_details",
    "estimate_prob_matrix",
    "estimate_rho",
    "generate_std_normal_positions",
    "low_rank_approx",
    "midranks",
    "null_reference_test",
    "permutation_test",
    "perturb_m1",
    "perturb_m2",
    "procrustes_distance",
    "rank_upper_triangle",
    "read_graph",
    "resolve_rank",
    "run_experiment",
    "sample_graph",
    "spearman_statistic",
    "statistic_pipeline",
    "write_dense_graph",
    "write_edgelist",
    "write_prob_matrix",
]
