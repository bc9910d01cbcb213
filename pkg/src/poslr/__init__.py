"""Online sparse linear regression with partially observed features.

Two learners compete with the best k-sparse linear predictor while querying
at most k0 coordinates per round: a masked-feature Dantzig selector for
labels from a noisy sparse model, and a mini-batch greedy learner built from
budgeted experts and the Vovk-Azoury-Warmuth forecaster for arbitrary bounded
labels.
"""
from .core_types import (LabeledExample, MaskedObservation, ProblemConfig, RegretLedger,
                         SparseWeight, Stream, squared_loss, validate_config)
from .datagen import gen_agnostic, gen_realizable
from .dantzig import lambda_threshold, run_algorithm1, solve_dantzig, top_k
from .online_greedy import run_algorithm2, schedule_params
from .regret import compute_regret, dyadic_checkpoints, slope_estimate
from .sparse_oracle import best_subset, least_squares_on_support

__version__ = "0.1.0"
