"""Six-length, tail-length and cycle-length of random mappings with a fixed
in-degree sequence: exact laws, samplers, asymptotics and experiments."""

__version__ = "0.1.0"

from .degrees import (DegreeSequence, DegreeStats, AssumptionReport, make_degree_sequence,
                      stats, check_assumptions, generate)
from .graph import (FunctionalGraph, WalkLengths, sample_uniform, iterate, walk_lengths,
                    sample_walk_lazy, sample_walks_lazy)
from .exact import (SurvivalTable, JointLaw, elementary_symmetric_prefix, g_table, survival,
                    sandwich_bounds, joint_law, brute_force_oracle)
from .asymptotics import (ApproxLevel, lambda_of, g_approx, rayleigh_cdf, rayleigh_quantile,
                          rayleigh_moment, m3_bound_check)
from .reduction import (ReductionResult, UrnState, w_reduce, n_extend, urn_step, urn_run,
                        urn_mean, urn_tail_bound, coupled_six_length)
from .gof import ks_distance, chi_square, joint_uniformity_test
from .experiments import ExperimentConfig, StatReport, run_experiment

__all__ = [
    "DegreeSequence", "DegreeStats", "AssumptionReport", "make_degree_sequence", "stats",
    "check_assumptions", "generate",
    "FunctionalGraph", "WalkLengths", "sample_uniform", "iterate", "walk_lengths",
    "sample_walk_lazy", "sample_walks_lazy",
    "SurvivalTable", "JointLaw", "elementary_symmetric_prefix", "g_table", "survival",
    "sandwich_bounds", "joint_law", "brute_force_oracle",
    "ApproxLevel", "lambda_of", "g_approx", "rayleigh_cdf", "rayleigh_quantile",
    "rayleigh_moment", "m3_bound_check",
    "ReductionResult", "UrnState", "w_reduce", "n_extend", "urn_step", "urn_run",
    "urn_mean", "urn_tail_bound", "coupled_six_length",
    "ks_distance", "chi_square", "joint_uniformity_test",
    "ExperimentConfig", "StatReport", "run_experiment",
]
