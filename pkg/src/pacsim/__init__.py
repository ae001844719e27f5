"""pacsim: seeded simulator and analysis toolkit for preferential attachment
with choice by fitness, its urn representation, and its branching-coalescing
time-reversed dual."""

from .distributions import (FitnessDistribution, ModelConstants, RDistribution,
                            extinction_prob, leaf_count_dist, model_constants,
                            offspring_pgf, two_color_fixed_point)
from .core import GraphView, SimConfig, UrnTrace, graph_view, run_forward, select_parent
from .genealogy import (BackwardDual, FounderIndex, LayerProfile, backward_dual,
                        color_duality_check, founders, generation_layers)
from .gwdual import GWOutcome, MuEstimate, mu_limit, mu_limit_exact, sample_tree

__all__ = [
    "FitnessDistribution", "ModelConstants", "RDistribution",
    "extinction_prob", "leaf_count_dist", "model_constants", "offspring_pgf",
    "two_color_fixed_point",
    "GraphView", "SimConfig", "UrnTrace", "graph_view", "run_forward", "select_parent",
    "BackwardDual", "FounderIndex", "LayerProfile", "backward_dual",
    "color_duality_check", "founders", "generation_layers",
    "GWOutcome", "MuEstimate", "mu_limit", "mu_limit_exact", "sample_tree",
]

__version__ = "0.1.0"
