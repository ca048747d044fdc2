"""Online shortest-path routing with end-to-end cost feedback via barycentric-spanner DSEE."""
from .costs import CostModel, EdgeDistribution, default_concentration, mean_costs, path_concentration, sample_costs
from .graph import NetworkInstance, PathSet, PathVector, enumerate_paths, load_network, path_cost
from .policies import PolicySpec, build_policy, in_exploration, oslash, exploration_constant
from .sim import AggregateResult, ExperimentConfig, RegretTrace, brute_force_best_path, replicate, run_episode
from .spanner import BarycentricSpanner, build_spanner, coefficients

__version__ = "0.1.0"
