"""Desk-scale experiment setups shared by scripts/ and the acceptance tests."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .costs import CostModel, bernoulli, pareto, uniform
from .graph import enumerate_paths
from .networks import grid, parallel_serial
from .policies import PolicySpec, build_policy
from .sim import run_episode


def bernoulli_parallel_serial() -> CostModel:
    """Bernoulli edges; path means 0.1, 0.2, 0.2, 0.3 (best gap 0.1)."""
    return CostModel((bernoulli(0.05), bernoulli(0.15), bernoulli(0.05), bernoulli(0.15)))


def uniform_parallel_serial() -> CostModel:
    """Uniform edges of width 0.2; path means 0.2, 0.3, 0.3, 0.4 (best gap 0.1)."""
    return CostModel((uniform(0.0, 0.2), uniform(0.1, 0.3), uniform(0.0, 0.2), uniform(0.1, 0.3)))


def pareto_parallel_serial(alpha: float = 2.5, q: float = 2.0) -> CostModel:
    return CostModel((pareto(alpha, 0.1), pareto(alpha, 0.2), pareto(alpha, 0.1), pareto(alpha, 0.2)), declared_q=q)


def grid_bernoulli(rows: int = 4, cols: int = 4, seed: int = 12345):
    net = grid(rows, cols)
    p = np.round(np.random.default_rng(seed).uniform(0.1, 0.9, net.m), 3)
    return net, CostModel(tuple(bernoulli(float(x)) for x in p))


def solo_cube():
    """Vertices of {1,2}^3 with uniform coordinate costs; action means 0.7 .. 1.4, best gap 0.1."""
    actions = np.array([[i, j, k] for i in (1, 2) for j in (1, 2) for k in (1, 2)], dtype=float)
    model = CostModel((uniform(0.0, 0.2), uniform(0.1, 0.3), uniform(0.3, 0.5)))
    return actions, model


def parallel_serial_paths():
    return enumerate_paths(parallel_serial())


def _trace(args):
    actions, model, spec, horizon, seed = args
    policy = build_policy(spec, actions, model, seed)
    return run_episode(actions, model, policy, horizon, seed)


def run_traces(actions, model, spec: PolicySpec, horizon: int, seeds, jobs: int = 1):
    """Full regret traces, one per seed, in seed order."""
    actions = np.asarray(getattr(actions, "matrix", actions), dtype=float)
    work = [(actions, model, spec, horizon, s) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_trace, work))
    return [_trace(w) for w in work]
