"""Time loop, bandit observation model, regret accounting and replication."""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .costs import CostModel, CostStream, mean_costs
from .policies import EXPLORE, PolicySpec, best_action, build_policy

BLOCK = 4096


def _matrix(actions) -> np.ndarray:
    return np.atleast_2d(np.asarray(getattr(actions, "matrix", actions), dtype=float))


def brute_force_best_path(paths, model: CostModel):
    """(best path, gap to the second-smallest distinct mean); ties go to the lowest id."""
    best, gap = best_action(_matrix(paths), mean_costs(model))
    return (paths[best] if hasattr(paths, "paths") else best), gap


@dataclass
class RegretTrace:
    chosen: np.ndarray
    explore: np.ndarray
    inst_regret: np.ndarray
    realized: np.ndarray
    optimal: int
    gap: float
    horizon: int
    seed: int
    policy: str

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.inst_regret)

    @property
    def exploration_count(self) -> int:
        return int(self.explore.sum())

    def cumulative_at(self, ts) -> np.ndarray:
        cum = self.cumulative
        return np.array([cum[t - 1] for t in ts])

    def empirical_best(self) -> int:
        """Most frequent exploitation choice (all choices if never exploiting); ties to the lowest id."""
        picks = self.chosen[~self.explore]
        if picks.size == 0:
            picks = self.chosen
        return int(np.argmax(np.bincount(picks)))

    def exploit_optimal_fraction(self, t_lo: int, t_hi: int) -> tuple[int, int]:
        """(optimal exploitation picks, exploitation slots) within t_lo..t_hi inclusive."""
        sl = slice(t_lo - 1, t_hi)
        exploit = ~self.explore[sl]
        hits = int(np.sum(self.chosen[sl][exploit] == self.optimal))
        return hits, int(exploit.sum())


def run_episode(actions, model: CostModel, policy, horizon: int, seed: int) -> RegretTrace:
    """Play ``policy`` for ``horizon`` slots; it only ever sees the chosen action's total cost.

    The full per-edge cost vector is drawn every slot, so policies run with the
    same seed face identical cost realizations.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    A = _matrix(actions)
    means = mean_costs(model)
    if A.shape[1] != model.m:
        raise ValueError(f"actions have {A.shape[1]} coordinates, cost model has {model.m}")
    action_means = A @ means
    best, gap = best_action(A, means)
    gaps = np.maximum(np.round(action_means - action_means[best], 12), 0.0)

    stream = CostStream(model, seed)
    chosen = np.empty(horizon, dtype=np.int64)
    explore = np.empty(horizon, dtype=bool)
    realized = np.empty(horizon)
    select, update = policy.select, policy.update
    t = 0
    while t < horizon:
        n = min(BLOCK, horizon - t)
        costs = stream.draw_block(n) @ A.T
        rows = costs.tolist()
        picks = [0] * n
        phases = [False] * n
        for i in range(n):
            a = select(t + i + 1)
            update(a, rows[i][a])
            picks[i] = a
            phases[i] = policy.phase == EXPLORE
        chosen[t:t + n] = picks
        explore[t:t + n] = phases
        realized[t:t + n] = costs[np.arange(n), picks] - costs[:, best]
        t += n
    return RegretTrace(
        chosen=chosen,
        explore=explore,
        inst_regret=gaps[chosen],
        realized=realized,
        optimal=best,
        gap=gap,
        horizon=horizon,
        seed=int(seed),
        policy=getattr(policy, "name", type(policy).__name__),
    )


def log_checkpoints(horizon: int) -> list[int]:
    """floor(10^(k/4)) up to the horizon, plus the horizon itself."""
    pts = set()
    k = 0
    while True:
        t = int(math.floor(10 ** (k / 4) + 1e-9))
        if t > horizon:
            break
        pts.add(t)
        k += 1
    pts.add(horizon)
    return sorted(pts)


@dataclass(frozen=True)
class ExperimentConfig:
    actions: np.ndarray
    model: CostModel
    policy: PolicySpec
    horizon: int


@dataclass
class AggregateResult:
    policy: str
    checkpoints: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    replications: int
    empirical_best: dict = field(default_factory=dict)

    def rows(self):
        for t, mu, sd in zip(self.checkpoints, self.mean, self.std):
            yield int(t), float(mu), float(sd), self.replications, self.policy


def _episode(args):
    config, seed, checkpoints = args
    policy = build_policy(config.policy, config.actions, config.model, seed)
    trace = run_episode(config.actions, config.model, policy, config.horizon, seed)
    return trace.cumulative_at(checkpoints), trace.empirical_best()


def replicate(config: ExperimentConfig, seeds: Sequence[int], jobs: int = 1,
              checkpoints: Optional[Sequence[int]] = None) -> AggregateResult:
    """Run one episode per seed and aggregate cumulative regret at the checkpoints.

    Results are gathered in seed order, so they do not depend on ``jobs``.
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    cps = sorted(set(int(c) for c in (checkpoints or log_checkpoints(config.horizon))))
    if cps[0] < 1 or cps[-1] > config.horizon:
        raise ValueError("checkpoints must lie in 1..horizon")
    work = [(config, s, cps) for s in seeds]
    if jobs > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_episode, work))
    else:
        results = [_episode(w) for w in work]
    curves = np.array([r[0] for r in results])
    return AggregateResult(
        policy=config.policy.name,
        checkpoints=np.array(cps),
        mean=curves.mean(axis=0),
        std=curves.std(axis=0),
        replications=len(seeds),
        empirical_best=dict(sorted(Counter(r[1] for r in results).items())),
    )
