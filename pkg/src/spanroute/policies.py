"""Path/action selection policies.

Every policy exposes ``select(t) -> action id`` and ``update(action, cost)``
where ``cost`` is the total observed cost of the chosen action, nothing more.
``phase`` reports whether the last selection was an exploration slot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .costs import (
    ConcentrationParams,
    CostModel,
    action_concentration,
    default_concentration,
    mean_costs,
)
from .errors import ColdStart, InvalidB, InvalidC
from .spanner import build_spanner

EXPLORE = "explore"
EXPLOIT = "exploit"


def oslash(k: int, l: int) -> int:
    """Cyclic 1-based index ((k - 1) mod l) + 1."""
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    return (k - 1) % l + 1


def loglog(t: float) -> float:
    """ln ln t clipped below at 1."""
    if t <= math.e:
        return 1.0
    return max(1.0, math.log(math.log(t)))


GROWTH_FUNCTIONS: dict[str, Callable[[float], float]] = {"loglog": loglog}


@dataclass(frozen=True)
class StarSchedule:
    """Explore while the count is below d * ceil(d^2 * w * ln t)."""

    d: int
    w: float

    def threshold(self, t: int) -> float:
        return self.d * math.ceil(self.d * self.d * self.w * math.log(t))


@dataclass(frozen=True)
class PrimeSchedule:
    """Explore while the count is below d * ceil(f(t) * ln t); f needs no model constants."""

    d: int
    f: str = "loglog"

    def __post_init__(self):
        if self.f not in GROWTH_FUNCTIONS:
            raise ValueError(f"unknown growth function {self.f!r}")

    def threshold(self, t: int) -> float:
        return self.d * math.ceil(GROWTH_FUNCTIONS[self.f](t) * math.log(t))


@dataclass(frozen=True)
class HeavySchedule:
    """Explore while the count is below v * t^(1/q)."""

    v: float
    q: float

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError("v must be positive")
        if not self.q > 1:
            raise ValueError("q must exceed 1")

    def threshold(self, t: int) -> float:
        return self.v * t ** (1.0 / self.q)


def in_exploration(schedule, t: int, count_so_far: int) -> bool:
    """Whether slot t joins the exploration sequence given |A(t-1)| = count_so_far."""
    if t == 1:
        return True
    return count_so_far < schedule.threshold(t)


def exploration_constant(params: ConcentrationParams, m: int, d: int, b: float, c: float) -> float:
    """Smallest admissible exploration constant max{b/(m d zeta u0)^2, 4b/c^2}."""
    if not b > 2 * m / params.a:
        raise InvalidB(f"b={b} must exceed 2m/a={2 * m / params.a}")
    if not c > 0:
        raise InvalidC(f"c={c} must be positive")
    return max(b / (m * d * params.zeta * params.u0) ** 2, 4 * b / c**2)


class DSEEPolicy:
    """Deterministic exploration/exploitation sequencing over a spanner basis.

    Exploration slots round-robin over the d basis actions; exploitation slots
    play the action whose interpolated cost estimate (coefficients dotted with
    basis sample means) is smallest. Observations made while exploiting are
    not used for estimation.
    """

    def __init__(self, coef, basis_ids, schedule, name: str = "dsee"):
        self.coef = np.asarray(coef, dtype=float)
        self.basis_ids = tuple(int(i) for i in basis_ids)
        self.schedule = schedule
        self.name = name
        self.d = len(self.basis_ids)
        self.count = 0
        self.means = [0.0] * self.d
        self.pulls = [0] * self.d
        self.phase = None
        self._slot = None
        self._best = None

    @classmethod
    def from_spanner(cls, actions, spanner, schedule, name="dsee"):
        return cls(spanner.coefficient_matrix(actions), spanner.basis_ids, schedule, name)

    def estimates(self) -> np.ndarray:
        if min(self.pulls) == 0:
            raise ColdStart("exploitation requested before every basis action was sampled")
        return np.round(self.coef @ np.asarray(self.means), 12)

    def select(self, t: int) -> int:
        # the count < d clause only matters for schedules that start below d
        if self.count < self.d or in_exploration(self.schedule, t, self.count):
            self.count += 1
            self._slot = oslash(self.count, self.d) - 1
            self.phase = EXPLORE
            return self.basis_ids[self._slot]
        self.phase = EXPLOIT
        if self._best is None:
            self._best = int(np.argmin(self.estimates()))
        return self._best

    def update(self, action: int, cost: float) -> None:
        if self.phase != EXPLORE:
            return
        slot = self._slot
        if action != self.basis_ids[slot]:
            raise ValueError(f"exploration slot expected action {self.basis_ids[slot]}, got {action}")
        n = self.pulls[slot] + 1
        self.pulls[slot] = n
        self.means[slot] += (cost - self.means[slot]) / n
        self._best = None


class UCBPolicy:
    """Per-action lower-confidence index: mean - sqrt(2 ln t / pulls), minimised."""

    def __init__(self, n_actions: int, name: str = "naive-ucb"):
        self.name = name
        self.means = np.zeros(n_actions)
        self.pulls = np.zeros(n_actions, dtype=np.int64)
        self._unpulled = list(range(n_actions))
        self.phase = None

    def select(self, t: int) -> int:
        if self._unpulled:
            self.phase = EXPLORE
            return self._unpulled[0]
        self.phase = EXPLOIT
        index = self.means - np.sqrt(2 * math.log(t) / self.pulls)
        return int(np.argmin(index))

    def update(self, action: int, cost: float) -> None:
        n = self.pulls[action] + 1
        self.pulls[action] = n
        self.means[action] += (cost - self.means[action]) / n
        if self._unpulled and self._unpulled[0] == action:
            self._unpulled.pop(0)


class OraclePolicy:
    def __init__(self, best: int, name: str = "oracle"):
        self.best = int(best)
        self.name = name
        self.phase = EXPLOIT

    def select(self, t: int) -> int:
        return self.best

    def update(self, action: int, cost: float) -> None:
        pass


class UniformRandomPolicy:
    """Uniformly random action each slot (linear-regret reference)."""

    def __init__(self, n_actions: int, seed: int, name: str = "uniform-random"):
        self.n = int(n_actions)
        self.name = name
        self.phase = EXPLOIT
        self._rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(2**31,))))
        self._buf = []

    def select(self, t: int) -> int:
        if not self._buf:
            self._buf = self._rng.integers(0, self.n, size=4096).tolist()[::-1]
        return self._buf.pop()

    def update(self, action: int, cost: float) -> None:
        pass


def solo_gap(T_k: int, form: str = "cbrt-log") -> float:
    """Per-epoch gap parameter: (ln T)^(1/3) / T^(1/3), or ln(T^(1/3)) / T^(1/3) for 'log-cbrt'."""
    root = T_k ** (1.0 / 3.0)
    if form == "cbrt-log":
        return math.log(T_k) ** (1.0 / 3.0) / root
    if form == "log-cbrt":
        return math.log(root) / root
    raise ValueError(f"unknown gap form {form!r}")


class EpochPolicy:
    """Geometric epochs T_k = t0 * 2^k, each running a fresh spanner DSEE instance.

    Epoch k uses gap parameter c_k from ``solo_gap`` and exploration constant
    w_k = max{b/(d zeta u0)^2, 4b/c_k^2}.
    """

    def __init__(self, actions, params: ConcentrationParams, t0: int = 100, b: Optional[float] = None,
                 c_form: str = "cbrt-log", approx_C: float = 1.0, name: str = "solo-epoch"):
        actions = np.atleast_2d(np.asarray(actions, dtype=float))
        d = int(np.linalg.matrix_rank(actions))
        self.spanner = build_spanner(actions, d, approx_C)
        self.coef = self.spanner.coefficient_matrix(actions)
        self.params = params
        self.d = d
        self.t0 = int(t0)
        if self.t0 < 1:
            raise ValueError("t0 must be >= 1")
        self.b = 1.01 * 2 / params.a if b is None else float(b)
        if not self.b > 2 / params.a:
            raise InvalidB(f"b={self.b} must exceed 2/a={2 / params.a}")
        self.c_form = c_form
        solo_gap(2, c_form)
        self.name = name
        self.k = -1
        self.epoch_start = 1
        self.epoch_end = 1  # first slot after the current epoch
        self.inner = None
        self.history = []  # (k, T_k, c_k, w_k)

    def epoch_length(self, k: int) -> int:
        return self.t0 * 2**k

    def epoch_w(self, T_k: int) -> float:
        c = solo_gap(T_k, self.c_form)
        p = self.params
        return max(self.b / (self.d * p.zeta * p.u0) ** 2, 4 * self.b / c**2)

    @property
    def phase(self):
        return self.inner.phase if self.inner else None

    def select(self, t: int) -> int:
        while t >= self.epoch_end:
            self.k += 1
            T_k = self.epoch_length(self.k)
            self.epoch_start, self.epoch_end = self.epoch_end, self.epoch_end + T_k
            w = self.epoch_w(T_k)
            self.history.append((self.k, T_k, solo_gap(T_k, self.c_form), w))
            self.inner = DSEEPolicy(self.coef, self.spanner.basis_ids, StarSchedule(self.d, w), self.name)
        return self.inner.select(t - self.epoch_start + 1)

    def update(self, action: int, cost: float) -> None:
        self.inner.update(action, cost)


# --- construction from (name, params) --------------------------------------

POLICY_PARAMS = {
    "dsee-star": {"w", "b", "c"},
    "dsee-prime": {"f"},
    "dsee-heavy": {"v", "q"},
    "solo-epoch": {"t0", "b", "c_form"},
    "naive-dsee": {"w", "b", "c"},
    "naive-ucb": set(),
    "oracle": set(),
}
LIBRARY_ONLY = {"uniform-random": set()}


@dataclass(frozen=True)
class PolicySpec:
    name: str
    params: dict = field(default_factory=dict)


def best_action(actions, means) -> tuple[int, float]:
    """Lowest-id action of minimum mean cost and its gap to the next distinct mean."""
    costs = np.asarray(actions, dtype=float) @ np.asarray(means, dtype=float)
    costs = np.round(costs, 12)
    best = int(np.argmin(costs))
    others = costs[costs > costs[best]]
    gap = float(others.min() - costs[best]) if others.size else 0.0
    return best, gap


def _star_w(params, model, m, d):
    if "w" in params:
        w = float(params["w"])
        if not w > 0:
            raise ValueError("w must be positive")
        return w
    if "b" in params and "c" in params:
        return exploration_constant(default_concentration(model), m, d, float(params["b"]), float(params["c"]))
    raise ValueError("needs either w or both b and c")


def build_policy(spec: PolicySpec, actions, model: CostModel, seed: int = 0, spanner=None):
    """Fresh policy instance for one replication."""
    actions = np.atleast_2d(np.asarray(actions, dtype=float))
    n, m = actions.shape
    p = dict(spec.params)
    name = spec.name
    if name in ("dsee-star", "dsee-prime", "dsee-heavy"):
        if spanner is None:
            spanner = build_spanner(actions, int(np.linalg.matrix_rank(actions)))
        d = spanner.d
        if name == "dsee-star":
            schedule = StarSchedule(d, _star_w(p, model, m, d))
        elif name == "dsee-prime":
            schedule = PrimeSchedule(d, p.get("f", "loglog"))
        else:
            q = p.get("q", model.declared_q)
            if q is None:
                raise ValueError("dsee-heavy needs q (policy parameter or declared model q)")
            schedule = HeavySchedule(float(p.get("v", 1.0)), float(q))
        return DSEEPolicy.from_spanner(actions, spanner, schedule, name)
    if name == "naive-dsee":
        return DSEEPolicy(np.eye(n), range(n), StarSchedule(n, _star_w(p, model, m, n)), name)
    if name == "naive-ucb":
        return UCBPolicy(n, name)
    if name == "oracle":
        return OraclePolicy(best_action(actions, mean_costs(model))[0], name)
    if name == "solo-epoch":
        params = action_concentration(model, actions)
        b = p.get("b")
        return EpochPolicy(actions, params, int(p.get("t0", 100)), None if b is None else float(b),
                           p.get("c_form", "cbrt-log"), name=name)
    if name == "uniform-random":
        return UniformRandomPolicy(n, seed, name)
    raise ValueError(f"unknown policy {name!r}")
