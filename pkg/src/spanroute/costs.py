"""Per-edge cost distributions, reproducible cost streams and concentration constants."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import HeavyTailed

KINDS = {"bernoulli": 2, "uniform": 2, "exponential": 1, "pareto": 2}


@dataclass(frozen=True)
class EdgeDistribution:
    """One of bernoulli(p, scale), uniform(lo, hi), exponential(rate), pareto(alpha, scale).

    Every sampler is an inverse transform of one uniform variate per draw.
    """

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution {self.kind!r}")
        if len(self.params) != KINDS[self.kind]:
            raise ValueError(f"{self.kind} takes {KINDS[self.kind]} parameters, got {len(self.params)}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        p = self.params
        if not all(math.isfinite(x) for x in p):
            raise ValueError(f"{self.kind} parameters must be finite")
        if self.kind == "bernoulli" and not (0 <= p[0] <= 1 and p[1] > 0):
            raise ValueError("bernoulli needs 0 <= p <= 1 and scale > 0")
        if self.kind == "uniform" and not p[0] < p[1]:
            raise ValueError("uniform needs lo < hi")
        if self.kind == "exponential" and not p[0] > 0:
            raise ValueError("exponential needs rate > 0")
        if self.kind == "pareto" and not (p[0] > 1 and p[1] > 0):
            raise ValueError("pareto needs alpha > 1 (finite mean) and scale > 0")

    @classmethod
    def parse(cls, text: str) -> "EdgeDistribution":
        """Parse the scenario syntax, e.g. ``"pareto 2.5 1"``."""
        parts = str(text).split()
        if not parts:
            raise ValueError("empty distribution")
        try:
            params = tuple(float(x) for x in parts[1:])
        except ValueError:
            raise ValueError(f"non-numeric parameter in {text!r}") from None
        return cls(parts[0].lower(), params)

    def __str__(self):
        return " ".join([self.kind] + [repr(p) for p in self.params])

    @property
    def heavy_tailed(self) -> bool:
        return self.kind == "pareto"

    @property
    def max_moment(self) -> float:
        """Supremum of the finite-moment orders (inf when an MGF exists)."""
        return self.params[0] if self.kind == "pareto" else math.inf

    @property
    def mean(self) -> float:
        p = self.params
        if self.kind == "bernoulli":
            return p[0] * p[1]
        if self.kind == "uniform":
            return (p[0] + p[1]) / 2
        if self.kind == "exponential":
            return 1 / p[0]
        return p[0] * p[1] / (p[0] - 1)

    def from_uniform(self, u):
        u = np.asarray(u, dtype=float)
        p = self.params
        if self.kind == "bernoulli":
            return np.where(u < p[0], p[1], 0.0)
        if self.kind == "uniform":
            return p[0] + (p[1] - p[0]) * u
        if self.kind == "exponential":
            return -np.log1p(-u) / p[0]
        return p[1] * (1.0 - u) ** (-1.0 / p[0])


def bernoulli(p, scale=1.0):
    return EdgeDistribution("bernoulli", (p, scale))


def uniform(lo, hi):
    return EdgeDistribution("uniform", (lo, hi))


def exponential(rate):
    return EdgeDistribution("exponential", (rate,))


def pareto(alpha, scale=1.0):
    return EdgeDistribution("pareto", (alpha, scale))


@dataclass(frozen=True)
class CostModel:
    dists: tuple[EdgeDistribution, ...]
    declared_q: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "dists", tuple(self.dists))
        if not self.dists:
            raise ValueError("cost model needs at least one edge")
        if self.declared_q is not None:
            q = float(self.declared_q)
            if not q > 1:
                raise ValueError("declared q must exceed 1")
            if self.heavy_tailed and not q < self.max_moment:
                raise ValueError(f"declared q={q} must be below the smallest pareto alpha {self.max_moment}")

    @property
    def m(self) -> int:
        return len(self.dists)

    @property
    def heavy_tailed(self) -> bool:
        return any(d.heavy_tailed for d in self.dists)

    @property
    def max_moment(self) -> float:
        return min(d.max_moment for d in self.dists)


@dataclass(frozen=True)
class ConcentrationParams:
    """Constants (a, zeta, u0) of the sample-mean deviation bound 2*exp(-a*delta^2*s)."""

    a: float
    zeta: float
    u0: float

    def __post_init__(self):
        if not (self.a > 0 and self.zeta > 0 and self.u0 > 0):
            raise ValueError("concentration constants must be positive")
        if self.a > 1 / (2 * self.zeta) * (1 + 1e-12):
            raise ValueError("a must not exceed 1/(2*zeta)")

    def deviation_bound(self, delta: float, s: int) -> float:
        return 2 * math.exp(-self.a * delta**2 * s)


class CostStream:
    """Per-edge independent uniform substreams keyed by (seed, edge id).

    Adding edges never perturbs the streams of existing edges, and drawing a
    block of n slots yields exactly the same values as n single draws.
    """

    def __init__(self, model: CostModel, seed: int):
        self.model = model
        self.seed = int(seed)
        self._gens = [
            np.random.Generator(np.random.Philox(np.random.SeedSequence(self.seed, spawn_key=(e,))))
            for e in range(model.m)
        ]

    def draw_block(self, n: int) -> np.ndarray:
        """(n, m) array of costs for the next n slots."""
        out = np.empty((n, self.model.m))
        for e, (g, dist) in enumerate(zip(self._gens, self.model.dists)):
            out[:, e] = dist.from_uniform(g.random(n))
        return out

    def draw(self) -> np.ndarray:
        return self.draw_block(1)[0]


def sample_costs(model: CostModel, rng: CostStream) -> np.ndarray:
    """One i.i.d. cost vector, one value per edge in edge-id order."""
    if rng.model is not model and rng.model != model:
        raise ValueError("stream was built for a different cost model")
    return rng.draw()


def mean_costs(model: CostModel) -> np.ndarray:
    return np.array([d.mean for d in model.dists])


def _exponential_mgf2(rate, u):
    # second derivative of the MGF of (X - 1/rate), X ~ Exp(rate)
    M = rate * math.exp(-u / rate) / (rate - u)
    g1 = 1 / (rate - u) - 1 / rate
    g2 = 1 / (rate - u) ** 2
    return M * (g2 + g1 * g1)


def edge_concentration(dist: EdgeDistribution) -> ConcentrationParams:
    p = dist.params
    if dist.kind == "bernoulli":
        zeta, u0 = (p[1] / 2) ** 2, 1.0
    elif dist.kind == "uniform":
        zeta, u0 = ((p[1] - p[0]) / 2) ** 2, 1.0
    elif dist.kind == "exponential":
        u0 = p[0] / 2
        # M'' is convex, so its sup over [-u0, u0] sits at an endpoint
        zeta = max(_exponential_mgf2(p[0], u0), _exponential_mgf2(p[0], -u0))
    else:
        raise HeavyTailed(f"{dist} has no moment-generating function")
    return ConcentrationParams(1 / (2 * zeta), zeta, u0)


def default_concentration(model: CostModel) -> ConcentrationParams:
    """Worst case over edges: largest zeta, smallest u0, a = 1/(2*zeta)."""
    per_edge = [edge_concentration(d) for d in model.dists]
    zeta = max(c.zeta for c in per_edge)
    u0 = min(c.u0 for c in per_edge)
    return ConcentrationParams(1 / (2 * zeta), zeta, u0)


def path_concentration(params: ConcentrationParams, m: int) -> ConcentrationParams:
    """Constants valid for sums of at most m edge costs."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return ConcentrationParams(params.a / m, params.zeta * m, params.u0)


def action_concentration(model: CostModel, actions: Sequence) -> ConcentrationParams:
    """Constants valid for the cost C . x of every action x under independent coordinates.

    Sub-Gaussian proxies add with squared weights, and scaling a coordinate by
    |x_e| shrinks its admissible u0 by the same factor.
    """
    X = np.abs(np.atleast_2d(np.asarray(actions, dtype=float)))
    per = [edge_concentration(d) for d in model.dists]
    z = np.array([c.zeta for c in per])
    u = np.array([c.u0 for c in per])
    zeta = float(np.max(X**2 @ z))
    with np.errstate(divide="ignore"):
        u0 = float(np.min(np.where(X > 0, u / np.where(X > 0, X, 1), np.inf)))
    return ConcentrationParams(1 / (2 * zeta), zeta, u0)
