"""Scenario files: a YAML-subset key/value format with indented list blocks.

A routing scenario::

    vertices: [s, a, b, r]
    source: s
    destination: r
    edges:
      - {id: 0, tail: s, head: a, dist: bernoulli 0.3 1}
      - {id: 1, tail: a, head: r, dist: uniform 0 1}
      ...
    horizon: 10000
    policies:
      - policy: dsee-star
        policy_params: {w: 5}
      - policy: naive-ucb
    seeds: {base: 0, count: 50}     # or an explicit list
    output: results/diamond

A single ``policy:``/``policy_params:`` pair may replace ``policies``. For a
general linear problem, ``actions`` (list of vectors) and ``dists`` (one
distribution per coordinate) replace the network fields.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import yaml

from .costs import CostModel, EdgeDistribution
from .errors import InvalidParam, MissingField, NetworkError, ParseError, UnknownPolicy
from .graph import NetworkInstance, load_network
from .policies import POLICY_PARAMS, PolicySpec

DEFAULT_SEED_COUNT = 50
TOP_LEVEL = {
    "vertices", "edges", "source", "destination", "actions", "dists", "horizon", "policy",
    "policy_params", "policies", "seeds", "output", "declared_q", "checkpoints",
}
STRING_PARAMS = {"f": {"loglog"}, "c_form": {"cbrt-log", "log-cbrt"}}


@dataclass(frozen=True)
class Scenario:
    model: CostModel
    horizon: int
    policies: tuple[PolicySpec, ...]
    seeds: tuple[int, ...]
    output: str
    network: Optional[NetworkInstance] = None
    actions: Optional[tuple[tuple[float, ...], ...]] = None
    checkpoints: Optional[tuple[int, ...]] = None

    def with_base_seed(self, base: int) -> "Scenario":
        return replace(self, seeds=tuple(range(base, base + len(self.seeds))))


def _require(doc, key, where=""):
    if key not in doc or doc[key] is None:
        raise MissingField(f"missing field '{where}{key}'")
    return doc[key]


def _int(value, field, minimum=None):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or value != int(value):
        raise InvalidParam(f"{field}: expected an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise InvalidParam(f"{field}: must be >= {minimum}")
    return value


def _dist(text, field):
    try:
        return EdgeDistribution.parse(text)
    except ValueError as e:
        raise InvalidParam(f"{field}: {e}") from None


def _policy(rec, model, field):
    if not isinstance(rec, dict):
        raise InvalidParam(f"{field}: expected a mapping with 'policy'")
    name = str(_require(rec, "policy", f"{field}."))
    if name not in POLICY_PARAMS:
        raise UnknownPolicy(f"{field}.policy: unknown policy {name!r} (choose from {sorted(POLICY_PARAMS)})")
    extra = set(rec) - {"policy", "policy_params"}
    if extra:
        raise InvalidParam(f"{field}: unexpected keys {sorted(extra)}")
    raw = rec.get("policy_params") or {}
    if not isinstance(raw, dict):
        raise InvalidParam(f"{field}.policy_params: expected a mapping")
    params = {}
    for key, value in raw.items():
        pf = f"{field}.policy_params.{key}"
        if key not in POLICY_PARAMS[name]:
            raise InvalidParam(f"{pf}: not a parameter of {name}")
        if key in STRING_PARAMS:
            if value not in STRING_PARAMS[key]:
                raise InvalidParam(f"{pf}: expected one of {sorted(STRING_PARAMS[key])}")
            params[key] = value
        elif key == "t0":
            params[key] = _int(value, pf, 1)
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidParam(f"{pf}: expected a number, got {value!r}")
            if value <= 0:
                raise InvalidParam(f"{pf}: must be positive")
            params[key] = float(value)

    if name in ("dsee-star", "naive-dsee") and "w" not in params:
        if "b" not in params or "c" not in params:
            raise MissingField(f"{field}.policy_params: {name} needs 'w' or both 'b' and 'c'")
    if name == "dsee-heavy":
        q = params.get("q", model.declared_q)
        if q is None:
            raise MissingField(f"{field}.policy_params.q: dsee-heavy needs q (or top-level declared_q)")
        if not q > 1:
            raise InvalidParam(f"{field}.policy_params.q: must exceed 1")
        if model.heavy_tailed and not q < model.max_moment:
            raise InvalidParam(f"{field}.policy_params.q: must be below the smallest pareto alpha {model.max_moment}")
    return PolicySpec(name, params)


def _seeds(raw):
    if raw is None:
        return tuple(range(DEFAULT_SEED_COUNT))
    if isinstance(raw, list):
        if not raw:
            raise InvalidParam("seeds: need at least one seed")
        return tuple(_int(s, f"seeds[{i}]", 0) for i, s in enumerate(raw))
    if isinstance(raw, dict):
        extra = set(raw) - {"base", "count"}
        if extra:
            raise InvalidParam(f"seeds: unexpected keys {sorted(extra)}")
        base = _int(raw.get("base", 0), "seeds.base", 0)
        count = _int(raw.get("count", DEFAULT_SEED_COUNT), "seeds.count", 1)
        return tuple(range(base, base + count))
    raise InvalidParam("seeds: expected a list or {base, count}")


def scenario_from_dict(doc) -> Scenario:
    if not isinstance(doc, dict):
        raise ParseError("scenario must be a key/value mapping", 1)
    unknown = set(doc) - TOP_LEVEL
    if unknown:
        raise InvalidParam(f"unknown fields {sorted(unknown)}")

    declared_q = doc.get("declared_q")
    if declared_q is not None and (isinstance(declared_q, bool) or not isinstance(declared_q, (int, float))):
        raise InvalidParam("declared_q: expected a number")

    network = actions = None
    if "actions" in doc:
        raw_actions = _require(doc, "actions")
        dist_texts = _require(doc, "dists")
        try:
            actions = tuple(tuple(float(x) for x in row) for row in raw_actions)
        except (TypeError, ValueError):
            raise InvalidParam("actions: expected a list of numeric vectors") from None
        if not actions or len({len(r) for r in actions}) != 1:
            raise InvalidParam("actions: vectors must be non-empty and of equal length")
        if len(dist_texts) != len(actions[0]):
            raise InvalidParam(f"dists: need one distribution per coordinate ({len(actions[0])})")
        dists = [_dist(t, f"dists[{i}]") for i, t in enumerate(dist_texts)]
    else:
        for key in ("vertices", "edges", "source", "destination"):
            _require(doc, key)
        edges = doc["edges"]
        if not isinstance(edges, list) or not edges:
            raise InvalidParam("edges: expected a non-empty list")
        by_id = {}
        for i, rec in enumerate(edges):
            if not isinstance(rec, dict):
                raise InvalidParam(f"edges[{i}]: expected a mapping")
            for key in ("id", "tail", "head", "dist"):
                _require(rec, key, f"edges[{i}].")
            extra = set(rec) - {"id", "tail", "head", "dist"}
            if extra:
                raise InvalidParam(f"edges[{i}]: unexpected keys {sorted(extra)}")
            eid = _int(rec["id"], f"edges[{i}].id", 0)
            by_id.setdefault(eid, _dist(rec["dist"], f"edges[{i}].dist"))
        try:
            network = load_network({k: doc[k] for k in ("vertices", "edges", "source", "destination")})
        except NetworkError as e:
            raise InvalidParam(f"network ({type(e).__name__}): {e}") from None
        dists = [by_id[i] for i in range(network.m)]

    try:
        model = CostModel(tuple(dists), None if declared_q is None else float(declared_q))
    except ValueError as e:
        raise InvalidParam(f"declared_q: {e}") from None

    horizon = _int(_require(doc, "horizon"), "horizon", 1)
    if "policies" in doc:
        if "policy" in doc or "policy_params" in doc:
            raise InvalidParam("policies: give either 'policies' or a single 'policy', not both")
        recs = doc["policies"]
        if not isinstance(recs, list) or not recs:
            raise InvalidParam("policies: expected a non-empty list")
        policies = tuple(_policy(r, model, f"policies[{i}]") for i, r in enumerate(recs))
    elif "policy" in doc:
        policies = (_policy({k: doc[k] for k in ("policy", "policy_params") if k in doc}, model, "policy"),)
    else:
        raise MissingField("missing field 'policy' (or 'policies')")
    names = [p.name for p in policies]
    if len(set(names)) != len(names):
        raise InvalidParam("policies: each policy may appear once (output files are named by policy)")

    checkpoints = None
    if doc.get("checkpoints") is not None:
        checkpoints = tuple(sorted({_int(c, "checkpoints", 1) for c in doc["checkpoints"]}))
        if checkpoints[-1] > horizon:
            raise InvalidParam("checkpoints: must not exceed horizon")

    return Scenario(
        model=model,
        horizon=horizon,
        policies=policies,
        seeds=_seeds(doc.get("seeds")),
        output=str(_require(doc, "output")),
        network=network,
        actions=actions,
        checkpoints=checkpoints,
    )


def parse_text(text: str) -> Scenario:
    try:
        doc = yaml.safe_load(text)
    except yaml.MarkedYAMLError as e:
        line = e.problem_mark.line + 1 if e.problem_mark is not None else None
        raise ParseError(str(e.problem or e), line) from None
    except yaml.YAMLError as e:
        raise ParseError(str(e)) from None
    return scenario_from_dict(doc)


def parse_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read())


def scenario_to_dict(s: Scenario) -> dict:
    doc = {}
    if s.network is not None:
        net = s.network.to_spec()
        doc["vertices"] = net["vertices"]
        doc["source"] = net["source"]
        doc["destination"] = net["destination"]
        doc["edges"] = [dict(rec, dist=str(s.model.dists[rec["id"]])) for rec in net["edges"]]
    else:
        doc["actions"] = [list(r) for r in s.actions]
        doc["dists"] = [str(d) for d in s.model.dists]
    if s.model.declared_q is not None:
        doc["declared_q"] = s.model.declared_q
    doc["horizon"] = s.horizon
    doc["policies"] = [{"policy": p.name, "policy_params": dict(p.params)} for p in s.policies]
    seeds = list(s.seeds)
    if seeds == list(range(seeds[0], seeds[0] + len(seeds))):
        doc["seeds"] = {"base": seeds[0], "count": len(seeds)}
    else:
        doc["seeds"] = seeds
    doc["output"] = s.output
    if s.checkpoints is not None:
        doc["checkpoints"] = list(s.checkpoints)
    return doc


def dump_scenario(s: Scenario) -> str:
    """Resolved scenario text; parsing it back yields an equal Scenario."""
    return yaml.safe_dump(scenario_to_dict(s), sort_keys=False, default_flow_style=None)
