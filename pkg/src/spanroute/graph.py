"""Routing network, simple-path enumeration and path incidence vectors."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateEdgeId,
    EdgeOffAllPaths,
    NetworkError,
    NoPathExists,
    PathExplosion,
    UnknownVertex,
)

DEFAULT_PATH_CAP = 10**6


@dataclass(frozen=True)
class Edge:
    id: int
    tail: str
    head: str


@dataclass(frozen=True)
class NetworkInstance:
    """Directed multigraph with a designated source and destination.

    Only vertices lying on some simple source->destination path are kept.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    source: str
    destination: str

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def to_spec(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.edges],
            "source": self.source,
            "destination": self.destination,
        }


@dataclass(frozen=True)
class PathVector:
    path_id: int
    bits: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        support = tuple(i for i, b in enumerate(self.bits) if b)
        if support != tuple(sorted(self.edges)):
            raise ValueError(f"bits and edge sequence disagree for path {self.path_id}")


@dataclass(frozen=True)
class PathSet:
    paths: tuple[PathVector, ...]
    dimension: int
    m: int = field(default=0)

    def __len__(self):
        return len(self.paths)

    def __getitem__(self, i):
        return self.paths[i]

    def __iter__(self):
        return iter(self.paths)

    @cached_property
    def matrix(self) -> np.ndarray:
        """|P| x m float incidence matrix, one row per path."""
        mat = np.array([p.bits for p in self.paths], dtype=float)
        mat.setflags(write=False)
        return mat

    def index_of(self, edges: Sequence[int]) -> int:
        edges = tuple(edges)
        for p in self.paths:
            if p.edges == edges:
                return p.path_id
        raise KeyError(edges)


def _dfs_paths(edges, source, destination, cap):
    out = {}
    for e in sorted(edges, key=lambda e: e.id):
        out.setdefault(e.tail, []).append(e)
    found = []
    visited = {source}
    stack = []

    def visit(v):
        if v == destination:
            if len(found) >= cap:
                raise PathExplosion(f"more than {cap} simple paths")
            found.append(tuple(stack))
            return
        for e in out.get(v, ()):
            if e.head in visited:
                continue
            visited.add(e.head)
            stack.append(e.id)
            visit(e.head)
            stack.pop()
            visited.discard(e.head)

    visit(source)
    return found


def load_network(spec: Mapping, path_cap: int = DEFAULT_PATH_CAP) -> NetworkInstance:
    """Validate a network-spec record (vertices, edges, source, destination)."""
    for key in ("vertices", "edges", "source", "destination"):
        if key not in spec:
            raise NetworkError(f"network spec lacks '{key}'")
    vertices = [str(v) for v in spec["vertices"]]
    known = set(vertices)
    source, destination = str(spec["source"]), str(spec["destination"])
    for v in (source, destination):
        if v not in known:
            raise UnknownVertex(f"vertex {v!r} is not declared")
    if source == destination:
        raise NetworkError("source and destination must differ")

    edges = {}
    for rec in spec["edges"]:
        eid, tail, head = int(rec["id"]), str(rec["tail"]), str(rec["head"])
        if eid in edges:
            raise DuplicateEdgeId(f"edge id {eid} appears twice")
        for v in (tail, head):
            if v not in known:
                raise UnknownVertex(f"edge {eid} references undeclared vertex {v!r}")
        edges[eid] = Edge(eid, tail, head)
    if sorted(edges) != list(range(len(edges))):
        raise NetworkError(f"edge ids must be 0..{len(edges) - 1} without gaps")
    edge_list = tuple(edges[i] for i in range(len(edges)))

    paths = _dfs_paths(edge_list, source, destination, path_cap)
    if not paths:
        raise NoPathExists(f"{destination!r} is unreachable from {source!r}")
    used = set()
    for p in paths:
        used.update(p)
    missing = [e.id for e in edge_list if e.id not in used]
    if missing:
        raise EdgeOffAllPaths(f"edges {missing} lie on no simple {source}->{destination} path")

    on_path = {source, destination}
    for e in edge_list:
        on_path.update((e.tail, e.head))
    kept = tuple(v for v in vertices if v in on_path)
    return NetworkInstance(kept, edge_list, source, destination)


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank of an integer matrix by fraction-free row elimination."""
    pivots: list[tuple[int, list[int]]] = []
    width = len(rows[0]) if len(rows) else 0
    for row in rows:
        r = [int(x) for x in row]
        for col, prow in pivots:
            if r[col]:
                f, g = prow[col], r[col]
                r = [f * x - g * y for x, y in zip(r, prow)]
        nz = next((i for i, x in enumerate(r) if x), None)
        if nz is None:
            continue
        k = 0
        for x in r:
            k = gcd(k, x)
        if r[nz] < 0:
            k = -k
        pivots.append((nz, [x // k for x in r]))
        if len(pivots) == width:
            break
    return len(pivots)


def enumerate_paths(net: NetworkInstance, cap: int = DEFAULT_PATH_CAP) -> PathSet:
    """All simple source->destination paths, lexicographic by edge sequence."""
    seqs = _dfs_paths(net.edges, net.source, net.destination, cap)
    m = net.m
    paths = []
    for pid, seq in enumerate(seqs):
        bits = [0] * m
        for e in seq:
            bits[e] = 1
        paths.append(PathVector(pid, tuple(bits), seq))
    rank = integer_rank([p.bits for p in paths])
    return PathSet(tuple(paths), rank, m)


def path_cost(path: PathVector, edge_costs) -> float:
    costs = np.asarray(edge_costs, dtype=float)
    if costs.shape != (len(path.bits),):
        raise DimensionMismatch(f"expected {len(path.bits)} edge costs, got shape {costs.shape}")
    return float(np.dot(path.bits, costs))
