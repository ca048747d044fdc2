"""Small test networks used throughout the test suite and experiment scripts."""
from __future__ import annotations

from .graph import NetworkInstance, load_network


def _spec(vertices, arcs, source="s", destination="r"):
    return {
        "vertices": list(vertices),
        "edges": [{"id": i, "tail": t, "head": h} for i, (t, h) in enumerate(arcs)],
        "source": source,
        "destination": destination,
    }


def diamond_spec():
    return _spec("sabr", [("s", "a"), ("a", "r"), ("s", "b"), ("b", "r")])


def parallel_serial_spec():
    return _spec("sar", [("s", "a"), ("s", "a"), ("a", "r"), ("a", "r")])


def wheatstone_spec():
    return _spec("sabr", [("s", "a"), ("s", "b"), ("a", "b"), ("a", "r"), ("b", "r")])


def grid_spec(rows: int, cols: int):
    """Grid DAG with right and down moves from the top-left to the bottom-right corner.

    Edge ids follow row-major vertex order, right edge before down edge.
    """
    name = lambda i, j: f"v{i}_{j}"
    vertices = [name(i, j) for i in range(rows) for j in range(cols)]
    arcs = []
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols:
                arcs.append((name(i, j), name(i, j + 1)))
            if i + 1 < rows:
                arcs.append((name(i, j), name(i + 1, j)))
    return _spec(vertices, arcs, name(0, 0), name(rows - 1, cols - 1))


def diamond() -> NetworkInstance:
    return load_network(diamond_spec())


def parallel_serial() -> NetworkInstance:
    return load_network(parallel_serial_spec())


def wheatstone() -> NetworkInstance:
    return load_network(wheatstone_spec())


def grid(rows: int, cols: int) -> NetworkInstance:
    return load_network(grid_spec(rows, cols))


BUNDLED = {
    "diamond": diamond,
    "parallel-serial": parallel_serial,
    "wheatstone": wheatstone,
    "grid3x3": lambda: grid(3, 3),
    "grid4x4": lambda: grid(4, 4),
}
