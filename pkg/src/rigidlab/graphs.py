"""Simple undirected graphs, the JSON graph format and built-in test graphs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class GraphFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with ordered vertices.

    Edges are stored as pairs ordered by vertex position, in insertion order.
    """

    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]

    def __init__(self, vertices: Iterable[str], edges: Iterable[Sequence[str]]):
        vertices = tuple(str(v) for v in vertices)
        if len(set(vertices)) != len(vertices):
            raise GraphFormatError("duplicate vertex ids")
        pos = {v: i for i, v in enumerate(vertices)}
        seen = set()
        clean = []
        for e in edges:
            if len(e) != 2:
                raise GraphFormatError(f"edge {e!r} must have two endpoints")
            a, b = str(e[0]), str(e[1])
            for v in (a, b):
                if v not in pos:
                    raise GraphFormatError(f"edge {e!r} references unknown vertex {v!r}")
            if a == b:
                raise GraphFormatError(f"self-loop at {a!r}")
            if pos[a] > pos[b]:
                a, b = b, a
            if (a, b) in seen:
                raise GraphFormatError(f"duplicate edge {a}-{b}")
            seen.add((a, b))
            clean.append((a, b))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(clean))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index(self, v: str) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise KeyError(f"vertex {v!r} not in graph") from None

    def edge_indices(self) -> List[Tuple[int, int]]:
        pos = {v: i for i, v in enumerate(self.vertices)}
        return [(pos[a], pos[b]) for a, b in self.edges]

    def neighbors(self, v: str) -> List[str]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return out

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in self.neighbors(stack.pop()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def bipartition(self) -> Optional[Tuple[List[str], List[str]]]:
        """Two-colouring in vertex order, or ``None`` if the graph has an odd cycle."""
        colour: Dict[str, int] = {}
        for start in self.vertices:
            if start in colour:
                continue
            colour[start] = 0
            stack = [start]
            while stack:
                v = stack.pop()
                for w in self.neighbors(v):
                    if w not in colour:
                        colour[w] = 1 - colour[v]
                        stack.append(w)
                    elif colour[w] == colour[v]:
                        return None
        left = [v for v in self.vertices if colour[v] == 0]
        right = [v for v in self.vertices if colour[v] == 1]
        return left, right

    def add_edge(self, a: str, b: str) -> "Graph":
        return Graph(self.vertices, list(self.edges) + [(a, b)])

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}


def from_json(data) -> Graph:
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or set(data) != {"vertices", "edges"}:
        raise GraphFormatError('graph JSON must be an object with exactly "vertices" and "edges"')
    verts, edges = data["vertices"], data["edges"]
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise GraphFormatError('"vertices" must be a list of strings')
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(v, str) for v in e) for e in edges
    ):
        raise GraphFormatError('"edges" must be a list of [string, string] pairs')
    return Graph(verts, edges)


def complete_bipartite(m: int, n: int) -> Graph:
    left = [f"u{i}" for i in range(1, m + 1)]
    right = [f"v{i}" for i in range(1, n + 1)]
    return Graph(left + right, [(u, v) for u in left for v in right])


def complete(n: int) -> Graph:
    verts = [f"u{i}" for i in range(1, n + 1)]
    return Graph(verts, combinations(verts, 2))


def cycle(n: int) -> Graph:
    verts = [f"u{i}" for i in range(1, n + 1)]
    return Graph(verts, [(verts[i], verts[(i + 1) % n]) for i in range(n)])


def path(n: int) -> Graph:
    verts = [f"u{i}" for i in range(1, n + 1)]
    return Graph(verts, [(verts[i], verts[i + 1]) for i in range(n - 1)])


def triangle() -> Graph:
    return cycle(3)


def moser_spindle() -> Graph:
    """Two rhombi of equilateral triangles sharing apex ``a``, tips joined."""
    v = ["a", "b1", "c1", "d1", "b2", "c2", "d2"]
    edges = [
        ("a", "b1"), ("a", "c1"), ("b1", "c1"), ("b1", "d1"), ("c1", "d1"),
        ("a", "b2"), ("a", "c2"), ("b2", "c2"), ("b2", "d2"), ("c2", "d2"),
        ("d1", "d2"),
    ]
    return Graph(v, edges)


def moser_embedding() -> Dict[str, Tuple[float, float]]:
    """A unit-distance embedding of :func:`moser_spindle` with ``a`` at the origin and ``b1`` on the x-axis."""
    # tips at distance sqrt(3) from a, separated by unit chord
    theta = 2 * math.asin(1 / (2 * math.sqrt(3)))
    pts = {"a": (0.0, 0.0)}
    for tag, alpha in (("1", math.pi / 6), ("2", math.pi / 6 + theta)):
        pts["b" + tag] = (math.cos(alpha - math.pi / 6), math.sin(alpha - math.pi / 6))
        pts["c" + tag] = (math.cos(alpha + math.pi / 6), math.sin(alpha + math.pi / 6))
        pts["d" + tag] = (math.sqrt(3) * math.cos(alpha), math.sqrt(3) * math.sin(alpha))
    return pts


BUILTINS = {
    "k33": lambda: complete_bipartite(3, 3),
    "k44": lambda: complete_bipartite(4, 4),
    "triangle": triangle,
    "c4": lambda: cycle(4),
    "moser": moser_spindle,
    "edge": lambda: path(2),
}


def load_graph(ref: str) -> Graph:
    """Load ``builtin:<name>`` or a JSON graph file."""
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        if name not in BUILTINS:
            raise GraphFormatError(f"unknown builtin graph {name!r}; choose from {sorted(BUILTINS)}")
        return BUILTINS[name]()
    try:
        text = Path(ref).read_text()
    except OSError as exc:
        raise GraphFormatError(f"cannot read graph file {ref}: {exc.strerror}") from None
    return from_json(text)
