"""Pinned unit-distance polynomial systems and the shared-neighbour elimination check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import groebner
from .exactpoly import MonomialOrder, Polynomial, VarTable, parse
from .geometry import cm_ideal_generators, distance_var, distance_vartable
from .graphs import Graph

EQ1_TEXT = (
    "x2*x3^4 + 2*x2*x3^2*y3^2 + x2*y3^4 - 2*x2^2*x3^3 - 2*x2^2*x3*y3^2"
    " + x2^3*x3^2 + x2^3*y3^2 - 4*x2*y3^2"
)

FLAT_VARS = VarTable(["x2", "x3", "y3"])


@dataclass(frozen=True)
class Pinning:
    origin_vertex: str
    axis_vertex: str

    def __post_init__(self):
        if self.origin_vertex == self.axis_vertex:
            raise ValueError("pinning vertices must be distinct")


@dataclass(frozen=True)
class ConstraintSystem:
    vars: VarTable
    equations: Tuple[Polynomial, ...]
    pinning: Optional[Pinning]
    graph: Optional[Graph]
    # vertex id -> (x variable or constant 0, y variable or constant 0)
    coords: Dict[str, Tuple[Optional[str], Optional[str]]] = field(default_factory=dict, compare=False)

    @property
    def n_vars(self) -> int:
        return len(self.vars)

    def positions(self, values: Sequence[float]) -> Dict[str, Tuple[float, float]]:
        """Planar position of every vertex for a vector of variable values."""
        idx = {n: i for i, n in enumerate(self.vars.names)}
        out = {}
        for v, (xn, yn) in self.coords.items():
            out[v] = (
                float(values[idx[xn]]) if xn else 0.0,
                float(values[idx[yn]]) if yn else 0.0,
            )
        return out

    def vector(self, config: Mapping[str, Tuple[float, float]]) -> List[float]:
        """Inverse of :meth:`positions` for a configuration already in pinned form."""
        values = {}
        for v, (xn, yn) in self.coords.items():
            if xn:
                values[xn] = config[v][0]
            if yn:
                values[yn] = config[v][1]
        return [values[n] for n in self.vars.names]


def pin_configuration(
    config: Mapping[str, Tuple[float, float]], pinning: Pinning
) -> Dict[str, Tuple[float, float]]:
    """Translate and rotate ``config`` so the origin vertex is at (0, 0) and the axis vertex on the x-axis."""
    ox, oy = config[pinning.origin_vertex]
    ax, ay = config[pinning.axis_vertex]
    ang = math.atan2(ay - oy, ax - ox)
    c, s = math.cos(-ang), math.sin(-ang)
    out = {}
    for v, (x, y) in config.items():
        dx, dy = x - ox, y - oy
        out[v] = (c * dx - s * dy, s * dx + c * dy)
    out[pinning.origin_vertex] = (0.0, 0.0)
    out[pinning.axis_vertex] = (out[pinning.axis_vertex][0], 0.0)
    return out


def build_unit_system(graph: Graph, pinning: Optional[Pinning] = None) -> ConstraintSystem:
    """One equation ``(xa-xb)^2 + (ya-yb)^2 - 1`` per edge, with the frame pinned.

    Vertex ``i`` (1-based position) gets coordinates ``x<i>``, ``y<i>``; the
    origin vertex has none and the axis vertex keeps only its abscissa, which
    comes first in the variable order.
    """
    if graph.n < 2:
        raise ValueError("need at least two vertices")
    if pinning is None:
        pinning = Pinning(graph.vertices[0], graph.vertices[1])
    for v in (pinning.origin_vertex, pinning.axis_vertex):
        if v not in graph.vertices:
            raise KeyError(f"pinning vertex {v!r} not in graph")

    coords: Dict[str, Tuple[Optional[str], Optional[str]]] = {}
    axis_idx = graph.index(pinning.axis_vertex) + 1
    names = [f"x{axis_idx}"]
    for i, v in enumerate(graph.vertices, start=1):
        if v == pinning.origin_vertex:
            coords[v] = (None, None)
        elif v == pinning.axis_vertex:
            coords[v] = (f"x{i}", None)
        else:
            coords[v] = (f"x{i}", f"y{i}")
            names += [f"x{i}", f"y{i}"]
    vars = VarTable(names)

    def coord(name: Optional[str]) -> Polynomial:
        return Polynomial.variable(vars, name) if name else Polynomial.zero(vars)

    eqs = []
    for a, b in graph.edges:
        dx = coord(coords[a][0]) - coord(coords[b][0])
        dy = coord(coords[a][1]) - coord(coords[b][1])
        eqs.append(dx * dx + dy * dy - 1)
    return ConstraintSystem(vars, tuple(eqs), pinning, graph, coords)


def cm_distance_system(graph: Graph, d: int = 2) -> ConstraintSystem:
    """Distance-space model: the Cayley-Menger generators plus ``r_ab - 1`` for every edge."""
    n = graph.n
    vars = distance_vartable(n)
    eqs = list(cm_ideal_generators(n, d))
    for a, b in graph.edge_indices():
        eqs.append(Polynomial.variable(vars, distance_var(a + 1, b + 1, n)) - 1)
    return ConstraintSystem(vars, tuple(eqs), None, graph, {})


SHARED_VARS = VarTable(["x2", "x3", "y3", "vx", "vy"])


def shared_neighbor_system() -> ConstraintSystem:
    """A single vertex ``v`` at unit distance from u1=(0,0), u2=(x2,0), u3=(x3,y3)."""
    p = lambda s: parse(s, SHARED_VARS)
    eqs = (
        p("vx^2 + vy^2 - 1"),
        p("vx^2 - 2*x2*vx + x2^2 + vy^2 - 1"),
        p("vx^2 - 2*x3*vx + x3^2 + vy^2 - 2*y3*vy + y3^2 - 1"),
    )
    graph = Graph(["u1", "u2", "u3", "v"], [("u1", "v"), ("u2", "v"), ("u3", "v")])
    coords = {"u1": (None, None), "u2": ("x2", None), "u3": ("x3", "y3"), "v": ("vx", "vy")}
    return ConstraintSystem(SHARED_VARS, eqs, Pinning("u1", "u2"), graph, coords)


def flatness_eq1() -> Polynomial:
    """The eight-term locus polynomial for the third centre ``(x3, y3)``."""
    return parse(EQ1_TEXT, FLAT_VARS)


def flatness_factor() -> Polynomial:
    """``(x3^2 - x2*x3 + y3^2)^2 - (4 - x2^2)*y3^2``, the cofactor of ``x2``."""
    p = lambda s: parse(s, FLAT_VARS)
    return p("x3^2 - x2*x3 + y3^2") ** 2 - p("4 - x2^2") * p("y3^2")


@dataclass
class VerificationReport:
    mode: str
    holds: bool
    details: dict

    def to_json(self) -> dict:
        return {"mode": self.mode, "holds": self.holds, **self.details}


def verify_eq1(mode: str = "membership", limits: Optional[groebner.Limits] = None) -> VerificationReport:
    if mode == "factorization":
        eq1 = flatness_eq1()
        product = Polynomial.variable(FLAT_VARS, "x2") * flatness_factor()
        diff = eq1 - product
        return VerificationReport(
            mode,
            diff.is_zero(),
            {
                "identity": f"({EQ1_TEXT}) = x2*[(x3^2 - x2*x3 + y3^2)^2 - (4 - x2^2)*y3^2]",
                "expanded_product": str(product),
                "difference": str(diff),
                "terms": len(eq1),
            },
        )
    if mode == "membership":
        system = shared_neighbor_system()
        basis = groebner.eliminate(system.equations, {"vx", "vy"}, limits)
        eq1 = flatness_eq1().rename(SHARED_VARS)
        cofactor = flatness_factor().rename(SHARED_VARS)
        return VerificationReport(
            mode,
            groebner.normal_form(eq1, basis).is_zero(),
            {
                "elimination_basis": [str(g) for g in basis.generators],
                "order": "block(vx,vy | x2,x3,y3), grevlex within blocks",
                "basis_equals_eq1": [g for g in basis.generators] == [eq1],
                "cofactor_member": groebner.normal_form(cofactor, basis).is_zero(),
                "pairs": basis.stats.get("pairs"),
            },
        )
    raise ValueError(f"unknown mode {mode!r}")


def laman_variable_audit(sys: ConstraintSystem) -> Tuple[int, int, int]:
    """``(variables, equations, variables - equations)``; negative slack means overconstrained."""
    nv, ne = len(sys.vars), len(sys.equations)
    return nv, ne, nv - ne
