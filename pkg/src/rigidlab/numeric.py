"""Newton sampling of unit-distance varieties and the degeneracy experiments.

Randomness: attempt ``i`` of an experiment seeded with ``s`` draws from
``numpy.random.default_rng([s, i])`` (PCG64 behind a ``SeedSequence``), so
attempts are independent and their results do not depend on execution order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exactpoly import Polynomial, differentiate
from .graphs import Graph
from .varieties import ConstraintSystem, build_unit_system, flatness_eq1

SOLVE_TOL = 1e-10
MAX_ITER = 100
MERGE_TOL = 1e-6
PINV_CUTOFF = 1e-10
DIM_TOL = 1e-8
MAX_HALVINGS = 20
POLISH_ITER = 60


class CompiledPolynomials:
    """Vectorised float evaluation of a list of polynomials over one VarTable."""

    def __init__(self, polys: Sequence[Polynomial], nvars: int):
        exps, coeffs, rows = [], [], []
        for r, p in enumerate(polys):
            for m, c in p.items():
                exps.append(m)
                coeffs.append(float(c))
                rows.append(r)
        self.size = len(polys)
        self.exps = np.array(exps, dtype=np.int64).reshape(len(exps), nvars)
        self.coeffs = np.array(coeffs, dtype=float)
        self.rows = np.array(rows, dtype=np.int64)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if not len(self.coeffs):
            return np.zeros(self.size)
        mons = np.prod(np.power(x[None, :], self.exps), axis=1)
        return np.bincount(self.rows, weights=self.coeffs * mons, minlength=self.size)


class SystemEvaluator:
    """Residual and exact symbolic Jacobian of a constraint system, evaluated in floats."""

    def __init__(self, sys: ConstraintSystem):
        self.n_eq = len(sys.equations)
        self.n_var = len(sys.vars)
        self.f = CompiledPolynomials(sys.equations, self.n_var)
        partials = [differentiate(p, v) for p in sys.equations for v in sys.vars.names]
        self.df = CompiledPolynomials(partials, self.n_var)

    def residual(self, x) -> np.ndarray:
        return self.f(np.asarray(x, dtype=float))

    def jacobian(self, x) -> np.ndarray:
        return self.df(np.asarray(x, dtype=float)).reshape(self.n_eq, self.n_var)


@dataclass
class SolveResult:
    converged: bool
    x: List[float]
    residual: float
    iterations: int
    config: Dict[str, Tuple[float, float]] = field(default_factory=dict)

    def to_json(self) -> dict:
        d = asdict(self)
        d["config"] = {k: list(v) for k, v in self.config.items()}
        return d


def newton_solve(
    sys: ConstraintSystem,
    seed_config: Sequence[float],
    tol: float = SOLVE_TOL,
    max_iter: int = MAX_ITER,
    evaluator: Optional[SystemEvaluator] = None,
    polish: int = 0,
) -> SolveResult:
    """Damped Newton iteration with SVD pseudo-inverse steps.

    A step is halved (at most 20 times) until the max-norm residual
    decreases; if no halving helps the iteration stops.  Once the residual is
    below ``tol``, up to ``polish`` further iterations run while the residual
    keeps decreasing.  Near singular solutions (tangent circles) positions are
    only accurate to about the square root of the residual, so polishing
    matters before comparing distances against a merge tolerance.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    ev = evaluator or SystemEvaluator(sys)
    x = np.array(seed_config, dtype=float)
    if x.shape != (ev.n_var,):
        raise ValueError(f"seed has length {x.size}, system has {ev.n_var} variables")
    F = ev.residual(x)
    res = float(np.max(np.abs(F))) if F.size else 0.0
    it = 0
    extra = 0
    while res > 0.0:
        if res < tol:
            if extra >= polish:
                break
            extra += 1
        elif it >= max_iter:
            break
        step = -np.linalg.pinv(ev.jacobian(x), rcond=PINV_CUTOFF) @ F
        t = 1.0
        for _ in range(MAX_HALVINGS + 1):
            xn = x + t * step
            Fn = ev.residual(xn)
            rn = float(np.max(np.abs(Fn)))
            if rn < res:
                break
            t *= 0.5
        else:
            break
        x, F, res = xn, Fn, rn
        it += 1
    converged = bool(res < tol) and bool(np.all(np.isfinite(x)))
    return SolveResult(converged, x.tolist(), res, it, sys.positions(x) if sys.coords else {})


def local_dimension(sys: ConstraintSystem, sol: SolveResult, evaluator: Optional[SystemEvaluator] = None) -> int:
    """Variables minus numerical Jacobian rank at a converged solution."""
    if not sol.converged:
        raise ValueError("local_dimension needs a converged solution")
    ev = evaluator or SystemEvaluator(sys)
    J = ev.jacobian(sol.x)
    if J.size == 0:
        return ev.n_var
    s = np.linalg.svd(J, compute_uv=False)
    rank = int(np.sum(s > DIM_TOL * s[0])) if s[0] > 0 else 0
    return ev.n_var - rank


def finite_difference_jacobian(ev: SystemEvaluator, x, h: float = 1e-6) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    J = np.empty((ev.n_eq, ev.n_var))
    for j in range(ev.n_var):
        e = np.zeros_like(x)
        e[j] = h
        J[:, j] = (ev.residual(x + e) - ev.residual(x - e)) / (2 * h)
    return J


def collinearity_measure(points: Sequence[Tuple[float, float]]) -> float:
    """Twice the area of the triangle on three points."""
    (x1, y1), (x2, y2), (x3, y3) = points
    return abs(x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2))


def _min_pair_distance(points: Sequence[Tuple[float, float]]) -> float:
    best = float("inf")
    for p, q in combinations(points, 2):
        best = min(best, float(np.hypot(p[0] - q[0], p[1] - q[1])))
    return best


@dataclass
class CollapseReport:
    graph: str
    attempts: int
    seed: int
    merge_tol: float
    converged: int = 0
    coincident_neighbor_count: int = 0
    coincident_center_count: int = 0
    collinear_center_count: int = 0
    distinct_nondegenerate_count: int = 0
    local_dimensions: Dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        d = asdict(self)
        d["local_dimensions"] = {str(k): v for k, v in sorted(self.local_dimensions.items())}
        return d


def classify(graph: Graph, config: Dict[str, Tuple[float, float]], merge_tol: float) -> Dict[str, bool]:
    """Degeneracy flags of one realization.

    For a bipartite graph the first side holds the centres and the second the
    neighbours; otherwise every vertex counts as a centre.
    """
    parts = graph.bipartition()
    centers, neighbors = (parts if parts else (list(graph.vertices), []))
    cpts = [config[v] for v in centers]
    npts = [config[v] for v in neighbors]
    flags = {
        "coincident_neighbor": len(npts) > 1 and _min_pair_distance(npts) < merge_tol,
        "coincident_center": len(cpts) > 1 and _min_pair_distance(cpts) < merge_tol,
        "collinear_center": len(cpts) >= 3 and collinearity_measure(cpts[:3]) < merge_tol,
    }
    flags["nondegenerate"] = not any(flags.values())
    return flags


def attempt_seed(sys: ConstraintSystem, seed: int, attempt: int, box: float = 2.0) -> np.ndarray:
    rng = np.random.default_rng([seed, attempt])
    return rng.uniform(-box, box, size=len(sys.vars))


def collapse_experiment(
    graph: Graph,
    attempts: int = 1000,
    seed: int = 0,
    merge_tol: float = MERGE_TOL,
    tol: float = SOLVE_TOL,
    max_iter: int = MAX_ITER,
    name: str = "",
) -> CollapseReport:
    """Solve the pinned unit system from random starts and bin the degeneracies found."""
    if attempts < 1:
        raise ValueError("attempts must be >= 1")
    sys = build_unit_system(graph)
    ev = SystemEvaluator(sys)
    report = CollapseReport(name or f"{graph.n}v/{graph.m}e", attempts, seed, merge_tol)
    dims: Counter = Counter()
    for i in range(attempts):
        sol = newton_solve(sys, attempt_seed(sys, seed, i), tol, max_iter, ev, polish=POLISH_ITER)
        if not sol.converged:
            continue
        report.converged += 1
        flags = classify(graph, sol.config, merge_tol)
        report.coincident_neighbor_count += flags["coincident_neighbor"]
        report.coincident_center_count += flags["coincident_center"]
        report.collinear_center_count += flags["collinear_center"]
        report.distinct_nondegenerate_count += flags["nondegenerate"]
        dims[local_dimension(sys, sol, ev)] += 1
    report.local_dimensions = dict(dims)
    return report


def eq1_value(x2: float, x3: float, y3: float) -> float:
    """Float evaluation of the eight-term locus polynomial (termwise)."""
    total = 0.0
    for m, c in flatness_eq1().items():
        total += float(c) * x2 ** m[0] * x3 ** m[1] * y3 ** m[2]
    return total


def sample_flatness_curve(x2: float, count: int = 101, scan: int = 600, y_max: float = 3.0) -> List[Tuple[float, float]]:
    """Points with ``y3 >= 0`` on the zero set of the locus polynomial divided by ``x2``.

    For each of ``count`` evenly spaced ``x3`` values the function
    ``(x3^2 - x2*x3 + y3^2)^2 - (4 - x2^2)*y3^2`` is scanned on ``[0, y_max]``
    and every sign change is refined by bisection.  Tangential roots without a
    sign change are only found when they fall on a scan node.
    """
    if not 0 < abs(x2) < 2:
        raise ValueError("x2 must satisfy 0 < |x2| < 2")
    s = 4 - x2 * x2

    def g(x3, y):
        q = x3 * x3 - x2 * x3 + y * y
        return q * q - s * y * y

    out = []
    for x3 in np.linspace(x2 / 2 - 1, x2 / 2 + 1, count):
        x3 = float(x3)
        ys = np.linspace(0.0, y_max, scan + 1)
        vals = g(x3, ys)
        for k in range(scan + 1):
            if vals[k] == 0.0:
                out.append((x3, float(ys[k])))
            elif k < scan and vals[k] * vals[k + 1] < 0:
                lo, hi, flo = float(ys[k]), float(ys[k + 1]), float(vals[k])
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    fm = g(x3, mid)
                    if fm == 0.0:
                        lo = hi = mid
                        break
                    if (fm < 0) == (flo < 0):
                        lo, flo = mid, fm
                    else:
                        hi = mid
                out.append((x3, 0.5 * (lo + hi)))
    return [p for p in out if abs(eq1_value(x2, *p)) < 1e-8]
