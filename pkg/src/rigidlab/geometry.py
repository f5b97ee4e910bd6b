"""Cayley-Menger determinants and the Gram-matrix realizability test."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from .exactpoly import Polynomial, VarTable

Configuration = Mapping[str, Tuple[float, float]]


class SquaredDistanceMatrix:
    """Symmetric matrix of exact squared distances with zero diagonal."""

    __slots__ = ("n", "entries", "labels")

    def __init__(self, entries: Sequence[Sequence[object]], labels: Sequence[str] | None = None):
        n = len(entries)
        rows = [[Fraction(x) for x in row] for row in entries]
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("squared distance matrix must be square")
            if row[i] != 0:
                raise ValueError("diagonal must be zero")
            for j in range(i):
                if row[j] != rows[j][i]:
                    raise ValueError(f"matrix not symmetric at ({i}, {j})")
        self.n = n
        self.entries = tuple(tuple(r) for r in rows)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def values(self) -> List[Fraction]:
        """Upper-triangle entries in row order."""
        return [self.entries[i][j] for i in range(self.n) for j in range(i + 1, self.n)]

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries], dtype=float)


def squared_distances(config: Configuration) -> SquaredDistanceMatrix:
    """Exact squared distances between the (float) points, computed in rationals."""
    labels = list(config)
    pts = [(Fraction(config[k][0]), Fraction(config[k][1])) for k in labels]
    n = len(pts)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            dx = pts[i][0] - pts[j][0]
            dy = pts[i][1] - pts[j][1]
            rows[i][j] = rows[j][i] = dx * dx + dy * dy
    return SquaredDistanceMatrix(rows, labels)


def bareiss_determinant(matrix: Sequence[Sequence[object]]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination with row pivoting."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = pivot
    return sign * a[n - 1][n - 1]


def bordered_matrix(dists: SquaredDistanceMatrix, subset: Sequence[int]) -> List[List[Fraction]]:
    k = len(subset)
    out = [[Fraction(0)] + [Fraction(1)] * k]
    for i in subset:
        out.append([Fraction(1)] + [dists[i, j] for j in subset])
    return out


def cm_determinant(dists: SquaredDistanceMatrix, subset: Sequence[int] | None = None) -> Fraction:
    """Cayley-Menger determinant of the points in ``subset`` (all points by default).

    For two points this is ``2*r``; for a triangle it is ``-16*area^2``; it
    vanishes for four or more coplanar-in-2D points.
    """
    subset = list(range(dists.n)) if subset is None else list(subset)
    if len(subset) < 2:
        raise ValueError("need at least two points")
    for i in subset:
        if not 0 <= i < dists.n:
            raise IndexError(f"point index {i} out of range for {dists.n} points")
    return bareiss_determinant(bordered_matrix(dists, subset))


def distance_var(i: int, j: int, n: int) -> str:
    """Name of the squared-distance variable between points ``i < j`` (1-based)."""
    if n <= 9:
        return f"r{i}{j}"
    w = len(str(n))
    return f"r{i:0{w}d}{j:0{w}d}"


def distance_vartable(n: int) -> VarTable:
    return VarTable(distance_var(i, j, n) for i in range(1, n + 1) for j in range(i + 1, n + 1))


def _symbolic_det(rows: List[List[Polynomial]]) -> Polynomial:
    """Laplace expansion with memoised minors; entries are polynomials."""
    n = len(rows)
    vars = rows[0][0].vars

    @lru_cache(maxsize=None)
    def minor(row: int, cols: Tuple[int, ...]) -> Polynomial:
        if row == n:
            return Polynomial.constant(vars, 1)
        total = Polynomial.zero(vars)
        for pos, c in enumerate(cols):
            entry = rows[row][c]
            if not entry:
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1 :])
            term = entry * sub
            total = total + term if pos % 2 == 0 else total - term
        return total

    return minor(0, tuple(range(n)))


def cm_ideal_generators(n: int, d: int = 2) -> List[Polynomial]:
    """Symbolic Cayley-Menger determinants of every ``(d+3)``-subset of ``n`` points.

    The polynomials live in the squared-distance variables of
    :func:`distance_vartable`.  Returns an empty list when ``n < d + 3``.
    """
    k = d + 3
    if n < k:
        return []
    vars = distance_vartable(n)
    one = Polynomial.constant(vars, 1)
    zero = Polynomial.zero(vars)

    def r(i: int, j: int) -> Polynomial:
        if i == j:
            return zero
        a, b = min(i, j), max(i, j)
        return Polynomial.variable(vars, distance_var(a, b, n))

    out = []
    for subset in combinations(range(1, n + 1), k):
        rows = [[zero] + [one] * k]
        for i in subset:
            rows.append([one] + [r(i, j) for j in subset])
        out.append(_symbolic_det(rows))
    return out


def gram_matrix(dists: SquaredDistanceMatrix) -> np.ndarray:
    """Gram matrix of points 2..n relative to point 1: ``(r_1i + r_1j - r_ij) / 2``."""
    r = dists.to_float()
    return 0.5 * (r[0, :, None] + r[0, None, :] - r)[1:, 1:]


def gram_rank_check(dists: SquaredDistanceMatrix, d: int = 2, tol: float = 1e-9) -> Tuple[bool, int]:
    """Return ``(realizable, rank)``: PSD with rank at most ``d`` means realizable in R^d."""
    if dists.n < 1:
        raise ValueError("need at least one point")
    if dists.n == 1:
        return True, 0
    eig = np.linalg.eigvalsh(gram_matrix(dists))
    top = float(np.max(np.abs(eig)))
    if top == 0.0:
        return True, 0
    psd = bool(np.all(eig >= -tol * top))
    rank = int(np.sum(eig > tol * top))
    return psd and rank <= d, rank
