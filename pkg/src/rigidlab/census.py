"""Unit-distance counting and point-set generators for scaling experiments.

The pair predicate everywhere is ``|dx*dx + dy*dy - 1| <= eps`` on squared
distance, evaluated in float64 with the same expression in the grid counter
and the brute-force oracle.
"""

from __future__ import annotations

import math
from collections import defaultdict
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

DEFAULT_EPS = 1e-9
MAX_EPS = 0.1


class PointSetFormatError(ValueError):
    pass


def as_points(ps) -> np.ndarray:
    pts = np.asarray(ps, dtype=float)
    if pts.size == 0:
        return pts.reshape(0, 2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must have shape (n, 2)")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    return pts


def _check_eps(eps: float) -> None:
    if not 0 <= eps <= MAX_EPS:
        raise ValueError(f"eps must lie in [0, {MAX_EPS}]")


def _is_unit(d2: np.ndarray, eps: float) -> np.ndarray:
    return np.abs(d2 - 1.0) <= eps


def count_unit_pairs_brute(ps, eps: float = DEFAULT_EPS) -> int:
    """All-pairs scan; the oracle for :func:`count_unit_pairs`."""
    _check_eps(eps)
    pts = as_points(ps)
    total = 0
    for i in range(len(pts) - 1):
        d = pts[i] - pts[i + 1 :]
        d2 = d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1]
        total += int(np.count_nonzero(_is_unit(d2, eps)))
    return total


# half stencil: each unordered cell pair is visited once
_FORWARD = ((1, -1), (1, 0), (1, 1), (0, 1))


def count_unit_pairs(ps, eps: float = DEFAULT_EPS) -> int:
    """Count unit pairs with a uniform grid.

    The cell side is slightly above ``sqrt(1 + eps)``, the largest accepted
    distance, so any accepted pair sits in the same or an adjacent cell and
    the count matches :func:`count_unit_pairs_brute` exactly.  A side of
    exactly 1 would miss pairs at distances in ``(1, sqrt(1 + eps)]`` that
    straddle two cell boundaries.
    """
    _check_eps(eps)
    pts = as_points(ps)
    if len(pts) < 2:
        return 0
    # margin absorbs rounding in the cell-index computation
    cell = math.sqrt(1.0 + eps) * (1.0 + 1e-7)
    keys = np.floor((pts - pts.min(axis=0)) / cell).astype(np.int64)
    buckets: Dict[tuple, List[int]] = defaultdict(list)
    for i, (cx, cy) in enumerate(keys.tolist()):
        buckets[(cx, cy)].append(i)
    arrays = {k: np.array(v, dtype=np.int64) for k, v in buckets.items()}

    total = 0
    for (cx, cy), idx in arrays.items():
        a = pts[idx]
        if len(idx) > 1:
            d = a[:, None, :] - a[None, :, :]
            d2 = d[..., 0] * d[..., 0] + d[..., 1] * d[..., 1]
            iu = np.triu_indices(len(idx), 1)
            total += int(np.count_nonzero(_is_unit(d2[iu], eps)))
        for dx, dy in _FORWARD:
            other = arrays.get((cx + dx, cy + dy))
            if other is None:
                continue
            d = a[:, None, :] - pts[other][None, :, :]
            d2 = d[..., 0] * d[..., 0] + d[..., 1] * d[..., 1]
            total += int(np.count_nonzero(_is_unit(d2, eps)))
    return total


def duplicate_count(ps) -> int:
    pts = as_points(ps)
    return len(pts) - len(np.unique(pts, axis=0)) if len(pts) else 0


def is_sum_of_two_squares(n: int) -> bool:
    if n < 0:
        return False
    a = 0
    while a * a <= n:
        b = math.isqrt(n - a * a)
        if b * b == n - a * a:
            return True
        a += 1
    return False


def lattice_config(side: int, radius_sq: int) -> np.ndarray:
    """The ``side x side`` integer grid scaled by ``1/sqrt(radius_sq)``."""
    if side < 1:
        raise ValueError("side must be positive")
    if radius_sq < 1 or not is_sum_of_two_squares(radius_sq):
        raise ValueError(f"{radius_sq} is not a positive sum of two squares")
    g = np.arange(side, dtype=float)
    xx, yy = np.meshgrid(g, g, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    return pts / math.sqrt(radius_sq)


def lines_config(n: int, k: int, seed: int = 0, deterministic: bool = False) -> np.ndarray:
    """``n`` points spread over ``k`` random lines.

    Each line gets ``ceil(n/k)`` points at random integer positions in a
    window of width ``n/k`` along it, so along-line unit pairs come from
    neighbouring integers.  ``deterministic=True`` with ``k=1`` places the
    points at ``0..n-1`` on the x-axis.
    """
    if k < 1 or n < k:
        raise ValueError("need k >= 1 and n >= k")
    if deterministic:
        if k != 1:
            raise ValueError("the deterministic variant uses a single line")
        return np.column_stack([np.arange(n, dtype=float), np.zeros(n)])
    rng = np.random.default_rng(seed)
    per_line = -(-n // k)
    width = n / k
    chunks = []
    for _ in range(k):
        theta = rng.uniform(0.0, math.pi)
        origin = rng.uniform(0.0, width, size=2)
        t = rng.integers(0, max(1, int(math.ceil(width))), size=per_line).astype(float)
        chunks.append(origin + np.outer(t, [math.cos(theta), math.sin(theta)]))
    return np.vstack(chunks)[:n]


def random_config(n: int, seed: int = 0) -> np.ndarray:
    """Uniform points in ``[0, sqrt(n)]^2`` (constant density)."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, math.sqrt(n), size=(n, 2))


def scaling_report(
    generator: str,
    sizes: Sequence[int],
    seed: int = 0,
    repeats: int = 1,
    eps: float = DEFAULT_EPS,
    k: int = 10,
    radius_sq: int = 5,
) -> dict:
    """Unit counts and normalised ratios over growing sizes.

    For ``lattice`` each size is a grid side (``n = side**2``); for ``lines``
    and ``random`` it is the point count.  Counts are averaged over
    ``repeats`` seeds ``seed, seed+1, ...`` (the lattice is deterministic).
    """
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be ascending")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    rows = []
    for size in sizes:
        counts = []
        dups = 0
        for r in range(1 if generator == "lattice" else repeats):
            if generator == "lattice":
                pts = lattice_config(size, radius_sq)
            elif generator == "lines":
                pts = lines_config(size, k, seed + r)
            elif generator == "random":
                pts = random_config(size, seed + r)
            else:
                raise ValueError(f"unknown generator {generator!r}")
            counts.append(count_unit_pairs(pts, eps))
            dups += duplicate_count(pts)
        n = len(pts)
        count = counts[0] if len(counts) == 1 else sum(counts) / len(counts)
        rows.append(
            {
                "n": n,
                "count": count,
                "per_n": count / n,
                "per_n43": count / n ** (4 / 3),
                "duplicates": dups,
            }
        )
    params = {"sizes": list(sizes), "seed": seed, "repeats": repeats, "eps": eps}
    if generator == "lattice":
        params["radius_sq"] = radius_sq
    if generator == "lines":
        params["k"] = k
    report = {"generator": generator, "params": params, "rows": rows}
    if generator == "lines":
        report["note"] = "totals only; along-line and inter-line pairs are not separated"
    return report


def format_table(report: dict) -> str:
    lines = [f"{'n':>8} {'count':>12} {'count/n':>12} {'count/n^4/3':>14}"]
    for row in report["rows"]:
        lines.append(f"{row['n']:>8} {row['count']:>12} {row['per_n']:>12.6g} {row['per_n43']:>14.6g}")
    return "\n".join(lines)


def read_points(path: str | Path) -> np.ndarray:
    """Read one ``x y`` pair per line; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PointSetFormatError(f"cannot read points file {path}: {exc.strerror}") from None
    pts = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PointSetFormatError(f"{path}:{lineno}: expected two numbers")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise PointSetFormatError(f"{path}:{lineno}: not a number") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise PointSetFormatError(f"{path}:{lineno}: non-finite coordinate")
        pts.append((x, y))
    return np.array(pts, dtype=float).reshape(len(pts), 2)


def write_points(path: str | Path, pts) -> None:
    with open(path, "w") as fh:
        for x, y in as_points(pts):
            fh.write(f"{float(x)!r} {float(y)!r}\n")
