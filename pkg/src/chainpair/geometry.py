"""Points, chains, and the discrete Frechet distance.

All public index lists and couplings are 1-based, matching the usual
mathematical presentation of coupling sequences; conversion to 0-based
numpy indexing happens at the boundaries of this module.

Distance comparisons against tolerances use plain floating-point ``<=``
with no epsilon, so results are deterministic across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ChainFormatError
from ._kernels import frechet_table, frechet_reach

__all__ = [
    "Point",
    "Chain",
    "FrechetResult",
    "euclidean_distance",
    "frechet_decision",
    "discrete_frechet",
    "verify_simplification",
]


@dataclass(frozen=True)
class Point:
    """An immutable 2D or 3D point."""

    coords: tuple[float, ...]

    def __init__(self, coords: Sequence[float]):
        coords = tuple(float(c) for c in coords)
        if len(coords) not in (2, 3):
            raise ChainFormatError(f"point dimension must be 2 or 3, got {len(coords)}")
        if not all(math.isfinite(c) for c in coords):
            raise ChainFormatError(f"point has non-finite coordinate: {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)


def _as_coord_array(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=np.float64)
    else:
        rows = []
        for p in points:
            rows.append(p.coords if isinstance(p, Point) else tuple(float(c) for c in p))
        arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim != 2:
        raise ChainFormatError("chain points must form a 2D array of coordinates")
    return arr


class Chain:
    """An ordered, immutable point sequence with optional per-vertex weights.

    Weights default to all ones.  Zero weights are accepted (the weighted
    solver admits them); negative weights are not.
    """

    __slots__ = ("coords", "weights")

    def __init__(self, points, weights=None):
        coords = _as_coord_array(points)
        n, dim = coords.shape
        if n < 1:
            raise ChainFormatError("chain must contain at least one point")
        if dim not in (2, 3):
            raise ChainFormatError(f"chain dimension must be 2 or 3, got {dim}")
        if not np.isfinite(coords).all():
            raise ChainFormatError("chain contains non-finite coordinates")
        if weights is None:
            w = np.ones(n, dtype=np.float64)
        else:
            w = np.asarray([float(x) for x in weights], dtype=np.float64)
            if w.shape != (n,):
                raise ChainFormatError(
                    f"weights length {w.shape[0] if w.ndim == 1 else w.shape} "
                    f"does not match chain length {n}"
                )
            if not np.isfinite(w).all() or (w < 0).any():
                raise ChainFormatError("weights must be finite and nonnegative")
        coords.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "weights", w)

    def __setattr__(self, name, value):
        raise AttributeError("Chain is immutable")

    def __len__(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def point(self, index: int) -> Point:
        """Return the 1-based ``index``-th vertex as a Point."""
        if not 1 <= index <= len(self):
            raise IndexError(f"index {index} out of range 1..{len(self)}")
        return Point(tuple(self.coords[index - 1]))

    def points(self) -> list[Point]:
        return [Point(tuple(row)) for row in self.coords]

    def subchain(self, indices: Sequence[int]) -> "Chain":
        """Subsequence of the chain at the given 1-based indices."""
        idx = _check_indices(indices, len(self))
        return Chain(self.coords[idx - 1], self.weights[idx - 1])

    def total_weight(self) -> float:
        return float(self.weights.sum())

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return (
            self.coords.shape == other.coords.shape
            and np.array_equal(self.coords, other.coords)
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        return f"Chain(len={len(self)}, dim={self.dim})"


@dataclass(frozen=True)
class FrechetResult:
    """Distance value plus one monotone coupling realizing it (1-based pairs)."""

    value: float
    coupling: tuple[tuple[int, int], ...] = field(repr=False)


def _check_indices(indices, n: int) -> np.ndarray:
    idx = np.asarray(list(indices), dtype=np.int64)
    if idx.size == 0:
        raise ValueError("index list must be nonempty")
    if (idx < 1).any() or (idx > n).any():
        raise ValueError(f"indices must lie within 1..{n}")
    if (np.diff(idx) <= 0).any():
        raise ValueError("indices must be strictly increasing")
    return idx


def _check_same_dim(a: Chain, b: Chain) -> None:
    if a.dim != b.dim:
        raise ValueError(f"chain dimensions differ: {a.dim} vs {b.dim}")


def euclidean_distance(p, q) -> float:
    """Euclidean distance between two points of equal dimension.

    Computed as sqrt of the left-to-right sum of squared differences, the
    same formula the vectorized distance matrices use, so scalar and bulk
    paths agree bit-for-bit (tolerance comparisons are exact ``<=``).
    """
    pc = p.coords if isinstance(p, Point) else tuple(float(c) for c in p)
    qc = q.coords if isinstance(q, Point) else tuple(float(c) for c in q)
    if len(pc) != len(qc):
        raise ValueError(f"point dimensions differ: {len(pc)} vs {len(qc)}")
    acc = 0.0
    for x, y in zip(pc, qc):
        d = x - y
        acc += d * d
    return math.sqrt(acc)


def pairwise_distances(a: Chain, b: Chain) -> np.ndarray:
    """Dense |A| x |B| matrix of pairwise vertex distances."""
    _check_same_dim(a, b)
    diff = a.coords[:, None, :] - b.coords[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def frechet_decision(a: Chain, b: Chain, delta: float) -> bool:
    """Decide whether the discrete Frechet distance is at most ``delta``.

    Runs the standard O(mn) reachability sweep over the grid of vertex
    pairs: a pair is reachable when its own distance is within delta and
    some predecessor pair (left, down, or diagonal) is reachable.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    dist = pairwise_distances(a, b)
    return bool(frechet_reach(dist, float(delta)))


def discrete_frechet(a: Chain, b: Chain) -> FrechetResult:
    """Exact discrete Frechet distance with a witness coupling.

    The witness walks back from the final pair, preferring diagonal moves,
    then advances in the first chain, then in the second, so reconstruction
    is deterministic.
    """
    dist = pairwise_distances(a, b)
    table = frechet_table(dist)
    m, n = dist.shape
    value = float(table[m - 1, n - 1])

    coupling = [(m, n)]
    i, j = m - 1, n - 1
    while i > 0 or j > 0:
        moved = False
        for pi, pj in ((i - 1, j - 1), (i - 1, j), (i, j - 1)):
            if pi >= 0 and pj >= 0 and table[pi, pj] <= value:
                i, j = pi, pj
                coupling.append((i + 1, j + 1))
                moved = True
                break
        if not moved:  # unreachable: table values bound by value by construction
            raise AssertionError("coupling backtrack failed")
    coupling.reverse()
    return FrechetResult(value=value, coupling=tuple(coupling))


def verify_simplification(a: Chain, indices, delta: float) -> bool:
    """Check that the subsequence at ``indices`` simplifies ``a`` within ``delta``."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    sub = a.subchain(indices)
    return discrete_frechet(a, sub).value <= delta
