"""Exponential-time reference solvers and structured hard instances.

Everything here is definitional: subsequences are enumerated outright and
checked with the discrete Frechet distance, so these functions are the
ground truth the fast solvers are tested against.  Size guards fail loudly.

``make_reduction_instance`` builds the set-partition gadget on two
parallel rows of vertex pairs: each element of the multiset appears as a
weighted vertex on one chain and its partner vertex on the other, the
tolerances force every pair to contribute its value to exactly one side,
and an equal-sum split exists iff both sides fit the budget.  Coordinates
are laid out on an integer grid (offset 1 within a pair, gap 5 between
pairs and between the rows) so every tolerance comparison is exact in
binary floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import NoSolutionError, SizeGuardError
from .geometry import Chain, pairwise_distances
from .solver import ANCHORED, CpsParams, FREE_DOGS
from ._kernels import frechet_table

__all__ = [
    "brute_cps3f",
    "brute_one_sided",
    "brute_min_k",
    "brute_min_delta",
    "ReductionInstance",
    "make_reduction_instance",
    "partition_brute",
]

_MAX_BRUTE = 12


def _guard(*chains: Chain):
    for c in chains:
        if len(c) > _MAX_BRUTE:
            raise SizeGuardError(
                f"brute-force oracle limited to {_MAX_BRUTE} vertices, got {len(c)}"
            )


def _subsequences(n: int, anchored: bool, max_len: int | None = None):
    """All 1-based index tuples, optionally pinned to both endpoints."""
    top = n if max_len is None else min(n, max_len)
    out = []
    if anchored:
        if n == 1:
            return [(1,)]
        inner = list(range(2, n))
        for size in range(0, max(0, top - 2) + 1):
            for mid in combinations(inner, size):
                out.append((1, *mid, n))
        return out
    for size in range(1, top + 1):
        out.extend(combinations(range(1, n + 1), size))
    return out


def _dfd_indexed(dist: np.ndarray, rows, cols) -> float:
    sub = dist[np.ix_([r - 1 for r in rows], [c - 1 for c in cols])]
    return float(frechet_table(sub)[-1, -1])


def brute_cps3f(a: Chain, b: Chain, params: CpsParams) -> int:
    """Exact minimum of max(|A'|, |B'|) by full subsequence-pair enumeration."""
    _guard(a, b)
    m, n = len(a), len(b)
    anchored = params.endpoint_mode == ANCHORED
    daa = pairwise_distances(a, a)
    dbb = pairwise_distances(b, b)
    dab = pairwise_distances(a, b)
    full_a = tuple(range(1, m + 1))
    full_b = tuple(range(1, n + 1))

    good_a = [s for s in _subsequences(m, anchored)
              if _dfd_indexed(daa, full_a, s) <= params.delta1]
    good_b = [s for s in _subsequences(n, anchored)
              if _dfd_indexed(dbb, full_b, s) <= params.delta2]
    by_len_a: dict[int, list] = {}
    for s in good_a:
        by_len_a.setdefault(len(s), []).append(s)
    by_len_b: dict[int, list] = {}
    for s in good_b:
        by_len_b.setdefault(len(s), []).append(s)

    for k in range(1, max(m, n) + 1):
        pairs = []
        for la, lst_a in by_len_a.items():
            if la > k:
                continue
            for lb, lst_b in by_len_b.items():
                if max(la, lb) != k:
                    continue
                pairs.extend((sa, sb) for sa in lst_a for sb in lst_b)
        for sa, sb in pairs:
            if _dfd_indexed(dab, sa, sb) <= params.delta3:
                return k
    raise NoSolutionError("no subsequence pair satisfies the tolerances")


def brute_one_sided(a: Chain, b: Chain, delta1: float, delta3: float) -> int:
    """Exact one-sided optimum by subsequence enumeration."""
    _guard(a, b)
    m, n = len(a), len(b)
    daa = pairwise_distances(a, a)
    dab = pairwise_distances(a, b)
    full_a = tuple(range(1, m + 1))
    full_b = tuple(range(1, n + 1))
    for s in sorted(_subsequences(m, False), key=len):
        if (_dfd_indexed(daa, full_a, s) <= delta1
                and _dfd_indexed(dab, s, full_b) <= delta3):
            return len(s)
    raise NoSolutionError("no simplification satisfies both tolerances")


def brute_min_k(a: Chain, b: Chain, delta: float) -> int:
    """Exact minimum simplification length within ``delta`` of ``b``."""
    _guard(a, b)
    m, n = len(a), len(b)
    dab = pairwise_distances(a, b)
    full_b = tuple(range(1, n + 1))
    for s in sorted(_subsequences(m, False), key=len):
        if _dfd_indexed(dab, s, full_b) <= delta:
            return len(s)
    raise NoSolutionError(f"no simplification stays within delta={delta}")


def brute_min_delta(a: Chain, b: Chain, k: int) -> float:
    """Exact least distance over subsequences of length at most ``k``."""
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    _guard(a, b)
    m, n = len(a), len(b)
    dab = pairwise_distances(a, b)
    full_b = tuple(range(1, n + 1))
    return min(_dfd_indexed(dab, s, full_b)
               for s in _subsequences(m, False, max_len=k))


@dataclass(frozen=True)
class ReductionInstance:
    """Set-partition gadget: two chains, tolerances, and a weight budget."""

    chain_a: Chain
    chain_b: Chain
    params: CpsParams
    budget: float
    source_set: tuple[int, ...]
    positive_variant: bool


# grid step between consecutive element gadgets and between the two rows;
# the in-pair offset is 1 and the tolerances are 1 and the row gap, all of
# which compare exactly under floating-point <=
_GRID = 5.0


def make_reduction_instance(values, positive_variant: bool = False) -> ReductionInstance:
    """Instance whose weighted decision at the budget mirrors set partition.

    For the i-th element: chain A gets a weighted vertex and a free partner
    offset by 1; chain B gets the mirrored pair on the lower row with the
    weight on the partner.  Fidelity tolerance 1 forces one vertex per
    pair into each simplification, the cross tolerance (the row gap) forces
    the picks to align, so element i's value lands on exactly one side.
    Budget is half the total (plus the count in the all-positive variant,
    where every weight is shifted up by one).
    """
    vals = tuple(int(v) for v in values)
    if len(vals) == 0:
        raise ValueError("the multiset must be nonempty")
    if any(v < 1 for v in vals):
        raise ValueError("elements must be positive integers")
    n = len(vals)
    total = float(sum(vals))
    shift = 1.0 if positive_variant else 0.0

    pts_a, w_a, pts_b, w_b = [], [], [], []
    for idx, v in enumerate(vals, start=1):
        x = _GRID * idx
        pts_a.append((x, _GRID))
        w_a.append(float(v) + shift)
        pts_a.append((x + 1.0, _GRID))
        w_a.append(shift)
        pts_b.append((x, 0.0))
        w_b.append(shift)
        pts_b.append((x + 1.0, 0.0))
        w_b.append(float(v) + shift)

    params = CpsParams(delta1=1.0, delta2=1.0, delta3=_GRID,
                       endpoint_mode=FREE_DOGS)
    budget = total / 2.0 + (float(n) if positive_variant else 0.0)
    return ReductionInstance(
        chain_a=Chain(pts_a, w_a),
        chain_b=Chain(pts_b, w_b),
        params=params,
        budget=budget,
        source_set=vals,
        positive_variant=positive_variant,
    )


def partition_brute(values) -> bool:
    """Whether the multiset splits into two parts of equal sum."""
    vals = [int(v) for v in values]
    if len(vals) > 20:
        raise SizeGuardError(f"partition oracle limited to 20 elements, got {len(vals)}")
    if any(v < 1 for v in vals):
        raise ValueError("elements must be positive integers")
    total = sum(vals)
    if total % 2:
        return False
    reachable = 1
    for v in vals:
        reachable |= reachable << v
    return bool((reachable >> (total // 2)) & 1)
