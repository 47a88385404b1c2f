"""One-sided simplification: only the first chain is simplified.

``one_sided_cps3f_min`` keeps the fidelity leash to the original chain;
the two relaxed problems drop it, minimizing either the simplification
length for a given tolerance or the tolerance for a given length budget.
Witness index lists are 1-based and deterministic.
"""

from __future__ import annotations

import time

import numpy as np

from .errors import NoSolutionError
from .geometry import Chain, pairwise_distances
from ._kernels import min_k_forward, one_sided_forward

__all__ = [
    "one_sided_cps3f_min",
    "simplify_min_k",
    "simplify_min_delta",
]


def _check(a: Chain, b: Chain):
    if a.dim != b.dim:
        raise ValueError(f"chain dimensions differ: {a.dim} vs {b.dim}")


def one_sided_cps3f_min(a: Chain, b: Chain, delta1: float, delta3: float):
    """Shortest simplification of ``a`` within delta1 of ``a`` and delta3 of ``b``.

    The man walks the whole of ``a`` and the woman the whole of ``b``; the
    single dog walks the simplification, starting and ending on any vertex
    within leash range of the chain endpoints.  Returns ``(k_star,
    a_indices)``.
    """
    if delta1 < 0 or delta3 < 0:
        raise ValueError("tolerances must be nonnegative")
    _check(a, b)
    m, n = len(a), len(b)
    inf = m + 1

    poss_a = np.zeros((m + 1, m + 1), np.bool_)
    poss_a[1:, 1:] = pairwise_distances(a, a) <= delta1
    cross = np.zeros((m + 1, n + 1), np.bool_)
    cross[1:, 1:] = pairwise_distances(a, b) <= delta3

    x = np.full((m + 1, n + 1, m + 1), inf, np.int32)
    run_prev = np.full((n + 1, m + 1), inf, np.int32)
    run_cur = np.full((n + 1, m + 1), inf, np.int32)
    best = int(one_sided_forward(poss_a, cross, inf, x, run_prev, run_cur))
    if best >= inf:
        raise NoSolutionError("no simplification satisfies both tolerances")

    indices = _backtrack_one_sided(x, poss_a, cross, m, n, inf)
    return best, indices


def _backtrack_one_sided(x, poss_a, cross, m, n, inf):
    """Walk back from the cheapest final dog position (smallest on ties)."""
    p = min(range(1, m + 1), key=lambda pp: (int(x[m, n, pp]), pp))
    i, j = m, n
    path = []
    guard = 0
    while True:
        guard += 1
        if guard > 3 * (m + n + m) + 8:
            raise AssertionError("backtrack did not terminate")
        path.append(p)
        z = int(x[i, j, p])
        if i == 1 and j == 1 and z == 1 and poss_a[1, p] and cross[p, 1]:
            break
        found = None
        for di, dj in ((1, 1), (1, 0), (0, 1), (0, 0)):
            i2, j2 = i - di, j - dj
            if i2 < 1 or j2 < 1:
                continue
            for p2 in range(1, p + 1):
                if di == 0 and dj == 0 and p2 == p:
                    continue
                v = int(x[i2, j2, p2])
                if v < inf and v + (1 if p2 < p else 0) == z:
                    found = (i2, j2, p2)
                    break
            if found:
                break
        if found is None:
            raise AssertionError("no predecessor found during backtrack")
        i, j, p = found
    path.reverse()
    indices = []
    for pp in path:
        if not indices or indices[-1] != pp:
            indices.append(pp)
    return tuple(indices)


def simplify_min_k(a: Chain, b: Chain, delta: float):
    """Shortest subsequence of ``a`` within discrete Frechet ``delta`` of ``b``.

    Suffix dynamic program: for each start vertex and each suffix of ``b``,
    the table holds the least length of a simplification beginning there
    that covers the suffix; the answer minimizes over start vertices.  Both
    endpoints of the simplification are free.  Returns ``(length,
    a_indices)``.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    _check(a, b)
    m, n = len(a), len(b)
    inf = m + 1
    dist = pairwise_distances(a, b)

    start_len = np.full((m + 2, n + 2), inf, np.int64)
    best_from = np.full((m + 2, n + 2), inf, np.int64)
    best = int(min_k_forward(dist, float(delta), inf, start_len, best_from))
    if best >= inf:
        raise NoSolutionError(f"no simplification stays within delta={delta}")

    # walk forward through the table decisions; stay on the current vertex
    # when tied, which yields the leftmost shortest witness
    i = min(range(1, m + 1), key=lambda ii: (int(start_len[ii, 1]), ii))
    j = 1
    indices = [i]
    while int(start_len[i, j]) > 1:
        v = int(start_len[i, j])
        if int(start_len[i, j + 1]) == v:
            j += 1
        else:
            nxt = None
            for i2 in range(i + 1, m + 1):
                if int(start_len[i2, j + 1]) == v - 1:
                    nxt = i2
                    break
            if nxt is None:
                raise AssertionError("witness walk failed")
            i, j = nxt, j + 1
            indices.append(i)
    return best, tuple(indices)


def simplify_min_delta(a: Chain, b: Chain, k: int):
    """Least discrete Frechet distance achievable with at most ``k`` vertices.

    The optimum is always one of the pairwise vertex distances, so a binary
    search over that set with the minimum-length solver as the feasibility
    probe is exact.  Returns ``(delta_star, a_indices)``.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    _check(a, b)
    candidates = np.unique(pairwise_distances(a, b))

    def feasible(delta: float) -> bool:
        try:
            length, _ = simplify_min_k(a, b, delta)
        except NoSolutionError:
            return False
        return length <= k

    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(float(candidates[mid])):
            hi = mid
        else:
            lo = mid + 1
    delta_star = float(candidates[lo])
    _, indices = simplify_min_k(a, b, delta_star)
    return delta_star, indices
