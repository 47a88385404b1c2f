"""Exact solvers for simultaneous chain pair simplification.

Two independent routes compute the same optimum: a reference solver that
relaxes every possible configuration against all of its predecessors in
topological order, and an efficient dynamic program using running-minimum
tables and rolling carry buffers.  A pseudo-polynomial generalization
handles per-vertex weights.

Counts are "points stepped on", so a chain simplified to ``k`` vertices
costs ``k`` regardless of where the dogs start.  Endpoint handling is
explicit: ``anchored`` pins both simplifications to their chains' first
and last vertices, ``free_dogs`` lets them start and end on any vertex
within leash range of the chain endpoints.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import MemoryBudgetError, NoSolutionError, RCapInconclusiveError, SizeGuardError
from .geometry import Chain, euclidean_distance, pairwise_distances
from ._kernels import cps_forward, cps_graph, wcps_forward

__all__ = [
    "ANCHORED",
    "FREE_DOGS",
    "DEFAULT_CELL_BUDGET",
    "Configuration",
    "CpsParams",
    "SolveStats",
    "CpsSolution",
    "cps3f_min_graph",
    "cps3f_min_dp",
    "cps3f_decision",
    "solve_with_cap_doubling",
    "obtainable_weights",
    "wcps3f_min",
    "wcps3f_decision",
]

ANCHORED = "anchored"
FREE_DOGS = "free_dogs"

# Reconstruction stores every cell's value table; refuse beyond this many cells.
DEFAULT_CELL_BUDGET = 2_000_000_000


@dataclass(frozen=True)
class CpsParams:
    """Tolerances and solve options for the pair simplification problems."""

    delta1: float
    delta2: float
    delta3: float
    endpoint_mode: str = FREE_DOGS
    r_cap: Optional[int] = None

    def __post_init__(self):
        for name in ("delta1", "delta2", "delta3"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be a finite nonnegative real, got {v!r}")
        if self.endpoint_mode not in (ANCHORED, FREE_DOGS):
            raise ValueError(f"endpoint_mode must be {ANCHORED!r} or {FREE_DOGS!r}")
        if self.r_cap is not None and (not isinstance(self.r_cap, int) or self.r_cap < 1):
            raise ValueError("r_cap must be a positive integer or None")

    def swapped(self) -> "CpsParams":
        """Parameters with the roles of the two chains exchanged."""
        return replace(self, delta1=self.delta2, delta2=self.delta1)


@dataclass(frozen=True)
class Configuration:
    """Joint 1-based position (man, dog-a, woman, dog-b)."""

    i: int
    p: int
    j: int
    q: int

    def is_possible(self, a: Chain, b: Chain, params: CpsParams) -> bool:
        ai = a.coords[self.i - 1]
        ap = a.coords[self.p - 1]
        bj = b.coords[self.j - 1]
        bq = b.coords[self.q - 1]
        return (
            euclidean_distance(ai, ap) <= params.delta1
            and euclidean_distance(bj, bq) <= params.delta2
            and euclidean_distance(ap, bq) <= params.delta3
        )


@dataclass
class SolveStats:
    possible_configs: int
    peak_cells: int
    elapsed_seconds: float


@dataclass
class CpsSolution:
    """Optimal value with optional witness index lists (1-based)."""

    k_star: float
    a_indices: Optional[tuple[int, ...]]
    b_indices: Optional[tuple[int, ...]]
    stats: SolveStats
    r_cap_used: Optional[int] = None


def _proximity_masks(a: Chain, b: Chain, params: CpsParams):
    """1-based boolean masks for the three leash constraints."""
    m, n = len(a), len(b)
    poss_a = np.zeros((m + 1, m + 1), np.bool_)
    poss_b = np.zeros((n + 1, n + 1), np.bool_)
    cross = np.zeros((m + 1, n + 1), np.bool_)
    poss_a[1:, 1:] = pairwise_distances(a, a) <= params.delta1
    poss_b[1:, 1:] = pairwise_distances(b, b) <= params.delta2
    cross[1:, 1:] = pairwise_distances(a, b) <= params.delta3
    return poss_a, poss_b, cross


def _possible_count(poss_a, poss_b, cross) -> int:
    per_p = poss_a[1:, 1:].sum(axis=0).astype(np.int64)  # men for each dog-a spot
    per_q = poss_b[1:, 1:].sum(axis=0).astype(np.int64)
    return int((cross[1:, 1:] * np.outer(per_p, per_q)).sum())


def _prepare(a: Chain, b: Chain, params: CpsParams):
    """Validate, and orient so the budget axis follows the shorter chain."""
    if a.dim != b.dim:
        raise ValueError(f"chain dimensions differ: {a.dim} vs {b.dim}")
    if params.r_cap is not None and params.r_cap > len(a):
        raise ValueError(f"r_cap={params.r_cap} exceeds |A|={len(a)}")
    swapped = len(a) > len(b)
    if swapped:
        a, b = b, a
        params = params.swapped()
    return a, b, params, swapped


def _rmax_for(params: CpsParams, m: int) -> tuple[int, bool]:
    if params.r_cap is None or params.r_cap >= m:
        return m, False
    return params.r_cap, True


def _finish(best: int, inf: int, capped: bool, rmax: int):
    if capped:
        if best >= rmax:
            raise RCapInconclusiveError(rmax, None if best >= inf else int(best))
    if best >= inf:
        raise NoSolutionError("no simplification pair satisfies the tolerances")
    return int(best)


def cps3f_min_dp(
    a: Chain,
    b: Chain,
    params: CpsParams,
    reconstruct: bool = False,
    cell_budget: int = DEFAULT_CELL_BUDGET,
) -> CpsSolution:
    """Minimize max(|A'|, |B'|) by the efficient dynamic program.

    Value mode keeps a rolling column of carry buffers; reconstruct mode
    additionally stores every cell's value table (guarded by
    ``cell_budget``) and returns witness index lists.
    """
    t0 = time.perf_counter()
    a2, b2, params2, swapped = _prepare(a, b, params)
    m, n = len(a2), len(b2)
    anchored = params2.endpoint_mode == ANCHORED
    rmax, capped = _rmax_for(params2, m)
    inf = m + n + 1

    poss_a, poss_b, cross = _proximity_masks(a2, b2, params2)

    pool = np.full((m + 3, m + 1, n + 1, rmax + 1), inf, np.int16)
    vals = np.full((m + 1, n + 1, rmax + 1), inf, np.int16)
    best_p = np.full_like(vals, inf)
    best_q = np.full_like(vals, inf)
    best_pq = np.full_like(vals, inf)
    if reconstruct:
        cells = (m + 1) * (n + 1) * (m + 1) * (n + 1) * (rmax + 1)
        if cells > cell_budget:
            raise MemoryBudgetError(
                f"reconstruction needs {cells} cells, budget is {cell_budget}"
            )
        x_all = np.full((m + 1, n + 1, m + 1, n + 1, rmax + 1), inf, np.int16)
    else:
        x_all = np.full((1, 1, 1, 1, 1), inf, np.int16)

    peak_cells = int(pool.size + 4 * vals.size + (x_all.size if reconstruct else 0))
    best = cps_forward(
        poss_a, poss_b, cross, rmax, anchored, inf,
        pool, vals, best_p, best_q, best_pq, reconstruct, x_all,
    )
    k_star = _finish(int(best), inf, capped, rmax)

    a_idx = b_idx = None
    if reconstruct:
        a_idx, b_idx = _backtrack_pair(x_all, poss_a, poss_b, cross,
                                       m, n, rmax, anchored, inf, k_star)
        if swapped:
            a_idx, b_idx = b_idx, a_idx
    stats = SolveStats(
        possible_configs=_possible_count(poss_a, poss_b, cross),
        peak_cells=peak_cells,
        elapsed_seconds=time.perf_counter() - t0,
    )
    return CpsSolution(k_star, a_idx, b_idx, stats,
                       r_cap_used=params2.r_cap if capped else None)


def _dp_final_tables(a: Chain, b: Chain, params: CpsParams):
    """Run the DP and return the final cell's tables (test hook)."""
    a2, b2, params2, _ = _prepare(a, b, params)
    m, n = len(a2), len(b2)
    anchored = params2.endpoint_mode == ANCHORED
    rmax, _ = _rmax_for(params2, m)
    inf = m + n + 1
    poss_a, poss_b, cross = _proximity_masks(a2, b2, params2)
    pool = np.full((m + 3, m + 1, n + 1, rmax + 1), inf, np.int16)
    vals = np.full((m + 1, n + 1, rmax + 1), inf, np.int16)
    best_p = np.full_like(vals, inf)
    best_q = np.full_like(vals, inf)
    best_pq = np.full_like(vals, inf)
    dummy = np.full((1, 1, 1, 1, 1), inf, np.int16)
    cps_forward(poss_a, poss_b, cross, rmax, anchored, inf,
                pool, vals, best_p, best_q, best_pq, False, dummy)
    return vals, best_p, best_q, best_pq, inf


def cps3f_min_graph(a: Chain, b: Chain, params: CpsParams,
                    cell_budget: int = DEFAULT_CELL_BUDGET) -> CpsSolution:
    """Reference solver over the configuration graph (value only).

    Enumerates possible configurations in topologically sorted order and
    relaxes each against all predecessors directly.  Quartic storage, so
    intended for moderate sizes; the efficient route is ``cps3f_min_dp``.
    """
    t0 = time.perf_counter()
    a2, b2, params2, _ = _prepare(a, b, params)
    m, n = len(a2), len(b2)
    anchored = params2.endpoint_mode == ANCHORED
    rmax, capped = _rmax_for(params2, m)
    inf = m + n + 1

    cells = (m + 1) * (n + 1) * (m + 1) * (n + 1) * (rmax + 1)
    if cells > cell_budget:
        raise MemoryBudgetError(f"graph solver needs {cells} cells, budget is {cell_budget}")
    poss_a, poss_b, cross = _proximity_masks(a2, b2, params2)
    x_all = np.full((m + 1, n + 1, m + 1, n + 1, rmax + 1), inf, np.int16)
    best = cps_graph(poss_a, poss_b, cross, rmax, anchored, inf, x_all)
    k_star = _finish(int(best), inf, capped, rmax)
    stats = SolveStats(
        possible_configs=_possible_count(poss_a, poss_b, cross),
        peak_cells=int(x_all.size),
        elapsed_seconds=time.perf_counter() - t0,
    )
    return CpsSolution(k_star, None, None, stats,
                       r_cap_used=params2.r_cap if capped else None)


def _solve_value_raw(a: Chain, b: Chain, params: CpsParams, rmax_override=None):
    """Internal: run the value DP, returning (best, inf) without finishing."""
    a2, b2, params2, _ = _prepare(a, b, params)
    m, n = len(a2), len(b2)
    anchored = params2.endpoint_mode == ANCHORED
    rmax = rmax_override if rmax_override is not None else _rmax_for(params2, m)[0]
    rmax = min(rmax, m)
    inf = m + n + 1
    poss_a, poss_b, cross = _proximity_masks(a2, b2, params2)
    pool = np.full((m + 3, m + 1, n + 1, rmax + 1), inf, np.int16)
    vals = np.full((m + 1, n + 1, rmax + 1), inf, np.int16)
    best_p = np.full_like(vals, inf)
    best_q = np.full_like(vals, inf)
    best_pq = np.full_like(vals, inf)
    dummy = np.full((1, 1, 1, 1, 1), inf, np.int16)
    best = cps_forward(poss_a, poss_b, cross, rmax, anchored, inf,
                       pool, vals, best_p, best_q, best_pq, False, dummy)
    return int(best), inf


def cps3f_decision(a: Chain, b: Chain, k: int, params: CpsParams) -> bool:
    """Decide whether both chains can be simplified to at most k vertices.

    Always conclusive: the budget axis is truncated at k, which cannot hide
    a feasible answer because any walk using more than k first-dog points
    already exceeds k.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    best, inf = _solve_value_raw(a, b, params, rmax_override=k)
    return best < inf and best <= k


def solve_with_cap_doubling(a: Chain, b: Chain, params: CpsParams,
                            start_cap: int = 2) -> CpsSolution:
    """Value-mode solve that grows the hop-count cap until provably optimal.

    Starts from a small cap and doubles on an inconclusive result; a result
    strictly below the cap is optimal, so total work is within a constant
    factor of the final attempt while peak memory follows the final cap.
    """
    limit = min(len(a), len(b))
    cap = max(1, min(start_cap, limit))
    while True:
        try:
            sol = cps3f_min_dp(a, b, replace(params, r_cap=cap))
            sol.r_cap_used = cap
            return sol
        except RCapInconclusiveError:
            if cap >= limit:
                raise
            cap = min(cap * 2, limit)


def _backtrack_pair(x_all, poss_a, poss_b, cross, m, n, rmax, anchored, inf, k_star):
    """Deterministic witness extraction from the stored value tables.

    Predecessor candidates are scanned in a fixed order: man+woman diagonal
    first, then man move, then woman move, then dogs-only; within a case,
    smaller dog-a index first, then smaller dog-b index.
    """
    final = None
    if anchored:
        for r in range(1, rmax + 1):
            z = int(x_all[m, n, m, n, r])
            if z < inf and max(r, z) == k_star:
                final = (m, n, m, n, r)
                break
    else:
        for r in range(1, rmax + 1):
            for p in range(1, m + 1):
                for q in range(1, n + 1):
                    z = int(x_all[m, n, p, q, r])
                    if z < inf and max(r, z) == k_star:
                        final = (m, n, p, q, r)
                        break
                if final:
                    break
            if final:
                break
    if final is None:
        raise AssertionError("optimal final configuration not found")

    def is_init(p, q):
        if anchored:
            return p == 1 and q == 1
        return bool(poss_a[1, p] and poss_b[1, q] and cross[p, q])

    path = []
    i, j, p, q, r = final
    guard = 0
    while True:
        guard += 1
        if guard > 4 * (m + n + m + n) + 8:
            raise AssertionError("backtrack did not terminate")
        path.append((i, p, j, q))
        z = int(x_all[i, j, p, q, r])
        if i == 1 and j == 1 and z == 1 and is_init(p, q):
            break
        found = None
        for di, dj in ((1, 1), (1, 0), (0, 1), (0, 0)):
            i2, j2 = i - di, j - dj
            if i2 < 1 or j2 < 1:
                continue
            for p2 in range(1, p + 1):
                r2 = r - 1 if p2 < p else r
                if r2 < 1:
                    continue
                for q2 in range(1, q + 1):
                    if di == 0 and dj == 0 and p2 == p and q2 == q:
                        continue
                    v = int(x_all[i2, j2, p2, q2, r2])
                    if v < inf and v + (1 if q2 < q else 0) == z:
                        found = (i2, j2, p2, q2, r2)
                        break
                if found:
                    break
            if found:
                break
        if found is None:
            raise AssertionError("no predecessor found during backtrack")
        i, j, p, q, r = found

    path.reverse()
    a_idx, b_idx = [], []
    for _, pp, _, qq in path:
        if not a_idx or a_idx[-1] != pp:
            a_idx.append(pp)
        if not b_idx or b_idx[-1] != qq:
            b_idx.append(qq)
    return tuple(a_idx), tuple(b_idx)


# ----------------------------------------------------------------------
# Weighted variant


def obtainable_weights(chain: Chain, max_count: int = 2_000_000) -> np.ndarray:
    """Sorted distinct sums over nonempty subsets of the chain's weights.

    Grown one vertex at a time as a set of sums.  The count is the
    pseudo-polynomial dimension of the weighted solver; a guard trips when
    it explodes (irregular real-valued weights) or a sum stops being
    finite.  Exact for integer-valued weights within float64 range.
    """
    sums: set[float] = set()
    for w in chain.weights:
        w = float(w)
        extended = {w} | {s + w for s in sums}
        sums |= extended
        if len(sums) > max_count:
            raise SizeGuardError(
                f"number of obtainable weights exceeds {max_count}"
            )
    out = np.array(sorted(sums), dtype=np.float64)
    if not np.isfinite(out).all():
        raise OverflowError("subset sums exceed the representable range")
    return out


def _wcps_raw(a: Chain, b: Chain, params: CpsParams, budget_limit=None):
    """Weighted forward solve; returns (best, stats, swapped)."""
    t0 = time.perf_counter()
    if a.dim != b.dim:
        raise ValueError(f"chain dimensions differ: {a.dim} vs {b.dim}")
    fa = obtainable_weights(a)
    fb = obtainable_weights(b)
    swapped = len(fb) < len(fa)
    params2 = params
    if swapped:
        a, b = b, a
        fa = fb
        params2 = params.swapped()
    m, n = len(a), len(b)
    anchored = params2.endpoint_mode == ANCHORED

    if budget_limit is not None:
        fa = fa[fa <= budget_limit]
        if fa.size == 0:
            return math.inf, SolveStats(0, 0, time.perf_counter() - t0), swapped
    fdim = int(fa.size)
    budgets = np.empty(fdim + 1, np.float64)
    budgets[0] = -math.inf
    budgets[1:] = fa
    wa = np.zeros(m + 1, np.float64)
    wa[1:] = a.weights
    wb = np.zeros(n + 1, np.float64)
    wb[1:] = b.weights

    poss_a, poss_b, cross = _proximity_masks(a, b, params2)
    pool = np.full((m + 3, m + 1, n + 1, fdim + 1), np.inf, np.float64)
    vals = np.full((m + 1, n + 1, fdim + 1), np.inf, np.float64)
    best_p = np.full_like(vals, np.inf)
    best_q = np.full_like(vals, np.inf)
    best_pq = np.full_like(vals, np.inf)
    best = wcps_forward(poss_a, poss_b, cross, budgets, wa, wb, anchored,
                        pool, vals, best_p, best_q, best_pq)
    stats = SolveStats(
        possible_configs=_possible_count(poss_a, poss_b, cross),
        peak_cells=int(pool.size + 4 * vals.size),
        elapsed_seconds=time.perf_counter() - t0,
    )
    return float(best), stats, swapped


def wcps3f_min(a: Chain, b: Chain, params: CpsParams) -> tuple[float, CpsSolution]:
    """Minimize max of the simplifications' total weights.

    The budget axis indexes the obtainable subset sums of whichever chain
    has fewer of them; with unit weights this reduces exactly to
    ``cps3f_min_dp``.
    """
    best, stats, _ = _wcps_raw(a, b, params)
    if not math.isfinite(best):
        raise NoSolutionError("no simplification pair satisfies the tolerances")
    return best, CpsSolution(best, None, None, stats)


def wcps3f_decision(a: Chain, b: Chain, k: float, params: CpsParams) -> bool:
    """Decide whether both chains simplify within total weight ``k`` each."""
    if not (isinstance(k, (int, float)) and math.isfinite(k)):
        raise ValueError(f"k must be a finite real, got {k!r}")
    best, _, _ = _wcps_raw(a, b, params, budget_limit=float(k))
    return math.isfinite(best) and best <= k
