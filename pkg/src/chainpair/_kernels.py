"""Numba kernels for the dynamic programs.

Index conventions shared by the solver kernels:

* All position axes are 1-based with a padding slot at index 0 whose value
  is the infinity sentinel, so reads at ``p-1`` / ``q-1`` / ``r-1`` need no
  branching.
* ``vals[p, q, r]`` is the least count (or weight) of second-dog points for
  a walk reaching the configuration (man, dog-a at p, woman, dog-b at q)
  with a first-dog budget of at most the ``r``-th allowed amount.  Budgets
  are "at most", so the arrays are non-increasing along ``r``.
* Per man/woman cell the kernels keep three running-minimum tables over the
  dog axes (prefix min over p, over q, and over both) so each transition
  touches O(1) entries.
* Once a cell's tables are final they are collapsed into a single "carry"
  array holding the best candidate each successor cell can inherit; only a
  rolling column of carries stays live, which is what brings value-mode
  memory down from the naive all-configurations graph.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def frechet_table(dist):
    """Max-min dynamic program for the discrete Frechet distance."""
    m, n = dist.shape
    table = np.empty((m, n), np.float64)
    table[0, 0] = dist[0, 0]
    for i in range(1, m):
        table[i, 0] = max(table[i - 1, 0], dist[i, 0])
    for j in range(1, n):
        table[0, j] = max(table[0, j - 1], dist[0, j])
    for i in range(1, m):
        for j in range(1, n):
            best = table[i - 1, j - 1]
            if table[i - 1, j] < best:
                best = table[i - 1, j]
            if table[i, j - 1] < best:
                best = table[i, j - 1]
            d = dist[i, j]
            table[i, j] = d if d > best else best
    return table


@njit(cache=True)
def frechet_reach(dist, delta):
    """Reachability sweep deciding d_dF <= delta."""
    m, n = dist.shape
    reach = np.zeros((m, n), np.uint8)
    for i in range(m):
        for j in range(n):
            if dist[i, j] <= delta:
                if i == 0 and j == 0:
                    reach[i, j] = 1
                elif i > 0 and reach[i - 1, j]:
                    reach[i, j] = 1
                elif j > 0 and reach[i, j - 1]:
                    reach[i, j] = 1
                elif i > 0 and j > 0 and reach[i - 1, j - 1]:
                    reach[i, j] = 1
    return reach[m - 1, n - 1]


@njit(cache=True)
def cps_forward(poss_a, poss_b, cross, rmax, anchored, inf,
                pool, vals, best_p, best_q, best_pq, store_all, x_all):
    """Forward pass of the efficient pair-simplification DP.

    ``pool`` holds the rolling carry arrays (one per man index plus three
    spares); ``vals``/``best_p``/``best_q``/``best_pq`` are the current
    cell's tables and end up holding the final cell's tables on return.
    With ``store_all`` every cell's value table is also written to
    ``x_all`` for witness reconstruction.

    Returns the optimal max(first-dog budget, second-dog count), or ``inf``
    when the final configurations are unreachable.
    """
    m = poss_a.shape[0] - 1
    n = poss_b.shape[0] - 1

    slot_of = np.empty(m + 1, np.int64)
    for i in range(m + 1):
        slot_of[i] = i
    free_idx = m + 1
    diag_idx = m + 2
    best = np.int64(inf)

    for j in range(1, n + 1):
        spare = diag_idx
        diag_idx = 0
        for i in range(1, m + 1):
            e_left = pool[slot_of[i]]       # carry of (i, j-1)
            e_up = pool[slot_of[i - 1]]     # carry of (i-1, j)
            e_diag = pool[diag_idx]         # carry of (i-1, j-1)
            first = i == 1 and j == 1
            final = i == m and j == n

            for p in range(1, m + 1):
                ok_a = poss_a[i, p]
                for q in range(1, n + 1):
                    if ok_a and poss_b[j, q] and cross[p, q]:
                        for r in range(1, rmax + 1):
                            v = np.int64(e_left[p, q, r])
                            w = np.int64(e_up[p, q, r])
                            if w < v:
                                v = w
                            w = np.int64(e_diag[p, q, r])
                            if w < v:
                                v = w
                            # dogs move while man and woman rest
                            w = np.int64(best_p[p - 1, q, r - 1])
                            if w < v:
                                v = w
                            w = np.int64(best_q[p, q - 1, r])
                            if w < inf:
                                w += 1
                                if w < v:
                                    v = w
                            w = np.int64(best_pq[p - 1, q - 1, r - 1])
                            if w < inf:
                                w += 1
                                if w < v:
                                    v = w
                            vals[p, q, r] = v
                        if first and ((not anchored) or (p == 1 and q == 1)):
                            # both dogs step onto their first points
                            for r in range(1, rmax + 1):
                                if vals[p, q, r] > 1:
                                    vals[p, q, r] = 1
                        if final:
                            if (not anchored) or (p == m and q == n):
                                for r in range(1, rmax + 1):
                                    z = np.int64(vals[p, q, r])
                                    if z < inf:
                                        hi = z if z > r else np.int64(r)
                                        if hi < best:
                                            best = hi
                    else:
                        for r in range(1, rmax + 1):
                            vals[p, q, r] = inf
                    for r in range(1, rmax + 1):
                        x = vals[p, q, r]
                        v = best_p[p - 1, q, r]
                        best_p[p, q, r] = x if x < v else v
                        v = best_q[p, q - 1, r]
                        best_q[p, q, r] = x if x < v else v
                        v = best_pq[p - 1, q, r]
                        w = best_pq[p, q - 1, r]
                        if w < v:
                            v = w
                        best_pq[p, q, r] = x if x < v else v
                    if store_all:
                        for r in range(1, rmax + 1):
                            x_all[i, j, p, q, r] = vals[p, q, r]

            if final:
                break

            e_new = pool[free_idx]
            for p in range(1, m + 1):
                for q in range(1, n + 1):
                    for r in range(1, rmax + 1):
                        v = np.int64(best_p[p - 1, q, r - 1])
                        w = np.int64(best_q[p, q - 1, r])
                        if w < inf:
                            w += 1
                            if w < v:
                                v = w
                        w = np.int64(best_pq[p - 1, q - 1, r - 1])
                        if w < inf:
                            w += 1
                            if w < v:
                                v = w
                        w = np.int64(vals[p, q, r])
                        if w < v:
                            v = w
                        e_new[p, q, r] = v
            old_diag = diag_idx
            diag_idx = slot_of[i]
            slot_of[i] = free_idx
            free_idx = old_diag if old_diag != 0 else spare
    return best


@njit(cache=True)
def cps_graph(poss_a, poss_b, cross, rmax, anchored, inf, x_all):
    """Reference solver: per-configuration relaxation in topological order.

    ``x_all[i, j, p, q, r]`` must be pre-filled with ``inf``.  Every
    possible configuration is relaxed against all of its predecessor
    configurations directly, with no running-minimum tables, so this is an
    independent (slower) route to the same optimum.
    """
    m = poss_a.shape[0] - 1
    n = poss_b.shape[0] - 1
    best = np.int64(inf)

    for i in range(1, m + 1):
        for j in range(1, n + 1):
            for p in range(1, m + 1):
                if not poss_a[i, p]:
                    continue
                for q in range(1, n + 1):
                    if not (poss_b[j, q] and cross[p, q]):
                        continue
                    is_init = (i == 1 and j == 1
                               and ((not anchored) or (p == 1 and q == 1)))
                    for r in range(1, rmax + 1):
                        v = np.int64(inf)
                        for i2 in range(i - 1, i + 1):
                            if i2 < 1:
                                continue
                            for j2 in range(j - 1, j + 1):
                                if j2 < 1:
                                    continue
                                same_cell = i2 == i and j2 == j
                                for p2 in range(1, p + 1):
                                    r2 = r - 1 if p2 < p else r
                                    if r2 < 1:
                                        continue
                                    for q2 in range(1, q + 1):
                                        if same_cell and p2 == p and q2 == q:
                                            continue
                                        w = np.int64(x_all[i2, j2, p2, q2, r2])
                                        if w < inf:
                                            if q2 < q:
                                                w += 1
                                            if w < v:
                                                v = w
                        if is_init and v > 1:
                            v = np.int64(1)
                        x_all[i, j, p, q, r] = v
                        if i == m and j == n and v < inf:
                            if (not anchored) or (p == m and q == n):
                                hi = v if v > r else np.int64(r)
                                if hi < best:
                                    best = hi
    return best


@njit(cache=True)
def _largest_weight_at_most(budgets, limit):
    """Largest index r >= 1 with budgets[r] <= limit, else 0."""
    lo = 1
    hi = budgets.shape[0] - 1
    res = 0
    while lo <= hi:
        mid = (lo + hi) // 2
        if budgets[mid] <= limit:
            res = mid
            lo = mid + 1
        else:
            hi = mid - 1
    return res


@njit(cache=True)
def _smallest_weight_at_least(budgets, need):
    """Smallest index r >= 1 with budgets[r] >= need, else 0."""
    f = budgets.shape[0] - 1
    lo = 1
    hi = f
    res = 0
    while lo <= hi:
        mid = (lo + hi) // 2
        if budgets[mid] >= need:
            res = mid
            hi = mid - 1
        else:
            lo = mid + 1
    return res


@njit(cache=True)
def wcps_forward(poss_a, poss_b, cross, budgets, wa, wb, anchored,
                 pool, vals, best_p, best_q, best_pq):
    """Weighted variant of the forward DP.

    ``budgets`` holds the sorted obtainable subset sums of the first
    chain's weights (1-based, budgets[0] unused); the budget axis reads at
    the largest obtainable sum that still fits after paying for a first-dog
    hop.  Values are accumulated second-dog weights (float64, inf as the
    sentinel).  Returns min over final configurations and budgets of
    max(budget, value), or inf.
    """
    m = poss_a.shape[0] - 1
    n = poss_b.shape[0] - 1
    fdim = budgets.shape[0] - 1
    inf = np.inf

    slot_of = np.empty(m + 1, np.int64)
    for i in range(m + 1):
        slot_of[i] = i
    free_idx = m + 1
    diag_idx = m + 2
    best = inf

    for j in range(1, n + 1):
        spare = diag_idx
        diag_idx = 0
        for i in range(1, m + 1):
            e_left = pool[slot_of[i]]
            e_up = pool[slot_of[i - 1]]
            e_diag = pool[diag_idx]
            first = i == 1 and j == 1
            final = i == m and j == n

            for p in range(1, m + 1):
                ok_a = poss_a[i, p]
                hop_cost = wa[p]
                for q in range(1, n + 1):
                    if ok_a and poss_b[j, q] and cross[p, q]:
                        for r in range(1, fdim + 1):
                            v = e_left[p, q, r]
                            if e_up[p, q, r] < v:
                                v = e_up[p, q, r]
                            if e_diag[p, q, r] < v:
                                v = e_diag[p, q, r]
                            r2 = _largest_weight_at_most(
                                budgets, budgets[r] - hop_cost)
                            if r2 > 0:
                                w = best_p[p - 1, q, r2]
                                if w < v:
                                    v = w
                                w = best_pq[p - 1, q - 1, r2]
                                if w < inf:
                                    w += wb[q]
                                    if w < v:
                                        v = w
                            w = best_q[p, q - 1, r]
                            if w < inf:
                                w += wb[q]
                                if w < v:
                                    v = w
                            vals[p, q, r] = v
                        if first and ((not anchored) or (p == 1 and q == 1)):
                            r0 = _smallest_weight_at_least(budgets, hop_cost)
                            if r0 > 0:
                                for r in range(r0, fdim + 1):
                                    if vals[p, q, r] > wb[q]:
                                        vals[p, q, r] = wb[q]
                        if final:
                            if (not anchored) or (p == m and q == n):
                                for r in range(1, fdim + 1):
                                    z = vals[p, q, r]
                                    if z < inf:
                                        hi = z if z > budgets[r] else budgets[r]
                                        if hi < best:
                                            best = hi
                    else:
                        for r in range(1, fdim + 1):
                            vals[p, q, r] = inf
                    for r in range(1, fdim + 1):
                        x = vals[p, q, r]
                        v = best_p[p - 1, q, r]
                        best_p[p, q, r] = x if x < v else v
                        v = best_q[p, q - 1, r]
                        best_q[p, q, r] = x if x < v else v
                        v = best_pq[p - 1, q, r]
                        w = best_pq[p, q - 1, r]
                        if w < v:
                            v = w
                        best_pq[p, q, r] = x if x < v else v

            if final:
                break

            e_new = pool[free_idx]
            for p in range(1, m + 1):
                hop_cost = wa[p]
                for q in range(1, n + 1):
                    for r in range(1, fdim + 1):
                        v = vals[p, q, r]
                        r2 = _largest_weight_at_most(
                            budgets, budgets[r] - hop_cost)
                        if r2 > 0:
                            w = best_p[p - 1, q, r2]
                            if w < v:
                                v = w
                            w = best_pq[p - 1, q - 1, r2]
                            if w < inf:
                                w += wb[q]
                                if w < v:
                                    v = w
                        w = best_q[p, q - 1, r]
                        if w < inf:
                            w += wb[q]
                            if w < v:
                                v = w
                        e_new[p, q, r] = v
            old_diag = diag_idx
            diag_idx = slot_of[i]
            slot_of[i] = free_idx
            free_idx = old_diag if old_diag != 0 else spare
    return best


@njit(cache=True)
def one_sided_forward(poss_a, cross, inf, x, run_prev, run_cur):
    """Fill the one-sided DP values x[i, j, p] (pre-filled with inf).

    ``run_prev``/``run_cur`` are (n+1, m+1) scratch rows holding, per woman
    index, the prefix minimum of x over dog positions for the previous and
    current man index.  Returns min over p of the final cell's values.
    """
    m = poss_a.shape[0] - 1
    n = cross.shape[1] - 1
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            run = np.int64(inf)
            for p in range(1, m + 1):
                if poss_a[i, p] and cross[p, j]:
                    v = np.int64(inf)
                    if i > 1:
                        w = np.int64(run_prev[j, p - 1])
                        if w < inf and w + 1 < v:
                            v = w + 1
                        w = np.int64(x[i - 1, j, p])
                        if w < v:
                            v = w
                    if j > 1:
                        w = np.int64(run_cur[j - 1, p - 1])
                        if w < inf and w + 1 < v:
                            v = w + 1
                        w = np.int64(x[i, j - 1, p])
                        if w < v:
                            v = w
                    if i > 1 and j > 1:
                        w = np.int64(run_prev[j - 1, p - 1])
                        if w < inf and w + 1 < v:
                            v = w + 1
                        w = np.int64(x[i - 1, j - 1, p])
                        if w < v:
                            v = w
                    if run < inf and run + 1 < v:
                        v = run + 1
                    if i == 1 and j == 1 and v > 1:
                        v = np.int64(1)
                    x[i, j, p] = v
                xv = x[i, j, p]
                if xv < run:
                    run = np.int64(xv)
                run_cur[j, p] = run
        # current row becomes the previous one
        for j in range(1, n + 1):
            for p in range(1, m + 1):
                run_prev[j, p] = run_cur[j, p]

    best = np.int64(inf)
    for p in range(1, m + 1):
        if x[m, n, p] < best:
            best = np.int64(x[m, n, p])
    return best


@njit(cache=True)
def min_k_forward(dist, delta, inf, start_len, best_from):
    """Suffix DP for the shortest simplification within distance delta.

    ``start_len[i, j]`` is the minimum length of a simplification of the
    first chain's suffix from i that begins at vertex i and stays within
    delta of the second chain's suffix from j.  ``best_from[i, j]`` is the
    minimum of start_len over start vertices >= i.  Both are (m+2, n+2)
    and pre-filled with inf.  Fill order is decreasing i, then decreasing j.
    """
    m, n = dist.shape
    for i in range(m, 0, -1):
        for j in range(n, 0, -1):
            if dist[i - 1, j - 1] <= delta:
                if i == m:
                    # a single last vertex must cover the whole suffix of B
                    if j == n or start_len[m, j + 1] == 1:
                        start_len[i, j] = 1
                elif j == n:
                    start_len[i, j] = 1
                else:
                    v = np.int64(start_len[i, j + 1])
                    w = np.int64(best_from[i + 1, j + 1])
                    if w < inf and w + 1 < v:
                        v = w + 1
                    start_len[i, j] = v
            v = best_from[i + 1, j]
            w = start_len[i, j]
            best_from[i, j] = w if w < v else v
    best = np.int64(inf)
    for i in range(1, m + 1):
        if start_len[i, 1] < best:
            best = np.int64(start_len[i, 1])
    return best
