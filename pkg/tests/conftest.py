"""Shared helpers: random instances and enumeration oracles.

The coupling enumerator here is the independent reference for the Frechet
operations: it walks every monotone coupling explicitly and never touches
the library's tables.
"""

import math

import numpy as np
import pytest

from chainpair import Chain, euclidean_distance


def random_chain(rng, n, dim=2, scale=1.0):
    return Chain(rng.random((n, dim)) * scale)


def observed_distances(*chains):
    """Pool of pairwise vertex distances across the given chains."""
    coords = [c.coords for c in chains]
    out = []
    for a in coords:
        for b in coords:
            diff = a[:, None, :] - b[None, :, :]
            out.append(np.sqrt((diff * diff).sum(axis=2)).ravel())
    return np.concatenate(out)


def couplings_min_max(a: Chain, b: Chain) -> float:
    """Minimum over all monotone couplings of the maximum pair distance.

    Plain depth-first enumeration from (0, 0) to (m-1, n-1); exponential,
    so callers keep m, n tiny.
    """
    da = a.coords
    db = b.coords
    m, n = len(da), len(db)
    best = math.inf

    # the shared scalar distance primitive; the *search* is independent
    def dist(i, j):
        return euclidean_distance(da[i], db[j])

    def walk(i, j, running):
        nonlocal best
        d = dist(i, j)
        if d > running:
            running = d
        if i == m - 1 and j == n - 1:
            if running < best:
                best = running
            return
        if i + 1 < m and j + 1 < n:
            walk(i + 1, j + 1, running)
        if i + 1 < m:
            walk(i + 1, j, running)
        if j + 1 < n:
            walk(i, j + 1, running)

    walk(0, 0, 0.0)
    return best


def coupling_exists_within(a: Chain, b: Chain, delta: float) -> bool:
    """Whether some monotone coupling keeps every pair within delta."""
    da = a.coords
    db = b.coords
    m, n = len(da), len(db)

    def dist(i, j):
        return euclidean_distance(da[i], db[j])

    def walk(i, j):
        if dist(i, j) > delta:
            return False
        if i == m - 1 and j == n - 1:
            return True
        if i + 1 < m and j + 1 < n and walk(i + 1, j + 1):
            return True
        if i + 1 < m and walk(i + 1, j):
            return True
        return j + 1 < n and walk(i, j + 1)

    return walk(0, 0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
