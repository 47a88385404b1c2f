import numpy as np
import pytest

from chainpair import (
    ANCHORED,
    FREE_DOGS,
    Chain,
    Configuration,
    CpsParams,
    MemoryBudgetError,
    NoSolutionError,
    RCapInconclusiveError,
    brute_cps3f,
    cps3f_decision,
    cps3f_min_dp,
    cps3f_min_graph,
    discrete_frechet,
    solve_with_cap_doubling,
    verify_simplification,
)
from chainpair.solver import _dp_final_tables

from conftest import observed_distances, random_chain


def sampled_params(rng, a, b, mode):
    pool = observed_distances(a, b)
    return CpsParams(
        float(rng.choice(pool)), float(rng.choice(pool)), float(rng.choice(pool)),
        endpoint_mode=mode,
    )


def solve_or_none(fn):
    try:
        return fn()
    except NoSolutionError:
        return None


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            CpsParams(-1.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            CpsParams(0.0, 0.0, 0.0, endpoint_mode="loose")
        with pytest.raises(ValueError):
            CpsParams(0.0, 0.0, 0.0, r_cap=0)

    def test_r_cap_larger_than_chain_rejected(self):
        a = Chain([(0, 0), (1, 0)])
        with pytest.raises(ValueError):
            cps3f_min_dp(a, a, CpsParams(1.0, 1.0, 1.0, r_cap=3))

    def test_configuration_possibility(self):
        a = Chain([(0.0, 0.0), (10.0, 0.0)])
        b = Chain([(0.0, 1.0), (10.0, 1.0)])
        params = CpsParams(0.0, 0.0, 1.0)
        assert Configuration(1, 1, 1, 1).is_possible(a, b, params)
        assert not Configuration(1, 2, 1, 1).is_possible(a, b, params)
        assert not Configuration(1, 1, 1, 2).is_possible(a, b, params)


class TestTrivialInstances:
    def test_two_points_zero_tolerance_anchored(self):
        a = Chain([(0.0, 0.0), (10.0, 0.0)])
        params = CpsParams(0.0, 0.0, 0.0, endpoint_mode=ANCHORED)
        assert cps3f_min_dp(a, a, params).k_star == 2
        assert cps3f_min_graph(a, a, params).k_star == 2

    def test_everything_within_reach_free_dogs(self, rng):
        a = random_chain(rng, 5)
        b = random_chain(rng, 4)
        params = CpsParams(10.0, 10.0, 10.0, endpoint_mode=FREE_DOGS)
        sol = cps3f_min_dp(a, b, params, reconstruct=True)
        assert sol.k_star == 1
        assert len(sol.a_indices) == 1 and len(sol.b_indices) == 1

    def test_identity_forced_anchored(self, rng):
        a = random_chain(rng, 4)
        b = random_chain(rng, 6)
        d3 = discrete_frechet(a, b).value
        params = CpsParams(0.0, 0.0, d3, endpoint_mode=ANCHORED)
        assert cps3f_min_dp(a, b, params).k_star == 6
        # anything tighter on the cross leash is infeasible
        if d3 > 0:
            with pytest.raises(NoSolutionError):
                cps3f_min_dp(a, b, CpsParams(0.0, 0.0, d3 * 0.999, endpoint_mode=ANCHORED))

    def test_no_solution_propagates(self):
        a = Chain([(0.0, 0.0)])
        b = Chain([(5.0, 0.0)])
        params = CpsParams(0.0, 0.0, 1.0)
        for solver in (cps3f_min_dp, cps3f_min_graph):
            with pytest.raises(NoSolutionError):
                solver(a, b, params)


class TestSolverEquivalence:
    def test_dp_equals_graph_and_brute(self, rng):
        for _ in range(40):
            a = random_chain(rng, int(rng.integers(2, 8)))
            b = random_chain(rng, int(rng.integers(2, 8)))
            for mode in (FREE_DOGS, ANCHORED):
                params = sampled_params(rng, a, b, mode)
                got = [
                    solve_or_none(lambda: cps3f_min_dp(a, b, params).k_star),
                    solve_or_none(lambda: cps3f_min_graph(a, b, params).k_star),
                    solve_or_none(lambda: brute_cps3f(a, b, params)),
                ]
                assert got[0] == got[1] == got[2], (params, got)

    def test_dp_equals_graph_medium(self, rng):
        for _ in range(6):
            a = random_chain(rng, int(rng.integers(9, 13)))
            b = random_chain(rng, int(rng.integers(9, 13)))
            for mode in (FREE_DOGS, ANCHORED):
                params = sampled_params(rng, a, b, mode)
                got_dp = solve_or_none(lambda: cps3f_min_dp(a, b, params).k_star)
                got_graph = solve_or_none(lambda: cps3f_min_graph(a, b, params).k_star)
                assert got_dp == got_graph


class TestWitnesses:
    def test_witness_contract(self, rng):
        seen = 0
        while seen < 25:
            a = random_chain(rng, int(rng.integers(2, 8)))
            b = random_chain(rng, int(rng.integers(2, 8)))
            for mode in (FREE_DOGS, ANCHORED):
                params = sampled_params(rng, a, b, mode)
                try:
                    sol = cps3f_min_dp(a, b, params, reconstruct=True)
                except NoSolutionError:
                    continue
                seen += 1
                assert max(len(sol.a_indices), len(sol.b_indices)) == sol.k_star
                assert verify_simplification(a, sol.a_indices, params.delta1)
                assert verify_simplification(b, sol.b_indices, params.delta2)
                sub_a = a.subchain(sol.a_indices)
                sub_b = b.subchain(sol.b_indices)
                assert discrete_frechet(sub_a, sub_b).value <= params.delta3
                if mode == ANCHORED:
                    assert sol.a_indices[0] == 1 and sol.a_indices[-1] == len(a)
                    assert sol.b_indices[0] == 1 and sol.b_indices[-1] == len(b)

    def test_witness_deterministic(self, rng):
        a = random_chain(rng, 6)
        b = random_chain(rng, 6)
        params = sampled_params(rng, a, b, FREE_DOGS)
        try:
            first = cps3f_min_dp(a, b, params, reconstruct=True)
        except NoSolutionError:
            pytest.skip("sampled an infeasible instance")
        again = cps3f_min_dp(a, b, params, reconstruct=True)
        assert first.a_indices == again.a_indices
        assert first.b_indices == again.b_indices

    def test_reconstruct_budget_guard(self, rng):
        a = random_chain(rng, 6)
        with pytest.raises(MemoryBudgetError):
            cps3f_min_dp(a, a, CpsParams(1.0, 1.0, 1.0), reconstruct=True, cell_budget=10)


class TestDecision:
    def test_rejects_nonpositive_k(self, rng):
        a = random_chain(rng, 3)
        with pytest.raises(ValueError):
            cps3f_decision(a, a, 0, CpsParams(1.0, 1.0, 1.0))

    def test_identity_budget(self, rng):
        a = random_chain(rng, 4)
        b = random_chain(rng, 6)
        d3 = discrete_frechet(a, b).value
        assert cps3f_decision(a, b, 6, CpsParams(0.0, 0.0, d3))

    def test_threshold_matches_minimum(self, rng):
        for _ in range(10):
            a = random_chain(rng, int(rng.integers(2, 7)))
            b = random_chain(rng, int(rng.integers(2, 7)))
            params = sampled_params(rng, a, b, FREE_DOGS)
            k_star = solve_or_none(lambda: cps3f_min_dp(a, b, params).k_star)
            if k_star is None:
                assert not cps3f_decision(a, b, max(len(a), len(b)), params)
                continue
            assert cps3f_decision(a, b, k_star, params)
            if k_star > 1:
                assert not cps3f_decision(a, b, k_star - 1, params)


class TestRCap:
    def test_cap_below_optimum_is_inconclusive(self, rng):
        a = random_chain(rng, 6)
        b = random_chain(rng, 6)
        params = CpsParams(0.0, 0.0, discrete_frechet(a, b).value, endpoint_mode=ANCHORED)
        assert cps3f_min_dp(a, b, params).k_star == 6
        with pytest.raises(RCapInconclusiveError):
            cps3f_min_dp(a, b, CpsParams(0.0, 0.0, params.delta3,
                                         endpoint_mode=ANCHORED, r_cap=3))

    def test_cap_above_optimum_is_exact(self, rng):
        for _ in range(10):
            a = random_chain(rng, 6)
            b = random_chain(rng, 6)
            params = sampled_params(rng, a, b, FREE_DOGS)
            k_star = solve_or_none(lambda: cps3f_min_dp(a, b, params).k_star)
            if k_star is None or k_star + 1 > 6:
                continue
            capped = cps3f_min_dp(a, b, CpsParams(
                params.delta1, params.delta2, params.delta3, r_cap=k_star + 1))
            assert capped.k_star == k_star

    def test_doubling_strategy_matches_uncapped(self, rng):
        for _ in range(10):
            a = random_chain(rng, int(rng.integers(2, 8)))
            b = random_chain(rng, int(rng.integers(2, 8)))
            params = sampled_params(rng, a, b, FREE_DOGS)
            want = solve_or_none(lambda: cps3f_min_dp(a, b, params).k_star)
            if want is None:
                with pytest.raises(NoSolutionError):
                    solve_with_cap_doubling(a, b, params)
            else:
                sol = solve_with_cap_doubling(a, b, params)
                assert sol.k_star == want
                assert sol.r_cap_used is not None


class TestMonotonicity:
    def test_k_star_non_increasing_in_each_delta(self, rng):
        for _ in range(12):
            a = random_chain(rng, int(rng.integers(3, 7)))
            b = random_chain(rng, int(rng.integers(3, 7)))
            pool = np.sort(observed_distances(a, b))
            mid = float(pool[len(pool) // 2])
            grid = [float(pool[i]) for i in
                    np.linspace(0, len(pool) - 1, 5).astype(int)]

            def k_of(params):
                try:
                    return cps3f_min_dp(a, b, params).k_star
                except NoSolutionError:
                    return float("inf")

            for field in ("delta1", "delta2", "delta3"):
                vals = []
                for g in grid:
                    deltas = {"delta1": mid, "delta2": mid, "delta3": mid,
                              field: g}
                    vals.append(k_of(CpsParams(**deltas)))
                assert all(x >= y for x, y in zip(vals, vals[1:])), (field, vals)


class TestTableCoherence:
    def test_running_minima_match_direct_scan(self, rng):
        for _ in range(8):
            a = random_chain(rng, int(rng.integers(2, 7)))
            b = random_chain(rng, int(rng.integers(2, 7)))
            params = sampled_params(rng, a, b, FREE_DOGS)
            vals, best_p, best_q, best_pq, inf = _dp_final_tables(a, b, params)
            v = vals[1:, 1:, 1:].astype(np.int64)
            # prefix minima recomputed from the value table directly
            want_p = np.minimum.accumulate(v, axis=0)
            want_q = np.minimum.accumulate(v, axis=1)
            want_pq = np.minimum.accumulate(want_p, axis=1)
            assert np.array_equal(best_p[1:, 1:, 1:], want_p)
            assert np.array_equal(best_q[1:, 1:, 1:], want_q)
            assert np.array_equal(best_pq[1:, 1:, 1:], want_pq)


class TestStats:
    def test_possible_configuration_count(self, rng):
        a = random_chain(rng, 4)
        b = random_chain(rng, 5)
        params = sampled_params(rng, a, b, FREE_DOGS)
        sol_or_err_count = None
        try:
            sol = cps3f_min_dp(a, b, params)
            sol_or_err_count = sol.stats.possible_configs
        except NoSolutionError:
            pytest.skip("sampled an infeasible instance")
        count = 0
        for i in range(1, 5):
            for p in range(1, 5):
                for j in range(1, 6):
                    for q in range(1, 6):
                        if Configuration(i, p, j, q).is_possible(a, b, params):
                            count += 1
        assert sol_or_err_count == count
