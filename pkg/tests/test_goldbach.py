import math

import numpy as np
import pytest

from addbasis import goldbach as gb
from addbasis import representations as rt
from addbasis import sequences as sq


def test_arith_tables_self_checks(arith_tables):
    t = arith_tables
    assert t.pi(10) == 4 and t.pi(100) == 25
    for p in (2, 3, 97, 99991):
        assert t.phi(p) == p - 1
        assert t.little_omega(p) == 1
    assert t.phi(30) == 8
    assert t.little_omega(360) == 3
    assert t.factor(360) == {2: 3, 3: 2, 5: 1}


def test_g_exact_hand_values(arith_tables):
    assert gb.g_exact(4, arith_tables) == 1    # 3+5
    assert gb.g_exact(11, arith_tables) == 3   # 3+19, 5+17, 11+11
    assert gb.g_exact(15, arith_tables) == 3   # 7+23, 11+19, 13+17
    assert gb.g_exact(2, arith_tables) == 1    # 2+2


def test_g_range_error(arith_tables):
    with pytest.raises(ValueError):
        gb.g_exact(arith_tables.limit, arith_tables)


def test_kpq_examples(arith_tables):
    assert gb.kpq(11, arith_tables) == (4, 3, 3)
    assert gb.kpq(15, arith_tables) == (3, 3, 3)
    K, _, _ = gb.kpq(4, arith_tables)
    assert K == 1  # phi(8)/2 - 1; A_4 = {3}
    assert list(gb.a_window(4, arith_tables)) == [3]


def test_window_formula_agreement_full_sweep(arith_tables):
    # |A_n| = K, |A_n ∩ P| = P, |B_n ∩ P| = Q for every n <= 10^4
    for n in range(2, 10_001):
        K, P, Q = gb.kpq(n, arith_tables)
        A = gb.a_window(n, arith_tables)
        B = gb.b_window(n, arith_tables)
        assert A.size == K == B.size
        assert int(arith_tables.is_prime[A].sum()) == P
        assert int(arith_tables.is_prime[B].sum()) == Q


def test_window_bijection(arith_tables):
    # k in A_n <=> 2n - k in B_n, for n <= 10^3
    for n in range(2, 1001):
        A = gb.a_window(n, arith_tables)
        B = gb.b_window(n, arith_tables)
        assert np.array_equal(np.sort(2 * n - A), B)


def test_r2_cross_module_identity(arith_tables):
    # 2 g(n) - [n prime] equals the convolution table's r_2(2n; primes)
    primes_seq = sq.generate("primes", 2 * 10**4)
    table = rt.build_table(primes_seq, 2, 2 * 10**4, "fast")
    for n in range(2, 10**4 + 1):
        r2 = 2 * gb.g_exact(n, arith_tables) - int(arith_tables.is_prime[n])
        assert r2 == table.r(2 * n)


def test_prop43_scan(arith_tables):
    scan = gb.prop43_scan(200_000, arith_tables)
    assert 15 in scan.satisfying          # 10 - 3 = 7 > 4 = phi(30)/2
    assert 2 not in scan.satisfying       # 1 - 1 = 0, not > 1 = ... fails
    assert scan.g_positive_verified
    assert scan.max_n == 45045
    assert 3 * 10**4 <= 2 * scan.max_n <= 3 * 10**5


def test_g_zero_exceptions_none(arith_tables):
    assert gb.g_zero_exceptions(10**5, arith_tables) == []


def test_hypergeom_stats():
    mean, var, support = gb.hypergeom_stats(4, 3, 3)
    assert mean == 2.25
    assert abs(var - 3 * 3 * 1 * 1 / (16 * 3)) < 1e-15
    assert support == (2, 3)  # P+Q-K = 2 > 0 forces positive draws
    assert gb.hypergeom_stats(10, 0, 4)[0] == 0.0
    assert gb.hypergeom_stats(10, 10, 4) == (4.0, 0.0, (4, 4))
    with pytest.raises(ValueError):
        gb.hypergeom_stats(1, 1, 1)
    with pytest.raises(ValueError):
        gb.hypergeom_stats(4, 5, 3)


def test_hypergeom_pmf_sums_to_one():
    for K, P, Q in ((6, 3, 3), (10, 4, 7), (4, 3, 3)):
        total = sum(gb.hypergeom_pmf(K, P, Q, k) for k in range(Q + 1))
        assert abs(total - 1.0) < 1e-12
    assert gb.hypergeom_pmf(4, 3, 3, 1) == 0.0  # outside support


def test_hypergeom_sampler_matches_pmf():
    rng = np.random.default_rng(2)
    draws = gb.hypergeom_sample_many(6, 3, 3, 40_000, rng)
    for k in range(4):
        want = gb.hypergeom_pmf(6, 3, 3, k)
        got = float(np.mean(draws == k))
        assert abs(got - want) < 4 * math.sqrt(want * (1 - want) / 40_000) + 1e-9


def test_hypergeom_sampler_moments_within_three_se():
    rng = np.random.default_rng(4)
    K, P, Q, n = 50, 20, 15, 40_000
    mean, var, _ = gb.hypergeom_stats(K, P, Q)
    draws = gb.hypergeom_sample_many(K, P, Q, n, rng)
    assert abs(draws.mean() - mean) <= 3 * math.sqrt(var / n)
    centered = (draws - mean) ** 2
    se_var = centered.std(ddof=1) / math.sqrt(n)
    assert abs(draws.var(ddof=1) - var) <= 3 * se_var


def test_hypergeom_sampler_degenerate_all_marked():
    rng = np.random.default_rng(0)
    assert np.all(gb.hypergeom_sample_many(7, 7, 4, 1000, rng) == 4)
    assert gb.hypergeom_sample(7, 7, 4, 1) == 4


def test_hypergeom_single_draw_support():
    draws = [gb.hypergeom_sample(4, 3, 3, seed) for seed in range(200)]
    assert set(draws) <= {2, 3}


def test_tail_bound():
    assert gb.tail_bound(0.0, 100) == 2.0
    assert abs(gb.tail_bound(0.1, 1000) - 2 * math.exp(-20)) < 1e-12
    with pytest.raises(ValueError):
        gb.tail_bound(-0.1, 10)


def test_c2_partial_products(arith_tables):
    assert gb.c2_constant(3, arith_tables) == 0.75
    assert abs(gb.c2_constant(5, arith_tables) - 45 / 64) < 1e-15
    c2_small = gb.c2_constant(100, arith_tables)
    c2_big = gb.c2_constant(10**5, arith_tables)
    assert c2_big < c2_small  # monotone decreasing in the limit


def test_predictions_power_of_two(arith_tables):
    c2 = 0.66016
    n = 2**9  # N = 2^10 has no odd prime divisors
    predA, predB = gb.predictions(n, arith_tables, c2)
    N = 2**10
    assert abs(predA - 2 * c2 * N / math.log(N) ** 2) < 1e-12
    # N/phi(N) = 2 for powers of two
    assert abs(predB - 2 * N / math.log(N) ** 2) < 1e-12


def test_pred_ratio_band(arith_tables):
    # predB/predA = prod(1 - 1/(p-1)^2) / c2 lies in [1, 1/c2]
    c2 = gb.c2_constant(10**6, arith_tables)
    for n in (6, 15, 105, 9999, 54321):
        predA, predB = gb.predictions(n, arith_tables, c2)
        ratio = predB / predA
        assert 1.0 - 1e-12 <= ratio <= 1.0 / c2 + 1e-12


def test_goldbach_record_fields(arith_tables):
    rec = gb.goldbach_record(11, arith_tables, 0.66016)
    assert (rec.g, rec.K, rec.P, rec.Q) == (3, 4, 3, 3)
    assert rec.r2 == 2 * 3 - 1  # 11 is prime
    assert rec.mean_gt == 2.25


def test_records_csv(tmp_path, arith_tables):
    recs = [gb.goldbach_record(n, arith_tables, 0.66016) for n in range(4, 10)]
    path = tmp_path / "records.csv"
    gb.save_records_csv(recs, path, 0.66016)
    lines = path.read_text().splitlines()
    assert lines[1] == "n,g,K,P,Q,mean_gt,var_gt,r2,predA,predB"
    assert lines[2].startswith("4,1,1,1,1,")
