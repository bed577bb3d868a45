import math
import random
from math import comb

import numpy as np
import pytest

from gcdstats import brute, exact, montecarlo
from gcdstats.arith import build_table
from gcdstats.montecarlo import (
    SampleConfig,
    _multiplicities,
    draw_sample,
    poisson_count,
    run_replicates,
    stat_C,
    stat_M,
    stat_Z,
    strong_law_trajectory,
)


@pytest.fixture(scope="module")
def table_50():
    return build_table(50, (1, 2))


def test_config_validation():
    with pytest.raises(ValueError):
        SampleConfig(m=5, n=0)
    with pytest.raises(ValueError):
        SampleConfig(m=1, n=10)  # m < r
    with pytest.raises(ValueError):
        SampleConfig(m=5, n=10, r=1)
    with pytest.raises(ValueError):
        SampleConfig(m=5, n=10, q=0)
    with pytest.raises(ValueError):
        SampleConfig(m=5, n=10, replicates=0)


def test_regime_warnings():
    cfg = SampleConfig(m=100, n=1000)
    assert any("normality regime" in w for w in cfg.regime_warnings("Z"))
    cfg = SampleConfig(m=10_000, n=99)  # n^2 < m: inside the proven regime
    assert cfg.regime_warnings("Z") == []
    cfg = SampleConfig(m=64, n=32768)
    assert cfg.regime_warnings("M") == []
    cfg = SampleConfig(m=64, n=100)
    assert any("Frechet window" in w for w in cfg.regime_warnings("M"))
    assert SampleConfig(m=3, n=1).regime_warnings("C")


def test_draw_sample_determinism_and_range():
    cfg = SampleConfig(m=1000, n=37, replicates=3, master_seed=99)
    a = draw_sample(cfg, 0)
    b = draw_sample(cfg, 0)
    assert np.array_equal(a, b)
    c = draw_sample(cfg, 1)
    assert not np.array_equal(a, c)
    assert a.min() >= 1 and a.max() <= 37


def test_draw_sample_n1_all_ones():
    cfg = SampleConfig(m=25, n=1, replicates=1, master_seed=5)
    assert np.all(draw_sample(cfg, 0) == 1)


def test_draw_sample_uniform_mean():
    n, m = 1_000_000, 100_000
    cfg = SampleConfig(m=m, n=n, replicates=1, master_seed=101)
    x = draw_sample(cfg, 0)
    se = n / math.sqrt(12 * m)
    assert abs(float(x.mean()) - (n + 1) / 2) < 5 * se


def test_stat_examples(table_50):
    assert stat_C([1, 2], 2, table_50) == 1
    assert stat_Z([1, 2], 2, 1, table_50) == 1
    assert stat_C([2, 4, 6], 2, table_50) == 0
    assert stat_Z([2, 4, 6], 2, 1, table_50) == 6
    assert stat_Z([2, 4, 6], 3, 1, table_50) == 2
    assert stat_M([6, 10, 15], table_50) == 5
    assert stat_M([7, 7, 3], table_50) >= 7  # repeated value
    assert poisson_count([2, 4, 6], 1, table_50) == 3
    assert poisson_count([2, 4, 6], 2, table_50) == 0


def test_fast_statistics_match_naive_loops(table_50):
    rng = random.Random(1234)
    for trial in range(40):
        m = rng.randint(4, 60)
        n = rng.randint(2, 50)
        cfg = SampleConfig(m=m, n=n, replicates=1, master_seed=trial)
        x = draw_sample(cfg, 0)
        assert stat_C(x, 2, table_50, n) == brute.naive_stat_C(x, 2)
        assert stat_Z(x, 2, 2, table_50, n) == brute.naive_stat_Z(x, 2, 2)
        assert stat_M(x, table_50, n) == brute.naive_stat_M(x)
        thr = rng.choice([0.5, 1, 2, 5, n])
        assert poisson_count(x, thr, table_50, n) == brute.naive_poisson_count(x, thr)
        if m <= 15:
            assert stat_C(x, 3, table_50, n) == brute.naive_stat_C(x, 3)
            assert stat_Z(x, 3, 1, table_50, n) == brute.naive_stat_Z(x, 3, 1)


def test_dense_and_sparse_paths_agree(table_50):
    rng = random.Random(77)
    for trial in range(10):
        n = rng.randint(5, 50)
        m = rng.randint(4, 30)
        cfg = SampleConfig(m=m, n=n, replicates=1, master_seed=1000 + trial)
        x = draw_sample(cfg, 0)
        dense = _multiplicities(x, table_50, n, mode="dense")
        sparse = _multiplicities(x, table_50, n, mode="sparse")
        assert isinstance(sparse, dict)
        for d in range(1, n + 1):
            assert int(dense[d]) == sparse.get(d, 0)


def test_sparse_path_beyond_table_range():
    # elements exceed the table bound: trial-division divisor fallback
    table = build_table(10, (1,))
    x = [1009 * 2, 1009 * 3, 14]  # 1009 is prime, far above n_max=10
    assert stat_M(x, table) == 1009
    assert stat_C(x, 2, table) == brute.naive_stat_C(x, 2)
    assert stat_Z(x, 2, 1, table) == brute.naive_stat_Z(x, 2, 1)
    assert poisson_count(x, 100, table) == brute.naive_poisson_count(x, 100)


def test_run_replicates_deterministic(table_50):
    cfg = SampleConfig(m=8, n=30, replicates=64, master_seed=2024)
    a = run_replicates(cfg, "C", "none", table_50)
    b = run_replicates(cfg, "C", "none", table_50)
    assert np.array_equal(a.values, b.values)
    assert a.size == 64 and a.kind == "continuous"
    assert a.meta["config"]["master_seed"] == 2024


def test_run_replicates_workers_identical(table_50):
    cfg = SampleConfig(m=10, n=40, replicates=48, master_seed=31)
    rows1 = montecarlo.replicate_rows(cfg, "Z", "none", table_50, workers=1)
    rows3 = montecarlo.replicate_rows(cfg, "Z", "none", table_50, workers=3)
    assert rows1 == rows3


def test_run_replicates_matches_exact_moments(table_50):
    # reduced version of the simulation-vs-formula consistency check
    n, m, reps = 30, 12, 2000
    cfg = SampleConfig(m=m, n=n, replicates=reps, master_seed=424242)
    table = build_table(n, (1, 2))
    for statistic in ("C", "Z"):
        emp = run_replicates(cfg, statistic, "none", table)
        mean, sd = montecarlo.exact_moments(cfg, statistic, table)
        assert abs(float(np.mean(emp.values)) - mean) < 4 * sd / math.sqrt(reps)


def test_raw_variance_approaches_exact(table_50):
    # empirical variance of raw C at (n=2, m=3) approaches 15/16
    n, m, reps = 2, 3, 20_000
    cfg = SampleConfig(m=m, n=n, replicates=reps, master_seed=909)
    table = build_table(n, (1, 2))
    emp = run_replicates(cfg, "C", "none", table)
    assert abs(float(np.var(emp.values)) - 15 / 16) < 0.03


def test_normalized_replicates(table_50):
    cfg = SampleConfig(m=6, n=20, replicates=32, master_seed=7)
    table = build_table(20, (1, 2))
    emp = run_replicates(cfg, "C", "exact-moments", table)
    raw = run_replicates(cfg, "C", "none", table)
    mean, sd = montecarlo.exact_moments(cfg, "C", table)
    assert np.allclose(np.sort((raw.values - mean) / sd), emp.values)
    emp = run_replicates(cfg, "M", "frechet-scale", table)
    assert np.all(emp.values > 0)
    assert emp.meta["scale"] == comb(6, 2)


def test_poisson_replicates_integer_counts(table_50):
    cfg = SampleConfig(m=8, n=50, replicates=100, master_seed=13)
    emp = run_replicates(cfg, "N", "none", table_50, t=0.5)
    assert emp.kind == "integer-counts"
    assert sum(emp.counts.values()) == 100
    assert all(k >= 0 for k in emp.counts)


def test_strong_law_trajectory(table_50):
    grid = (2, 10, 100)
    ratios = strong_law_trajectory(30, 2, grid, seed=5, table=build_table(30, (1, 2)))
    assert len(ratios) == 3
    again = strong_law_trajectory(30, 2, grid, seed=5, table=build_table(30, (1, 2)))
    assert np.array_equal(ratios, again)
    # m = r: the scaled single indicator takes one of two values
    table = build_table(30, (1, 2))
    first = strong_law_trajectory(30, 2, (2,), seed=9, table=table)[0]
    mu = exact.mean_mu(table, 30, 1).float_value
    assert min(abs(first - 0), abs(first - 1 / mu)) < 1e-12


def test_strong_law_matches_direct_statistic():
    n, r, top = 30, 2, 200
    table = build_table(n, (1, 2))
    ratios = strong_law_trajectory(n, r, (top,), seed=77, table=table)
    cfg = SampleConfig(m=top, n=n, replicates=1, master_seed=77)
    x = draw_sample(cfg, 0)
    direct = stat_C(x, r, table, n)
    expected = comb(top, r) * exact.mean_mu(table, n, r - 1).float_value
    assert abs(ratios[0] - direct / expected) < 1e-12
