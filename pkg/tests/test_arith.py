import random
from math import gcd as math_gcd

import numpy as np
import pytest

from gcdstats.arith import (
    CapacityError,
    build_table,
    divisors,
    gcd,
    lcm,
    load_table,
    pillai,
    save_table,
)


def naive_pillai(k, s):
    return sum(math_gcd(i, k) ** s for i in range(1, k + 1))


def test_mobius_values(table_100):
    mu = table_100.mobius
    assert mu[1] == 1
    assert mu[6] == 1
    assert mu[4] == 0
    assert mu[12] == 0
    assert mu[30] == -1
    assert set(np.unique(mu[1:]).tolist()) <= {-1, 0, 1}


def test_totient_values(table_100):
    phi = table_100.totient(1)
    assert phi[12] == 4  # {1,5,7,11}
    assert table_100.totient(2)[6] == 24
    assert table_100.tau[12] == 6


def test_totient_divisor_sum_identity(table_1000):
    phi = table_1000.totient(1)
    for k in range(1, 201):
        assert sum(int(phi[d]) for d in divisors(table_1000, k)) == k


def test_mobius_divisor_sum_identity(table_1000):
    mu = table_1000.mobius
    for k in range(1, 201):
        total = sum(int(mu[d]) for d in divisors(table_1000, k))
        assert total == (1 if k == 1 else 0)


def test_jordan_product_form(table_1000):
    # phi_s(k) = k^s prod_{p|k} (1 - p^-s), exact in integers
    for s in (1, 2, 3):
        vals = table_1000.totient(s)
        for k in range(1, 501):
            expected = k**s
            for p, _ in table_1000.factorize(k):
                expected = expected // p**s * (p**s - 1)
            assert int(vals[k]) == expected
            assert 1 <= int(vals[k]) <= k**s


def test_multiplicativity_spot_checks(table_1000):
    rng = random.Random(7)
    mu, tau = table_1000.mobius, table_1000.tau
    checked = 0
    while checked < 60:
        a = rng.randint(2, 31)
        b = rng.randint(2, 31)
        if math_gcd(a, b) != 1:
            continue
        for s in (1, 2):
            phi_s = table_1000.totient(s)
            assert int(phi_s[a * b]) == int(phi_s[a]) * int(phi_s[b])
        assert int(tau[a * b]) == int(tau[a]) * int(tau[b])
        assert int(mu[a * b]) == int(mu[a]) * int(mu[b])
        checked += 1


def test_dirichlet_convolution_identities_to_1e4():
    table = build_table(10_000, (1, 2))
    phi, mu = table.totient(1), table.mobius
    for s in (1, 2):
        phi_s = table.totient(s)
        for k in range(1, 10_001):
            ds = divisors(table, k)
            # (mu * I_s)(k) = phi_s(k)
            assert sum(int(mu[d]) * (k // d) ** s for d in ds) == int(phi_s[k])
            p_s = pillai(table, s, k)
            # (phi * I_s)(k) = P_s(k)
            assert sum(int(phi[d]) * (k // d) ** s for d in ds) == p_s
            # (phi_s * I)(k) = P_s(k)
            assert sum(int(phi_s[d]) * (k // d) for d in ds) == p_s


def test_pillai_bound_chain_to_1e4():
    table = build_table(10_000, (1,))
    for k in range(1, 10_001):
        p1 = pillai(table, 1, k)
        p2 = pillai(table, 2, k)
        tau_k = int(table.tau[k])
        # P_2(k)/k^2 <= P(k)/k <= tau(k), compared in integers
        assert p2 * k <= p1 * k**2
        assert p1 <= tau_k * k


def test_pillai_examples_and_oracle(table_100):
    assert pillai(table_100, 1, 6) == 15
    assert pillai(table_100, 2, 6) == 55
    assert pillai(table_100, 1, 1) == 1
    rng = random.Random(11)
    for _ in range(25):
        k = rng.randint(1, 100)
        s = rng.randint(1, 3)
        assert pillai(table_100, s, k) == naive_pillai(k, s)


def test_divisors(table_100):
    assert divisors(table_100, 1) == [1]
    assert divisors(table_100, 12) == [1, 2, 3, 4, 6, 12]
    assert divisors(table_100, 7) == [1, 7]
    for k in range(1, 101):
        ds = divisors(table_100, k)
        assert len(ds) == int(table_100.tau[k])
        assert ds == sorted(ds)
        assert all(k % d == 0 for d in ds)


def test_gcd_lcm():
    assert gcd(12, 18) == 6
    assert lcm(4, 6) == 12
    assert gcd(1, 97) == 1
    with pytest.raises(ValueError):
        gcd(0, 5)
    with pytest.raises(ValueError):
        lcm(3, 0)
    # no wraparound ever: results exact at any magnitude
    assert lcm(2**40, 3**30) == 2**40 * 3**30


def test_build_table_validation():
    with pytest.raises(ValueError):
        build_table(0)
    with pytest.raises(CapacityError):
        build_table(100, max_n=50)


def test_high_order_totient_falls_back_to_big_ints():
    table = build_table(50, (12,))
    vals = table.totient(12)
    assert isinstance(vals, list)  # 50^12 exceeds int64
    assert vals[2] == 2**12 - 1
    assert vals[6] == 6**12 * (2**12 - 1) * (3**12 - 1) // (2**12 * 3**12)


def test_lazy_totient_order(table_100):
    vals = table_100.totient(4)
    assert int(vals[3]) == 3**4 - 1


def test_table_save_load_roundtrip(tmp_path):
    table = build_table(500, (1, 2))
    path = tmp_path / "t.tbl"
    save_table(table, path)
    save_table(table, tmp_path / "t2.tbl")
    assert (tmp_path / "t.tbl").read_bytes() == (tmp_path / "t2.tbl").read_bytes()
    loaded = load_table(path)
    assert loaded.n_max == 500
    assert np.array_equal(loaded.mobius, table.mobius)
    assert np.array_equal(loaded.tau, table.tau)
    assert np.array_equal(loaded.totient_s[2], table.totient_s[2])
    bad = tmp_path / "bad.tbl"
    bad.write_bytes(b"NOTATBL!xxxx")
    with pytest.raises(ValueError):
        load_table(bad)
