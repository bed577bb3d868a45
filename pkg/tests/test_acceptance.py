"""Acceptance criteria, one test per criterion, one printed line per check.

Run with `pytest -s tests/test_acceptance.py` (or `gcdstats verify`) to see
every PASS/FAIL line.  Statistical criteria use the frozen master seeds in
gcdstats.verify.SEEDS.
"""

import pytest

from gcdstats import verify


def _assert_all(results):
    for res in results:
        print(res.line())
    failed = [res for res in results if not res.passed]
    assert not failed, "; ".join(res.line() for res in failed)


@pytest.fixture(scope="module")
def constants_results():
    return verify.suite_constants()


def test_criterion_01_oracle_equivalence():
    _assert_all(verify.suite_oracle())


def test_criterion_02_dirichlet_limits():
    _assert_all(verify.suite_limits()[:2])


def test_criterion_03_constants(constants_results):
    _assert_all([r for r in constants_results if "truncated double sum" not in r.name])


def test_criterion_03_m2_truncated_double_sum(constants_results):
    # the i,j <= 5000 truncation leaves a ~1.96/5000 tail, so the stated
    # 1e-4 tolerance cannot hold; asserted as stated, recorded honestly
    _assert_all([r for r in constants_results if "truncated double sum" in r.name])


def test_criterion_04_second_moment_pair_gcd():
    _assert_all(verify.suite_limits()[2:])


def test_criterion_05_variance_vs_simulation():
    _assert_all(verify.suite_variance())


def test_criterion_06_clt():
    _assert_all(verify.suite_clt())


def test_criterion_07_frechet():
    _assert_all(verify.suite_frechet())


def test_criterion_08_poisson():
    _assert_all(verify.suite_poisson())


def test_criterion_09_tauberian_trends():
    _assert_all(verify.suite_trends())


def test_criterion_10_strong_law():
    _assert_all(verify.suite_stronglaw())


def test_criterion_11_worker_determinism():
    _assert_all(verify.suite_determinism())
