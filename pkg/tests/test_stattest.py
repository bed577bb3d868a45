import math

import numpy as np
import pytest

from gcdstats.constants import zeta
from gcdstats.montecarlo import EmpiricalDistribution
from gcdstats.stattest import ReferenceLaw, cdf, ks_distance, poisson_pmf, tv_distance


def continuous(values):
    v = np.sort(np.asarray(values, dtype=np.float64))
    return EmpiricalDistribution("continuous", len(v), values=v)


def integer_counts(draws):
    counts = {}
    for v in draws:
        counts[int(v)] = counts.get(int(v), 0) + 1
    return EmpiricalDistribution("integer-counts", len(draws), counts=counts)


def test_law_validation():
    with pytest.raises(ValueError):
        ReferenceLaw("weird")
    with pytest.raises(ValueError):
        ReferenceLaw.frechet(-1)
    with pytest.raises(ValueError):
        ReferenceLaw.poisson(0)


def test_cdf_examples():
    assert cdf(ReferenceLaw.normal(), 0.0) == 0.5
    law = ReferenceLaw.frechet(1 / zeta(2))
    assert abs(cdf(law, 1.0) - math.exp(-1 / zeta(2))) < 1e-15
    assert abs(cdf(law, 1.0) - 0.5445) < 1e-4
    assert cdf(law, -3.0) == 0.0
    assert abs(cdf(ReferenceLaw.poisson(2.5), 1000) - 1.0) < 1e-12


def test_cdf_monotone_and_bounded():
    grid = np.linspace(-8, 8, 2001)
    for law in (ReferenceLaw.normal(), ReferenceLaw.frechet(0.6),
                ReferenceLaw.poisson(1.3)):
        vals = np.asarray(cdf(law, grid))
        assert np.all(vals >= 0) and np.all(vals <= 1)
        assert np.all(np.diff(vals) >= 0)


def test_normal_cdf_precision():
    # erfc route: at least 10 significant digits against a reference value
    assert abs(cdf(ReferenceLaw.normal(), 1.0) - 0.8413447460685429) < 1e-12
    assert abs(cdf(ReferenceLaw.normal(), -2.5) - 0.006209665325776132) < 1e-14


def test_ks_self_consistency():
    # draws from the reference itself: 99% asymptotic Kolmogorov quantile
    rng = np.random.Generator(np.random.Philox(key=[1, 0]))
    emp = continuous(rng.standard_normal(2000))
    assert ks_distance(emp, ReferenceLaw.normal()) < 1.63 / math.sqrt(2000)


def test_ks_point_mass_at_median():
    emp = continuous(np.zeros(500))
    assert abs(ks_distance(emp, ReferenceLaw.normal()) - 0.5) < 1e-12


def test_ks_scale_invariance_frechet():
    # common strictly increasing transform (exact under doubling)
    rng = np.random.Generator(np.random.Philox(key=[9, 0]))
    scale = 1 / zeta(2)
    vals = scale / -np.log(rng.random(500))
    a = ks_distance(continuous(vals), ReferenceLaw.frechet(scale))
    b = ks_distance(continuous(vals * 2.0), ReferenceLaw.frechet(scale * 2.0))
    assert a == b


def test_ks_requires_continuous():
    emp = integer_counts([0, 1, 1])
    with pytest.raises(ValueError):
        ks_distance(emp, ReferenceLaw.normal())
    with pytest.raises(ValueError):
        ks_distance(EmpiricalDistribution("continuous", 0, values=np.array([])),
                    ReferenceLaw.normal())


def test_poisson_pmf_recursion():
    pk = poisson_pmf(1.0, 20)
    assert abs(pk.sum() - 1.0) < 1e-12
    assert abs(pk[0] - math.exp(-1)) < 1e-15
    assert abs(pk[3] - math.exp(-1) / 6) < 1e-15


def test_tv_self_consistency():
    rng = np.random.Generator(np.random.Philox(key=[1, 1]))
    emp = integer_counts(rng.poisson(1.0, 5000).tolist())
    assert tv_distance(emp, ReferenceLaw.poisson(1.0)) < 0.03


def test_tv_point_mass():
    emp = integer_counts([0] * 1000)
    tv = tv_distance(emp, ReferenceLaw.poisson(1.0))
    assert abs(tv - (1 - math.exp(-1))) < 1e-9


def test_tv_validation():
    emp = continuous([1.0, 2.0])
    with pytest.raises(ValueError):
        tv_distance(emp, ReferenceLaw.poisson(1.0))
    emp = integer_counts([1])
    with pytest.raises(ValueError):
        tv_distance(emp, ReferenceLaw.normal())
