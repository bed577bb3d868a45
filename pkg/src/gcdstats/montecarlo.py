"""Reproducible sampling and fast evaluation of the gcd sample statistics.

Statistics over a sample x_1..x_m from {1..n}:

    C = number of r-subsets with gcd exactly 1
    Z = sum of gcd^q over all r-subsets
    M = max gcd over pairs
    N(t) = number of pairs with gcd > t * C(m,2)

All are computed without looping over subsets, via the divisor
multiplicities cnt(d) = #{i : d | x_i}:

    C = sum_d mu(d)    * C(cnt(d), r)
    Z = sum_d phi_q(d) * C(cnt(d), r)
    M = max { d : cnt(d) >= 2 }

since sum_{d | g} mu(d) = [g = 1] and sum_{d | g} phi_q(d) = g^q.  The
naive subset loops live in `brute` and gate these in the tests.

Replicate i draws from a counter-based Philox stream keyed by
(master_seed, i), so results are independent of worker count and
scheduling; uniform integers use rejection-based bounded draws.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from multiprocessing import get_context

import numpy as np

from . import exact
from .arith import ArithTable, build_table

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class SampleConfig:
    """Full determinism contract for one simulation.

    Replicate i uses the stream keyed by (master_seed, i); reruns with the
    same config are bit-identical regardless of worker count.
    """

    m: int
    n: int
    r: int = 2
    q: int = 1
    replicates: int = 1
    master_seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.r < 2:
            raise ValueError(f"r must be >= 2, got {self.r}")
        if self.m < self.r:
            raise ValueError(f"need m >= r, got m={self.m}, r={self.r}")
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")

    def regime_warnings(self, statistic: str) -> list[str]:
        """Labels for configs outside the proven limit-law regimes.

        Simulations outside the regimes are allowed; the labels make the
        run output say so.
        """
        warns = []
        if self.n < 2:
            warns.append("n = 1 is a degenerate sample space")
        if statistic == "Z" and self.n ** (2 * self.q) >= self.m:
            warns.append(
                f"outside the proven normality regime for Z: needs n^q < sqrt(m), "
                f"here n^q = {self.n**self.q} vs sqrt(m) ~ {math.sqrt(self.m):.1f}"
            )
        if statistic == "M":
            # point proxy for the sequence window m^beta <= n <= exp(m^gamma),
            # beta > 2, gamma < 1/3: power rules above m^2 qualify eventually,
            # so only flag n at or below m^2 or wildly superexponential n
            if self.n <= self.m**2 or math.log(self.n) >= self.m:
                warns.append(
                    "outside the proven Frechet window: needs m^beta <= n <= "
                    "exp(m^gamma) with beta > 2, gamma < 1/3"
                )
        return warns


def draw_sample(config: SampleConfig, replicate_index: int) -> np.ndarray:
    """The m uniform values of replicate `replicate_index`, in [1, n]."""
    if replicate_index < 0:
        raise ValueError("replicate_index must be >= 0")
    rng = np.random.Generator(
        np.random.Philox(key=[config.master_seed & (2**64 - 1), replicate_index])
    )
    return rng.integers(1, config.n + 1, size=config.m, dtype=np.int64)


# --- divisor multiplicities -------------------------------------------------

@lru_cache(maxsize=1 << 15)
def _divisors_trial(v: int) -> tuple:
    """Divisors of v by trial division; only used beyond the table range."""
    ds = [1]
    rest = v
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            ds = [d * p**i for d in ds for i in range(e + 1)]
        p += 1 if p == 2 else 2
    if rest > 1:
        ds = [d * rest**i for d in ds for i in range(2)]
    return tuple(ds)


def _element_divisors(v: int, table: ArithTable):
    if v <= table.n_max:
        return table.divisor_tuple(v)
    return _divisors_trial(v)


def _multiplicities(sample, table: ArithTable, n: int, mode: str = "auto"):
    """cnt(d) = #{i : d | x_i}; dense int64 array or sparse dict.

    Dense (multiples-of-d sums over a frequency table) costs ~n slice
    sums; the sparse path costs sum_i tau(x_i) ~ m ln n dictionary
    updates, so it wins whenever the sample is short relative to n.
    Both paths produce identical statistics; `mode` pins one for testing.
    """
    x = np.asarray(sample)
    m = x.size
    dense = n <= 2 * m if mode == "auto" else mode == "dense"
    if dense and n <= table.n_max:
        freq = np.bincount(x, minlength=n + 1)
        cnt = np.zeros(n + 1, dtype=np.int64)
        for d in range(1, n + 1):
            cnt[d] = int(freq[d::d].sum())
        return cnt
    counts: dict[int, int] = {}
    for v in x.tolist():
        for d in _element_divisors(int(v), table):
            counts[d] = counts.get(d, 0) + 1
    return counts


def _weight_of(d: int, table: ArithTable, kind: str, q: int) -> int:
    if d <= table.n_max:
        if kind == "mobius":
            return int(table.mobius[d])
        return int(table.totient(q)[d])
    # factor by trial division; weights are multiplicative over prime powers
    fact = []
    rest = d
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            fact.append((p, e))
        p += 1 if p == 2 else 2
    if rest > 1:
        fact.append((rest, 1))
    if kind == "mobius":
        if any(e >= 2 for _, e in fact):
            return 0
        return -1 if len(fact) % 2 else 1
    w = 1
    for p, e in fact:
        w *= p ** (q * (e - 1)) * (p**q - 1)
    return w


def _subset_weighted_count(cnt, table: ArithTable, r: int, kind: str, q: int) -> int:
    """sum_d weight(d) * C(cnt(d), r), exactly."""
    if isinstance(cnt, dict):
        total = 0
        for d, c in cnt.items():
            if c >= r:
                w = _weight_of(d, table, kind, q)
                if w:
                    total += w * comb(c, r)
        return total
    n = len(cnt) - 1
    g = table.mobius if kind == "mobius" else table.totient(q)
    if r == 2 and isinstance(g, np.ndarray):
        c2 = cnt * (cnt - 1) // 2
        peak = int(np.abs(g[: n + 1]).max()) * int(c2.max(initial=0))
        if (n + 1) * peak < _INT64_SAFE:
            return int(np.dot(g[: n + 1].astype(np.int64), c2))
    total = 0
    for d in range(1, n + 1):
        c = int(cnt[d])
        if c >= r:
            w = int(g[d])
            if w:
                total += w * comb(c, r)
    return total


def stat_C(sample, r: int, table: ArithTable, n: int | None = None) -> int:
    """Number of r-subsets of the sample whose gcd is exactly 1."""
    n = int(n if n is not None else max(sample))
    cnt = _multiplicities(sample, table, n)
    return _subset_weighted_count(cnt, table, r, "mobius", 1)


def stat_Z(sample, r: int, q: int, table: ArithTable, n: int | None = None) -> int:
    """Sum of gcd^q over all r-subsets of the sample."""
    n = int(n if n is not None else max(sample))
    cnt = _multiplicities(sample, table, n)
    return _subset_weighted_count(cnt, table, r, "totient", q)


def stat_M(sample, table: ArithTable, n: int | None = None) -> int:
    """Maximum gcd over pairs: the largest d dividing two sample members."""
    if len(sample) < 2:
        raise ValueError("stat_M needs at least two sample values")
    n = int(n if n is not None else max(sample))
    cnt = _multiplicities(sample, table, n)
    if isinstance(cnt, dict):
        return max(d for d, c in cnt.items() if c >= 2)
    hits = np.nonzero(cnt >= 2)[0]
    return int(hits[-1])


def poisson_count(sample, threshold: float, table: ArithTable, n: int | None = None) -> int:
    """Number of unordered pairs with gcd strictly above `threshold`.

    Uses exact-gcd pair counts: pairs with both members divisible by d
    number C(cnt(d), 2); subtracting the counts of exact multiples,
    descending over d > threshold, isolates pairs with gcd exactly d.
    """
    n = int(n if n is not None else max(sample))
    cnt = _multiplicities(sample, table, n)
    if isinstance(cnt, dict):
        cand = {d: c for d, c in cnt.items() if d > threshold and c >= 2}
    else:
        start = max(int(math.floor(threshold)) + 1, 1)
        cand = {
            int(d): int(cnt[d]) for d in np.nonzero(cnt[start:] >= 2)[0] + start
        } if start <= n else {}
    if not cand:
        return 0
    exact_pairs: dict[int, int] = {}
    total = 0
    top = max(cand)
    for d in sorted(cand, reverse=True):
        e = comb(cand[d], 2)
        mult = 2 * d
        while mult <= top:
            e -= exact_pairs.get(mult, 0)
            mult += d
        exact_pairs[d] = e
        total += e
    return total


# --- replicate running -------------------------------------------------------

@dataclass
class EmpiricalDistribution:
    """Replicate values ready for goodness-of-fit distances.

    kind "continuous": `values` holds the sorted replicate values.
    kind "integer-counts": `counts` maps value -> count.
    `meta` echoes the config and any normalization constants used.
    """

    kind: str
    size: int
    values: np.ndarray = None
    counts: dict = None
    meta: dict = field(default_factory=dict)


_STATISTICS = ("C", "Z", "M", "N")

# worker context inherited over fork; set immediately before pool creation
_SIM_CTX = {}


def _replicate_raw(config: SampleConfig, statistic: str, idx: int,
                   table: ArithTable, threshold: float):
    x = draw_sample(config, idx)
    if statistic == "C":
        return stat_C(x, config.r, table, config.n)
    if statistic == "Z":
        return stat_Z(x, config.r, config.q, table, config.n)
    if statistic == "M":
        return stat_M(x, table, config.n)
    if statistic == "N":
        return poisson_count(x, threshold, table, config.n)
    raise ValueError(f"statistic must be one of {_STATISTICS}, got {statistic!r}")


def _sim_chunk(bounds):
    start, stop = bounds
    cfg = _SIM_CTX["config"]
    return [
        _replicate_raw(cfg, _SIM_CTX["statistic"], i, _SIM_CTX["table"],
                       _SIM_CTX["threshold"])
        for i in range(start, stop)
    ]


def _raw_replicates(config, statistic, table, threshold, workers):
    total = config.replicates
    if workers <= 1:
        return [
            _replicate_raw(config, statistic, i, table, threshold)
            for i in range(total)
        ]
    _SIM_CTX.update(config=config, statistic=statistic, table=table,
                    threshold=threshold)
    chunk = max(1, math.ceil(total / (workers * 4)))
    bounds = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
    with ProcessPoolExecutor(max_workers=workers, mp_context=get_context("fork")) as ex:
        parts = list(ex.map(_sim_chunk, bounds))
    return [v for part in parts for v in part]


def exact_moments(config: SampleConfig, statistic: str, table: ArithTable):
    """(mean, sd) of the statistic from the exact closed formulas."""
    m, n, r, q = config.m, config.n, config.r, config.q
    if statistic == "C":
        mean = comb(m, r) * exact.mean_mu(table, n, r - 1).float_value
        var = exact.var_C(table, n, m, r).float_value
    elif statistic == "Z":
        mean = comb(m, r) * exact.gcd_moment(table, n, r, q).float_value
        var = exact.var_Z(table, n, m, r, q).float_value
    else:
        raise ValueError(f"exact moments only exist for C and Z, got {statistic!r}")
    return mean, math.sqrt(var)


def run_replicates(
    config: SampleConfig,
    statistic: str,
    normalization: str = "none",
    table: ArithTable | None = None,
    t: float = 1.0,
    workers: int = 1,
) -> EmpiricalDistribution:
    """Compute R replicate values of one statistic, optionally normalized.

    normalization "exact-moments" centers and scales by the exact mean and
    standard deviation; "frechet-scale" divides the pair max by C(m,2);
    "none" returns raw values (integer counts for N).
    """
    if statistic not in _STATISTICS:
        raise ValueError(f"statistic must be one of {_STATISTICS}, got {statistic!r}")
    if table is None:
        table = build_table(config.n)
    threshold = t * comb(config.m, 2)
    raws = _raw_replicates(config, statistic, table, threshold, workers)

    meta = {
        "config": {
            "m": config.m, "n": config.n, "r": config.r, "q": config.q,
            "replicates": config.replicates, "master_seed": config.master_seed,
        },
        "statistic": statistic,
        "normalization": normalization,
        "regime_warnings": config.regime_warnings(statistic),
    }
    if statistic == "N":
        meta["threshold"] = threshold
        counts: dict[int, int] = {}
        for v in raws:
            counts[v] = counts.get(v, 0) + 1
        return EmpiricalDistribution(
            "integer-counts", len(raws), counts=counts, meta=meta
        )

    if normalization == "exact-moments":
        mean, sd = exact_moments(config, statistic, table)
        meta["exact_mean"] = mean
        meta["exact_sd"] = sd
        vals = np.array([(float(v) - mean) / sd for v in raws])
    elif normalization == "frechet-scale":
        scale = comb(config.m, 2)
        meta["scale"] = scale
        vals = np.array([float(v) / scale for v in raws])
    elif normalization == "none":
        vals = np.array([float(v) for v in raws])
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    return EmpiricalDistribution("continuous", len(raws), values=np.sort(vals), meta=meta)


def replicate_rows(config, statistic, normalization="none", table=None,
                   t: float = 1.0, workers: int = 1):
    """(index, raw, normalized) rows in replicate order, for CSV export."""
    if table is None:
        table = build_table(config.n)
    threshold = t * comb(config.m, 2)
    raws = _raw_replicates(config, statistic, table, threshold, workers)
    if normalization == "exact-moments":
        mean, sd = exact_moments(config, statistic, table)
        return [(i, v, (float(v) - mean) / sd) for i, v in enumerate(raws)]
    if normalization == "frechet-scale":
        scale = comb(config.m, 2)
        return [(i, v, float(v) / scale) for i, v in enumerate(raws)]
    return [(i, v, float(v)) for i, v in enumerate(raws)]


def strong_law_trajectory(n: int, r: int, m_grid, seed: int,
                          table: ArithTable | None = None) -> np.ndarray:
    """C_{m,r} / E C_{m,r} along one growing realization, at the grid points.

    The same stream is extended as m grows (values are reused), so the
    trajectory is a single realization of the almost-sure limit statement.
    """
    grid = [int(v) for v in m_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("m_grid must be strictly increasing")
    if grid[0] < r:
        raise ValueError(f"grid starts below r={r}")
    if table is None:
        table = build_table(n)
    top = grid[-1]
    rng = np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), 0]))
    xs = rng.integers(1, n + 1, size=top, dtype=np.int64)

    mu = table.mobius
    mean_single = exact.mean_mu(table, n, r - 1).float_value
    cnt = np.zeros(n + 1, dtype=np.int64)
    running = 0
    ratios = []
    targets = set(grid)
    for m, v in enumerate(xs.tolist(), start=1):
        ds = table.divisor_tuple(int(v))
        # new r-subsets through this element: choose r-1 earlier multiples
        for d in ds:
            w = int(mu[d])
            if w:
                c = int(cnt[d])
                if c >= r - 1:
                    running += w * comb(c, r - 1)
        for d in ds:
            cnt[d] += 1
        if m in targets:
            expected = comb(m, r) * mean_single
            ratios.append(running / expected)
    return np.array(ratios)
