"""Limiting constants as truncated Euler products with explicit tail bars.

Every constant here is an infinite product over primes.  Truncating a
product whose local factor is 1 + O(p^-a) at a cutoff P leaves a relative
tail of order sum_{p>P} p^-a, which for a near 2 is too large for tight
identity checks.  Each product is therefore evaluated in accelerated form:
known zeta factors are split off analytically ("zeta shifts"), leaving a
corrected local factor 1 + O(p^-a') with a' >= 3, and the declared tail
exponent a' drives an explicit error bar

    |log tail|  <=  C * sum_{k>P} k^-a'  <=  C * P^(1-a') / (a'-1),

with C calibrated on the last primes before the cutoff.  Values are
deterministic given the cutoff; results are cached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .arith import build_table, primes_up_to

DEFAULT_CUTOFF = 1_000_000

# Bernoulli numbers B_2, B_4, ... for the Euler-Maclaurin zeta tail.
_BERNOULLI = (
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
)


def zeta(t: float) -> float:
    """Riemann zeta for real t > 1, Euler-Maclaurin accelerated.

    Direct summation to N = 64 plus the integral, half-term and Bernoulli
    corrections; with these many correction terms the truncation error is
    below 1e-20 for every t > 1, far inside double precision.
    """
    if t <= 1:
        raise ValueError(f"zeta requires t > 1, got {t}")
    n = 64
    head = sum(k**-t for k in range(1, n))
    tail = n ** (1 - t) / (t - 1) + 0.5 * n**-t
    coeff = t
    power = n ** (-t - 1)
    for i, b in enumerate(_BERNOULLI, start=1):
        tail += b / math.factorial(2 * i) * coeff * power
        coeff *= (t + 2 * i - 1) * (t + 2 * i)
        power /= n * n
    return head + tail


class ProductValue(NamedTuple):
    value: float
    tail_bound: float
    cutoff: int


@dataclass(frozen=True)
class ProductSpec:
    """Rule for one Euler product.

    local_factor maps a float array of primes to raw per-prime factors.
    zeta_shifts (s, e) move zeta(s)^e out of the product analytically:
    the evaluated product is  prod_i zeta(s_i)^{e_i} * prod_p [raw(p) *
    prod_i (1 - p^{-s_i})^{e_i}],  identical to prod_p raw(p) in the limit
    but with the corrected factor decaying at `tail_exponent`.
    """

    local_factor: Callable[[np.ndarray], np.ndarray]
    prime_cutoff: int
    tail_exponent: float
    zeta_shifts: tuple = ()
    prefactor: float = 1.0


@lru_cache(maxsize=8)
def _prime_cache(cutoff: int) -> np.ndarray:
    return primes_up_to(cutoff).astype(np.float64)


def euler_product(spec: ProductSpec) -> ProductValue:
    """Evaluate a ProductSpec; returns (value, tail bound, cutoff)."""
    p = _prime_cache(spec.prime_cutoff)
    factors = np.asarray(spec.local_factor(p), dtype=np.float64)
    for s, e in spec.zeta_shifts:
        factors = factors * (1.0 - p**-s) ** e
    if np.any(factors <= 0):
        bad = int(p[np.argmax(factors <= 0)])
        raise ValueError(f"nonpositive local factor at p={bad}")
    logs = np.log(factors)
    log_total = float(logs.sum())
    value = math.exp(log_total) * spec.prefactor
    for s, e in spec.zeta_shifts:
        value *= zeta(s) ** e

    a = spec.tail_exponent
    if a <= 1:
        raise ValueError("tail_exponent must exceed 1 for a convergent product")
    # calibrate |log f(p)| ~ C p^-a on the last primes, then integrate the tail
    last = logs[-5:]
    c_est = float(np.max(np.abs(last) * p[-5:] ** a)) if last.size else 0.0
    tail_log = 2.0 * c_est * spec.prime_cutoff ** (1 - a) / (a - 1)
    # factors within an ulp of 1 contribute nothing to the log sum, so the
    # bar cannot honestly drop below the float accumulation noise
    noise = (len(p) + 1) * 2.0**-53
    bound = abs(value) * (
        (math.expm1(tail_log) if tail_log < 1 else math.exp(tail_log)) + noise
    )
    return ProductValue(value, bound, spec.prime_cutoff)


# --- named constants -------------------------------------------------------

@lru_cache(maxsize=None)
def pairwise_coprime_T(m: int, cutoff: int = DEFAULT_CUTOFF) -> ProductValue:
    """Limit probability that an m-sample is pairwise coprime.

    T_m = prod_p (1 - 1/p)^(m-1) (1 + (m-1)/p);  T_2 = 1/zeta(2).
    The local factor is 1 - C(m,2)/p^2 + O(p^-3), so one zeta(2) shift of
    weight -C(m,2) accelerates it.
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    half = m * (m - 1) // 2

    def factor(p):
        return (1 - 1 / p) ** (m - 1) * (1 + (m - 1) / p)

    spec = ProductSpec(factor, cutoff, 3.0, zeta_shifts=((2.0, -half),))
    return euler_product(spec)


@lru_cache(maxsize=None)
def schur_constant(s: int, l: int, cutoff: int = DEFAULT_CUTOFF) -> ProductValue:
    """Limiting average of (phi_s(k)/k^s)^l.

    S_l^(s) = prod_p (1 - (1/p)[1 - (1 - p^-s)^l]); S_1^(s) = 1/zeta(s+1).
    """
    if s < 1 or l < 1:
        raise ValueError(f"need s, l >= 1, got s={s}, l={l}")

    def factor(p):
        return 1 - (1 - (1 - p ** (-float(s))) ** l) / p

    spec = ProductSpec(factor, cutoff, min(2 * s + 1, s + 2), zeta_shifts=((float(s + 1), -l),))
    return euler_product(spec)


@lru_cache(maxsize=None)
def delta(cutoff: int = DEFAULT_CUTOFF) -> ProductValue:
    """Growth constant of the product-restricted totient-gcd double sum:

    sum_{i j <= N} phi(i)phi(j) gcd(i,j) / (ij)^2  ~  delta * ln(N)^3,
    delta = (1/12) prod_p (1 - 5/p^2 + 5/p^3 - 1/p^5).
    """

    def factor(p):
        return 1 - 5 / p**2 + 5 / p**3 - 1 / p**5

    spec = ProductSpec(factor, cutoff, 4.0, zeta_shifts=((2.0, -5), (3.0, 5)), prefactor=1 / 12)
    return euler_product(spec)


@lru_cache(maxsize=None)
def delta_s(s: int, cutoff: int = DEFAULT_CUTOFF) -> ProductValue:
    """Order-s analogue of `delta` for the Jordan-totient double sums.

    delta_s = (1/12) prod_p (1 - 4/p^(s+1) - 1/p^2 + 4/p^(s+2)
                               + 1/p^(2s+1) - 1/p^(2s+3));
    s = 1 reduces to exactly the factor of `delta`.
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if s == 1:
        return delta(cutoff)

    def factor(p):
        return (1 - 4 / p ** (s + 1) - 1 / p**2 + 4 / p ** (s + 2)
                + 1 / p ** (2 * s + 1) - 1 / p ** (2 * s + 3))

    spec = ProductSpec(
        factor, cutoff, min(s + 2, 4),
        zeta_shifts=((2.0, -1), (float(s + 1), -4)),
        prefactor=1 / 12,
    )
    return euler_product(spec)


@lru_cache(maxsize=None)
def delta_toth(cutoff: int = DEFAULT_CUTOFF) -> ProductValue:
    """Growth constant of the mean square of P(k)/k:

    (1/n) sum_{k<=n} (P(k)/k)^2  ~  delta_toth * ln(n)^3,
    delta_toth = (1/pi^2) prod_p (1 + 1/p^3 - 4/(p(p+1))) = 2 * delta.
    """

    def factor(p):
        return 1 + 1 / p**3 - 4 / (p * (p + 1))

    spec = ProductSpec(
        factor, cutoff, 4.0,
        zeta_shifts=((2.0, -4), (3.0, 5)),
        prefactor=1 / math.pi**2,
    )
    return euler_product(spec)


def _m_shifts(t: float, s: int):
    if s == 1:
        return ((t + 1, -2), (2 * t, -3))
    return ((t + s, -2), (2 * t, -1), (2 * t + s - 1, -2))


@lru_cache(maxsize=None)
def M_constant(t: float, s: int = 1, cutoff: int = DEFAULT_CUTOFF) -> ProductValue:
    """The convergent totient-gcd double series for t > 1:

    M_s(t) = sum_{i,j} phi_s(i) phi_s(j) gcd(i,j) / (ij)^(s+t)
           = zeta(2t-1) zeta(t)^2 * prod_p (local factor),

    evaluated from the zeta(t)^2-extracted product form.  s = 1 is the
    plain Euler-phi case M(t).
    """
    if t <= 1:
        raise ValueError(f"M_constant requires t > 1, got {t}")
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")

    def factor(p):
        return (1 - 2 / p ** (t + s) - 1 / p ** (2 * t) - 2 / p ** (2 * t + s - 1)
                + 2 / p ** (2 * t + s) + 1 / p ** (2 * t + 2 * s - 1)
                + 2 / p ** (3 * t + s - 1) - 1 / p ** (4 * t + 2 * s - 1))

    tail = min(2 * t + s, 3 * t + s - 1, 2 * (t + s)) if s > 1 else min(2 * t + 1, 3 * t)
    spec = ProductSpec(factor, cutoff, tail, zeta_shifts=_m_shifts(t, s))
    pv = euler_product(spec)
    scale = zeta(2 * t - 1) * zeta(t) ** 2
    return ProductValue(pv.value * scale, pv.tail_bound * scale, cutoff)


@lru_cache(maxsize=None)
def m_product_forms(t: float, cutoff: int = DEFAULT_CUTOFF) -> tuple:
    """Both displayed product forms of M(t) (s = 1), each accelerated.

    Form A: zeta(2t-1) prod (1 + 2/p^t - 2/p^(t+1) - 1/p^(2t+1))
    Form B: zeta(2t-1) zeta(t)^2 prod (1 - 2/p^(t+1) - 3/p^(2t)
                 + 3/p^(2t+1) + 2/p^(3t) - 1/p^(4t+1))
    Returns (value_A, value_B); their agreement validates the algebra of
    the two displays independently of the truncation.
    """
    if t <= 1:
        raise ValueError(f"requires t > 1, got {t}")

    def factor_a(p):
        return 1 + 2 / p**t - 2 / p ** (t + 1) - 1 / p ** (2 * t + 1)

    def factor_b(p):
        return (1 - 2 / p ** (t + 1) - 3 / p ** (2 * t) + 3 / p ** (2 * t + 1)
                + 2 / p ** (3 * t) - 1 / p ** (4 * t + 1))

    tail = min(2 * t + 1, 3 * t)
    shifts = ((t, 2), (t + 1, -2), (2 * t, -3))
    spec_a = ProductSpec(factor_a, cutoff, tail, zeta_shifts=shifts)
    spec_b = ProductSpec(factor_b, cutoff, tail, zeta_shifts=((t + 1, -2), (2 * t, -3)))
    za = zeta(2 * t - 1)
    zb = za * zeta(t) ** 2
    return (euler_product(spec_a).value * za, euler_product(spec_b).value * zb)


def gcd_double_series_closed_form(t: float) -> float:
    """sum_{i,j} gcd(i,j)/(ij)^t = zeta(2t-1) zeta(t)^2 / zeta(2t), t > 1."""
    if t <= 1:
        raise ValueError(f"requires t > 1, got {t}")
    return zeta(2 * t - 1) * zeta(t) ** 2 / zeta(2 * t)


# --- limit variances --------------------------------------------------------

def limit_var_c(r: int, cutoff: int = DEFAULT_CUTOFF) -> float:
    """Limit of the variance of the marginal probability profile U_r:

    S_2^(r) - (S_1^(r))^2, strictly positive.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return schur_constant(r, 2, cutoff).value - schur_constant(r, 1, cutoff).value ** 2


def limit_var_d(r: int, cutoff: int = DEFAULT_CUTOFF, check_sum_bound: int = 0,
                agreement_tol: float = 1e-4) -> float:
    """Limit of the variance of the marginal expectation profile W_r, r >= 2:

    M(r) - (zeta(r)/zeta(r+1))^2, equivalently the double series
    sum phi(i)phi(j)(gcd(i,j)-1)/(ij)^(r+1).  With check_sum_bound > 0 the
    truncated double series is evaluated as an independent cross-check and
    the two routes must agree within agreement_tol.

    r = 1 is rejected: that variance diverges like ln(n)^3.
    """
    if r < 2:
        raise ValueError("r must be >= 2 (the r = 1 profile variance diverges)")
    via_product = M_constant(float(r), 1, cutoff).value - (zeta(r) / zeta(r + 1)) ** 2
    if check_sum_bound:
        via_sum = _gcd_minus_one_double_sum(r, check_sum_bound)
        if abs(via_product - via_sum) > agreement_tol:
            raise AssertionError(
                f"limit_var_d({r}) routes disagree: product {via_product!r} "
                f"vs sum {via_sum!r}"
            )
    return via_product


def _gcd_minus_one_double_sum(r: int, bound: int) -> float:
    """sum_{i,j} phi(i)phi(j)(gcd(i,j)-1)/(ij)^(r+1), truncated.

    Decomposed over shared-divisor contributions: gcd-1 = sum_{d|i, d|j,
    d>=2} phi(d), so the series equals sum_{d>=2} phi(d) T_d^2 with
    T_d = sum_{d|i} phi(i)/i^(r+1); both sums truncated at `bound`.
    """
    phi = np.arange(bound + 1, dtype=np.int64)
    for p in primes_up_to(bound).tolist():
        phi[p::p] -= phi[p::p] // p
    fphi = phi.astype(np.float64)
    inv = fphi[1:] / np.arange(1, bound + 1, dtype=np.float64) ** (r + 1)
    total = 0.0
    for d in range(2, bound + 1):
        t_d = inv[d - 1 :: d].sum()
        total += fphi[d] * t_d * t_d
    return total


# --- finite partial-sum trends ---------------------------------------------

def tauberian_trend(kind: str, n_grid, table=None, max_n: int = 20_000_000):
    """Ratio-to-ln(N)^3 of the slowly divergent partial sums, per grid point.

    kind "corollary22": sum_{i j <= N} phi(i)phi(j) gcd(i,j)/(ij)^2,
         target `delta`.
    kind "toth":        same summand over lcm(i,j) <= N, target `delta_toth`.
    kind "pillai_sq":   (1/N) sum_{k<=N} (P(k)/k)^2, target `delta_toth`.

    Returns (ratios, target) with ratios aligned to the ascending grid.
    Convergence is O(1/ln N): only trend assertions are meaningful.
    """
    grid = sorted(int(x) for x in n_grid)
    if not grid or grid[0] < 10:
        raise ValueError("grid points must be >= 10")
    top = grid[-1]
    if top > max_n:
        raise ValueError(f"largest grid point {top} beyond budget {max_n}")
    if table is None or table.n_max < top:
        table = build_table(top)

    if kind == "corollary22":
        sums = _product_restricted_sums(table, grid)
        target = delta().value
    elif kind == "toth":
        sums = _lcm_restricted_sums(table, grid)
        target = delta_toth().value
    elif kind == "pillai_sq":
        sums = _pillai_mean_square(table, grid)
        target = delta_toth().value
    else:
        raise ValueError(f"unknown trend kind {kind!r}")
    ratios = [s / math.log(n) ** 3 for n, s in zip(grid, sums)]
    return ratios, target


def _product_restricted_sums(table, grid):
    top = grid[-1]
    phi = table.totient(1)[: top + 1].astype(np.float64)
    w = phi.copy()
    w[1:] /= np.arange(1, top + 1, dtype=np.float64) ** 2
    out = []
    for n in grid:
        total = 0.0
        js = np.arange(1, n + 1)
        for i in range(1, n + 1):
            cap = n // i
            if cap == 0:
                break
            total += w[i] * float(np.dot(w[1 : cap + 1], np.gcd(i, js[:cap])))
        out.append(total)
    return out


def _lcm_restricted_sums(table, grid):
    """Sum over lcm(i,j) <= N via the multiplicative per-lcm mass.

    The mass at lcm = L factors over prime powers:
    T(p^a) = sum_{max(al,be)=a} phi(p^al) phi(p^be) p^min(al,be) / p^(2(al+be)).
    """
    top = grid[-1]
    spf = table.smallest_prime_factor

    def local_mass(p, a):
        def ph(e):
            return 1 if e == 0 else p**e - p ** (e - 1)
        total = 0.0
        for al in range(a + 1):
            for be in range(a + 1):
                if max(al, be) == a:
                    total += ph(al) * ph(be) * p ** min(al, be) / p ** (2 * (al + be))
        return total

    cache = {}
    mass = np.zeros(top + 1)
    mass[1] = 1.0
    for k in range(2, top + 1):
        p = int(spf[k])
        rest = k // p
        a = 1
        while rest % p == 0:
            rest //= p
            a += 1
        key = (p, a)
        v = cache.get(key)
        if v is None:
            v = local_mass(p, a)
            cache[key] = v
        mass[k] = mass[rest] * v
    prefix = np.cumsum(mass)
    return [float(prefix[n]) for n in grid]


def _pillai_mean_square(table, grid):
    top = grid[-1]
    phi = table.totient(1)[: top + 1].astype(np.float64)
    val = np.zeros(top + 1)
    for d in range(1, top + 1):
        val[d::d] += phi[d] / d
    prefix = np.cumsum(val * val)
    return [float(prefix[n]) / n for n in grid]


def all_constants(cutoff: int = DEFAULT_CUTOFF) -> dict:
    """Named constants with error bars, for the CLI constants table."""
    out = {}
    for t in (2, 3, 4):
        out[f"zeta({t})"] = {"value": zeta(t), "tail_bound": 1e-15}
    d = delta(cutoff)
    out["delta"] = {"value": d.value, "tail_bound": d.tail_bound}
    for s in (1, 2, 3):
        ds = delta_s(s, cutoff)
        out[f"delta_{s}"] = {"value": ds.value, "tail_bound": ds.tail_bound}
    dt = delta_toth(cutoff)
    out["delta_toth"] = {"value": dt.value, "tail_bound": dt.tail_bound}
    for m in (2, 3, 4, 5):
        tm = pairwise_coprime_T(m, cutoff)
        out[f"T_{m}"] = {"value": tm.value, "tail_bound": tm.tail_bound}
    for s in (1, 2, 3):
        for l in (1, 2):
            sc = schur_constant(s, l, cutoff)
            out[f"S_{l}^({s})"] = {"value": sc.value, "tail_bound": sc.tail_bound}
    for t in (1.5, 2.0, 3.0):
        mv = M_constant(t, 1, cutoff)
        out[f"M({t})"] = {"value": mv.value, "tail_bound": mv.tail_bound}
    for r in (1, 2, 3):
        out[f"limit_var_c({r})"] = {"value": limit_var_c(r, cutoff), "tail_bound": None}
    for r in (2, 3):
        out[f"limit_var_d({r})"] = {"value": limit_var_d(r, cutoff), "tail_bound": None}
    out["cutoff"] = cutoff
    return out
