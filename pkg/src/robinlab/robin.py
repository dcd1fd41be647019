"""Robin's inequality sigma(n) < e^gamma n log log n and its companions.

``exhaustive_scan`` finds every violation up to a limit with a segmented
multiplicative divisor-sum sieve. ``mertens_product`` measures the remainder
in sum_{p<=n} log(p/(p-1)) = log log n + gamma + R(n).
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapacityError, DomainError, UndecidedError
from .factored import as_factored, log_value, rho
from .numerics import (
    DEFAULT_PRECISION,
    Precision,
    Real,
    Verdict,
    compare,
    euler_gamma,
    exp,
    exp_gamma,
    ln,
)
from .primes import DEFAULT_SEGMENT_SIZE, iter_prime_segments, small_primes

SCAN_CAPACITY = 10**10
MERTENS_CONSTANT = "0.005586"
MERTENS_VALID_ABOVE = 7_713_133_853

# relative guard band for the float screen in the scan
_SCAN_GUARD = 1e-9


def G(n, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> Real:
    """G(N) = rho(N) / log log N for N >= 3."""
    n = as_factored(n)
    if n.is_one or str(n) == "2":
        raise DomainError("G(N) needs N >= 3")
    lnn = log_value(n, prec) if log_n is None else log_n
    return rho(n, prec) / ln(lnn, prec)


class RobinState(enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class RobinVerdict:
    state: RobinState
    g_value: Optional[Real]
    margin: Optional[Real]  # e^gamma loglog n - rho(n)


def robin_holds(n, prec: Precision = DEFAULT_PRECISION) -> RobinVerdict:
    """Decide rho(n) < e^gamma log log n; DEGENERATE for n <= 2."""
    n = as_factored(n)
    if n.is_one or str(n) == "2":
        return RobinVerdict(RobinState.DEGENERATE, None, None)

    def lhs(p):
        return rho(n, p)

    def rhs(p):
        return exp_gamma(p) * ln(log_value(n, p), p)

    cmp = compare(lhs, rhs, prec)
    if cmp.verdict is Verdict.UNDECIDED:
        raise UndecidedError(f"Robin comparison undecided for {n} at {cmp.digits} digits")
    state = RobinState.HOLDS if cmp.verdict is Verdict.LESS else RobinState.FAILS
    g = cmp.lhs / (cmp.rhs / exp_gamma(prec.with_digits(cmp.digits)))
    return RobinVerdict(state, g, cmp.margin)


# divisor-sum sieve -------------------------------------------------------


def sigma_sieve(lo: int, hi: int, base: Optional[np.ndarray] = None) -> np.ndarray:
    """sigma(n) for n in [lo, hi) as int64, built multiplicatively.

    Every prime up to sqrt(hi) strips its full power from a running cofactor;
    what remains above 1 is a single prime to the first power.
    """
    if lo < 1 or hi <= lo:
        raise ValueError("need 1 <= lo < hi")
    if hi - 1 > SCAN_CAPACITY:
        raise CapacityError(f"sigma sieve limited to n <= {SCAN_CAPACITY}")
    if base is None:
        base = small_primes(math.isqrt(hi - 1))
    size = hi - lo
    rem = np.arange(lo, hi, dtype=np.int64)
    sigma = np.ones(size, dtype=np.int64)
    for p in base:
        p = int(p)
        if p * p > hi - 1:
            break
        start = (-lo) % p
        if start >= size:
            continue
        count = (size - 1 - start) // p + 1
        ppart = np.full(count, p, dtype=np.int64)
        pk = p * p
        while pk <= hi - 1:
            s_k = (-lo) % pk
            if s_k < size:
                ppart[(s_k - start) // p :: pk // p] *= p
            pk *= p
        sl = slice(start, None, p)
        sigma[sl] *= (ppart * p - 1) // (p - 1)
        rem[sl] //= ppart
    big = rem > 1
    sigma[big] *= rem[big] + 1
    return sigma


def _scan_segment(lo: int, hi: int, base: np.ndarray, prec: Precision) -> list[int]:
    lo = max(lo, 3)
    if lo >= hi:
        return []
    sig = sigma_sieve(lo, hi, base)
    n = np.arange(lo, hi, dtype=np.float64)
    thr = math.exp(float(euler_gamma(prec))) * n * np.log(np.log(n))
    cand = np.flatnonzero(sig.astype(np.float64) >= thr * (1.0 - _SCAN_GUARD))
    out = []
    for i in cand:
        m = lo + int(i)
        if robin_holds(m, prec).state is RobinState.FAILS:
            out.append(m)
    return out


def exhaustive_scan(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
    prec: Precision = DEFAULT_PRECISION,
) -> list[int]:
    """All 3 <= n <= limit with rho(n) >= e^gamma log log n, ascending.

    Exact sigma from the sieve is screened against a float threshold with a
    guard band; every candidate is decided by ``robin_holds``.
    """
    if limit > SCAN_CAPACITY:
        raise CapacityError(f"scan limit {limit} exceeds {SCAN_CAPACITY}")
    if limit < 3:
        return []
    base = small_primes(math.isqrt(limit))
    bounds = [(lo, min(lo + segment_size, limit + 1)) for lo in range(1, limit + 1, segment_size)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda b: _scan_segment(b[0], b[1], base, prec), bounds))
    else:
        parts = [_scan_segment(lo, hi, base, prec) for lo, hi in bounds]
    return [n for part in parts for n in part]


def naive_sigma(n: int) -> int:
    """Divisor sum by enumerating divisor pairs up to sqrt(n)."""
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d
            e = n // d
            if e != d:
                total += e
        d += 1
    return total


def naive_violations(limit: int, lo: int = 3) -> list[int]:
    """Per-n oracle: divisor enumeration plus a 30-digit threshold comparison."""
    import mpmath

    ctx = mpmath.MPContext()
    ctx.dps = 30
    eg = ctx.exp(ctx.euler)
    out = []
    for n in range(max(lo, 3), limit + 1):
        if naive_sigma(n) >= eg * n * ctx.log(ctx.log(n)):
            out.append(n)
    return out


# Mertens' third theorem with remainder ------------------------------------


@dataclass(frozen=True)
class MertensResult:
    n: int
    sum_logs: Real
    predicted: Real
    remainder: Real
    bound: Real

    @property
    def within_bound(self) -> bool:
        """|R(n)| < bound, certified against the tracked error."""
        return abs(self.remainder.value) + self.remainder.err < self.bound.value - self.bound.err


def _segment_log_sum(primes: np.ndarray) -> float:
    return math.fsum(-np.log1p(-1.0 / primes.astype(np.float64)))


def mertens_product(
    n: int,
    prec: Precision = DEFAULT_PRECISION,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> MertensResult:
    """Sum of log(p/(p-1)) over p <= n against log log n + gamma.

    Terms are float64 ``-log1p(-1/p)`` (within 2 ulp each), summed exactly by
    ``math.fsum`` per segment and across segments in a fixed order.
    """
    if n < 3:
        raise DomainError("mertens_product needs n >= 3")
    if n > SCAN_CAPACITY:
        raise CapacityError(f"mertens_product limited to n <= {SCAN_CAPACITY}")
    segments = iter_prime_segments(2, n, segment_size)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            partial = list(pool.map(_segment_log_sum, segments))
    else:
        partial = [_segment_log_sum(s) for s in segments]
    total = math.fsum(partial)
    # 2 ulp per term (reciprocal + log1p), plus final rounding of the fsums
    err = total * 2.0**-51 + abs(total) * 2.0 ** -52 * (len(partial) + 1)
    ctx = prec.ctx
    sum_logs = Real(ctx.mpf(total), ctx.mpf(err))
    lnn = ln(n, prec)
    predicted = ln(lnn, prec) + euler_gamma(prec)
    remainder = sum_logs - predicted
    bound = Real.exact(MERTENS_CONSTANT, prec) / (lnn * lnn)
    return MertensResult(n, sum_logs, predicted, remainder, bound)


def mertens_product_exact(n: int, prec: Precision = DEFAULT_PRECISION) -> Real:
    """Same sum evaluated term by term at precision; for small n only."""
    total = Real.exact(0, prec)
    for seg in iter_prime_segments(2, n):
        for p in seg:
            p = int(p)
            total = total + ln(Real.exact(p, prec) / (p - 1), prec)
    return total


# the g(x) = ln x exp(c / ln^2 x) helper ---------------------------------------


def _remainder_bound(lx: Real, prec: Precision) -> Real:
    return Real.exact(MERTENS_CONSTANT, prec) / (lx * lx)


def lemma4_g(x, prec: Precision = DEFAULT_PRECISION) -> Real:
    """g(x) = ln(x) exp(0.005586 / ln(x)^2) for x > 1."""
    xr = x if isinstance(x, Real) else Real.exact(x, prec)
    if xr.value <= 1:
        raise DomainError("lemma4_g needs x > 1")
    lx = ln(xr, prec)
    return lx * exp(_remainder_bound(lx, prec), prec)


def lemma4_stationary_point(prec: Precision = DEFAULT_PRECISION) -> Real:
    """The zero of g'(x): ln(x)^2 = 2 * 0.005586."""
    ctx = prec.ctx
    c = Real.exact(MERTENS_CONSTANT, prec) * 2
    return exp(Real(ctx.sqrt(c.value), c.err / ctx.sqrt(c.value) + c.value * ctx.eps), prec)
