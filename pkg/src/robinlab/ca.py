"""Colossally abundant numbers.

For a parameter eps > 0 the number N_eps = prod p^(a_p(eps)) maximizes
sigma(m)/m^(1+eps). Prime p reaches exponent k exactly when
F(p, k) >= eps, where

    F(x, k) = log(1 + 1/(x + x^2 + ... + x^k)) / log x

is strictly decreasing in x. The breakpoint x_k solves F(x_k, k) = eps.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import gmpy2

from .errors import CapacityError, DomainError, NoBracketError, PreconditionError, TieError
from .factored import FactoredNumber, rho_factor
from .numerics import (
    DEFAULT_PRECISION,
    Precision,
    Real,
    Verdict,
    _as_computation,
    compare,
    expm1,
    guarded_floor,
    ln,
    log1p,
    root,
)
from .primes import DUSART_GAP_THRESHOLD, is_prime, iter_prime_segments, next_prime, prev_prime

CA_PRIME_CAPACITY = 10**9


# F(x, k) ----------------------------------------------------------------


def _geometric_sum(x, k: int):
    """x + x^2 + ... + x^k for an exact rational or a Real."""
    if isinstance(x, (int, Fraction)):
        if x == 1:
            return k
        return Fraction(x) * (Fraction(x) ** k - 1) / (Fraction(x) - 1)
    return x * (x**k - 1) / (x - 1)


def F(x, k: int, prec: Precision = DEFAULT_PRECISION) -> Real:
    """log(1 + 1/(x + ... + x^k)) / log x, for x > 1 and k >= 1."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if isinstance(x, Real):
        if x.value - x.err <= 1:
            raise DomainError("F needs x > 1")
        s = _geometric_sum(x, k)
        return log1p(1 / s, prec) / ln(x, prec)
    xq = Fraction(x)
    if xq <= 1:
        raise DomainError("F needs x > 1")
    s = _geometric_sum(xq, k)
    return log1p(Real.exact(1 / s, prec), prec) / ln(Real.exact(xq, prec), prec)


def _F_gmpy(x, k: int):
    s = x * (x**k - 1) / (x - 1)
    return gmpy2.log1p(1 / s) / gmpy2.log(x)


def _to_gmpy(v):
    sign, man, exp, _ = v._mpf_
    out = gmpy2.mpfr(int(man)) * gmpy2.mpfr(2) ** exp
    return -out if sign else out


def _from_gmpy(ctx, v):
    man, exp = v.as_mantissa_exp()
    return ctx.mpf((int(man), int(exp)))


def critical_eps(p: int, k: int, prec: Precision = DEFAULT_PRECISION) -> Real:
    """The eps at which prime p's exponent steps from k-1 to k."""
    return F(p, k, prec)


def solve_xk(eps, k: int, prec: Precision = DEFAULT_PRECISION) -> Real:
    """Solve F(x, k) = eps by bisection.

    The bracket [1 + d, X] is widened geometrically until it straddles eps,
    bisected to relative width 10^-(digits-10), and its endpoints are then
    certified with error-tracked evaluations.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    e = _as_computation(eps)(prec)
    if e.value <= e.err:
        raise DomainError("eps must be positive")
    ctx = prec.ctx
    target = ctx.mpf(e.value)
    one = ctx.mpf(1)

    with gmpy2.context(gmpy2.get_context(), precision=ctx.prec):
        gtarget = gmpy2.mpfr(_to_gmpy(target))
        lo = hi = None
        guess = _float_root(float(target), k)
        if guess is not None:
            a = gmpy2.mpfr(guess) * (1 - gmpy2.mpfr(1e-11))
            b = gmpy2.mpfr(guess) * (1 + gmpy2.mpfr(1e-11))
            if a > 1 and _F_gmpy(a, k) > gtarget > _F_gmpy(b, k):
                lo, hi = a, b
        if lo is None:
            lo, hi = _bracket(gtarget, k)

        tol = gmpy2.mpfr(10) ** -(prec.digits - 10)
        while hi - lo > tol * lo:
            mid = (lo + hi) / 2
            if _F_gmpy(mid, k) > gtarget:
                lo = mid
            else:
                hi = mid
    lo, hi = _from_gmpy(ctx, lo), _from_gmpy(ctx, hi)

    # certify F(lo) > eps > F(hi), widening if rounding blurred the ends
    width = hi - lo
    for _ in range(60):
        a = F(Real(lo, ctx.zero), k, prec) - e
        b = F(Real(hi, ctx.zero), k, prec) - e
        if a.value > a.err and b.value < -b.err:
            return Real((lo + hi) / 2, (hi - lo) / 2)
        lo = max(lo - width, one + (lo - one) / 2)
        hi = hi + width
        width *= 2
    raise TieError("could not certify the x_k bracket; eps too uncertain")


def _F_float(x: float, k: int) -> float:
    try:
        s = x * (x**k - 1.0) / (x - 1.0)
    except OverflowError:
        return 0.0
    return math.log1p(1.0 / s) / math.log(x)


def _float_root(target: float, k: int) -> Optional[float]:
    """Float64 bisection used only to seed the precise bracket."""
    if not (target > 0.0 and math.isfinite(target)):
        return None
    lo, hi = 1.0 + 2.0**-20, 2.0
    if _F_float(lo, k) <= target:
        return None
    while _F_float(hi, k) >= target:
        lo, hi = hi, hi * 2.0
        if hi > 1e300:
            return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _F_float(mid, k) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _bracket(target, k: int):
    one = gmpy2.mpfr(1)
    d = one / 16
    lo = one + d
    for _ in range(200):
        if _F_gmpy(lo, k) > target:
            break
        d /= 16
        lo = one + d
    else:
        raise NoBracketError(f"eps={float(target):.8g} too large for k={k}")
    hi = gmpy2.mpfr(2)
    for _ in range(400):
        if _F_gmpy(hi, k) < target:
            break
        lo = hi
        hi *= 2
    else:
        raise NoBracketError(f"eps={float(target):.8g} too small for k={k}")
    return lo, hi


# exponents and N_eps ------------------------------------------------------


def _eps_computation(eps):
    """Accept a number, Real or Precision->Real callable as eps."""
    return _as_computation(eps)


def exponent_a_p(p: int, eps, prec: Precision = DEFAULT_PRECISION) -> int:
    """floor(log((p^(1+eps) - 1)/(p^eps - 1)) / log p) - 1, floor tie-guarded."""
    eps_c = _eps_computation(eps)

    def ratio(pr: Precision) -> Real:
        e = eps_c(pr)
        if e.value <= e.err:
            raise DomainError("eps must be positive")
        lp = ln(p, pr)
        pe_m1 = expm1(e * lp, pr)  # p^eps - 1
        inner = (p * pe_m1 + (p - 1)) / pe_m1  # (p^(1+eps) - 1)/(p^eps - 1)
        return ln(inner, pr) / lp

    return max(0, guarded_floor(ratio, prec) - 1)


def exponent_from_F(p: int, eps, prec: Precision = DEFAULT_PRECISION) -> int:
    """Largest k with F(p, k) >= eps; the breakpoint description of a_p."""
    eps_c = _eps_computation(eps)
    k = 0
    while True:
        v = compare(lambda pr: F(p, k + 1, pr), eps_c, prec).verdict
        if v is Verdict.UNDECIDED:
            raise TieError(f"F({p},{k + 1}) is within error of eps")
        if v is Verdict.LESS:
            return k
        k += 1


def largest_prime_factor(eps, prec: Precision = DEFAULT_PRECISION) -> int:
    """Largest prime p with F(p, 1) >= eps, i.e. the largest p <= x_1."""
    eps_c = _eps_computation(eps)
    x1 = solve_xk(eps_c, 1, prec)
    guess = int(x1.value)
    if guess < 2:
        raise DomainError("eps too large: no prime has positive exponent")
    if guess > CA_PRIME_CAPACITY:
        raise CapacityError("largest prime beyond CA capacity")
    p = guess if is_prime(guess) else prev_prime(guess) if guess > 2 else 2
    # walk to the exact boundary in case x_1 sits near an integer
    while exponent_from_F(next_prime(p), eps_c, prec) >= 1:
        p = next_prime(p)
    while exponent_from_F(p, eps_c, prec) < 1:
        p = prev_prime(p)
    return p


def n_epsilon(eps, prec: Precision = DEFAULT_PRECISION) -> FactoredNumber:
    """N_eps as a FactoredNumber.

    Primes between x_2 and x_1 all get exponent 1; only primes near those two
    breakpoints and below x_2 are evaluated individually.
    """
    eps_c = _eps_computation(eps)
    x1 = solve_xk(eps_c, 1, prec)
    if x1.value > CA_PRIME_CAPACITY:
        raise CapacityError("x_1 beyond CA capacity")
    if x1.value < 2:
        return FactoredNumber.one()
    x2 = solve_xk(eps_c, 2, prec)
    top = int(x1.value) + 1
    low_cut = int(x2.value) + 2
    high_cut = int(x1.value) - 1
    primes, exps = [], []
    for seg in iter_prime_segments(2, top):
        for p in seg.tolist():
            if low_cut < p < high_cut:
                a = 1
            else:
                a = exponent_a_p(p, eps_c, prec)
            if a:
                primes.append(p)
                exps.append(a)
    return FactoredNumber(tuple(primes), tuple(exps))


# the chain -----------------------------------------------------------------


@dataclass(frozen=True)
class CAChainEntry:
    index: int
    N: FactoredNumber
    added_prime: int
    new_exponent: int
    critical_eps: Real
    tie: bool = False
    log_n: Optional[Real] = field(default=None, compare=False)
    rho: Optional[Real] = field(default=None, compare=False)


def _prime_stream(start: int = 2) -> Iterator[int]:
    lo, width = start, 1 << 16
    while True:
        for seg in iter_prime_segments(lo, lo + width - 1, width):
            yield from seg.tolist()
        lo += width
        width = min(width * 2, 1 << 22)


def iter_chain(prec: Precision = DEFAULT_PRECISION, with_values: bool = True) -> Iterator[CAChainEntry]:
    """Colossally abundant numbers in increasing order, without end.

    Greedy on the critical eps: each step applies the pending move
    (raise p from a to a+1) with the largest F(p, a+1); near-ties within
    error go to the smaller prime and the entry is flagged.
    ``log_n`` and ``rho`` are carried incrementally when ``with_values``.
    """
    primes: list[int] = []
    exps: list[int] = []
    position: dict[int, int] = {}
    stream = _prime_stream()
    fresh = next(stream)
    heap: list = []

    def push(p: int, k: int) -> None:
        f = F(p, k, prec)
        heapq.heappush(heap, (-f.value, p, k, f))

    push(fresh, 1)
    log_n = Real.exact(0, prec)
    rho = Real.exact(1, prec)
    index = 0
    while True:
        _, p, k, f = heapq.heappop(heap)
        tie = False
        if heap:
            g = heap[0][3]
            if abs(f.value - g.value) <= f.err + g.err:
                tie = True
                if heap[0][1] < p:  # prefer the smaller prime
                    alt = heapq.heappop(heap)
                    heapq.heappush(heap, (-f.value, p, k, f))
                    _, p, k, f = alt
        if k == 1:
            position[p] = len(primes)
            primes.append(p)
            exps.append(1)
            fresh = next(stream)
            if fresh > CA_PRIME_CAPACITY:
                raise CapacityError("chain needs primes beyond capacity")
            push(fresh, 1)
        else:
            exps[position[p]] = k
        push(p, k + 1)
        index += 1
        if with_values:
            log_n = log_n + ln(p, prec)
            step = rho_factor(p, k) / rho_factor(p, k - 1) if k > 1 else Fraction(p + 1, p)
            rho = rho * Real.exact(step, prec)
        n = FactoredNumber(tuple(primes), tuple(exps))
        yield CAChainEntry(
            index,
            n,
            p,
            k,
            f,
            tie,
            log_n if with_values else None,
            rho if with_values else None,
        )


def ca_chain(steps: int, prec: Precision = DEFAULT_PRECISION) -> list[CAChainEntry]:
    """The first ``steps`` colossally abundant numbers."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    out = []
    for entry in iter_chain(prec):
        out.append(entry)
        if len(out) == steps:
            return out
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class CAParams:
    eps: Real
    x: list  # x_1 > x_2 > ... > x_K


def ca_params(eps, kmax: int, prec: Precision = DEFAULT_PRECISION) -> CAParams:
    """Breakpoints x_1..x_kmax for one eps."""
    eps_c = _eps_computation(eps)
    return CAParams(eps_c(prec), [solve_xk(eps_c, k, prec) for k in range(1, kmax + 1)])


# breakpoint bound x_k < (k p)^(1/k) ----------------------------------------


@dataclass(frozen=True)
class XkMargin:
    k: int
    x_k: Real
    bound: Real  # (k p)^(1/k)
    margin: Real  # bound - x_k
    cns_margin: Real  # (k x_1)^(1/k) - x_k, the older and weaker bound
    certified: bool  # margin exceeds its error


@dataclass(frozen=True)
class Thm4Report:
    eps: Real
    p: int
    x_1: Real
    margins: list
    exploratory: bool

    @property
    def holds(self) -> bool:
        return all(m.certified for m in self.margins)

    @property
    def min_margin(self) -> Real:
        return min((m.margin for m in self.margins), key=lambda r: r.value)


def thm4_check(
    eps,
    kmax: int = 40,
    prec: Precision = DEFAULT_PRECISION,
    exploratory: bool = False,
) -> Thm4Report:
    """Margins (k p)^(1/k) - x_k for k = 2..kmax, p the largest prime of N_eps."""
    eps_c = _eps_computation(eps)
    p = largest_prime_factor(eps_c, prec)
    if p < DUSART_GAP_THRESHOLD and not exploratory:
        raise PreconditionError(f"largest prime {p} < {DUSART_GAP_THRESHOLD}; pass exploratory=True")
    x1 = solve_xk(eps_c, 1, prec)
    margins = []
    for k in range(2, kmax + 1):
        xk = solve_xk(eps_c, k, prec)
        bound = root(k * p, k, prec)
        margin = bound - xk
        cns = root(k * x1, k, prec) - xk
        margins.append(XkMargin(k, xk, bound, margin, cns, margin.value > margin.err))
    return Thm4Report(eps_c(prec), p, x1, margins, exploratory)


def eps_for_x1(x1, prec: Precision = DEFAULT_PRECISION) -> Real:
    """The eps whose breakpoint x_1 equals the given value: F(x1, 1)."""
    return F(x1, 1, prec)
