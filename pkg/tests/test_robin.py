import math

import mpmath
import numpy as np
import pytest

from robinlab.errors import CapacityError, DomainError
from robinlab.factored import parse
from robinlab.numerics import Precision, exp_gamma
from robinlab.robin import (
    G,
    RobinState,
    exhaustive_scan,
    lemma4_g,
    lemma4_stationary_point,
    mertens_product,
    mertens_product_exact,
    naive_sigma,
    naive_violations,
    robin_holds,
    sigma_sieve,
)


def divisor_sum(n: int) -> int:
    return sum(d + (n // d if d * d != n else 0) for d in range(1, math.isqrt(n) + 1) if n % d == 0)


def test_G_examples():
    g = G(5040)
    # sigma(5040) = 19344 by divisor enumeration; loglog via mpmath at 60 digits
    mpmath.mp.dps = 60
    ref = mpmath.mpf(divisor_sum(5040)) / 5040 / mpmath.log(mpmath.log(5040))
    mpmath.mp.dps = 15
    assert abs(g.value - ref) < 1e-45
    assert float(g) == pytest.approx(1.790973366534881, abs=1e-15)
    assert float(G(3)) == pytest.approx(14.17718, abs=1e-4)
    with pytest.raises(DomainError):
        G(2)
    with pytest.raises(DomainError):
        G(1)


def test_robin_holds_examples():
    v = robin_holds(5040)
    assert v.state is RobinState.FAILS and v.margin.value < 0
    assert float(v.g_value) == pytest.approx(1.790973366534881, abs=1e-12)
    v = robin_holds(5041)
    assert v.state is RobinState.HOLDS and v.margin.value > 0
    assert divisor_sum(5041) == 5113
    assert robin_holds(1).state is RobinState.DEGENERATE
    assert robin_holds(2).state is RobinState.DEGENERATE


def test_robin_holds_against_integer_rendering_to_1e4():
    mpmath.mp.dps = 40
    eg = mpmath.exp(mpmath.euler)
    scale = 10**30
    try:
        for n in range(3, 10**4 + 1):
            lhs = divisor_sum(n) * scale
            rhs = int(mpmath.floor(eg * n * mpmath.log(mpmath.log(n)) * scale))
            expect = RobinState.HOLDS if lhs < rhs else RobinState.FAILS
            assert robin_holds(n, Precision(30)).state is expect, n
    finally:
        mpmath.mp.dps = 15


def test_sigma_sieve_matches_divisor_sums():
    for lo, hi in ((1, 5000), (10**6, 10**6 + 3000), (10**9, 10**9 + 500)):
        got = sigma_sieve(lo, hi)
        assert got.dtype == np.int64
        assert got.tolist() == [divisor_sum(n) for n in range(lo, hi)]


def test_scan_small_limits():
    got = exhaustive_scan(100)
    for n in (4, 6, 12, 24, 36, 48, 60, 72, 84):
        assert n in got
    assert got == naive_violations(100)
    assert exhaustive_scan(3) == naive_violations(3) == [3]
    assert exhaustive_scan(2) == []


def test_scan_segment_and_threads_invariant():
    a = exhaustive_scan(200000, segment_size=1 << 12)
    b = exhaustive_scan(200000, segment_size=1 << 16, threads=4)
    assert a == b and max(a) == 5040


def test_scan_capacity():
    with pytest.raises(CapacityError):
        exhaustive_scan(10**10 + 1)


def test_naive_sigma_oracle_sane():
    assert [naive_sigma(n) for n in (1, 2, 12, 5040)] == [1, 3, 28, 19344]


def test_mertens_small_n():
    r = mertens_product(10)
    mpmath.mp.dps = 50
    ref = sum(mpmath.log(mpmath.mpf(p) / (p - 1)) for p in (2, 3, 5, 7))
    mpmath.mp.dps = 15
    assert abs(r.sum_logs.value - ref) <= r.sum_logs.err
    assert float(r.sum_logs) == pytest.approx(1.4759065198, abs=1e-10)
    assert r.bound.value > 0
    diff = r.remainder - (r.sum_logs - r.predicted)
    assert diff.value == 0


def test_mertens_fast_sum_matches_precise_sum():
    for n in (1000, 30000):
        fast = mertens_product(n).sum_logs
        slow = mertens_product_exact(n)
        assert abs(fast.value - slow.value) <= fast.err + slow.err


def test_mertens_1e8_sanity_envelope():
    r = mertens_product(10**8)
    assert abs(r.remainder.value) < 0.05


def test_mertens_domain():
    with pytest.raises(DomainError):
        mertens_product(2)
    with pytest.raises(CapacityError):
        mertens_product(10**11)


def test_lemma4_values():
    g = lemma4_g(mpmath.e)
    assert float(g) == pytest.approx(math.exp(0.005586), abs=1e-12)
    assert float(lemma4_stationary_point()) == pytest.approx(1.1115, abs=5e-4)
    with pytest.raises(DomainError):
        lemma4_g(1)


def test_lemma4_increasing_on_grid():
    xs = np.geomspace(1.2, 1e6, 2000)
    vals = [lemma4_g(float(x)) for x in xs]
    assert all(b.value - b.err > a.value + a.err for a, b in zip(vals, vals[1:]))


def test_exp_gamma_relation_to_G():
    # G(n) < e^gamma is exactly Robin's inequality
    for n in (5040, 5041, 10080, 55440):
        holds = robin_holds(n).state is RobinState.HOLDS
        assert holds == (G(n).value < exp_gamma().value)


def test_G_accepts_factored_strings():
    assert G(parse("2^4*3^2*5*7")).value == G(5040).value
