"""Integers held as their prime factorization.

Numbers of the size studied here (log N in the tens of thousands and
beyond) are never multiplied out; everything routes through ``log_value``
and ``rho``.
"""

from __future__ import annotations

import json
import math
import random
import re
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DivisibilityError, DomainError
from .numerics import DEFAULT_PRECISION, Precision, Real, ln
from .primes import is_prime, small_primes

MAX_EXACT_BITS = 128

_TRIAL_PRIMES = [int(p) for p in small_primes(1000)]


@dataclass(frozen=True)
class FactoredNumber:
    """Canonical factorization: strictly increasing primes, exponents >= 1.

    The integer 1 is the empty factorization.
    """

    primes: tuple = ()
    exponents: tuple = ()

    def __post_init__(self):
        if len(self.primes) != len(self.exponents):
            raise ValueError("primes and exponents differ in length")

    @classmethod
    def from_pairs(cls, pairs: Iterable, check: bool = True) -> "FactoredNumber":
        merged: dict[int, int] = {}
        for p, a in pairs:
            p, a = int(p), int(a)
            if a < 0:
                raise ValueError("negative exponent")
            if a == 0:
                continue
            if check and not is_prime(p):
                raise DomainError(f"{p} is not prime")
            merged[p] = merged.get(p, 0) + a
        ps = tuple(sorted(merged))
        return cls(ps, tuple(merged[p] for p in ps))

    @classmethod
    def one(cls) -> "FactoredNumber":
        return cls()

    # views --------------------------------------------------------------

    @property
    def factors(self) -> list[tuple[int, int]]:
        return list(zip(self.primes, self.exponents))

    @property
    def is_one(self) -> bool:
        return not self.primes

    @property
    def largest_prime(self) -> int:
        if self.is_one:
            raise DomainError("1 has no prime factor")
        return self.primes[-1]

    def exponent(self, p: int) -> int:
        i = bisect_left(self.primes, p)
        if i < len(self.primes) and self.primes[i] == p:
            return self.exponents[i]
        return 0

    def __contains__(self, p: int) -> bool:
        return self.exponent(p) > 0

    def __len__(self) -> int:
        return len(self.primes)

    def bit_length_bound(self) -> float:
        return sum(a * math.log2(p) for p, a in zip(self.primes, self.exponents))

    def fits(self, bits: int = MAX_EXACT_BITS) -> bool:
        return self.bit_length_bound() < bits - 1e-9

    def to_int(self, max_bits: int = MAX_EXACT_BITS) -> int:
        """The integer value, only when it fits ``max_bits``."""
        if not self.fits(max_bits):
            raise OverflowError(f"value exceeds {max_bits} bits")
        return math.prod(p**a for p, a in zip(self.primes, self.exponents))

    # text / json --------------------------------------------------------

    def __str__(self) -> str:
        if self.is_one:
            return "1"
        return "*".join(str(p) if a == 1 else f"{p}^{a}" for p, a in self.factors)

    def to_json(self) -> list[list[int]]:
        return [[p, a] for p, a in self.factors]

    # arithmetic ---------------------------------------------------------

    def mul_prime(self, p: int) -> "FactoredNumber":
        return mul_prime(self, p)

    def div_prime(self, p: int) -> "FactoredNumber":
        return div_prime(self, p)

    def __mul__(self, other: "FactoredNumber") -> "FactoredNumber":
        return FactoredNumber.from_pairs(self.factors + other.factors, check=False)


_TERM = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse(text: str, check: bool = True) -> FactoredNumber:
    """Parse ``2^4*3^2*5*7``; a bare decimal integer is factored instead."""
    text = text.strip()
    if not text:
        raise ValueError("empty factored-number string")
    if text.isdigit():
        n = int(text)
        if n == 1:
            return FactoredNumber.one()
        if n.bit_length() > 64:
            raise ValueError("decimal input must fit 64 bits; use p^a*q^b form")
        return from_integer(n)
    pairs = []
    for term in text.split("*"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"bad factor term {term!r}")
        pairs.append((int(m.group(1)), int(m.group(2) or 1)))
    out = FactoredNumber.from_pairs(pairs, check=check)
    return out


def from_json(data) -> FactoredNumber:
    if isinstance(data, str):
        data = json.loads(data)
    return FactoredNumber.from_pairs([(p, a) for p, a in data])


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict, rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n, rng)
    _split(d, out, rng)
    _split(n // d, out, rng)


def from_integer(n: int) -> FactoredNumber:
    """Factor a machine-sized integer (trial division, then Pollard-Brent)."""
    if n < 1:
        raise DomainError("from_integer needs n >= 1")
    found: dict[int, int] = {}
    for p in _TRIAL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            found[p] = found.get(p, 0) + 1
            n //= p
    if n > 1:
        _split(n, found, random.Random(n))
    ps = tuple(sorted(found))
    return FactoredNumber(ps, tuple(found[p] for p in ps))


def as_factored(n) -> FactoredNumber:
    if isinstance(n, FactoredNumber):
        return n
    if isinstance(n, str):
        return parse(n)
    return from_integer(int(n))


def mul_prime(n: FactoredNumber, p: int) -> FactoredNumber:
    i = bisect_left(n.primes, p)
    if i < len(n.primes) and n.primes[i] == p:
        exps = n.exponents[:i] + (n.exponents[i] + 1,) + n.exponents[i + 1 :]
        return FactoredNumber(n.primes, exps)
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return FactoredNumber(n.primes[:i] + (p,) + n.primes[i:], n.exponents[:i] + (1,) + n.exponents[i:])


def div_prime(n: FactoredNumber, p: int) -> FactoredNumber:
    i = bisect_left(n.primes, p)
    if i >= len(n.primes) or n.primes[i] != p:
        raise DivisibilityError(f"{p} does not divide {n}")
    a = n.exponents[i]
    if a == 1:
        return FactoredNumber(n.primes[:i] + n.primes[i + 1 :], n.exponents[:i] + n.exponents[i + 1 :])
    return FactoredNumber(n.primes, n.exponents[:i] + (a - 1,) + n.exponents[i + 1 :])


# real-valued functions -------------------------------------------------


def log_value(n, prec: Precision = DEFAULT_PRECISION) -> Real:
    """ln N = sum a_i ln p_i."""
    n = as_factored(n)
    if n.is_one:
        raise DomainError("log_value needs N >= 2")
    total = Real.exact(0, prec)
    for p, a in n.factors:
        total = total + a * ln(p, prec)
    return total


def rho_factor(p: int, a: int) -> Fraction:
    """sigma(p^a)/p^a = (p^(a+1) - 1) / ((p - 1) p^a)."""
    return Fraction(p ** (a + 1) - 1, (p - 1) * p**a)


def rho_exact(n) -> Fraction:
    n = as_factored(n)
    num = math.prod(p ** (a + 1) - 1 for p, a in n.factors)
    den = math.prod((p - 1) * p**a for p, a in n.factors)
    return Fraction(num, den)


def rho(n, prec: Precision = DEFAULT_PRECISION) -> Real:
    """Abundancy sigma(N)/N.

    Factors whose p^(a+1) fits 128 bits are combined exactly in integers and
    divided once; the rest are evaluated at precision.
    """
    n = as_factored(n)
    num, den = 1, 1
    approx = Real.exact(1, prec)
    for p, a in n.factors:
        if (a + 1) * math.log2(p) < MAX_EXACT_BITS:
            num *= p ** (a + 1) - 1
            den *= (p - 1) * p**a
        else:
            # (1 - p^-(a+1)) / (1 - 1/p)
            tail = Real.exact(1, prec) - (1 / Real.exact(p, prec)) ** (a + 1)
            approx = approx * tail / (1 - 1 / Real.exact(p, prec))
    g = math.gcd(num, den)
    return approx * Real.exact(Fraction(num // g, den // g), prec)


def sigma_exact(n) -> int:
    """Exact divisor sum; the value of N must fit 128 bits."""
    n = as_factored(n)
    if not n.fits(MAX_EXACT_BITS):
        raise OverflowError("sigma_exact needs N < 2^128")
    return math.prod((p ** (a + 1) - 1) // (p - 1) for p, a in n.factors)
