"""Arbitrary-precision reals with tracked absolute error.

Every inequality verdict in the package is decided by :func:`cmp_adaptive`,
which only answers LESS or GREATER when the gap between two values exceeds
the sum of their error bounds, escalating precision otherwise.

Values are backed by :mod:`mpmath`. Each working precision gets its own
``MPContext`` so no global state is mutated and values can be shared freely
between threads.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

from mpmath import MPContext

from .errors import DomainError, TieError

DEFAULT_DIGITS = 50
DEFAULT_MAX_DIGITS = 2000
MIN_DIGITS = 30
GUARD_DIGITS = 10
DIGITS_ENV_VAR = "ROBINLAB_DIGITS"


@lru_cache(maxsize=None)
def _context(dps: int) -> MPContext:
    ctx = MPContext()
    ctx.dps = dps
    return ctx


@dataclass(frozen=True)
class Precision:
    """Working precision in decimal digits plus an escalation ceiling."""

    digits: int = DEFAULT_DIGITS
    max_digits: int = DEFAULT_MAX_DIGITS

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise ValueError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        if self.max_digits < self.digits:
            raise ValueError("max_digits must be >= digits")

    @property
    def ctx(self) -> MPContext:
        return _context(self.digits + GUARD_DIGITS)

    def with_digits(self, digits: int) -> "Precision":
        return replace(self, digits=digits, max_digits=max(self.max_digits, digits))

    def escalations(self):
        """Yield this precision, then doubled digit counts up to max_digits."""
        digits = self.digits
        while True:
            yield self.with_digits(digits)
            if digits >= self.max_digits:
                return
            digits = min(2 * digits, self.max_digits)

    @classmethod
    def from_env(cls, default: int = DEFAULT_DIGITS) -> "Precision":
        raw = os.environ.get(DIGITS_ENV_VAR)
        digits = int(raw) if raw else default
        return cls(digits=digits, max_digits=max(DEFAULT_MAX_DIGITS, digits))


DEFAULT_PRECISION = Precision()


def _unit(ctx: MPContext):
    # one ulp relative to the working binary precision, rounded up a step
    return ctx.ldexp(1, 1 - ctx.prec)


Number = Union[int, Fraction, float, str]


@dataclass(frozen=True)
class Real:
    """A value together with an absolute bound on its distance from the truth."""

    value: object  # mpmath mpf
    err: object  # nonnegative mpf

    # construction -------------------------------------------------------

    @classmethod
    def exact(cls, x, prec: Precision = DEFAULT_PRECISION) -> "Real":
        """Round an exact number into a Real at ``prec``.

        Integers and binary floats that fit the mantissa carry zero error.
        """
        ctx = prec.ctx
        if isinstance(x, Real):
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            v = ctx.mpf(x)
            err = ctx.zero if abs(x).bit_length() <= ctx.prec else _unit(ctx) * abs(v)
            return cls(v, err)
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return cls.exact(x.numerator, prec)
            v = ctx.mpf(x.numerator) / ctx.mpf(x.denominator)
            if abs(x.numerator).bit_length() > ctx.prec or x.denominator.bit_length() > ctx.prec:
                return cls(v, 3 * _unit(ctx) * abs(v))
            return cls(v, _unit(ctx) * abs(v))
        if isinstance(x, float):
            return cls(ctx.mpf(x), ctx.zero)
        if hasattr(x, "_mpf_"):
            # mpf from another context: exact when its mantissa fits
            fits = x._mpf_[3] <= ctx.prec
            v = ctx.mpf(x)
            return cls(v, ctx.zero if fits else _unit(ctx) * abs(v))
        v = ctx.mpf(x)
        return cls(v, _unit(ctx) * abs(v))

    # basic accessors ----------------------------------------------------

    @property
    def ctx(self) -> MPContext:
        return self.value.context

    @property
    def lower(self):
        return self.value - self.err

    @property
    def upper(self):
        return self.value + self.err

    def contains(self, x) -> bool:
        return abs(self.ctx.mpf(x) - self.value) <= self.err

    def sign(self) -> int:
        """+1 or -1 when the sign is certain, 0 when the interval straddles zero."""
        if self.value > self.err:
            return 1
        if self.value < -self.err:
            return -1
        return 0

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return self.ctx.nstr(self.value, 20)

    def __repr__(self) -> str:
        return f"Real({self.ctx.nstr(self.value, 25)} ± {self.ctx.nstr(self.err, 3)})"

    def nstr(self, digits: int = 20) -> str:
        return self.ctx.nstr(self.value, digits)

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> tuple["Real", "Real", MPContext]:
        if not isinstance(other, Real):
            other = Real.exact(other, _precision_of(self.ctx))
        ctx = self.ctx if self.ctx.prec >= other.ctx.prec else other.ctx
        return self, other, ctx

    def __neg__(self) -> "Real":
        return Real(-self.value, self.err)

    def __abs__(self) -> "Real":
        return Real(abs(self.value), self.err)

    def __add__(self, other) -> "Real":
        a, b, ctx = self._coerce(other)
        v = ctx.mpf(a.value) + ctx.mpf(b.value)
        return Real(v, a.err + b.err + _unit(ctx) * abs(v))

    __radd__ = __add__

    def __sub__(self, other) -> "Real":
        a, b, ctx = self._coerce(other)
        v = ctx.mpf(a.value) - ctx.mpf(b.value)
        return Real(v, a.err + b.err + _unit(ctx) * abs(v))

    def __rsub__(self, other) -> "Real":
        return (-self) + other

    def __mul__(self, other) -> "Real":
        a, b, ctx = self._coerce(other)
        v = ctx.mpf(a.value) * ctx.mpf(b.value)
        err = abs(a.value) * b.err + abs(b.value) * a.err + a.err * b.err
        return Real(v, err + _unit(ctx) * abs(v))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Real":
        a, b, ctx = self._coerce(other)
        bv = abs(b.value)
        if bv <= b.err:
            raise ZeroDivisionError("divisor interval contains zero")
        v = ctx.mpf(a.value) / ctx.mpf(b.value)
        err = (abs(a.value) * b.err + bv * a.err) / (bv * (bv - b.err))
        return Real(v, err + _unit(ctx) * abs(v))

    def __rtruediv__(self, other) -> "Real":
        return Real.exact(other, _precision_of(self.ctx)) / self

    def __pow__(self, k: int) -> "Real":
        if not isinstance(k, int) or k < 0:
            raise TypeError("only nonnegative integer powers are supported")
        result = Real.exact(1, _precision_of(self.ctx))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result


def _precision_of(ctx: MPContext) -> Precision:
    digits = max(MIN_DIGITS, ctx.dps - GUARD_DIGITS)
    return Precision(digits, max(DEFAULT_MAX_DIGITS, digits))


def as_real(x, prec: Precision = DEFAULT_PRECISION) -> Real:
    return x if isinstance(x, Real) else Real.exact(x, prec)


# elementary functions ---------------------------------------------------


def ln(x, prec: Precision = DEFAULT_PRECISION) -> Real:
    """Natural logarithm with propagated error."""
    x = as_real(x, prec)
    ctx = x.ctx if x.ctx.prec >= prec.ctx.prec else prec.ctx
    xv = ctx.mpf(x.value)
    if xv <= 0:
        raise DomainError(f"ln undefined for nonpositive argument {ctx.nstr(xv, 10)}")
    if xv <= x.err:
        raise DomainError("ln argument not bounded away from zero")
    v = ctx.ln(xv)
    err = x.err / (xv - x.err) + 2 * _unit(ctx) * abs(v)
    return Real(v, err)


def exp(x, prec: Precision = DEFAULT_PRECISION) -> Real:
    x = as_real(x, prec)
    ctx = x.ctx if x.ctx.prec >= prec.ctx.prec else prec.ctx
    v = ctx.exp(ctx.mpf(x.value))
    err = abs(v) * ctx.expm1(x.err) + 2 * _unit(ctx) * abs(v)
    return Real(v, err)


def log1p(x, prec: Precision = DEFAULT_PRECISION) -> Real:
    """ln(1 + x), accurate for tiny x."""
    x = as_real(x, prec)
    ctx = x.ctx if x.ctx.prec >= prec.ctx.prec else prec.ctx
    xv = ctx.mpf(x.value)
    if 1 + xv - x.err <= 0:
        raise DomainError("log1p needs x > -1")
    v = ctx.log1p(xv)
    err = x.err / (1 + xv - x.err) + 2 * _unit(ctx) * abs(v)
    return Real(v, err)


def expm1(x, prec: Precision = DEFAULT_PRECISION) -> Real:
    """exp(x) - 1, accurate for tiny x."""
    x = as_real(x, prec)
    ctx = x.ctx if x.ctx.prec >= prec.ctx.prec else prec.ctx
    xv = ctx.mpf(x.value)
    v = ctx.expm1(xv)
    err = ctx.exp(xv) * ctx.expm1(x.err) + 2 * _unit(ctx) * abs(v)
    return Real(v, err)


def loglog(x, prec: Precision = DEFAULT_PRECISION) -> Real:
    """ln(ln x). Negative for 1 < x < e; callers decide what that means."""
    inner = ln(x, prec)
    if inner.value <= 0:
        raise DomainError("loglog needs x > 1")
    return ln(inner, prec)


def root(x, k: int, prec: Precision = DEFAULT_PRECISION) -> Real:
    """Positive k-th root via exp(ln(x)/k)."""
    return exp(ln(x, prec) / k, prec)


def euler_gamma(prec: Precision = DEFAULT_PRECISION) -> Real:
    ctx = prec.ctx
    v = +ctx.euler
    return Real(v, _unit(ctx) * v)


def exp_gamma(prec: Precision = DEFAULT_PRECISION) -> Real:
    return exp(euler_gamma(prec), prec)


# adaptive comparison ----------------------------------------------------


class Verdict(enum.Enum):
    LESS = "LESS"
    GREATER = "GREATER"
    UNDECIDED = "UNDECIDED"


Computation = Callable[[Precision], Real]


def _as_computation(x) -> Computation:
    if callable(x):
        return x
    return lambda prec: as_real(x, prec)


@dataclass(frozen=True)
class Comparison:
    verdict: Verdict
    lhs: Real
    rhs: Real
    digits: int

    @property
    def margin(self) -> Real:
        """rhs - lhs, positive when LESS."""
        return self.rhs - self.lhs


def compare(lhs, rhs, prec: Precision = DEFAULT_PRECISION) -> Comparison:
    """Compare two recomputable quantities, doubling digits until they separate.

    ``lhs`` and ``rhs`` are callables ``Precision -> Real``; plain numbers and
    fixed Reals are accepted too (they just cannot improve on escalation).
    """
    f, g = _as_computation(lhs), _as_computation(rhs)
    for p in prec.escalations():
        a, b = f(p), g(p)
        gap = b.value - a.value
        if abs(gap) > a.err + b.err:
            verdict = Verdict.LESS if gap > 0 else Verdict.GREATER
            return Comparison(verdict, a, b, p.digits)
    return Comparison(Verdict.UNDECIDED, a, b, p.digits)


def cmp_adaptive(lhs, rhs, prec: Precision = DEFAULT_PRECISION) -> Verdict:
    return compare(lhs, rhs, prec).verdict


def guarded_floor(x, prec: Precision = DEFAULT_PRECISION) -> int:
    """floor of a recomputable quantity; TieError if it sits on an integer."""
    f = _as_computation(x)
    for p in prec.escalations():
        r = f(p)
        k = int(r.ctx.floor(r.value))
        if r.value - k > r.err and (k + 1) - r.value > r.err:
            return k
    raise TieError(f"value {r.nstr(15)} is within {r.ctx.nstr(r.err, 3)} of an integer")
