"""Numeric audit of the structural claims about a largest-G counterexample.

Each check returns a :class:`TheoremReport`. ``verdict`` is always the
empirical outcome on the given N. Claims whose hypotheses (an LG number
above 10^(10^13)) cannot hold at desk scale are still evaluated; their
report has ``hypotheses_met=False`` and the unmet hypothesis in ``notes``.
Implication tests (thm10, thm11, thm6_contra and thm7_contra) answer NOT_APPLICABLE when their side conditions or antecedent fail.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .errors import DivisibilityError, DomainError, UndecidedError
from .factored import FactoredNumber, as_factored, log_value, rho, rho_exact
from .numerics import (
    DEFAULT_PRECISION,
    Precision,
    Real,
    Verdict,
    compare,
    exp_gamma,
    guarded_floor,
    ln,
)
from .primes import iter_prime_segments, next_prime, prev_prime

DUSART_2018_THRESHOLD = 89_693
LOG_N_HYPOTHESIS = "13"  # N > 10^(10^13), i.e. log N > 10^13 ln 10
THM8_CONSTANT = "0.00995"
THM9_LOWER_CONSTANT = "0.005587"
THM9_UPPER_CONSTANT = "0.005589"
C_PRINTED = "1.000528"


class Outcome(enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    NOT_APPLICABLE = "NOT_APPLICABLE"
    UNDECIDED = "UNDECIDED"


@dataclass
class TheoremReport:
    theorem_id: str
    verdict: Outcome
    margin: Optional[Real]
    notes: str = ""
    hypotheses_met: bool = True
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def conv(v):
            if isinstance(v, Real):
                return float(v.value)
            if isinstance(v, enum.Enum):
                return v.value
            if isinstance(v, dict):
                return {k: conv(x) for k, x in v.items()}
            return v

        return {
            "theorem": self.theorem_id,
            "verdict": self.verdict.value,
            "margin": None if self.margin is None else float(self.margin.value),
            "hypotheses_met": self.hypotheses_met,
            "notes": self.notes,
            "details": conv(self.details),
        }


def _outcome(v: Verdict, want: Verdict) -> Outcome:
    if v is Verdict.UNDECIDED:
        return Outcome.UNDECIDED
    return Outcome.HOLDS if v is want else Outcome.FAILS


def _log_n(n: FactoredNumber, prec: Precision, log_n: Optional[Real]) -> Real:
    return log_value(n, prec) if log_n is None or log_n.ctx.prec < prec.ctx.prec else log_n


def _lg_hypothesis(log_n: Real, prec: Precision) -> tuple[bool, str]:
    big = Real.exact(10**13, prec) * ln(10, prec)
    met = log_n.value - log_n.err > big.value + big.err
    return met, "" if met else "hypothesis N > 10^(10^13) unmet; empirical probe only"


# exponent curves ------------------------------------------------------------


def L_bound(p_i: int, p_r: int) -> int:
    """floor(log p_r / log p_i): the largest k with p_i^k <= p_r.

    Evaluated in exact integer arithmetic, so no floor tie can arise.
    """
    if p_i > p_r:
        raise DomainError("L_bound needs p_i <= p_r")
    if p_i < 2:
        raise DomainError("p_i must be prime")
    k, power = 0, 1
    while power * p_i <= p_r:
        power *= p_i
        k += 1
    return k


def _floor_log(x: int, base: int) -> int:
    k, power = 0, 1
    while power * base <= x:
        power *= base
        k += 1
    return k


def u_bracket(p_i: int, p_r: int) -> int:
    """The k with ((k+1) p_r)^(1/(k+1)) < p_i <= (k p_r)^(1/k)."""
    if p_i > p_r:
        raise DomainError("u_bracket needs p_i <= p_r")
    k = 1
    while p_i ** (k + 1) <= (k + 1) * p_r:
        k += 1
    return k


def U_bound(p_i: int, p_r: int) -> int:
    """floor(log(k p_r) / log p_i) for the bracket k containing p_i."""
    return _floor_log(u_bracket(p_i, p_r) * p_r, p_i)


def check_exponents(n) -> TheoremReport:
    """L(p_i) <= a_i (lower curve) and a_i <= U(p_i) (upper curve) for all i."""
    n = as_factored(n)
    if n.is_one:
        raise DomainError("check_exponents needs N >= 2")
    p_r = n.largest_prime
    lower_slack = upper_slack = None
    lower_bad, upper_bad = [], []
    for p, a in n.factors:
        lo, hi = L_bound(p, p_r), U_bound(p, p_r)
        ls, us = a - lo, hi - a
        lower_slack = ls if lower_slack is None else min(lower_slack, ls)
        upper_slack = us if upper_slack is None else min(upper_slack, us)
        if ls < 0:
            lower_bad.append(p)
        if us < 0:
            upper_bad.append(p)
    ok = not lower_bad and not upper_bad
    notes = []
    if lower_bad:
        notes.append(f"a_i < L(p_i) at p in {lower_bad[:10]}")
    if upper_bad:
        notes.append(f"a_i > U(p_i) at p in {upper_bad[:10]}")
    return TheoremReport(
        "thm5_exponents",
        Outcome.HOLDS if ok else Outcome.FAILS,
        Real.exact(min(lower_slack, upper_slack)),
        "; ".join(notes),
        details={
            "lower_ok": not lower_bad,
            "upper_ok": not upper_bad,
            "lower_slack": lower_slack,
            "upper_slack": upper_slack,
        },
    )


# G ratios under a single-prime move -------------------------------------------


def _need_exponent_one(n: FactoredNumber, p: int) -> None:
    a = n.exponent(p)
    if a == 0:
        raise DivisibilityError(f"{p} does not divide N")
    if a != 1:
        raise DivisibilityError(f"{p} divides N with exponent {a}, expected 1")


def ratio_div(n, p: int, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> Real:
    """G(N) / G(N/p) for p dividing N exactly once.

    rho(N)/rho(N/p) is the exact local factor 1 + 1/p; the loglogs are
    evaluated at precision.
    """
    n = as_factored(n)
    _need_exponent_one(n, p)
    lnn = _log_n(n, prec, log_n)
    lnp = ln(p, prec)
    rest = lnn - lnp
    if rest.value <= 1:  # N/p < e: log log(N/p) <= 0
        raise DomainError("N/p must be >= 3")
    return Real.exact(Fraction(p + 1, p), prec) * ln(rest, prec) / ln(lnn, prec)


def ratio_mul(n, p: int, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> Real:
    """G(N) / G(N p) for a prime p not dividing N."""
    n = as_factored(n)
    if p in n:
        raise DivisibilityError(f"{p} divides N")
    lnn = _log_n(n, prec, log_n)
    if lnn.value <= 1:
        raise DomainError("N must be >= 3")
    return Real.exact(Fraction(p, p + 1), prec) * ln(lnn + ln(p, prec), prec) / ln(lnn, prec)


def g_beats_div(n, p: int, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> Verdict:
    """GREATER when G(N) > G(N/p), by the direct ratio."""
    n = as_factored(n)
    return compare(lambda q: ratio_div(n, p, q, log_n if q == prec else None), 1, prec).verdict


def g_beats_mul(n, p: int, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> Verdict:
    """GREATER when G(N) > G(N p), by the direct ratio."""
    n = as_factored(n)
    return compare(lambda q: ratio_mul(n, p, q, log_n if q == prec else None), 1, prec).verdict


# the series comparators for N/p and N*p ---------------------------------------


def _series(t, alternating: bool, digits: int, ctx):
    """sum_{k>=1} (+-1)^k t^k / (k+1), with a rigorous error bound.

    Returns (value, err) where err covers truncation and rounding.
    """
    if not 0 < t < 1:
        raise DomainError("series ratio must lie in (0, 1)")
    rel = ctx.mpf(10) ** -(digits - 5)
    total = ctx.zero
    power = ctx.one
    k = 0
    while True:
        k += 1
        power *= t
        term = power / (k + 1)
        total += -term if (alternating and k % 2) else term
        nxt = power * t / (k + 2)
        tail = nxt if alternating else nxt / (1 - t)
        if tail <= rel * abs(total):
            break
    # each term carries at most (k + 2) roundings and each partial sum one more;
    # the absolute terms sum to at most t / (1 - t)
    u = ctx.ldexp(1, 1 - ctx.prec)
    rounding = 2 * (k + 3) * u * t / (1 - t)
    return total, tail + rounding


def _series_real(t: Real, alternating: bool, prec: Precision) -> Real:
    ctx = t.ctx
    v, err = _series(t.value, alternating, prec.digits, ctx)
    # sensitivity to the error in t: |d/dt| <= 1/(1-t)^2 on both series
    hi = t.value + t.err
    if hi >= 1:
        raise DomainError("series ratio not bounded below 1")
    err += t.err / (1 - hi) ** 2
    return Real(v, err)


def lemma1_sides(n, p: int, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None):
    """(p+1) log p (1 + sum t^k/(k+1)) and log N log log N, t = log p / log N."""
    n = as_factored(n)
    _need_exponent_one(n, p)
    lnn = _log_n(n, prec, log_n)
    lnp = ln(p, prec)
    if (lnn - lnp).value <= 1:
        raise DomainError("N/p must be >= 3")
    t = lnp / lnn
    lhs = (p + 1) * lnp * (1 + _series_real(t, False, prec))
    rhs = lnn * ln(lnn, prec)
    return lhs, rhs


def lemma1_holds(n, p: int, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> bool:
    """True iff G(N) > G(N/p), decided through the series condition."""
    n = as_factored(n)
    cmp = compare(
        lambda q: lemma1_sides(n, p, q, log_n if q == prec else None)[0],
        lambda q: lemma1_sides(n, p, q, log_n if q == prec else None)[1],
        prec,
    )
    if cmp.verdict is Verdict.UNDECIDED:
        raise UndecidedError("division series condition undecided at max precision")
    return cmp.verdict is Verdict.LESS


def lemma2_sides(n, p: int, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None):
    """p log p (1 + sum (-1)^k t^k/(k+1)) and log N log log N."""
    n = as_factored(n)
    if p in n:
        raise DivisibilityError(f"{p} divides N")
    lnn = _log_n(n, prec, log_n)
    if lnn.value <= 1:
        raise DomainError("N must be >= 3")
    lnp = ln(p, prec)
    t = lnp / lnn
    if t.value + t.err >= 1:
        raise DomainError("the multiplication series needs p < N")
    lhs = p * lnp * (1 + _series_real(t, True, prec))
    rhs = lnn * ln(lnn, prec)
    return lhs, rhs


def lemma2_holds(n, p: int, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> bool:
    """True iff G(N) > G(N p), decided through the alternating series condition."""
    n = as_factored(n)
    cmp = compare(
        lambda q: lemma2_sides(n, p, q, log_n if q == prec else None)[0],
        lambda q: lemma2_sides(n, p, q, log_n if q == prec else None)[1],
        prec,
    )
    if cmp.verdict is Verdict.UNDECIDED:
        raise UndecidedError("multiplication series condition undecided at max precision")
    return cmp.verdict is Verdict.GREATER


# move gap and the d-thresholds ---------------------------------------------------


@dataclass(frozen=True)
class MoveGap:
    p: int
    log_n: Real
    d_minus: Real  # log N - p - (1/2) log p
    d_plus: Real  # log N - p + (1/2) log p


def move_gap(p: int, log_n: Real, prec: Precision = DEFAULT_PRECISION) -> MoveGap:
    half = ln(p, prec) / 2
    return MoveGap(p, log_n, log_n - p - half, log_n - p + half)


def thm6_lower(p: int, prec: Precision = DEFAULT_PRECISION) -> Real:
    """p + log(p)/2 + 1/2 - 1/(2 log p)."""
    lp = ln(p, prec)
    return p + lp / 2 + Fraction(1, 2) - 1 / (2 * lp)


def thm7_upper(p: int, prec: Precision = DEFAULT_PRECISION) -> Real:
    """p - log(p)/2 + 1/2 - 1/(2 log p) + 1/(log p (log p + 1))."""
    lp = ln(p, prec)
    return p - lp / 2 + Fraction(1, 2) - 1 / (2 * lp) + 1 / (lp * (lp + 1))


def thm10_lower(p: int, prec: Precision = DEFAULT_PRECISION) -> Real:
    """p + log(p)/2 + 1/2 - 1/(2 log p) + 1/(log p (log p + 1))."""
    lp = ln(p, prec)
    return p + lp / 2 + Fraction(1, 2) - 1 / (2 * lp) + 1 / (lp * (lp + 1))


def thm11_upper(p: int, prec: Precision = DEFAULT_PRECISION) -> Real:
    """p - log(p)/2 + 1/2 - 1/(log p + 1)."""
    lp = ln(p, prec)
    return p - lp / 2 + Fraction(1, 2) - 1 / (lp + 1)


# neighbors of log N ------------------------------------------------------------


def prime_below_log(log_n: Real, prec: Precision = DEFAULT_PRECISION) -> int:
    """Largest prime strictly below log N (log N is never an integer)."""
    return prev_prime(guarded_floor(log_n, prec) + 1)


def prime_above_log(log_n: Real, prec: Precision = DEFAULT_PRECISION) -> int:
    """Smallest prime strictly above log N."""
    return next_prime(guarded_floor(log_n, prec))


# single-claim checks -------------------------------------------------------------


def thm2_predicate(n, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> TheoremReport:
    n = as_factored(n)
    lnn = _log_n(n, prec, log_n)
    p_r = n.largest_prime
    cmp = compare(p_r, lnn, prec)
    met, note = _lg_hypothesis(lnn, prec)
    return TheoremReport("thm2", _outcome(cmp.verdict, Verdict.LESS), cmp.margin, note, met, {"p_r": p_r})


def thm3_predicate(n, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> TheoremReport:
    n = as_factored(n)
    lnn = _log_n(n, prec, log_n)
    p_r = n.largest_prime
    if lnn.value < 2:
        return _na("thm3", "no prime below log N", p_r=p_r)
    q = prime_below_log(lnn, prec)
    met, note = _lg_hypothesis(lnn, prec)
    verdict = Outcome.HOLDS if q == p_r else Outcome.FAILS
    return TheoremReport("thm3", verdict, Real.exact(q - p_r, prec), note, met, {"p_r": p_r, "prime_below_logN": q})


def thm6_predicate(n, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> TheoremReport:
    n = as_factored(n)
    lnn = _log_n(n, prec, log_n)
    p = n.largest_prime
    cmp = compare(lambda q: thm6_lower(p, q), lnn, prec)
    met, note = _lg_hypothesis(lnn, prec)
    if p < DUSART_2018_THRESHOLD:
        met, note = False, f"p_r={p} < {DUSART_2018_THRESHOLD}; " + note
    gap = move_gap(p, lnn, prec)
    return TheoremReport(
        "thm6", _outcome(cmp.verdict, Verdict.LESS), cmp.margin, note, met, {"p": p, "d": gap.d_minus}
    )


def thm7_predicate(n, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> TheoremReport:
    n = as_factored(n)
    lnn = _log_n(n, prec, log_n)
    p = prime_above_log(lnn, prec)
    cmp = compare(lnn, lambda q: thm7_upper(p, q), prec)
    met, note = _lg_hypothesis(lnn, prec)
    gap = move_gap(p, lnn, prec)
    return TheoremReport(
        "thm7", _outcome(cmp.verdict, Verdict.LESS), cmp.margin, note, met, {"p": p, "d": gap.d_plus}
    )


def _na(theorem_id: str, why: str, **details) -> TheoremReport:
    return TheoremReport(theorem_id, Outcome.NOT_APPLICABLE, None, why, details=details)


def _div_side_conditions(n: FactoredNumber, lnn: Real, prec: Precision):
    """Shared by thm6 and thm10: p = p_r, exponent 1, p >= 89693, p below log N."""
    p = n.largest_prime
    if n.exponent(p) != 1:
        return p, f"p_r={p} has exponent {n.exponent(p)}"
    if p < DUSART_2018_THRESHOLD:
        return p, f"p_r={p} < {DUSART_2018_THRESHOLD}"
    q = prime_below_log(lnn, prec)
    if q != p:
        return p, f"p_r={p} is not the largest prime below log N (that is {q})"
    return p, None


def _mul_side_conditions(n: FactoredNumber, lnn: Real, prec: Precision):
    """Shared by thm7 and thm11: p = next prime above log N, p not dividing N."""
    if lnn.value <= 1:
        return None, "N < 3"
    p = prime_above_log(lnn, prec)
    if p in n:
        return p, f"prime above log N ({p}) divides N"
    return p, None


def thm10_implication(n, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> TheoremReport:
    """log N > thm10_lower(p) implies G(N) > G(N/p)."""
    n = as_factored(n)
    lnn = _log_n(n, prec, log_n)
    p, why = _div_side_conditions(n, lnn, prec)
    if why:
        return _na("thm10", why, p=p)
    ante = compare(lambda q: thm10_lower(p, q), lnn, prec)
    gap = move_gap(p, lnn, prec)
    if ante.verdict is not Verdict.LESS:
        return _na("thm10", "antecedent log N > bound is false", p=p, d=gap.d_minus, antecedent_margin=ante.margin)
    cons = compare(lambda q: ratio_div(n, p, q, lnn if q == prec else None), 1, prec)
    lemma = lemma1_holds(n, p, prec, lnn)
    return TheoremReport(
        "thm10",
        _outcome(cons.verdict, Verdict.GREATER),
        cons.lhs - 1,
        "",
        _lg_hypothesis(lnn, prec)[0],
        {"p": p, "d": gap.d_minus, "antecedent_margin": ante.margin, "lemma1": lemma},
    )


def thm11_implication(n, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> TheoremReport:
    """p > log N prime, p not dividing N, log N < thm11_upper(p) implies G(N) > G(Np)."""
    n = as_factored(n)
    lnn = _log_n(n, prec, log_n)
    p, why = _mul_side_conditions(n, lnn, prec)
    if why:
        return _na("thm11", why, p=p)
    ante = compare(lnn, lambda q: thm11_upper(p, q), prec)
    gap = move_gap(p, lnn, prec)
    if ante.verdict is not Verdict.LESS:
        return _na("thm11", "antecedent log N < bound is false", p=p, d=gap.d_plus, antecedent_margin=ante.margin)
    cons = compare(lambda q: ratio_mul(n, p, q, lnn if q == prec else None), 1, prec)
    lemma = lemma2_holds(n, p, prec, lnn) if not _p_at_least_n(n, p) else None
    return TheoremReport(
        "thm11",
        _outcome(cons.verdict, Verdict.GREATER),
        cons.lhs - 1,
        "",
        True,
        {"p": p, "d": gap.d_plus, "antecedent_margin": ante.margin, "lemma2": lemma},
    )


def _p_at_least_n(n: FactoredNumber, p: int) -> bool:
    return n.fits(64) and p >= n.to_int(64)


def thm6_contrapositive(n, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> TheoremReport:
    """G(N) > G(N/p) implies log N > thm6_lower(p) (allowing err)."""
    n = as_factored(n)
    lnn = _log_n(n, prec, log_n)
    p, why = _div_side_conditions(n, lnn, prec)
    if why:
        return _na("thm6_contra", why, p=p)
    if g_beats_div(n, p, prec, lnn) is not Verdict.GREATER:
        return _na("thm6_contra", "G(N) > G(N/p) is false", p=p)
    cmp = compare(lambda q: thm6_lower(p, q), lnn, prec)
    ok = cmp.verdict is not Verdict.GREATER
    met, note = _lg_hypothesis(lnn, prec)
    return TheoremReport("thm6_contra", Outcome.HOLDS if ok else Outcome.FAILS, cmp.margin, note, met, {"p": p})


def thm7_contrapositive(n, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> TheoremReport:
    """G(N) > G(Np) implies log N < thm7_upper(p) (allowing err)."""
    n = as_factored(n)
    lnn = _log_n(n, prec, log_n)
    p, why = _mul_side_conditions(n, lnn, prec)
    if why:
        return _na("thm7_contra", why, p=p)
    if g_beats_mul(n, p, prec, lnn) is not Verdict.GREATER:
        return _na("thm7_contra", "G(N) > G(Np) is false", p=p)
    cmp = compare(lnn, lambda q: thm7_upper(p, q), prec)
    ok = cmp.verdict is not Verdict.GREATER
    return TheoremReport("thm7_contra", Outcome.HOLDS if ok else Outcome.FAILS, cmp.margin, "", True, {"p": p})


# G bound and the p_r window ------------------------------------------------------------------


def mertens_partial_product(p_r: int) -> Fraction:
    """prod_{p <= p_r} p/(p-1), exactly."""
    num = den = 1
    for seg in iter_prime_segments(2, p_r):
        ps = seg.tolist()
        num *= math.prod(ps)
        den *= math.prod(q - 1 for q in ps)
    return Fraction(num, den)


def thm8_bound(
    n,
    prec: Precision = DEFAULT_PRECISION,
    log_n: Optional[Real] = None,
    rho_value: Optional[Real] = None,
    product: Optional[Real] = None,
) -> TheoremReport:
    """G(N) < e^gamma + 0.00995/(log log N)^2, plus rho(N) < prod_{p<=p_r} p/(p-1)."""
    n = as_factored(n)
    lnn = _log_n(n, prec, log_n)
    r = rho(n, prec) if rho_value is None else rho_value
    lln = ln(lnn, prec)
    if lln.value <= 0:
        raise DomainError("N must be >= 3")
    g = r / lln
    bound = exp_gamma(prec) + Real.exact(THM8_CONSTANT, prec) / (lln * lln)
    main = compare(g, bound, prec)
    if product is None:
        if len(n) <= 5000:
            exact = rho_exact(n) < mertens_partial_product(n.largest_prime)
            part = Verdict.LESS if exact else Verdict.GREATER
        else:
            part = compare(r, Real.exact(mertens_partial_product(n.largest_prime), prec), prec).verdict
    else:
        part = compare(r, product, prec).verdict
    met, note = _lg_hypothesis(lnn, prec)
    return TheoremReport(
        "thm8",
        _outcome(main.verdict, Verdict.LESS),
        main.margin,
        note,
        met,
        {"G": g, "bound": bound, "part_smaller_than_total": part is Verdict.LESS},
    )


def thm9_check(n, prec: Precision = DEFAULT_PRECISION, log_n: Optional[Real] = None) -> TheoremReport:
    """p_r > log N (1 - 0.005587/log log N); both printed forms of the converse."""
    n = as_factored(n)
    lnn = _log_n(n, prec, log_n)
    p_r = n.largest_prime
    lln = ln(lnn, prec)
    lower = lnn * (1 - Real.exact(THM9_LOWER_CONSTANT, prec) / lln)
    main = compare(lower, p_r, prec)
    lpr = ln(p_r, prec)
    c = Real.exact(THM9_UPPER_CONSTANT, prec) / lpr
    minus = compare(lnn, p_r * (1 - c), prec)
    plus = compare(lnn, p_r * (1 + c), prec)
    met, note = _lg_hypothesis(lnn, prec)
    return TheoremReport(
        "thm9",
        _outcome(main.verdict, Verdict.LESS),
        main.margin,
        note,
        met,
        {
            "upper_minus_form": _outcome(minus.verdict, Verdict.LESS),
            "upper_minus_margin": minus.margin,
            "upper_plus_form": _outcome(plus.verdict, Verdict.LESS),
            "upper_plus_margin": plus.margin,
        },
    )


def thm5_c_constant(prec: Precision = DEFAULT_PRECISION) -> dict:
    """The constant c used in the exponent-bound argument.

    The defining expression 1 - 1/(2 (log 2.3e13)^2) is below 1 while the
    printed decimal is 1.000528; its reciprocal matches the decimal.
    """
    expr = 1 - 1 / (2 * ln(Real.exact(23 * 10**12, prec), prec) ** 2)
    return {"expression": expr, "reciprocal": 1 / expr, "printed": Real.exact(C_PRINTED, prec)}


# aggregate ------------------------------------------------------------------------


IMPLICATION_IDS = ("thm10", "thm11", "thm6_contra", "thm7_contra")


def audit(
    n,
    prec: Precision = DEFAULT_PRECISION,
    log_n: Optional[Real] = None,
    rho_value: Optional[Real] = None,
    product: Optional[Real] = None,
) -> list[TheoremReport]:
    """Every predicate and implication test on one N >= 3."""
    n = as_factored(n)
    lnn = _log_n(n, prec, log_n)
    if lnn.value <= 1:
        raise DomainError("audit needs N >= 3")
    reports = [
        thm2_predicate(n, prec, lnn),
        thm3_predicate(n, prec, lnn),
        check_exponents(n),
        thm6_predicate(n, prec, lnn),
        thm7_predicate(n, prec, lnn),
        thm6_contrapositive(n, prec, lnn),
        thm7_contrapositive(n, prec, lnn),
        thm10_implication(n, prec, lnn),
        thm11_implication(n, prec, lnn),
        thm8_bound(n, prec, lnn, rho_value, product),
        thm9_check(n, prec, lnn),
    ]
    return reports


def implication_failures(reports: list[TheoremReport]) -> list[TheoremReport]:
    """FAILS among the implication tests whose claims apply at any size."""
    return [r for r in reports if r.theorem_id in IMPLICATION_IDS and r.verdict is Outcome.FAILS]


def chain_sweep(
    steps: Optional[int] = None,
    prec: Precision = DEFAULT_PRECISION,
    until_prime: Optional[int] = None,
    min_prime: int = 0,
    full: bool = True,
) -> Iterator[tuple]:
    """Audit CA chain entries, yielding (entry, reports) in chain order.

    Stops after ``steps`` entries or once the largest prime exceeds
    ``until_prime``. Entries below ``min_prime`` are skipped. With
    ``full=False`` only the thm10 and thm11 implication tests run.
    """
    from .ca import iter_chain

    product = Real.exact(1, prec)
    for entry in iter_chain(prec):
        if entry.new_exponent == 1:
            p = entry.added_prime
            product = product * Real.exact(Fraction(p, p - 1), prec)
        if steps is not None and entry.index > steps:
            return
        p_r = entry.N.largest_prime
        if until_prime is not None and p_r > until_prime:
            return
        if entry.log_n.value <= 1 or p_r < min_prime:
            continue
        if full:
            reports = audit(entry.N, prec, entry.log_n, entry.rho, product)
        else:
            reports = [thm10_implication(entry.N, prec, entry.log_n), thm11_implication(entry.N, prec, entry.log_n)]
        yield entry, reports


# constructed instances near the thresholds -----------------------------------------


def smooth_with_log_in(lo: float, hi: float, max_three: int = 200_000) -> FactoredNumber:
    """Some 2^a 3^b with lo < a log 2 + b log 3 < hi (float search)."""
    l2, l3 = math.log(2), math.log(3)
    for b in range(0, max_three):
        rest = lo - b * l3
        if rest < -(hi - lo):
            break
        a = max(0, math.floor(rest / l2) + 1)
        v = a * l2 + b * l3
        if lo < v < hi:
            return FactoredNumber.from_pairs([(2, a), (3, b)], check=False)
    raise DomainError(f"no 2^a 3^b with log in ({lo}, {hi})")


def thm10_instance(p: int, offset: float = 1e-2, prec: Precision = DEFAULT_PRECISION) -> Optional[FactoredNumber]:
    """N = 2^a 3^b p with log N a little above thm10_lower(p).

    Returns None when the next prime after p is too close for p to stay the
    largest prime below log N.
    """
    target = float(thm10_lower(p, prec).value)
    cap = next_prime(p)
    hi = min(target + offset, cap - 1e-6)
    if hi <= target:
        return None
    lp = math.log(p)
    lo = target + offset / 4 if target + offset / 4 < hi else target
    return smooth_with_log_in(lo - lp, hi - lp).mul_prime(p)


def thm11_instance(p: int, offset: float = 1e-2, prec: Precision = DEFAULT_PRECISION) -> Optional[FactoredNumber]:
    """N = 2^a 3^b with log N a little below thm11_upper(p).

    Returns None when the prime before p sits above the window.
    """
    target = float(thm11_upper(p, prec).value)
    floor_ = prev_prime(p)
    lo = max(target - offset, floor_ + 1e-6)
    if lo >= target:
        return None
    hi = target - offset / 4 if target - offset / 4 > lo else target
    return smooth_with_log_in(lo, hi)
