"""Certified numerics for Robin's inequality and colossally abundant numbers."""

from .errors import (
    CapacityError,
    DivisibilityError,
    DomainError,
    NoBracketError,
    PreconditionError,
    RobinLabError,
    TieError,
    UndecidedError,
)
from .factored import FactoredNumber, from_integer, log_value, parse, rho, sigma_exact
from .numerics import DEFAULT_PRECISION, Precision, Real, Verdict, cmp_adaptive, euler_gamma, ln, loglog
from .primes import PrimeTable, dusart_gap_ok, next_prime, prev_prime, sieve_range
from .robin import G, RobinState, exhaustive_scan, mertens_product, robin_holds
from .ca import ca_chain, n_epsilon, solve_xk, thm4_check
from .theorems import Outcome, TheoremReport, audit

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DivisibilityError",
    "DomainError",
    "NoBracketError",
    "PreconditionError",
    "RobinLabError",
    "TieError",
    "UndecidedError",
    "FactoredNumber",
    "from_integer",
    "log_value",
    "parse",
    "rho",
    "sigma_exact",
    "DEFAULT_PRECISION",
    "Precision",
    "Real",
    "Verdict",
    "cmp_adaptive",
    "euler_gamma",
    "ln",
    "loglog",
    "PrimeTable",
    "dusart_gap_ok",
    "next_prime",
    "prev_prime",
    "sieve_range",
    "G",
    "RobinState",
    "exhaustive_scan",
    "mertens_product",
    "robin_holds",
    "ca_chain",
    "n_epsilon",
    "solve_xk",
    "thm4_check",
    "Outcome",
    "TheoremReport",
    "audit",
    "__version__",
]
