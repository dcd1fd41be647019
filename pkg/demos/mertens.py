"""
Mertens' product remainder
==========================

R(n) = sum_{p <= n} log(p/(p-1)) - log log n - gamma, against the explicit
bound 0.005586/(log n)^2, claimed only for n > 7 713 133 853;
below that the bound is still printed but not expected to hold.
"""

import sys

from robinlab import mertens_product

ns = [10**k for k in range(3, 9)]
if "--slow" in sys.argv:
    ns.append(8 * 10**9)  # a few minutes

for n in ns:
    r = mertens_product(n, threads=4)
    print(f"n={n:.0e}  R={float(r.remainder):+.4e}  bound={float(r.bound):.4e}  within={r.within_bound}")
