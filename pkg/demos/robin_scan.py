"""
Scanning Robin's inequality
===========================

sigma(n) < e^gamma n log log n fails for 26 integers up to 5040 and for
none after it. A segmented divisor-sum sieve checks every n up to a limit.
"""

import time

from robinlab import G, exhaustive_scan
from robinlab.numerics import exp_gamma
from robinlab.robin import naive_violations

LIMIT = 10**6

t0 = time.perf_counter()
bad = exhaustive_scan(LIMIT)
print(f"violations up to {LIMIT}: {len(bad)} in {time.perf_counter() - t0:.2f}s")
print(bad)

# the sieve agrees with per-n divisor enumeration on a smaller range
assert naive_violations(10**4) == [n for n in bad if n <= 10**4]

# G(n) = sigma(n)/(n log log n) against e^gamma for the last few
print(f"e^gamma = {float(exp_gamma()):.10f}")
for n in bad[-4:] + [5041, 10080, 55440]:
    print(f"G({n}) = {float(G(n)):.10f}")
