"""
Auditing the structural claims
==============================

Every predicate and implication test runs on one number, then along the
chain. Implications whose side conditions fail are reported as
NOT_APPLICABLE; a FAILS there would be a counterexample.
"""

from collections import Counter

from robinlab.theorems import (
    DUSART_2018_THRESHOLD,
    Outcome,
    audit,
    chain_sweep,
    thm10_implication,
    thm10_instance,
    thm11_implication,
    thm11_instance,
)

for r in audit("2^4*3^2*5*7"):
    margin = "" if r.margin is None else f"{float(r.margin.value):+.4g}"
    print(f"{r.theorem_id:16s} {r.verdict.value:15s} {margin:>11s}  {r.notes}")

# along the chain log N stays above p_r, so the division claim never applies;
# the multiplication claim does
tally = Counter()
for entry, reports in chain_sweep(min_prime=DUSART_2018_THRESHOLD, until_prime=95000, full=False):
    for r in reports:
        tally[r.theorem_id, r.verdict] += 1
for (tid, verdict), count in sorted(tally.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
    print(f"chain {tid}: {verdict.value} x{count}")

# constructed 2^a 3^b p with log N just above the thresholds exercise both
p = 100003
n10, n11 = thm10_instance(p, 1e-3), thm11_instance(p, 1e-3)
print(p, thm10_implication(n10).verdict is Outcome.HOLDS, thm11_implication(n11).verdict is Outcome.HOLDS)
