"""
The colossally abundant chain
=============================

Each step multiplies by the prime whose next exponent has the largest
critical eps F(p, a+1). G climbs to 5040, the last Robin violation, then
falls below e^gamma and stays there.
"""

import numpy as np

from robinlab import ca_chain, solve_xk
from robinlab.numerics import exp_gamma, ln

chain = ca_chain(60)
for e in chain[:12]:
    g = float(e.rho / ln(e.log_n)) if e.log_n.value > 1 else float("nan")
    print(f"{e.index:3d}  {str(e.N):28s}  eps={float(e.critical_eps):.6f}  G={g:.6f}")

gs = np.array([float(e.rho / ln(e.log_n)) for e in chain[8:]])
print(f"max G after 5040: {gs.max():.6f} < e^gamma = {float(exp_gamma()):.6f}")

# breakpoints x_k for one eps: x_1 > x_2 > ... and exponent a_p = #{k: p <= x_k}
eps = chain[40].critical_eps
xs = [float(solve_xk(eps, k)) for k in range(1, 8)]
print("x_k:", ", ".join(f"{x:.4f}" for x in xs))
print("N at that eps:", chain[40].N)
