"""Sturm-count the denominator polynomial g over a parameter sweep.

Even m must give zero real roots; odd m is shown as a negative control.
"""
from fractions import Fraction as F

from romext.polyreal import count_real_roots
from romext.susy import denominator_polynomial

As = [F(3, 2), F(5, 2), F(7, 2), F(7, 3)]
Bs = [F(1, 2), F(1), F(2)]
print(f"{'family':8} {'m':>2} {'A':>5} {'B':>4}  deg  real roots")
for m in (1, 2, 3, 4):
    for fam in ("scarf2", "rm1"):
        for A in As:
            if fam == "rm1" and (A <= F(m - 1, 2) or A == m):
                continue
            for B in Bs:
                g, _ = denominator_polynomial(fam, A, B, m)
                n = count_real_roots(g).count
                flag = "" if (n == 0) == (m % 2 == 0) else "  <-- unexpected"
                print(f"{fam:8} {m:>2} {str(A):>5} {str(B):>4}  {g.degree:>3}  {n}{flag}")
