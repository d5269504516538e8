"""Compare finite-difference eigenvalues with the closed-form ladders.

Covers the conventional Scarf II / Rosen-Morse I potentials and their type III
extensions.  Usage: python3 scripts/spectra_crosscheck.py [--points N] [--raw]
"""
import argparse
import math
from fractions import Fraction as F

from romext.numerics import eigensolve
from romext.potentials import PotentialSpec, spectrum
from romext.susy import build_extension, extended_spectrum

ap = argparse.ArgumentParser()
ap.add_argument("--points", type=int, default=4000)
ap.add_argument("--raw", action="store_true", help="skip Richardson extrapolation")
args = ap.parse_args()

S2, RM = (-12.0, 12.0), (1e-4, math.pi - 1e-4)
cases = [
    ("Scarf II A=7/2 B=1", PotentialSpec("scarf2", F(7, 2), 1), S2, [E for _, E in spectrum(PotentialSpec("scarf2", F(7, 2), 1))]),
    ("Rosen-Morse I A=2 B=1", PotentialSpec("rm1", 2, 1), RM, [E for _, E in spectrum(PotentialSpec("rm1", 2, 1), 3)]),
]
for fam, A, dom, K in (("scarf2", F(7, 2), S2, 5), ("rm1", F(5, 2), RM, 2)):
    ext = build_extension(fam, A, 1, 2)
    cases.append((f"{fam} extension A={A} B=1 m=2", ext.potential, dom, [E for _, E in extended_spectrum(ext, K)]))

for name, V, dom, exact in cases:
    rep = eigensolve(V, dom, len(exact), args.points, extrapolate=not args.raw).compare([float(e) for e in exact])
    print(f"\n{name}  (grid {rep.grid}, extrapolated={rep.extrapolated})")
    for row in rep.rows():
        print(f"  nu={row['index']:>2}  numeric={row['numeric']: .8f}  exact={row['closed_form']: .8f}  err={row['abs_error']:.1e}")
