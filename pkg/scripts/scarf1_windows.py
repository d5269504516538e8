"""Print the Scarf I seed report (verdicts, types, endpoint behaviour) on a grid."""
import sys
from fractions import Fraction as F

from romext.susy import scarf1_seed_report

m = int(sys.argv[1]) if len(sys.argv) > 1 else 2
for A in (2, 3, 4, 6):
    for B in (F(1, 2), 1, F(3, 2)):
        print(f"A={A} B={B} m={m}")
        for s in scarf1_seed_report(A, B, m):
            verdict = f"type {s.type_label}" if s.admissible else "rejected"
            print(f"  kind {s.kind}: E={s.energy!s:>8}  {verdict:9} ends={s.endpoints}  {s.reason}")
