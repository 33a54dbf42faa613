"""The braiding on T+_1(u) 1 (x) T+_1(v) 1 for a few levels.

At K = 6, D = 5 the check sees a few hundred coefficients; only the critical
level leaves the input unchanged.
"""

from fractions import Fraction

from yangcenter import AlgebraContext
from yangcenter.central import verify_smap_fixed

for level in (None, Fraction(0), Fraction(1)):
    ctx = AlgebraContext(3, level=level, K=6, D=5, M=8)
    rep = verify_smap_fixed(ctx)
    print(f"level {rep['level']}: {rep['status']} ({rep['checked']} coefficients) witness {rep['witness']}")
