"""Why the centrality check needs K >= 3 to say anything.

Modulo h^2 the trace series is a constant multiple of the vacuum, so every
annihilation mode kills it at any level. From h^2 on the level matters: the
critical level still gives zero, level 0 does not.
"""

from fractions import Fraction

from yangcenter import AlgebraContext
from yangcenter.central import build_T_plus, centrality_control, make_engine, verify_centrality

o3 = AlgebraContext(3)

for K, D, U in ((2, 3, 2), (3, 3, 1)):
    eng = make_engine(o3, K=K, D=D)
    T = build_T_plus(o3, 1, eng, U=U)
    print(f"K={K} D={D} U={U}: T+_1(u) 1 =")
    for up, el in sorted(T.coeffs.items()):
        print(f"  u^{up}: {el}")
    crit = verify_centrality(o3, 1, eng, U=U)
    ctrl = centrality_control(o3, 1, level=Fraction(0), K=K, D=D, U=U)
    print(f"  critical level: {crit['status']} over {crit['checked']} coefficients")
    print(f"  level 0 control: {ctrl['status']}, witness {ctrl['witness']}")
