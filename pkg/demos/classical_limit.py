"""Phi_2(u) at u = 0 for o3 and its classical limit next to phi_{2,2}."""

from yangcenter import AlgebraContext
from yangcenter.central import b_coefficients, build_Phi, make_engine
from yangcenter.classical import classical_limit, segal_sugawara

for ctx in (AlgebraContext(3), AlgebraContext(4, "sp")):
    eng = make_engine(ctx, K=3, D=3)
    print(ctx.label, "b =", [str(b) for b in b_coefficients(ctx, 2)])
    phi = build_Phi(ctx, 2, eng, U=0)
    print("  Phi_2(0) 1     =", phi.coeff(0))
    print("  classical limit =", classical_limit(ctx, phi.coeff(0)))
    print("  phi_22          =", segal_sugawara(ctx, 2)[2])
