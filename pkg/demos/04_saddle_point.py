"""Cauchy coefficient extraction and the saddle-point approximation of phi_nj.

Part one: the coefficient of z^n in exp(delta sum z^j/j) equals the product
prod (1 + (delta - 1)/j), computed two independent ways.

Part two: phi_nj, the characteristic function of one block's contribution,
is a gamma integral.  Its Gaussian saddle-point approximation improves as
the block size j grows; an exact quadrature along the real axis is the
reference.
"""
from grenander.functionals import L2
from grenander.saddlepoint import (
    PhaseContext,
    alpha_simplified,
    axis_factor,
    cauchy_coefficient_identity,
    phi_quadrature,
    phi_saddle,
    solve_saddle,
    z0,
)

for delta in (0.5, 2.0, 1 + 1j):
    lhs, rhs = cauchy_coefficient_identity(delta, 500)
    print(f"delta={delta}: series {lhs:.6g}  product {rhs:.6g}  rel err {abs(lhs - rhs) / abs(rhs):.1e}")

ctx = PhaseContext(n=10**6, s=1.0, t=1.0, spec=L2)
print(f"\nn={ctx.n}, s={ctx.s}, t={ctx.t}, h(z)=(z-1)^2")
print("z0 =", z0(ctx), "   exact saddle =", solve_saddle(ctx))
print("axis factor:", axis_factor(ctx, z0(ctx)), "  first-order form:", alpha_simplified(ctx))
print(f"\n{'j':>5} {'quadrature':>28} {'saddle':>28} {'rel err':>9}")
for j in (10, 30, 100, 300, 1000):
    q, a = phi_quadrature(ctx, j), phi_saddle(ctx, j)
    print(f"{j:>5} {q:>28.10f} {a:>28.10f} {abs(a / q - 1):9.2e}")
