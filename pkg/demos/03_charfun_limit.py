"""Characteristic functions of (V_n, W_n) and their infinitely divisible limit.

The limit has closed form exp(-gamma - Gamma(0, a) - log a) with
a = t^2/2 - iu.  The demo evaluates it three ways and shows the finite-n
characteristic function approaching it.
"""
import numpy as np

from grenander.analytic import (
    charfun_VW_closed_form,
    charfun_VW_finite,
    charfun_VW_limit_quadrature,
    incomplete_gamma_zero,
    levy_exponent_quadrature,
    limit_exponent_quadrature,
)

print("Gamma(0, 1) =", incomplete_gamma_zero(1.0).real)
print("Gamma(0, 3+5i) series vs continued fraction:")
print("  ", incomplete_gamma_zero(3 + 5j, "series"), incomplete_gamma_zero(3 + 5j, "cf"))

t, u = 1.0, 1.0
print(f"\nat (t, u) = ({t}, {u}):")
print("  closed form    ", charfun_VW_closed_form(t, u))
print("  quadrature     ", charfun_VW_limit_quadrature(t, u))
print("  Levy exponent  ", np.exp(levy_exponent_quadrature(t, u)), "(exp of 2-D integral)")
print("  exponent diff  ", abs(levy_exponent_quadrature(t, u) - limit_exponent_quadrature(t, u)))

grid = np.arange(-3, 3.01, 0.5)
print("\nmax over [-3, 3]^2 of |finite n - limit|:")
for n in (10**2, 10**3, 10**4, 10**5):
    err = max(abs(charfun_VW_finite(n, a, b) - charfun_VW_closed_form(a, b)) for a in grid for b in grid)
    print(f"  n = {n:>6}: {err:.5f}   sqrt(n) * err = {np.sqrt(n) * err:.3f}")
