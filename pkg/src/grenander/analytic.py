"""Characteristic functions of the conditioning pair ``(V_n, W_n)``.

``V_n = (S_n - T_n) / sqrt(n)`` and ``W_n = T_n / n``.  The limit law is
infinitely divisible with characteristic function

    phi(t, u) = exp( int_0^1 (exp(-(t^2/2 - iu) y) - 1) / y dy )
              = exp( -gamma - Gamma(0, a) - log a ),   a = t^2/2 - iu.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import integrate

EULER_GAMMA = 0.57721566490153286061
SERIES_RADIUS = 4.0
TAYLOR_CUTOFF = 1e-4
_SQRT2PI = math.sqrt(2.0 * math.pi)


def _fsum_complex(z) -> complex:
    z = np.asarray(z, dtype=complex)
    return complex(math.fsum(z.real), math.fsum(z.imag))


def charfun_VW_finite(n: int, t: float, u: float) -> complex:
    """``E exp(i t V_n + i u W_n)`` for the unconditioned Poisson-gamma model.

    Equals ``exp(sum_j [exp(ij(u/n - t/sqrt n)) (1 - it/sqrt n)^-j - 1] / j)``.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    tau = t / math.sqrt(n)
    base = complex(1.0, -tau)
    # principal log of 1 - i tau; base stays in the right half plane
    assert base.real > 0
    j = np.arange(1, n + 1, dtype=float)
    expo = 1j * j * (u / n - tau) - j * cmath.log(base)
    return cmath.exp(_fsum_complex(np.expm1(expo) / j))


def _limit_integrand(y: float, a: complex) -> complex:
    if y < TAYLOR_CUTOFF:
        ay = a * y
        return -a * (1.0 - ay / 2.0 + ay * ay / 6.0 - ay * ay * ay / 24.0)
    return np.expm1(-a * y) / y


def limit_exponent_quadrature(t: float, u: float) -> complex:
    """``int_0^1 (exp(-(t^2/2 - iu) y) - 1) / y dy`` by adaptive quadrature."""
    a = complex(0.5 * t * t, -u)
    if a == 0:
        return 0j
    opts = dict(epsabs=1e-13, epsrel=1e-13, limit=200)
    re, err_re = integrate.quad(lambda y: _limit_integrand(y, a).real, 0.0, 1.0, **opts)
    im, err_im = integrate.quad(lambda y: _limit_integrand(y, a).imag, 0.0, 1.0, **opts)
    if err_re > 1e-10 or err_im > 1e-10:
        raise ArithmeticError(f"quadrature error estimate too large at (t, u) = ({t}, {u})")
    return complex(re, im)


def charfun_VW_limit_quadrature(t: float, u: float) -> complex:
    return cmath.exp(limit_exponent_quadrature(t, u))


def _e1_series(z: complex) -> complex:
    term = 1 + 0j
    acc = 0j
    k = 0
    while True:
        k += 1
        term *= -z / k
        inc = term / k
        acc += inc
        if abs(inc) < 1e-17 * max(1.0, abs(acc)):
            break
        if k > 500:
            raise ArithmeticError("series for Gamma(0, z) did not converge")
    return -EULER_GAMMA - cmath.log(z) - acc


def _e1_continued_fraction(z: complex) -> complex:
    # E1(z) = exp(-z) / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...))), modified Lentz
    tiny = 1e-300
    b = z + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 2000):
        an = -float(i * i)
        b += 2.0
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h * cmath.exp(-z)
    raise ArithmeticError("continued fraction for Gamma(0, z) did not converge")


def incomplete_gamma_zero(z: complex, method: str = "auto") -> complex:
    """Complementary incomplete gamma ``Gamma(0, z) = E_1(z)`` for ``Re z >= 0``.

    Power series for ``|z| <= 4``, continued fraction beyond.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("Gamma(0, z) is singular at z = 0")
    if z.real < 0:
        raise ValueError("only Re(z) >= 0 is supported")
    if method == "auto":
        method = "series" if abs(z) <= SERIES_RADIUS else "cf"
    if method == "series":
        return _e1_series(z)
    if method == "cf":
        return _e1_continued_fraction(z)
    raise ValueError(f"unknown method {method!r}")


def charfun_VW_closed_form(t: float, u: float) -> complex:
    """``exp(-gamma - Gamma(0, a) - log a)`` with ``a = t^2/2 - iu``; 1 at the origin."""
    a = complex(0.5 * t * t, -u)
    if a == 0:
        return 1 + 0j
    return cmath.exp(-EULER_GAMMA - incomplete_gamma_zero(a) - cmath.log(a))


def levy_density(v: float, w: float) -> float:
    """Density ``phi(v / sqrt w) w^{-3/2}`` of the Levy measure on ``0 < w < 1``."""
    if not 0.0 < w < 1.0:
        return 0.0
    return math.exp(-0.5 * v * v / w) / _SQRT2PI * w**-1.5


def _levy_inner(t: float, u: float, w: float) -> complex:
    # int (e^{i(tv+uw)} - 1 - itv 1{|z|<=1}) phi(v/sqrt w) dv, in units of sqrt(w).
    # With v = sqrt(w) x and pairing +-x, the odd parts (including the
    # compensator) cancel; what is left is written without cancellation:
    # e^{iuw} cos(a) - 1 = (e^{iuw} - 1) cos(a) - 2 sin^2(a/2).
    rw = math.sqrt(w)
    em1 = complex(-2.0 * math.sin(0.5 * u * w) ** 2, math.sin(u * w))

    def f(x, part):
        a = t * rw * x
        val = em1 * math.cos(a) - 2.0 * math.sin(0.5 * a) ** 2
        val *= 2.0 * math.exp(-0.5 * x * x) / _SQRT2PI
        return val.real if part == 0 else val.imag

    opts = dict(epsabs=1e-14, epsrel=1e-12, limit=200)
    re = integrate.quad(f, 0.0, np.inf, args=(0,), **opts)[0]
    im = integrate.quad(f, 0.0, np.inf, args=(1,), **opts)[0]
    return complex(re, im)


def levy_exponent_quadrature(t: float, u: float) -> complex:
    """Two-dimensional quadrature of the Levy-Khintchine exponent against ``levy_density``.

    The ``v`` integral is done numerically at each ``w``; the drift and
    Gaussian parts are zero.
    """
    opts = dict(epsabs=1e-12, epsrel=1e-10, limit=200)
    # density factor w^{-3/2} times sqrt(w) from v = sqrt(w) x
    re = integrate.quad(lambda w: _levy_inner(t, u, w).real / w, 0.0, 1.0, **opts)[0]
    im = integrate.quad(lambda w: _levy_inner(t, u, w).imag / w, 0.0, 1.0, **opts)[0]
    return complex(re, im)


def lk_exponent_check(t: float, u: float) -> float:
    """``|Levy-Khintchine exponent - int_0^1 (e^{-t^2 y/2 + iuy} - 1)/y dy|``."""
    if t == 0 and u == 0:
        return 0.0
    return abs(levy_exponent_quadrature(t, u) - limit_exponent_quadrature(t, u))


def charfun_grid_errors(n: int, ts, us) -> np.ndarray:
    """Rows ``(t, u, |finite - closed|, |quadrature - closed|)`` over a grid."""
    rows = []
    for t in ts:
        for u in us:
            closed = charfun_VW_closed_form(t, u)
            fin = charfun_VW_finite(n, t, u)
            quad = charfun_VW_limit_quadrature(t, u)
            rows.append((t, u, abs(fin - closed), abs(quad - closed)))
    return np.array(rows)
