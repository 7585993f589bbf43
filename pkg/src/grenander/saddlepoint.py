"""Cauchy coefficient extraction and saddle-point evaluation of ``phi_nj``.

``phi_nj(s, t)`` is the characteristic function of one Poisson-gamma block
of size ``j`` in the standardised functional and the ``V_n`` coordinate::

    phi_nj(s, t) = j^j / Gamma(j) * int_0^oo exp(j f(x)) / x dx,
    f(z) = is {(h(1/z) - h(1)) z + h'(1)(z - 1)} / b_n + it (z - 1) / c_n - z + log z

with ``b_n = sqrt(3/4 h''(1)^2 log n)`` and ``c_n = sqrt(n)`` (``c_n = 1`` in
``unit`` mode, used for large ``|t|``).
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special, stats

from .functionals import FunctionalSpec, scale_b

SERIES_MAX_DEGREE = 10_000
SADDLE_MAX_ITER = 100
SADDLE_MAX_CONTRACTION = 0.9
SADDLE_TOL = 1e-12


class SaddlePointError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ComplexSeries:
    """Truncated power series; ``coeffs[k]`` is the coefficient of ``z**k``."""

    coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]


def _csum(z: np.ndarray) -> complex:
    return complex(math.fsum(z.real), math.fsum(z.imag))


def series_exp(p) -> ComplexSeries:
    """``exp(P(z))`` for a series ``P`` with ``P(0) = 0``.

    Uses ``k a_k = sum_{m=1}^k m p_m a_{k-m}`` with exactly rounded sums.
    """
    p = np.asarray(p, dtype=complex)
    if p.size == 0 or p[0] != 0:
        raise ValueError("need P(0) = 0")
    N = p.size - 1
    mp = np.arange(N + 1) * p
    a = np.zeros(N + 1, dtype=complex)
    a[0] = 1.0
    for k in range(1, N + 1):
        a[k] = _csum(mp[1 : k + 1] * a[k - 1 :: -1]) / k
    return ComplexSeries(a)


def series_exp_partial_log(delta: complex, N: int) -> ComplexSeries:
    """Coefficients of ``exp(delta * sum_{j=1}^N z^j / j)`` up to degree ``N``."""
    if N < 0:
        raise ValueError("N >= 0 required")
    if N > SERIES_MAX_DEGREE:
        raise ValueError(f"degree capped at {SERIES_MAX_DEGREE}")
    p = np.zeros(N + 1, dtype=complex)
    p[1:] = delta / np.arange(1, N + 1)
    return series_exp(p)


def binomial_products(delta: complex, n: int) -> np.ndarray:
    """``prod_{j=1}^k (1 + (delta - 1)/j)`` for ``k = 0..n``, i.e. ``(-1)^k binom(-delta, k)``."""
    if n > SERIES_MAX_DEGREE:
        raise ValueError(f"n capped at {SERIES_MAX_DEGREE}")
    j = np.arange(1, n + 1)
    return np.r_[1.0 + 0j, np.cumprod(1.0 + (complex(delta) - 1.0) / j)]


def cauchy_coefficient_identity(delta: complex, n: int) -> tuple[complex, complex]:
    """Coefficient of ``z^n`` in ``exp(delta sum_{j<=n} z^j/j)`` (series side)
    and in ``(1 - z)^-delta`` (product side)."""
    if n < 1:
        raise ValueError("n >= 1 required")
    lhs = complex(series_exp_partial_log(delta, n)[n])
    rhs = complex(binomial_products(delta, n)[n])
    return lhs, rhs


def jump_count_charfun(n: int, s: float) -> complex:
    """``E{exp(is U_n) | T_n = n}`` with ``U_n = (sum N_j - log n)/sqrt(log n)``, exactly.

    Cauchy's formula turns the conditional expectation into the coefficient
    ``prod_j (1 + (delta - 1)/j)`` with ``delta = exp(is/b)``, ``b = sqrt(log n)``.
    """
    b = math.sqrt(math.log(n))
    delta = cmath.exp(1j * s / b)
    j = np.arange(1, n + 1)
    return cmath.exp(-1j * s * b + _csum(np.log(1.0 + (delta - 1.0) / j)))


@dataclass(frozen=True)
class PhaseContext:
    n: int
    s: float
    t: float
    spec: FunctionalSpec
    mode: str = "scaled"

    def __post_init__(self):
        if self.mode not in ("scaled", "unit"):
            raise ValueError("mode must be 'scaled' or 'unit'")
        if self.n < 2:
            raise ValueError("n >= 2 required")

    @property
    def bn(self) -> float:
        return scale_b(self.spec, self.n)

    @property
    def cn(self) -> float:
        return math.sqrt(self.n) if self.mode == "scaled" else 1.0


def _check_half_plane(z: complex) -> complex:
    z = complex(z)
    if z.real <= 0:
        raise ValueError("phase is defined on Re(z) > 0 only")
    return z


def z0(ctx: PhaseContext) -> complex:
    """Approximate saddle ``(1 - it/c_n)^-1``."""
    return 1.0 / complex(1.0, -ctx.t / ctx.cn)


def phase(ctx: PhaseContext, z: complex) -> complex:
    z = _check_half_plane(z)
    sp = ctx.spec
    a = (complex(sp.h(1 / z)) - sp.h1) * z + sp.dh1 * (z - 1)
    return 1j * ctx.s * a / ctx.bn + 1j * ctx.t * (z - 1) / ctx.cn - z + cmath.log(z)


def phase_derivative(ctx: PhaseContext, z: complex) -> complex:
    z = _check_half_plane(z)
    sp = ctx.spec
    w = 1 / z
    is_b = 1j * ctx.s / ctx.bn
    return (
        is_b * (complex(sp.h(w)) - sp.h1)
        - is_b * complex(sp.dh(w)) / z
        + is_b * sp.dh1
        + 1j * ctx.t / ctx.cn
        - 1
        + w
    )


def phase_second_derivative(ctx: PhaseContext, z: complex) -> complex:
    z = _check_half_plane(z)
    b = ctx.bn
    return (-b * z + 1j * ctx.s * complex(ctx.spec.d2h(1 / z))) / (b * z**3)


def _g(ctx: PhaseContext, z: complex) -> complex:
    sp = ctx.spec
    w = 1 / z
    is_b = 1j * ctx.s / ctx.bn
    inner = 1 + is_b * ((complex(sp.h(w)) - sp.h1) * z - complex(sp.dh(w)) + sp.dh1 * z)
    return inner / complex(1.0, -ctx.t / ctx.cn)


def _g_prime(ctx: PhaseContext, z: complex) -> complex:
    sp = ctx.spec
    w = 1 / z
    is_b = 1j * ctx.s / ctx.bn
    d = complex(sp.h(w)) - sp.h1 - complex(sp.dh(w)) / z + complex(sp.d2h(w)) / z**2 + sp.dh1
    return is_b * d / complex(1.0, -ctx.t / ctx.cn)


def solve_saddle(ctx: PhaseContext) -> complex:
    """Fixed point of ``z = g_n(z)`` (equivalently ``f'(z) = 0``) started at ``z0``."""
    z = z0(ctx)
    contraction = abs(_g_prime(ctx, z))
    if contraction >= SADDLE_MAX_CONTRACTION:
        raise SaddlePointError(f"iteration does not contract at z0: |g'(z0)| = {contraction:.3g}")
    for _ in range(SADDLE_MAX_ITER):
        z_new = _g(ctx, z)
        if z_new.real <= 0 or not cmath.isfinite(z_new):
            raise SaddlePointError(f"iteration left the right half plane (|g'(z0)| = {contraction:.3g})")
        z = z_new
        if abs(phase_derivative(ctx, z)) < SADDLE_TOL:
            return z
    raise SaddlePointError(f"no convergence in {SADDLE_MAX_ITER} steps (|g'(z0)| = {contraction:.3g})")


def _block_phase_real(ctx: PhaseContext, x: float) -> float:
    # imaginary part of f(x) for real x > 0, divided by nothing: f = i*this - x + log x
    sp = ctx.spec
    a = (complex(sp.h(1 / x)).real - sp.h1) * x + sp.dh1 * (x - 1)
    return ctx.s * a / ctx.bn + ctx.t * (x - 1) / ctx.cn


def phi_quadrature(ctx: PhaseContext, j: int, tail: float = 1e-16) -> complex:
    """``phi_nj`` by integrating along the positive real axis against the Gamma(j, 1/j) density."""
    if j < 1:
        raise ValueError("j >= 1 required")
    dist = stats.gamma(j, scale=1.0 / j)
    lo, hi = float(dist.ppf(tail)), float(dist.isf(tail))
    logc = j * math.log(j) - special.gammaln(j)

    def dens(x):
        return math.exp(logc + (j - 1) * math.log(x) - j * x)

    def re(x):
        return dens(x) * math.cos(j * _block_phase_real(ctx, x))

    def im(x):
        return dens(x) * math.sin(j * _block_phase_real(ctx, x))

    pts = [p for p in (1.0,) if lo < p < hi]
    opts = dict(epsabs=1e-14, epsrel=1e-12, limit=1000, points=pts or None)
    # quad's own warnings are superseded by the explicit error check below
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        r, er = integrate.quad(re, lo, hi, **opts)
        i, ei = integrate.quad(im, lo, hi, **opts)
    if er > 1e-11 or ei > 1e-11:
        raise ArithmeticError(f"phi_quadrature accuracy target not met (j={j}, err={max(er, ei):.2g})")
    return complex(r, i)


def gamma_block_charfun(ctx: PhaseContext, j: int) -> complex:
    """Exact ``phi_nj`` for ``s = 0``: ``e^{-ijt/c}(1 - it/c)^{-j}``."""
    tau = ctx.t / ctx.cn
    return cmath.exp(-1j * j * tau - j * cmath.log(complex(1.0, -tau)))


def axis_factor(ctx: PhaseContext, z: complex) -> complex:
    """Unit vector along the steepest-descent axis, argument ``pi/2 - arg f''(z) / 2``.

    The sign is chosen so the axis points in the direction of increasing ``x``.
    """
    alpha = cmath.exp(1j * (0.5 * math.pi - 0.5 * cmath.phase(phase_second_derivative(ctx, z))))
    return -alpha if alpha.real < 0 else alpha


def phi_saddle(ctx: PhaseContext, j: int, at: str = "z0") -> complex:
    """Gaussian saddle-point approximation of ``phi_nj``.

    ``alpha e^{j (f(z) + 1)} / (z sqrt|f''(z)|)``, which combines the Laplace
    formula with Stirling's ``j^j / Gamma(j) ~ e^j sqrt(j / 2 pi)``.  The point
    ``z`` is ``z0`` by default, or the exact saddle with ``at="saddle"``.
    """
    if j < 1:
        raise ValueError("j >= 1 required")
    z = z0(ctx) if at == "z0" else solve_saddle(ctx)
    f2 = phase_second_derivative(ctx, z)
    alpha = axis_factor(ctx, z)
    return alpha * cmath.exp(j * (phase(ctx, z) + 1)) / (z * math.sqrt(abs(f2)))


def phi_expansion(ctx: PhaseContext, j: int) -> complex:
    """Leading-order expansion ``exp(-j t^2 / 2n) {1 + is h''(1)/(2 b) - 3 s^2 h''(1)^2 / (8 b^2)}``."""
    b = ctx.bn
    c2 = ctx.spec.d2h1
    return math.exp(-j * ctx.t**2 / (2 * ctx.n)) * (1 + 1j * ctx.s * c2 / (2 * b) - 3 * ctx.s**2 * c2**2 / (8 * b * b))


def alpha_simplified(ctx: PhaseContext) -> complex:
    """Axis factor to first order in ``1/b_n``: ``exp(is h''(1) / (2 b_n))``."""
    return cmath.exp(1j * ctx.s * ctx.spec.d2h1 / (2 * ctx.bn))


def phase_expansion_constant(ctx: PhaseContext) -> float:
    """``n b_n |f(z0) + 1 + t^2/(2n)|``: bounded in ``n`` when the expansion holds."""
    return ctx.n * ctx.bn * abs(phase(ctx, z0(ctx)) + 1 + ctx.t**2 / (2 * ctx.n))


def saddle_error_rows(spec: FunctionalSpec, n: int, s_values, t_values, j_values):
    """Rows ``(j, s, t, n, |quad|, |saddle|, rel_error)``."""
    rows = []
    for s in s_values:
        for t in t_values:
            ctx = PhaseContext(n, s, t, spec)
            for j in j_values:
                q = phi_quadrature(ctx, j)
                a = phi_saddle(ctx, j)
                rows.append((j, s, t, n, abs(q), abs(a), abs(a / q - 1)))
    return rows
