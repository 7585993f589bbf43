"""Integral functionals ``mu(h, f) = int_0^1 h(f(x)) dx`` of the Grenander estimator.

The standardisation used throughout is::

    U = (n * (mu(h, f_n) - h(1)) - h''(1)/2 * log n) / b_n,
    b_n = sqrt(3/4 * h''(1)**2 * log n)

which, for uniform data, is asymptotically N(0, 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .estimator import StepDensity, as_sample, grenander

FD_STEP = 1e-5
FD_TOL = 1e-6


@dataclass(frozen=True)
class FunctionalSpec:
    """An analytic ``h`` on the right half plane with its first two derivatives.

    ``h``, ``dh`` and ``d2h`` must accept complex arguments (numpy ufunc
    semantics).  ``h_at_zero`` is the value ``h(0+)`` charged to intervals
    where the density is 0; leave it ``None`` to evaluate ``h(0)`` directly.

    ``growth_declared`` records the caller's claim that
    ``|h(1 - it)| = O(t**2)`` and ``|h''(1 - it)| = O(1)`` as ``|t| -> oo``.
    Those are asymptotic statements and are not checked here.
    """

    h: Callable
    dh: Callable
    d2h: Callable
    name: str = "custom"
    h_at_zero: float | None = None
    growth_declared: bool = False
    h1: float = field(init=False)
    dh1: float = field(init=False)
    d2h1: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "h1", _real(self.h(1.0 + 0j)))
        object.__setattr__(self, "dh1", _real(self.dh(1.0 + 0j)))
        object.__setattr__(self, "d2h1", _real(self.d2h(1.0 + 0j)))
        if self.d2h1 == 0.0:
            raise ValueError("h''(1) must be nonzero")
        for x in (0.5, 1.0, 2.0):
            fd1 = (self.h(x + FD_STEP) - self.h(x - FD_STEP)) / (2 * FD_STEP)
            fd2 = (self.dh(x + FD_STEP) - self.dh(x - FD_STEP)) / (2 * FD_STEP)
            if abs(self.dh(x) - fd1) > FD_TOL or abs(self.d2h(x) - fd2) > FD_TOL:
                raise ValueError(f"supplied derivatives of {self.name!r} fail the finite-difference check at x={x}")

    def zero_value(self) -> float:
        if self.h_at_zero is not None:
            return float(self.h_at_zero)
        with np.errstate(all="ignore"):
            v = complex(self.h(0.0 + 0j))
        if not np.isfinite(v):
            raise ValueError(f"h is singular at 0; set h_at_zero for {self.name!r}")
        return v.real


def _real(z) -> float:
    z = complex(z)
    if abs(z.imag) > 1e-12 * max(1.0, abs(z.real)):
        raise ValueError("h must be real on the positive real axis")
    return z.real


def _xlogx(z):
    return z * np.log(z)


L2 = FunctionalSpec(
    h=lambda z: (z - 1) ** 2,
    dh=lambda z: 2 * (z - 1),
    d2h=lambda z: 2 + 0 * z,
    name="l2",
    h_at_zero=1.0,
    growth_declared=True,
)

ENTROPY = FunctionalSpec(
    h=_xlogx,
    dh=lambda z: 1 + np.log(z),
    d2h=lambda z: 1 / z,
    name="entropy",
    h_at_zero=0.0,
    growth_declared=True,
)

BUILTIN = {"l2": L2, "entropy": ENTROPY}


def get_functional(name: str) -> FunctionalSpec:
    try:
        return BUILTIN[name]
    except KeyError:
        raise ValueError(f"unknown functional {name!r}; choose from {sorted(BUILTIN)}") from None


@dataclass(frozen=True)
class StatisticValue:
    raw: float
    standardized: float
    n: int


def scale_b(spec: FunctionalSpec, n: int) -> float:
    """``b_n = sqrt(3/4 h''(1)^2 log n)``."""
    return math.sqrt(0.75 * spec.d2h1**2 * math.log(n))


def standardize(spec: FunctionalSpec, raw: float, n: int) -> float:
    if n < 2:
        raise ValueError("standardisation needs n >= 2")
    return (n * (raw - spec.h1) - 0.5 * spec.d2h1 * math.log(n)) / scale_b(spec, n)


def integral_functional(spec: FunctionalSpec, d: StepDensity) -> float:
    """``sum_i h(f_i) * (xi_i - xi_{i-1})``; zero levels use ``h(0+)``."""
    lv = d.levels
    sp = d.spacings
    pos = lv > 0
    vals = np.asarray(spec.h(lv[pos].astype(complex)), dtype=complex)
    total = np.dot(vals, sp[pos])
    if abs(total.imag) > 1e-12 * max(1.0, abs(total.real)):
        raise ValueError("functional has a non-negligible imaginary part")
    out = total.real
    if np.any(~pos):
        out += spec.zero_value() * sp[~pos].sum()
    return float(out)


def block_sum_statistic(spec: FunctionalSpec, sizes, spacings, n: int) -> float:
    """Standardised block sum

    ``(sum_i [(h(J_i/S_i) - h(1)) S_i + h'(1) (S_i - J_i)] - h''(1)/2 log n) / b_n``

    for block sizes ``J_i`` and scaled spacings ``S_i = n D_i``.
    """
    J = np.asarray(sizes, dtype=float)
    S = np.asarray(spacings, dtype=float)
    if np.any(S <= 0):
        raise ValueError("spacings must be positive")
    hv = np.asarray(spec.h((J / S).astype(complex)), dtype=complex).real
    terms = (hv - spec.h1) * S + spec.dh1 * (S - J)
    return (math.fsum(terms) - 0.5 * spec.d2h1 * math.log(n)) / scale_b(spec, n)


def functional_statistic(spec: FunctionalSpec, sample) -> StatisticValue:
    s = as_sample(sample)
    if s.n < 2:
        raise ValueError("need n >= 2")
    raw = integral_functional(spec, grenander(s))
    return StatisticValue(raw, standardize(spec, raw, s.n), s.n)


def l2_statistic(sample) -> StatisticValue:
    """``int (f_n - 1)^2``, standardised as ``(n raw - log n) / sqrt(3 log n)``."""
    return functional_statistic(L2, sample)


def entropy_statistic(sample) -> StatisticValue:
    """``int f_n log f_n``, standardised as ``(n raw - log(n)/2) / sqrt(3/4 log n)``."""
    return functional_statistic(ENTROPY, sample)


def standardize_jumps(m: float, n: int) -> float:
    return (m - math.log(n)) / math.sqrt(math.log(n))


def jump_count_statistic(sample) -> StatisticValue:
    """Number of jumps ``m`` of the estimator, standardised by ``log n``.

    The drop to the zero level at ``X_(n) < 1`` counts as a jump, so for
    continuous data ``m`` equals the number of LCM blocks.
    """
    s = as_sample(sample)
    if s.n < 2:
        raise ValueError("need n >= 2")
    m = grenander(s).n_jumps
    return StatisticValue(float(m), standardize_jumps(m, s.n), s.n)
