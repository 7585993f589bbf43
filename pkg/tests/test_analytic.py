import cmath
import math

import mpmath
import numpy as np
import pytest
from scipy import integrate, special

from grenander.analytic import (
    EULER_GAMMA,
    charfun_grid_errors,
    charfun_VW_closed_form,
    charfun_VW_finite,
    charfun_VW_limit_quadrature,
    incomplete_gamma_zero,
    levy_density,
    limit_exponent_quadrature,
    lk_exponent_check,
)
from grenander.representation import sample_VW


def e1_alternating(x, terms=80):
    """Gamma(0, x) for real x > 0 from the alternating series in exact rationals."""
    from fractions import Fraction

    s, term = Fraction(0), Fraction(1)
    for k in range(1, terms):
        term *= Fraction(-1) * Fraction(x) / k
        s += term / k
    return -EULER_GAMMA - math.log(x) - float(s)


def test_gamma0_at_one():
    assert incomplete_gamma_zero(1.0).real == pytest.approx(0.2193839, abs=1e-7)
    assert incomplete_gamma_zero(1.0).real == pytest.approx(e1_alternating(1), rel=1e-14)
    assert incomplete_gamma_zero(1.0).real == pytest.approx(special.exp1(1.0), rel=1e-14)


def test_gamma0_large_real():
    z = 20.0
    assert abs(incomplete_gamma_zero(z) / (math.exp(-z) / z) - 1) < 0.1
    assert incomplete_gamma_zero(z).real == pytest.approx(special.exp1(z), rel=1e-12)


def test_gamma0_overlap_ring():
    for r in (3.0, 3.5, 4.0, 4.5, 5.0):
        for theta in np.linspace(-math.pi / 2, math.pi / 2, 13):
            z = cmath.rect(r, theta)
            if z.real < 0:
                z = complex(0.0, z.imag)
            a = incomplete_gamma_zero(z, method="series")
            b = incomplete_gamma_zero(z, method="cf")
            assert abs(a - b) < 1e-10 * abs(b)


def test_gamma0_against_mpmath():
    rng = np.random.default_rng(0)
    for _ in range(200):
        z = complex(rng.uniform(0, 15), rng.uniform(-30, 30))
        ref = complex(mpmath.expint(1, z))
        assert abs(incomplete_gamma_zero(z) - ref) < 1e-10 * abs(ref)


def test_gamma0_guards():
    with pytest.raises(ValueError):
        incomplete_gamma_zero(0)
    with pytest.raises(ValueError):
        incomplete_gamma_zero(-1 + 1j)


def test_limit_charfun_values():
    assert charfun_VW_limit_quadrature(0, 0) == 1
    expected = math.exp(-EULER_GAMMA - special.exp1(1.0))
    assert charfun_VW_limit_quadrature(math.sqrt(2), 0).real == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.450859, abs=1e-6)
    assert limit_exponent_quadrature(math.sqrt(2), 0).real == pytest.approx(-0.796600, abs=1e-6)
    assert charfun_VW_closed_form(math.sqrt(2), 0).real == pytest.approx(expected, abs=1e-12)
    assert charfun_VW_closed_form(0, 0) == 1


def test_conjugate_symmetry():
    for t, u in [(1, 2), (0.3, -4), (2.5, 0.7)]:
        a, b = charfun_VW_limit_quadrature(t, u), charfun_VW_limit_quadrature(t, -u)
        assert abs(a - b.conjugate()) < 1e-13
        assert abs(charfun_VW_finite(500, t, u) - charfun_VW_finite(500, -t, -u).conjugate()) < 1e-13


def test_quadrature_vs_closed_form_grid():
    g = np.arange(-5, 6, dtype=float)
    rows = charfun_grid_errors(100, g, g)
    assert rows[:, 3].max() < 1e-8
    for t in g:
        for u in g:
            assert abs(charfun_VW_closed_form(t, u)) <= 1 + 1e-12
            assert abs(charfun_VW_finite(100, t, u)) <= 1 + 1e-12


def test_finite_charfun_origin_and_u0():
    for n in (1, 10, 1000):
        assert charfun_VW_finite(n, 0, 0) == 1
    # with u = 0 and n = 1 the exponent is exp(-it)/(1 - it) - 1
    t = 0.7
    assert charfun_VW_finite(1, t, 0) == pytest.approx(cmath.exp(cmath.exp(-1j * t) / (1 - 1j * t) - 1))


def test_finite_charfun_monte_carlo():
    n, reps, t, u = 10**4, 10**6, 1.0, 1.0
    V, W = sample_VW(n, reps, np.random.default_rng(1))
    z = np.exp(1j * (t * V + u * W))
    emp = z.mean()
    se = math.sqrt(np.var(z.real) / reps + np.var(z.imag) / reps)
    assert abs(emp - charfun_VW_finite(n, t, u)) < 3 * se


def test_levy_density():
    assert levy_density(0, 0.25) == pytest.approx(8 / math.sqrt(2 * math.pi))
    assert levy_density(0, 0.25) == pytest.approx(3.1915, abs=1e-4)
    assert levy_density(0.3, 0.5) == levy_density(-0.3, 0.5)
    assert levy_density(0.1, 1.0) == 0.0 and levy_density(0.1, -0.1) == 0.0


def test_gaussian_reduction():
    w, t = 0.5, 1.0
    re = integrate.quad(lambda v: math.cos(t * v) * levy_density(v, w) * w, -np.inf, np.inf)[0]
    im = integrate.quad(lambda v: math.sin(t * v) * levy_density(v, w) * w, -np.inf, np.inf)[0]
    assert re == pytest.approx(math.exp(-t * t * w / 2), abs=1e-10)
    assert abs(im) < 1e-12


def test_levy_exponent():
    assert lk_exponent_check(0, 0) == 0
    for t, u in [(1, 1), (2, -1), (0.5, 3)]:
        assert lk_exponent_check(t, u) < 1e-6
