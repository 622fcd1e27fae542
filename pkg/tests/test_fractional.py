import cmath
import math

import numpy as np
import pytest
import sympy as sp
from scipy import integrate

from adomian.components import ComponentSet
from adomian.exceptions import DomainError, OrderError
from adomian.fourier import gen_fourier_direct
from adomian.fractional import (
    FracMonomial,
    burgers_term,
    caputo_monomial,
    mittag_leffler,
    rl_integral_monomial,
    solve_schrodinger,
)
from oracles import printed


def caputo_quad(alpha, p, t):
    """``1/Gamma(1-alpha) int_0^t (t-s)^{-alpha} p s^{p-1} ds`` with algebraic endpoint weights."""
    val, _ = integrate.quad(lambda s: p, 0, t, weight="alg", wvar=(p - 1, -alpha),
                            epsabs=0, epsrel=1e-13)
    return val / math.gamma(1 - alpha)


def rl_quad(alpha, p, t):
    val, _ = integrate.quad(lambda s: 1.0, 0, t, weight="alg", wvar=(p, alpha - 1),
                            epsabs=0, epsrel=1e-13)
    return val / math.gamma(alpha)


def test_caputo_examples():
    out = caputo_monomial(0.5, FracMonomial(1, 1))
    assert out.exponent == 0.5 and out.coeff == pytest.approx(1 / math.gamma(1.5))
    assert caputo_monomial(0.5, FracMonomial(3, 0)).coeff == 0
    two = caputo_monomial(1, FracMonomial(1, 2))
    assert (two.coeff, two.exponent) == (2, 1)


def test_caputo_errors():
    with pytest.raises(ValueError):
        caputo_monomial(1.5, FracMonomial(1, 1))
    with pytest.raises(ValueError):
        caputo_monomial(0.5, FracMonomial(1, -1))


def test_rl_examples():
    m = FracMonomial(2 - 1j, 0.7)
    assert rl_integral_monomial(0, m) == m
    one = rl_integral_monomial(1, FracMonomial(1, 0))
    assert (one.coeff, one.exponent) == (1, 1)
    half = rl_integral_monomial(0.5, FracMonomial(1, 0.5))
    assert half.exponent == 1 and half.coeff == pytest.approx(math.gamma(1.5))


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.9])
@pytest.mark.parametrize("p", [0.5, 1, 2])
def test_primitives_match_quadrature(alpha, p):
    t = 0.8
    c = caputo_monomial(alpha, FracMonomial(1, p))
    assert c(t) == pytest.approx(caputo_quad(alpha, p, t), rel=1e-8)
    r = rl_integral_monomial(alpha, FracMonomial(1, p))
    assert r(t) == pytest.approx(rl_quad(alpha, p, t), rel=1e-8)


@pytest.mark.parametrize("a", [0.25, 0.5, 1])
@pytest.mark.parametrize("b", [0.25, 0.5, 1])
def test_rl_semigroup(a, b):
    m = FracMonomial(1.5, 0.75)
    lhs = rl_integral_monomial(a, rl_integral_monomial(b, m))
    rhs = rl_integral_monomial(a + b, m)
    assert lhs.exponent == pytest.approx(rhs.exponent)
    assert lhs.coeff == pytest.approx(rhs.coeff, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
@pytest.mark.parametrize("p", [1, 1.5, 3])
def test_caputo_left_inverse(alpha, p):
    back = caputo_monomial(alpha, rl_integral_monomial(alpha, FracMonomial(2.0, p)))
    assert back.exponent == pytest.approx(p)
    assert back.coeff == pytest.approx(2.0, rel=1e-12)


def test_mittag_leffler():
    assert mittag_leffler(0.3, 0) == 1
    for z in (2, -2, 1.5j, 1 + 1j):
        assert mittag_leffler(1, z, 40) == pytest.approx(cmath.exp(z), rel=1e-12)
    assert abs(mittag_leffler(0.5, 1, 80) - mittag_leffler(0.5, 1, 120)) <= 1e-12
    # E_{1/2}(z) = exp(z^2) erfc(-z)
    assert mittag_leffler(0.5, 1, 120) == pytest.approx(math.e * math.erfc(-1), rel=1e-12)


def test_schrodinger_first_step():
    for alpha in (0.25, 0.5, 1):
        s = solve_schrodinger(alpha, 1)
        assert s.coeffs[0] == 1
        assert s.coeffs[1] == pytest.approx(0.5j / math.gamma(alpha + 1), rel=1e-15)


def test_schrodinger_integer_order():
    s = solve_schrodinger(1, 10)
    np.testing.assert_allclose(s.coeffs, s.closed_form(), rtol=1e-13)
    s = solve_schrodinger(1, 11)
    assert s.partial_sum(0.3, 0.1) == pytest.approx(cmath.exp(0.3j) * cmath.exp(0.05j), abs=1e-10)


def test_schrodinger_recursion_exact():
    """The float recursion agrees with the same recursion done in exact arithmetic."""
    alpha = sp.Rational(1, 2)
    c = [sp.Integer(1)]
    for n in range(4):
        a = sum(c[i] * c[j] * sp.conjugate(c[n - i - j])
                for i in range(n + 1) for j in range(n + 1 - i))
        c.append(sp.expand(sp.I * (-c[n] / 2 + a) * sp.gamma(n * alpha + 1) / sp.gamma((n + 1) * alpha + 1)))
    got = solve_schrodinger(0.5, 4).coeffs
    np.testing.assert_allclose(got, [complex(sp.N(x, 30)) for x in c], rtol=1e-13)
    assert sp.simplify(c[3] - sp.I * (8 - 5 * sp.pi) / (6 * sp.pi ** sp.Rational(3, 2))) == 0


def test_schrodinger_nonlinear_term_matches_generator():
    s = solve_schrodinger(0.5, 8)
    cs = ComponentSet(s.coeffs)
    for n in range(8):
        assert gen_fourier_direct("u^2*conj(u)", cs, n) == pytest.approx(s.nonlinear[n], rel=1e-9)


def test_schrodinger_errors():
    with pytest.raises(DomainError):
        solve_schrodinger(1.5, 3)
    with pytest.raises(DomainError):
        solve_schrodinger(0, 3)


def test_burgers():
    assert burgers_term(0) == printed("u0*w0")
    assert burgers_term(2) == printed("u0*w2 + u1*w1 + u2*w0")
    rng = np.random.default_rng(0)
    u, w = rng.normal(size=6), rng.normal(size=6)
    assert burgers_term(5, u, w) == pytest.approx(np.convolve(u, w)[5])
    with pytest.raises(OrderError):
        burgers_term(5, u[:3], w)
