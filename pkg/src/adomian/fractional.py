"""Fractional-calculus primitives on monomials and the decomposition solve of

    i D_t^alpha u + 1/2 u_xx + |u|^2 u = 0,   u(x, 0) = e^{ix},   0 < alpha <= 1.

Under the ansatz ``u_n = c_n e^{ix} t^{n alpha}`` the spatial factor is
invariant (``d^2/dx^2 e^{ix} = -e^{ix}`` and ``|e^{ix}|^2 = 1``), so the
decomposition ``u_{n+1} = i I^alpha(1/2 u_{n,xx} + A_n)`` collapses to a
scalar recursion on the ``c_n``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from adomian.exceptions import DomainError, OrderError
from adomian.series import enumerate_weak_compositions


@dataclass(frozen=True)
class FracMonomial:
    """``coeff * t**exponent``."""

    coeff: complex = 1.0
    exponent: float = 0.0

    def __call__(self, t):
        return self.coeff * np.power(t, self.exponent)

    def scaled(self, c):
        return FracMonomial(self.coeff * c, self.exponent)


def _gamma_ratio(a, b):
    """``Gamma(a) / Gamma(b)`` for positive arguments without overflow."""
    if a < 170 and b < 170:
        return math.gamma(a) / math.gamma(b)
    return math.exp(math.lgamma(a) - math.lgamma(b))


def _gamma_ratio_ext(a, b):
    """``Gamma(a) / Gamma(b)`` in extended precision (exact for integer arguments)."""
    if float(a).is_integer() and float(b).is_integer() and a < 1000 and b < 1000:
        return np.longdouble(math.factorial(int(a) - 1)) / np.longdouble(math.factorial(int(b) - 1))
    return np.longdouble(_gamma_ratio(a, b))


def caputo_monomial(alpha, m):
    """Caputo derivative of order ``alpha`` in ``(0, 1]`` of ``c t^p``.

    ``p > 0`` gives ``c Gamma(p+1)/Gamma(p-alpha+1) t^{p-alpha}``; a constant
    gives zero.  For ``p < alpha`` the result has a negative exponent
    (still integrable at 0, since ``p - alpha > -1``).
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    p = m.exponent
    if p < 0:
        raise ValueError("exponent must be >= 0")
    if p == 0:
        return FracMonomial(0.0, 0.0)
    if alpha == 1:
        return FracMonomial(m.coeff * p, p - 1)
    arg = p - alpha + 1
    if arg <= 0 and arg == int(arg):
        raise DomainError(f"Gamma pole at {arg}")
    return FracMonomial(m.coeff * _gamma_ratio(p + 1, arg), p - alpha)


def rl_integral_monomial(alpha, m):
    """Riemann-Liouville integral of order ``alpha >= 0`` of ``c t^p``."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    p = m.exponent
    if p < 0:
        raise ValueError("exponent must be >= 0")
    if alpha == 0:
        return m
    return FracMonomial(m.coeff * _gamma_ratio(p + 1, p + alpha + 1), p + alpha)


def mittag_leffler(alpha, z, terms=60):
    """Partial sum ``sum_{k < terms} z^k / Gamma(alpha k + 1)``."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    if not 0 < alpha <= 2:
        raise ValueError("alpha must lie in (0, 2]")
    return complex(sum(mittag_leffler_terms(alpha, z, terms)))


def mittag_leffler_terms(alpha, z, terms):
    """The individual terms ``z^k / Gamma(alpha k + 1)``, ``k = 0..terms-1``."""
    z = complex(z)
    out = [1 + 0j]
    for k in range(1, terms):
        g = alpha * k + 1
        if z == 0:
            out.append(0j)
        elif g < 170 and k * math.log(abs(z)) < 700:
            out.append(z**k / math.gamma(g))
        else:
            out.append(cmath.exp(k * cmath.log(z) - math.lgamma(g)))
    return out


# ---------------------------------------------------------------------------
# Schrodinger solve


def cubic_coefficient(c, n):
    """``a_n = sum_{k1+k2+k3=n} c_{k1} c_{k2} conj(c_{k3})``: Adomian coefficient of ``|u|^2 u``."""
    total = c[0] * 0
    for i, j, k in enumerate_weak_compositions(n, 3):
        total = total + c[i] * c[j] * np.conj(c[k])
    return total


@dataclass
class SchrodingerState:
    """Coefficients ``c_0..c_N`` of ``u_n = c_n e^{ix} t^{n alpha}``."""

    alpha: float
    coeffs: np.ndarray
    nonlinear: np.ndarray = field(default=None)

    @property
    def terms(self):
        return len(self.coeffs) - 1

    def closed_form(self):
        """``(i/2)^n / Gamma(n alpha + 1)``, the expected coefficients."""
        return np.array([1j ** (n % 4) * 0.5**n / math.gamma(n * self.alpha + 1) for n in range(len(self.coeffs))])

    def components(self, x, t):
        """The values ``u_n(x, t)``."""
        n = np.arange(len(self.coeffs))
        return self.coeffs * np.exp(1j * x) * np.power(t, n * self.alpha)

    def partial_sum(self, x, t):
        return complex(np.sum(self.components(x, t)))

    def mittag_leffler_value(self, x, t, terms=None):
        """``e^{ix} E_alpha(i t^alpha / 2)`` truncated to the same number of terms."""
        terms = len(self.coeffs) if terms is None else terms
        return cmath.exp(1j * x) * mittag_leffler(self.alpha, 0.5j * t**self.alpha, terms)


def solve_schrodinger(alpha, terms):
    """Run the decomposition recursion up to ``c_terms``.

    ``c_{n+1} = i (-c_n / 2 + a_n) Gamma(n alpha + 1) / Gamma((n+1) alpha + 1)``.
    """
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if terms < 0:
        raise ValueError("terms must be >= 0")
    # the convolution cancels heavily (terms up to ~3^n times the result), and
    # errors feed forward through later a_n, so carry extended precision
    c = [np.clongdouble(1)]
    a = []
    for n in range(terms):
        a.append(cubic_coefficient(c, n))
        ratio = _gamma_ratio_ext(n * alpha + 1, (n + 1) * alpha + 1)
        c.append(1j * (-0.5 * c[n] + a[n]) * ratio)
    return SchrodingerState(
        alpha, np.array(c, dtype=complex), np.array(a, dtype=complex)
    )


# ---------------------------------------------------------------------------
# fractional Burgers nonlinearity


def burgers_term(n, u=None, w=None):
    """Adomian polynomial of ``u * D_x^beta u`` with ``w = D_x^beta u`` supplied.

    ``A_n = sum_k u_k w_{n-k}``.  Without sequences, returns the symbolic
    polynomial in components ``u_k``, ``w_k``.
    """
    if u is None and w is None:
        from adomian.generators import gen_structural
        return gen_structural("u*w", n)[n]
    if u is None or w is None:
        raise ValueError("need both sequences")
    if len(u) < n + 1 or len(w) < n + 1:
        raise OrderError(f"sequences must cover orders 0..{n}")
    total = u[0] * w[n]
    for k in range(1, n + 1):
        total = total + u[k] * w[n - k]
    return total
