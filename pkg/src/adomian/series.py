"""Truncated formal power series and the index sets used to build Adomian sums.

Coefficients may be anything closed under ``+``, ``-``, ``*`` and division by
the leading coefficient: ``Fraction``, ``complex``, or
:class:`adomian.poly.AdomianPoly`.  Every series carries its truncation
order explicitly and nothing reads past it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb


class SeriesError(ValueError):
    pass


class SingularSeriesError(SeriesError, ZeroDivisionError):
    """Leading coefficient is not invertible."""


@dataclass(frozen=True)
class SeriesVec:
    """Coefficients ``c_0..c_n`` of a power series truncated at order ``n``."""

    coeffs: tuple

    def __init__(self, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise SeriesError("a series needs at least the order-0 coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, n):
        if n > self.order:
            raise SeriesError(f"cannot truncate order {self.order} series to order {n}")
        return SeriesVec(self.coeffs[: n + 1])


def _as_series(a):
    return a if isinstance(a, SeriesVec) else SeriesVec(a)


def _check_orders(a, b):
    if a.order != b.order:
        raise SeriesError(f"truncation orders differ: {a.order} vs {b.order}")


def _is_zero(x):
    try:
        return x == 0
    except TypeError:
        return False


def cauchy_product(a, b):
    """``c_k = sum_{j<=k} a_j b_{k-j}``."""
    a, b = _as_series(a), _as_series(b)
    _check_orders(a, b)
    out = []
    for k in range(len(a)):
        total = a[0] * b[k]
        for j in range(1, k + 1):
            total = total + a[j] * b[k - j]
        out.append(total)
    return SeriesVec(out)


def quotient(b, a):
    """Series of ``b / a``; needs an invertible ``a_0``."""
    a, b = _as_series(a), _as_series(b)
    _check_orders(a, b)
    if _is_zero(a[0]):
        raise SingularSeriesError("quotient: leading coefficient of the denominator is zero")
    c = [b[0] / a[0]]
    for k in range(1, len(a)):
        acc = b[k]
        for j in range(1, k + 1):
            acc = acc - a[j] * c[k - j]
        c.append(acc / a[0])
    return SeriesVec(c)


def int_power(a, p):
    """Series of ``a ** p`` for an integer ``p >= 1``.

    Uses the leading-coefficient recurrence
    ``c_k = 1/(k a_0) * sum_{j=1..k} (j p - k + j) a_j c_{k-j}``, which needs
    ``a_0`` invertible once any coefficient past ``c_0`` is requested.  No
    silent fallback: callers wanting ``a_0 == 0`` should use
    :func:`repeated_power`.
    """
    a = _as_series(a)
    if not isinstance(p, int) or p < 1:
        raise SeriesError(f"power must be an integer >= 1, got {p!r}")
    if p == 1:
        return a
    c = [a[0] ** p]
    if a.order >= 1 and _is_zero(a[0]):
        raise SingularSeriesError("int_power: leading coefficient is zero")
    for k in range(1, len(a)):
        acc = None
        for j in range(1, k + 1):
            w = j * p - k + j
            if w == 0:
                continue
            term = a[j] * c[k - j] * w
            acc = term if acc is None else acc + term
        if acc is None:
            acc = a[0] * 0
        c.append(acc * Fraction(1, k) / a[0])
    return SeriesVec(c)


def repeated_power(a, p):
    """``a ** p`` by ``p - 1`` Cauchy products (no invertibility needed)."""
    a = _as_series(a)
    out = a
    for _ in range(p - 1):
        out = cauchy_product(out, a)
    return out


# ---------------------------------------------------------------------------
# index sets


@dataclass(frozen=True)
class Partition:
    """Multiplicities ``k_1..k_n`` with ``sum j*k_j == n``."""

    multiplicities: tuple

    @property
    def n(self):
        return sum(j * k for j, k in enumerate(self.multiplicities, start=1))

    @property
    def order(self):
        """Number of parts, ``sum k_j``."""
        return sum(self.multiplicities)

    def items(self):
        """``(part, multiplicity)`` pairs with nonzero multiplicity."""
        return [(j, k) for j, k in enumerate(self.multiplicities, start=1) if k]

    def parts(self):
        """Parts in descending order, e.g. ``(3, 1, 1)``."""
        out = []
        for j, k in reversed(self.items()):
            out.extend([j] * k)
        return tuple(out)


def _descending_parts(n, largest):
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _descending_parts(n - first, first):
            yield (first,) + rest


def enumerate_partitions(n):
    """All partitions of ``n``, largest part descending (lexicographic on parts)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = []
    for parts in _descending_parts(n, n):
        mult = [0] * n
        for p in parts:
            mult[p - 1] += 1
        out.append(Partition(tuple(mult)))
    return out


def partition_count(n):
    """p(n) by the standard coin-change recurrence."""
    table = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            table[total] += table[total - part]
    return table[n]


def enumerate_weak_compositions(n, m):
    """All ``m``-tuples of nonnegative integers summing to ``n``, lexicographic."""
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    if m == 1:
        return [(n,)]
    out = []
    for first in range(n + 1):
        for rest in enumerate_weak_compositions(n - first, m - 1):
            out.append((first,) + rest)
    return out


def weak_composition_count(n, m):
    return comb(n + m - 1, m - 1)
