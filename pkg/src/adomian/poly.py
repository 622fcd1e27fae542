"""Canonical symbolic Adomian polynomials.

A polynomial is a sum of terms ``coeff * monomial * factor``.  The monomial
is a product of components ``u_k`` / ``conj(u_k)`` with integer exponents
(only order-0 components may carry negative exponents).  The factor is
either :class:`Opaque` -- the unevaluated derivative ``N^(k)(u0)`` -- or an
expression in the order-0 components such as ``cosh(u0)``.

Canonical form: factor sums are distributed into separate terms, rational
constants and powers of order-0 components are pulled out of the factor,
like terms are merged, zero terms dropped, and terms sorted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

import numpy as np

from adomian import expr as ex
from adomian.components import Component, parse_component_name, parse_json_key
from adomian.exceptions import AdomianError, EvaluationError, SingularDenominatorError


@dataclass(frozen=True, order=True)
class Opaque:
    """The derivative ``N^(order)`` evaluated at ``var0``, left symbolic."""

    order: int
    var: str = "u"

    def __str__(self):
        arg = Component(self.var, 0).name
        return f"N({arg})" if self.order == 0 else f"N^({self.order})({arg})"


_OPAQUE = re.compile(r"^N(?:\^\((\d+)\))?\((.+)0\)$")


def factor_key(f):
    if isinstance(f, Opaque):
        return (0, f.order, f.var)
    return (1, f.key)


def _mono_key(mono):
    return tuple((c.var, c.conj, c.index, e) for c, e in mono)


def _mono(d):
    return tuple(sorted((c, e) for c, e in d.items() if e != 0))


def _mono_mul(a, b):
    d = dict(a)
    for c, e in b:
        d[c] = d.get(c, 0) + e
    return _mono(d)


def _factor_mul(f, g):
    if isinstance(f, Opaque):
        if g == ex.ONE:
            return f
        if isinstance(g, Opaque):
            raise AdomianError("cannot multiply two opaque derivative factors")
        raise AdomianError("cannot multiply an opaque factor by a concrete one")
    if isinstance(g, Opaque):
        return _factor_mul(g, f)
    return ex.mul(f, g)


class AdomianPoly:
    """Immutable sum of ``(coeff, monomial, factor)`` terms in canonical order."""

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        acc = {}
        for coeff, mono, factor in terms:
            for c2, m2, f2 in _canonical_term(coeff, mono, factor):
                key = (m2, f2)
                acc[key] = acc.get(key, 0) + c2
        items = [(c, m, f) for (m, f), c in acc.items() if c != 0]
        items.sort(key=lambda t: (factor_key(t[2]), _mono_key(t[1])))
        self._terms = tuple(items)

    @classmethod
    def _raw(cls, items):
        obj = cls.__new__(cls)
        items = [t for t in items if t[0] != 0]
        items.sort(key=lambda t: (factor_key(t[2]), _mono_key(t[1])))
        obj._terms = tuple(items)
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls._raw([])

    @classmethod
    def constant(cls, c):
        if isinstance(c, ex.Expr):
            return cls.from_expr(c)
        return cls._raw([(_num(c), (), ex.ONE)])

    @classmethod
    def component(cls, var="u", index=0, conj=False):
        return cls._raw([(Fraction(1), ((Component(var, index, conj), 1),), ex.ONE)])

    @classmethod
    def opaque(cls, order, var="u"):
        return cls._raw([(Fraction(1), (), Opaque(order, var))])

    @classmethod
    def from_expr(cls, e):
        """Polynomial for an expression whose variables are component names."""
        return cls([(Fraction(1), (), e)])

    # -- access ------------------------------------------------------------

    @property
    def terms(self):
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def is_zero(self):
        return not self._terms

    @property
    def is_opaque(self):
        return any(isinstance(f, Opaque) for _, _, f in self._terms)

    def weights(self):
        """Set of ``sum k * exponent`` over the terms."""
        return {sum(c.index * e for c, e in m) for _, m, _ in self._terms}

    @property
    def order(self):
        w = self.weights()
        if not w:
            return None
        if len(w) > 1:
            raise AdomianError(f"mixed subscript weights {sorted(w)}")
        return w.pop()

    def components(self):
        out = set()
        for _, m, f in self._terms:
            out.update(c for c, _ in m)
            if isinstance(f, ex.Expr):
                out.update(_expr_components(f))
        return out

    def max_index(self):
        return max((c.index for c in self.components()), default=0)

    # -- arithmetic --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, AdomianPoly):
            return self._terms == other._terms
        if isinstance(other, Number) and other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(self._terms)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return AdomianPoly._merged(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return AdomianPoly._raw([(-c, m, f) for c, m, f in self._terms])

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            s = _num(other)
            return AdomianPoly._raw([(c * s, m, f) for c, m, f in self._terms])
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = []
        for c1, m1, f1 in self._terms:
            for c2, m2, f2 in other._terms:
                out.append((c1 * c2, _mono_mul(m1, m2), _factor_mul(f1, f2)))
        return AdomianPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise AdomianError("polynomial powers must be nonnegative integers")
        out = AdomianPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __truediv__(self, other):
        if isinstance(other, Number):
            if other == 0:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self * (1 / _num(other))
        if isinstance(other, AdomianPoly):
            return self * other.inverse()
        return NotImplemented

    def inverse(self):
        """Multiplicative inverse of an order-0 polynomial."""
        if self.is_zero():
            raise SingularDenominatorError("order-0 polynomial vanishes identically")
        if self.is_opaque:
            raise AdomianError("cannot invert an opaque polynomial")
        if any(c.index > 0 for c in self.components()):
            raise AdomianError("only order-0 polynomials can be inverted symbolically")
        if len(self._terms) == 1:
            c, m, f = self._terms[0]
            inv_c = Fraction(1) / c if isinstance(c, Fraction) else 1 / c
            return AdomianPoly([(inv_c, tuple((k, -e) for k, e in m), ex.power(f, -1))])
        return AdomianPoly.from_expr(ex.power(self.to_expr(), -1))

    @classmethod
    def _merged(cls, items):
        acc = {}
        for c, m, f in items:
            acc[(m, f)] = acc.get((m, f), 0) + c
        return cls._raw([(c, m, f) for (m, f), c in acc.items()])

    # -- conversion ----------------------------------------------------------

    def to_expr(self):
        """Expression over component names (fails on opaque factors)."""
        parts = []
        for c, m, f in self._terms:
            if isinstance(f, Opaque):
                raise AdomianError("opaque factors have no expression form")
            factors = [ex.as_expr(c), f]
            factors += [ex.power(ex.Var(k.name, k.conj), e) for k, e in m]
            parts.append(ex.mul(*factors))
        return ex.add(*parts)

    def evaluate(self, components):
        """Numeric value at a :class:`~adomian.components.MultiComponentSet`."""
        if self.is_opaque:
            raise AdomianError("substitute a concrete nonlinearity before evaluating")
        assignment = {}
        for k in self.components():
            assignment[(k.name, k.conj)] = components.value(k)
        total = 0j
        with np.errstate(all="ignore"):
            for c, m, f in self._terms:
                term = complex(c)
                for k, e in m:
                    v = assignment[(k.name, k.conj)]
                    if e < 0 and np.any(np.asarray(v) == 0):
                        raise EvaluationError(f"division by zero at component {k.label}")
                    term = term * v**e
                if f != ex.ONE:
                    term = term * ex.evaluate(f, assignment)
                total = total + term
        total = np.asarray(total, dtype=complex)
        return complex(total) if total.ndim == 0 else total

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for i, (c, m, f) in enumerate(self._terms):
            s = _term_str(c, m, f)
            if i == 0:
                out.append(s)
            elif s.startswith("-"):
                out.append(" - " + s[1:])
            else:
                out.append(" + " + s)
        return "".join(out)

    def __repr__(self):
        return f"AdomianPoly({str(self)!r})"

    def to_json(self):
        terms = []
        for c, m, f in self._terms:
            if isinstance(c, Fraction):
                coeff = [c.numerator, c.denominator]
            else:
                coeff = [complex(c).real, complex(c).imag]
            terms.append({
                "coeff": coeff,
                "monomial": {k.json_key: e for k, e in m},
                "factor": str(f) if isinstance(f, Opaque) else ex.to_string(f),
            })
        return terms

    @classmethod
    def from_json(cls, terms):
        items = []
        for t in terms:
            a, b = t["coeff"]
            coeff = Fraction(a, b) if isinstance(a, int) and isinstance(b, int) else complex(a, b)
            mono = _mono({parse_json_key(k): e for k, e in t["monomial"].items()})
            items.append((coeff, mono, parse_factor(t["factor"])))
        return cls(items)


def parse_factor(text):
    m = _OPAQUE.match(text)
    if m:
        return Opaque(int(m.group(1) or 0), m.group(2))
    return ex.parse(text)


def _num(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return complex(x)


def _coerce(other):
    if isinstance(other, AdomianPoly):
        return other
    if isinstance(other, Number):
        return AdomianPoly.constant(other)
    return NotImplemented


def _expr_components(e):
    out = set()
    for name, conj in ex.free_variables(e):
        parsed = parse_component_name(name)
        if parsed is not None:
            out.add(Component(parsed[0], parsed[1], conj))
    return out


def expand(e):
    """Top-level distributive expansion: a list of sum-free products.

    Sums inside function arguments or negative powers stay atomic, so the
    result is canonical up to identities between transcendental atoms.
    """
    if isinstance(e, ex.Sum):
        return [p for t in e.terms for p in expand(t)]
    if isinstance(e, ex.Neg):
        return [ex.neg(p) for p in expand(e.child)]
    if isinstance(e, ex.IntPow) and e.exponent > 0 and isinstance(e.base, (ex.Sum, ex.Product)):
        return expand(ex.Product((e.base,) * e.exponent))
    if isinstance(e, ex.Product):
        out = [ex.ONE]
        for f in e.factors:
            out = [ex.mul(a, b) for a in out for b in expand(f)]
        result = []
        for p in out:
            # factors such as S^2 * S^-1 may collapse back into a sum
            result.extend(expand(p) if isinstance(p, (ex.Sum, ex.Neg)) else [p])
        return result
    return [e]


def _canonical_term(coeff, mono, factor):
    """Split one raw term into canonical terms."""
    coeff = _num(coeff)
    if isinstance(factor, Opaque):
        yield coeff, _mono(dict(mono)), factor
        return
    for piece in expand(ex.as_expr(factor)):
        c = coeff
        d = dict(mono)
        rest = []
        for f in piece.factors if isinstance(piece, ex.Product) else (piece,):
            if isinstance(f, ex.Const):
                c = c * f.value
                continue
            base, p = ex.split_power(f)
            if isinstance(base, ex.Var) and p.denominator == 1:
                parsed = parse_component_name(base.name)
                if parsed is not None:
                    k = Component(parsed[0], parsed[1], base.conj)
                    d[k] = d.get(k, 0) + int(p)
                    continue
            rest.append(f)
        f_out = ex.mul(*rest) if rest else ex.ONE
        yield c, _mono(d), f_out


def _term_str(c, m, f):
    num = []
    den = []
    for k, e in m:
        target = num if e > 0 else den
        target.append(k.label if abs(e) == 1 else f"{k.label}^{abs(e)}")
    parts = []
    if isinstance(f, Opaque):
        parts_f = [str(f)]
    elif f == ex.ONE:
        parts_f = []
    else:
        s = ex.to_string(f)
        parts_f = [f"({s})" if isinstance(f, ex.Sum) else s]
    body = num + parts_f
    if isinstance(c, Fraction):
        sign = "-" if c < 0 else ""
        a = abs(c)
        if a == 1 and body:
            head = ""
        elif a.denominator == 1:
            head = str(a.numerator)
        else:
            head = f"{a.numerator}/{a.denominator}"
        parts = ([head] if head else []) + body
        s = sign + ("*".join(parts) if parts else "1")
    else:
        parts = [f"({complex(c)!r})"] + body
        s = "*".join(parts)
    if den:
        s += "/" + (den[0] if len(den) == 1 else "(" + "*".join(den) + ")")
    return s


def sequence_str(seq):
    return "\n".join(f"A_{n} = {p}" for n, p in enumerate(seq))
