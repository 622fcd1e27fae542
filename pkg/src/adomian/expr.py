"""Expression trees for nonlinearities such as ``u^2*conj(u)`` or ``exp(sin(u))``.

Trees are immutable and kept in a normal form: sums and products are
flattened, constants folded, like terms and equal bases merged, and the
children sorted by a fixed key.  Every public constructor returns a
normalized tree, so structural equality is a usable identity test.

Grammar accepted by :func:`parse` (and emitted by :func:`to_string`)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := atom ("^" unary)?
    atom    := NUMBER | NUMBER "j" | IDENT | IDENT "(" expr ")"
             | "conj" "(" IDENT ")" | "(" expr ")"
    FUNC    := exp | ln | sin | cos | sinh | cosh

Exponents must reduce to a rational constant.  Decimal literals are read
as exact rationals; a ``j`` suffix makes a (flagged, inexact) imaginary
literal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

import numpy as np

FUNCTIONS = ("exp", "ln", "sin", "cos", "sinh", "cosh")


class ExprError(ValueError):
    """Base class for expression errors."""


class ParseError(ExprError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class EvaluationError(ExprError, ArithmeticError):
    def __init__(self, message, subterm=None):
        if subterm is not None:
            message = f"{message} in subterm {to_string(subterm)!r}"
        super().__init__(message)
        self.subterm = subterm


# ---------------------------------------------------------------------------
# nodes


class Expr:
    """Base node.  Equality and hashing go through a precomputed sort key."""

    __slots__ = ()
    rank = 99

    def __eq__(self, other):
        return isinstance(other, Expr) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        return to_string(self)

    def _finish(self, key):
        object.__setattr__(self, "key", key)
        object.__setattr__(self, "_hash", hash(key))

    # arithmetic sugar, always normalizing
    def __add__(self, other):
        return add(self, as_expr(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), neg(self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return mul(self, power(as_expr(other), -1))

    def __rtruediv__(self, other):
        return mul(as_expr(other), power(self, -1))

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent):
        return power(self, exponent)


@dataclass(frozen=True, eq=False)
class Const(Expr):
    value: Fraction | complex

    rank = 0

    def __post_init__(self):
        v = self.value
        if isinstance(v, complex):
            self._finish((0, 0, 1, v.real, v.imag))
        else:
            v = Fraction(v)
            object.__setattr__(self, "value", v)
            self._finish((0, 0, 0, v, 0))

    @property
    def exact(self):
        return not isinstance(self.value, complex)


@dataclass(frozen=True, eq=False)
class Var(Expr):
    name: str
    conj: bool = False

    rank = 1

    def __post_init__(self):
        self._finish((1, 0, self.name, self.conj))


@dataclass(frozen=True, eq=False)
class Apply(Expr):
    func: str
    arg: Expr

    rank = 2

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ExprError(f"unknown function {self.func!r}")
        self._finish((2, 1, self.func, self.arg.key))


@dataclass(frozen=True, eq=False)
class IntPow(Expr):
    base: Expr
    exponent: int

    rank = 3

    def __post_init__(self):
        self._finish((3, 1, self.base.key, self.exponent))


@dataclass(frozen=True, eq=False)
class RealPow(Expr):
    base: Expr
    exponent: Fraction

    rank = 4

    def __post_init__(self):
        self._finish((4, 1, self.base.key, self.exponent))


@dataclass(frozen=True, eq=False)
class Product(Expr):
    factors: tuple

    rank = 5

    def __post_init__(self):
        self._finish((5, len(self.factors), tuple(f.key for f in self.factors)))


@dataclass(frozen=True, eq=False)
class Sum(Expr):
    terms: tuple

    rank = 6

    def __post_init__(self):
        self._finish((6, len(self.terms), tuple(t.key for t in self.terms)))


@dataclass(frozen=True, eq=False)
class Neg(Expr):
    """Unary minus as produced by the parser; normalization removes it."""

    child: Expr

    rank = 7

    def __post_init__(self):
        self._finish((7, 1, self.child.key))


ZERO = Const(0)
ONE = Const(1)


def as_expr(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(Fraction(x))
    if isinstance(x, (float, complex, Number)):
        return Const(complex(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Expr")


# ---------------------------------------------------------------------------
# smart constructors (inputs assumed normalized)


def _split_coeff(e):
    """Return (constant coefficient, remaining expression or None)."""
    if isinstance(e, Const):
        return e.value, None
    if isinstance(e, Product) and isinstance(e.factors[0], Const):
        rest = e.factors[1:]
        return e.factors[0].value, rest[0] if len(rest) == 1 else Product(rest)
    return Fraction(1), e


def add(*terms):
    flat = []
    for t in terms:
        t = as_expr(t)
        flat.extend(t.terms if isinstance(t, Sum) else (t,))
    const = Fraction(0)
    groups = {}
    for t in flat:
        c, rest = _split_coeff(t)
        if rest is None:
            const = const + c
        else:
            groups[rest] = groups.get(rest, 0) + c
    out = []
    for rest, c in groups.items():
        if c == 0:
            continue
        if c == 1:
            out.append(rest)
        else:
            factors = rest.factors if isinstance(rest, Product) else (rest,)
            out.append(Product((Const(c),) + factors))
    if const != 0:
        out.append(Const(const))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    return Sum(tuple(sorted(out)))


def split_power(e):
    if isinstance(e, IntPow):
        return e.base, Fraction(e.exponent)
    if isinstance(e, RealPow):
        return e.base, e.exponent
    return e, Fraction(1)


def mul(*factors):
    flat = []
    for f in factors:
        f = as_expr(f)
        flat.extend(f.factors if isinstance(f, Product) else (f,))
    const = Fraction(1)
    powers = {}
    for f in flat:
        if isinstance(f, Const):
            const = const * f.value
            continue
        base, e = split_power(f)
        powers[base] = powers.get(base, 0) + e
    if const == 0:
        return ZERO
    out = []
    for base, e in powers.items():
        p = power(base, e)
        if isinstance(p, Const):
            const = const * p.value
        elif isinstance(p, Product):
            # only reachable through Const bases, which never land here
            out.extend(p.factors)
        else:
            out.append(p)
    if not out:
        return Const(const)
    out.sort()
    if const == 1:
        return out[0] if len(out) == 1 else Product(tuple(out))
    return Product((Const(const),) + tuple(out))


def neg(e):
    return mul(Const(-1), e)


def power(base, exponent):
    """``base ** exponent`` for an integer or rational exponent."""
    base = as_expr(base)
    exponent = Fraction(exponent)
    if exponent.denominator != 1:
        return _realpow(base, exponent)
    k = int(exponent)
    if k == 0:
        return ONE
    if k == 1:
        return base
    if isinstance(base, Const):
        if base.value == 0 and k < 0:
            raise ExprError("division by zero constant")
        return Const(base.value ** k)
    if isinstance(base, IntPow):
        return power(base.base, base.exponent * k)
    if isinstance(base, RealPow):
        return power(base.base, base.exponent * k)
    if isinstance(base, Product):
        return mul(*(power(f, k) for f in base.factors))
    return IntPow(base, k)


def _realpow(base, p):
    if isinstance(base, Const):
        v = base.value
        if isinstance(v, Fraction):
            if v < 0:
                raise ExprError("non-integer exponent on a negative constant")
            if v == 0:
                if p < 0:
                    raise ExprError("division by zero constant")
                return ZERO
            if v == 1:
                return ONE
        return Const(complex(complex(v) ** float(p)))
    return RealPow(base, p)


def apply(func, arg):
    arg = as_expr(arg)
    if isinstance(arg, Const) and arg.value == 0:
        if func in ("exp", "cos", "cosh"):
            return ONE
        if func in ("sin", "sinh"):
            return ZERO
    if func == "ln" and isinstance(arg, Const) and arg.value == 1:
        return ZERO
    return Apply(func, arg)


def normalize(e):
    """Rebuild ``e`` bottom-up through the smart constructors (idempotent)."""
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Sum):
        return add(*(normalize(t) for t in e.terms))
    if isinstance(e, Product):
        return mul(*(normalize(f) for f in e.factors))
    if isinstance(e, IntPow):
        return power(normalize(e.base), e.exponent)
    if isinstance(e, RealPow):
        return power(normalize(e.base), e.exponent)
    if isinstance(e, Apply):
        return apply(e.func, normalize(e.arg))
    if isinstance(e, Neg):
        return neg(normalize(e.child))
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>j)?"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        start = m.start(m.lastgroup if m.lastgroup != "imag" else "num")
        if m.group("num") is not None:
            kind = "imag" if m.group("imag") else "num"
            tokens.append((kind, m.group("num"), start))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), start))
        else:
            tokens.append(("op", m.group("op"), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, value, pos = self.take()
        if kind != "op" or value != op:
            found = "end of input" if kind == "end" else repr(value)
            raise ParseError(f"expected {op!r}, found {found}", pos)

    def at_op(self, *ops):
        kind, value, _ = self.peek()
        return kind == "op" and value in ops

    def parse(self):
        e = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos)
        return e

    def expr(self):
        terms = [self.term()]
        while self.at_op("+", "-"):
            op = self.take()[1]
            t = self.term()
            terms.append(t if op == "+" else Neg(t))
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self):
        factors = [self.unary()]
        while self.at_op("*", "/"):
            op = self.take()[1]
            pos = self.peek()[2]
            f = self.unary()
            if op == "/":
                f = self._pow(f, Const(-1), pos)
            factors.append(f)
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def unary(self):
        if self.at_op("-"):
            self.take()
            return Neg(self.unary())
        if self.at_op("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.at_op("^"):
            pos = self.take()[2]
            return self._pow(base, self.unary(), pos)
        return base

    def _pow(self, base, exponent, pos):
        try:
            exponent = normalize(exponent)
        except ExprError as exc:
            raise ParseError(str(exc), pos) from None
        if not (isinstance(exponent, Const) and exponent.exact):
            raise ParseError("exponent must be a rational constant", pos)
        p = exponent.value
        if p.denominator == 1:
            return IntPow(base, int(p))
        try:
            nb = normalize(base)
        except ExprError as exc:
            raise ParseError(str(exc), pos) from None
        if isinstance(nb, Const) and nb.exact and nb.value < 0:
            raise ParseError("non-integer exponent on a negative constant", pos)
        return RealPow(base, p)

    def atom(self):
        kind, value, pos = self.take()
        if kind == "num":
            return Const(Fraction(value))
        if kind == "imag":
            return Const(complex(0, float(value)))
        if kind == "ident":
            if not self.at_op("("):
                return Var(value)
            self.take()
            if value == "conj":
                k2, name, p2 = self.take()
                if k2 != "ident":
                    raise ParseError("conj() takes a variable name", p2)
                self.expect(")")
                return Var(name, True)
            if value not in FUNCTIONS:
                raise ParseError(f"unknown function {value!r}", pos)
            arg = self.expr()
            self.expect(")")
            return Apply(value, arg)
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {found}", pos)


def parse(text):
    """Parse ``text`` into a normalized expression."""
    raw = _Parser(text).parse()
    try:
        return normalize(raw)
    except ExprError as exc:
        raise ParseError(str(exc), 0) from None


# ---------------------------------------------------------------------------
# printing

_PREC_SUM, _PREC_PRODUCT, _PREC_POWER, _PREC_ATOM = 1, 2, 3, 4


def _const_str(v):
    if isinstance(v, complex):
        if v.real == 0:
            return f"({v.imag!r}j)"
        sign = "-" if v.imag < 0 else "+"
        return f"({v.real!r}{sign}{abs(v.imag)!r}j)"
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _prec(e):
    if isinstance(e, Sum):
        return _PREC_SUM
    if isinstance(e, (Product, Neg)):
        return _PREC_PRODUCT
    if isinstance(e, Const):
        v = e.value
        if isinstance(v, complex):
            return _PREC_ATOM
        if v < 0:
            return _PREC_PRODUCT
        return _PREC_ATOM if v.denominator == 1 else _PREC_PRODUCT
    if isinstance(e, (IntPow, RealPow)):
        return _PREC_POWER
    return _PREC_ATOM


def _wrap(e, min_prec):
    s = to_string(e)
    return f"({s})" if _prec(e) < min_prec else s


def _is_negative(e):
    c, _ = _split_coeff(e)
    return isinstance(c, Fraction) and c < 0


def _exponent_str(p):
    s = _const_str(Fraction(p))
    return f"({s})" if p < 0 or Fraction(p).denominator != 1 else s


def to_string(e):
    """Canonical text form; ``parse(to_string(e)) == e`` for normalized ``e``."""
    if isinstance(e, Const):
        return _const_str(e.value)
    if isinstance(e, Var):
        return f"conj({e.name})" if e.conj else e.name
    if isinstance(e, Apply):
        return f"{e.func}({to_string(e.arg)})"
    if isinstance(e, (IntPow, RealPow)):
        return f"{_wrap(e.base, _PREC_ATOM)}^{_exponent_str(e.exponent)}"
    if isinstance(e, Neg):
        return "-" + _wrap(e.child, _PREC_POWER)
    if isinstance(e, Product):
        factors = list(e.factors)
        head = ""
        if isinstance(factors[0], Const) and not isinstance(factors[0].value, complex):
            c = factors.pop(0).value
            if c == -1:
                head = "-"
            else:
                head = _const_str(c) + "*"
        return head + "*".join(_wrap(f, _PREC_POWER) for f in factors)
    if isinstance(e, Sum):
        parts = []
        for i, t in enumerate(e.terms):
            if i and _is_negative(t):
                parts.append(" - " + to_string(neg(t)))
            elif i:
                parts.append(" + " + to_string(t))
            else:
                parts.append(to_string(t))
        return "".join(parts)
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# analysis


def free_variables(e):
    """Set of ``(name, conj)`` pairs occurring in ``e``."""
    if isinstance(e, Var):
        return {(e.name, e.conj)}
    out = set()
    for c in children(e):
        out |= free_variables(c)
    return out


def base_names(e):
    """Variable names in ``e``; a conjugated variable registers its base name."""
    return sorted({name for name, _ in free_variables(e)})


def children(e):
    if isinstance(e, Sum):
        return e.terms
    if isinstance(e, Product):
        return e.factors
    if isinstance(e, (IntPow, RealPow)):
        return (e.base,)
    if isinstance(e, Apply):
        return (e.arg,)
    if isinstance(e, Neg):
        return (e.child,)
    return ()


def has_conjugate(e):
    return any(conj for _, conj in free_variables(e))


def is_exact(e):
    """True when every constant in ``e`` is rational."""
    if isinstance(e, Const):
        return e.exact
    return all(is_exact(c) for c in children(e))


def polynomial_degree(e):
    """Total degree if ``e`` is a polynomial in its variables, else None."""
    if isinstance(e, Const):
        return 0
    if isinstance(e, Var):
        return 1
    if isinstance(e, Sum):
        degs = [polynomial_degree(t) for t in e.terms]
        return None if None in degs else max(degs)
    if isinstance(e, Product):
        degs = [polynomial_degree(f) for f in e.factors]
        return None if None in degs else sum(degs)
    if isinstance(e, IntPow) and e.exponent > 0:
        d = polynomial_degree(e.base)
        return None if d is None else d * e.exponent
    return None


def has_singular_nodes(e):
    """True if ``e`` contains ln, a negative power, or a fractional power."""
    if isinstance(e, Apply) and e.func == "ln":
        return True
    if isinstance(e, IntPow) and e.exponent < 0:
        return True
    if isinstance(e, RealPow):
        return True
    return any(has_singular_nodes(c) for c in children(e))


# ---------------------------------------------------------------------------
# differentiation and substitution

_DERIVATIVES = {
    "exp": lambda a: apply("exp", a),
    "ln": lambda a: power(a, -1),
    "sin": lambda a: apply("cos", a),
    "cos": lambda a: neg(apply("sin", a)),
    "sinh": lambda a: apply("cosh", a),
    "cosh": lambda a: apply("sinh", a),
}


def differentiate(e, var, conj=False):
    """Derivative of ``e`` with respect to the atom ``Var(var, conj)``.

    A variable and its conjugate are independent atoms, so ``conj(u)`` is a
    constant when differentiating in ``u`` and vice versa.
    """
    target = Var(var, conj)
    return _diff(normalize(e), target, {})


def _diff(e, target, memo):
    if e in memo:
        return memo[e]
    if isinstance(e, Const):
        out = ZERO
    elif isinstance(e, Var):
        out = ONE if e == target else ZERO
    elif isinstance(e, Sum):
        out = add(*(_diff(t, target, memo) for t in e.terms))
    elif isinstance(e, Product):
        parts = []
        fs = e.factors
        for i, f in enumerate(fs):
            d = _diff(f, target, memo)
            if d != ZERO:
                parts.append(mul(d, *fs[:i], *fs[i + 1:]))
        out = add(*parts)
    elif isinstance(e, (IntPow, RealPow)):
        d = _diff(e.base, target, memo)
        if d == ZERO:
            out = ZERO
        else:
            p = Fraction(e.exponent)
            out = mul(Const(p), power(e.base, p - 1), d)
    elif isinstance(e, Apply):
        d = _diff(e.arg, target, memo)
        out = ZERO if d == ZERO else mul(_DERIVATIVES[e.func](e.arg), d)
    else:
        raise TypeError(f"not an expression node: {e!r}")
    memo[e] = out
    return out


def substitute(e, mapping):
    """Replace variables using ``mapping`` keyed by ``(name, conj)``."""
    if isinstance(e, Var):
        return as_expr(mapping.get((e.name, e.conj), e))
    if isinstance(e, Const):
        return e
    if isinstance(e, Sum):
        return add(*(substitute(t, mapping) for t in e.terms))
    if isinstance(e, Product):
        return mul(*(substitute(f, mapping) for f in e.factors))
    if isinstance(e, (IntPow, RealPow)):
        return power(substitute(e.base, mapping), e.exponent)
    if isinstance(e, Apply):
        return apply(e.func, substitute(e.arg, mapping))
    if isinstance(e, Neg):
        return neg(substitute(e.child, mapping))
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# evaluation

_NUMPY_FUNCS = {
    "exp": np.exp,
    "ln": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
}


def _lookup(assignment, name, conj):
    if (name, conj) in assignment:
        return assignment[(name, conj)]
    if not conj and name in assignment:
        return assignment[name]
    if conj:
        base = _lookup(assignment, name, False)
        return np.conj(base)
    raise EvaluationError(f"unassigned variable {name!r}")


def evaluate(e, assignment):
    """Evaluate ``e`` at complex values (scalars or numpy arrays).

    ``assignment`` maps a name or a ``(name, conj)`` pair to a value.  An
    unassigned conjugate defaults to the complex conjugate of its base.
    Scalar inputs give a Python ``complex``.
    """
    values = {}
    for k, v in assignment.items():
        values[k] = np.asarray(v, dtype=complex)
    with np.errstate(all="ignore"):
        out = _eval(e, values)
    out = np.asarray(out, dtype=complex)
    return complex(out) if out.ndim == 0 else out


def _eval(e, values):
    if isinstance(e, Const):
        return complex(e.value)
    if isinstance(e, Var):
        return _lookup(values, e.name, e.conj)
    if isinstance(e, Sum):
        total = 0j
        for t in e.terms:
            total = total + _eval(t, values)
        return total
    if isinstance(e, Product):
        prod = 1 + 0j
        for f in e.factors:
            prod = prod * _eval(f, values)
        return prod
    if isinstance(e, IntPow):
        b = _eval(e.base, values)
        if e.exponent < 0 and np.any(np.asarray(b) == 0):
            raise EvaluationError("division by zero", e)
        if e.exponent > 0:
            return _int_power(b, e.exponent)
        return 1 / _int_power(b, -e.exponent)
    if isinstance(e, RealPow):
        b = _eval(e.base, values)
        if e.exponent < 0 and np.any(np.asarray(b) == 0):
            raise EvaluationError("division by zero", e)
        return np.power(b, float(e.exponent))
    if isinstance(e, Apply):
        a = _eval(e.arg, values)
        if e.func == "ln" and np.any(np.asarray(a) == 0):
            raise EvaluationError("logarithm of zero", e)
        return _NUMPY_FUNCS[e.func](a)
    if isinstance(e, Neg):
        return -_eval(e.child, values)
    raise TypeError(f"not an expression node: {e!r}")


def _int_power(b, k):
    # binary exponentiation keeps integer powers exact-as-possible in floating point
    result = None
    while k:
        if k & 1:
            result = b if result is None else result * b
        k >>= 1
        if k:
            b = b * b
    return result
