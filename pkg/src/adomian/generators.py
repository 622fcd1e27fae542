"""Symbolic Adomian polynomial generators and the algebraic composition rules.

Three symbolic routes produce the same canonical objects:

* :func:`gen_rach` -- the partition formula
  ``A_n = sum_{partitions} prod u_j^{k_j}/k_j! * N^(sum k_j)(u0)``;
* :func:`gen_recursive_symbolic` -- ``A_n = T(A_{n-1}) / n`` where ``T`` is the
  derivation ``u_k -> (k+1) u_{k+1}``, ``N^(k)(u0) -> u1 N^(k+1)(u0)``;
* :func:`gen_structural` -- walks the expression tree and applies the sum,
  product, quotient, power and composition rules below.

Numeric quadrature backends live in :mod:`adomian.fourier`.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from adomian import expr as ex
from adomian.components import Component, parse_component_name
from adomian.exceptions import (
    OrderError,
    SingularDenominatorError,
    SingularSeriesError,
    UnsupportedError,
)
from adomian.poly import AdomianPoly, Opaque
from adomian.series import (
    SeriesVec,
    enumerate_partitions,
    enumerate_weak_compositions,
    int_power,
    quotient,
)

OUTER_VAR = "_x"


def as_nonlinearity(N):
    return ex.parse(N) if isinstance(N, str) else ex.normalize(N)


def univariate_name(N, default="u"):
    """The single base variable of ``N`` (``default`` for constants)."""
    names = ex.base_names(N)
    if len(names) > 1:
        raise UnsupportedError(f"expected one variable, found {', '.join(names)}")
    return names[0] if names else default


def _order0_mapping(N):
    return {
        (name, conj): ex.Var(Component(name, 0).name, conj)
        for name, conj in ex.free_variables(N)
    }


# ---------------------------------------------------------------------------
# partition formula


def gen_rach(N, n, mode="substituted"):
    """``A_n`` from the partition formula, opaque or with ``N`` substituted."""
    if n < 0:
        raise ValueError("order must be >= 0")
    var = "u"
    if N is not None:
        N = as_nonlinearity(N)
        if ex.has_conjugate(N):
            raise UnsupportedError(
                "the partition formula needs a conjugate-free nonlinearity; "
                "use the structural or Fourier backends"
            )
        var = univariate_name(N)
    if n == 0:
        a = AdomianPoly.opaque(0, var)
    else:
        terms = []
        for part in enumerate_partitions(n):
            coeff = Fraction(1)
            mono = []
            for j, k in part.items():
                coeff /= factorial(k)
                mono.append((Component(var, j), k))
            terms.append((coeff, tuple(mono), Opaque(part.order, var)))
        a = AdomianPoly(terms)
    if mode == "opaque" or N is None:
        return a
    if mode != "substituted":
        raise ValueError(f"unknown mode {mode!r}")
    return substitute_concrete(a, N)


def rach_coefficient(k, n, var="u"):
    """``C(k, n)``: the polynomial multiplying ``N^(k)(u0)`` in ``A_n``."""
    terms = []
    for part in enumerate_partitions(n):
        if part.order != k:
            continue
        coeff = Fraction(1)
        mono = []
        for j, m in part.items():
            coeff /= factorial(m)
            mono.append((Component(var, j), m))
        terms.append((coeff, tuple(mono), ex.ONE))
    return AdomianPoly(terms)


class _DerivativeTable:
    """``N^(k)`` with the variable renamed to its order-0 component."""

    def __init__(self, N, var):
        self.var = var
        self.derivs = [N]
        self.mapping = {(var, False): ex.Var(Component(var, 0).name)}
        self.cache = {}

    def __getitem__(self, k):
        while len(self.derivs) <= k:
            self.derivs.append(ex.differentiate(self.derivs[-1], self.var))
        if k not in self.cache:
            self.cache[k] = ex.substitute(self.derivs[k], self.mapping)
        return self.cache[k]


def substitute_concrete(a, N):
    """Replace every ``N^(k)(u0)`` in ``a`` by the concrete derivative at ``u0``."""
    N = as_nonlinearity(N)
    if ex.has_conjugate(N):
        raise UnsupportedError("substitution needs a conjugate-free nonlinearity")
    var = univariate_name(N)
    table = _DerivativeTable(N, var)
    out = []
    for c, m, f in a.terms:
        if isinstance(f, Opaque):
            if f.var != var:
                m = tuple((Component(var, k.index, k.conj), e) for k, e in m)
            out.append((c, m, table[f.order]))
        else:
            out.append((c, m, f))
    return AdomianPoly(out)


# ---------------------------------------------------------------------------
# T-operator recursion


def apply_T(a):
    """The derivation ``T``: ``u_k -> (k+1) u_{k+1}``, ``N^(k)(u0) -> u1 N^(k+1)(u0)``.

    Concrete factors are differentiated through every component they
    contain, which makes ``T`` act on conjugate and multivariable
    polynomials the same way.
    """
    out = []
    for c, m, f in a.terms:
        for i, (k, e) in enumerate(m):
            rest = m[:i] + ((k, e - 1),) + m[i + 1:]
            out.append((c * e * (k.index + 1), rest + ((k.shifted(), 1),), f))
        if isinstance(f, Opaque):
            out.append((c, m + ((Component(f.var, 1), 1),), Opaque(f.order + 1, f.var)))
        elif f != ex.ONE:
            for name, conj in sorted(ex.free_variables(f)):
                parsed = parse_component_name(name)
                if parsed is None:
                    raise UnsupportedError(f"free parameter {name!r} in factor")
                k = Component(parsed[0], parsed[1], conj)
                d = ex.differentiate(f, name, conj=conj)
                if d != ex.ZERO:
                    out.append((c * (k.index + 1), m + ((k.shifted(), 1),), d))
    return AdomianPoly(_merge_mono_duplicates(out))


def _merge_mono_duplicates(items):
    merged = []
    for c, m, f in items:
        d = {}
        for k, e in m:
            d[k] = d.get(k, 0) + e
        merged.append((c, tuple(sorted((k, e) for k, e in d.items() if e)), f))
    return merged


def gen_recursive_symbolic(N, n, mode="substituted"):
    """``A_n`` by ``A_0 = N(u0)``, ``A_k = T(A_{k-1}) / k``.

    ``N=None`` gives the opaque form.  A conjugate-free univariate ``N`` is
    run opaque and substituted at the end, so the result is term-for-term
    identical to :func:`gen_rach`.  Other nonlinearities (conjugates,
    several variables) recurse on concrete factors directly.
    """
    return recursive_sequence(N, n, mode)[n]


def recursive_sequence(N, n, mode="substituted"):
    if n < 0:
        raise ValueError("order must be >= 0")
    if N is None:
        return _t_recursion(AdomianPoly.opaque(0), n)
    N = as_nonlinearity(N)
    names = ex.base_names(N)
    if not ex.has_conjugate(N) and len(names) <= 1:
        var = names[0] if names else "u"
        seq = _t_recursion(AdomianPoly.opaque(0, var), n)
        if mode == "opaque":
            return seq
        return [substitute_concrete(a, N) for a in seq]
    if mode == "opaque":
        raise UnsupportedError("opaque form needs a conjugate-free univariate nonlinearity")
    a0 = AdomianPoly.from_expr(ex.substitute(N, _order0_mapping(N)))
    return _t_recursion(a0, n)


def _t_recursion(a0, n):
    seq = [a0]
    for k in range(1, n + 1):
        seq.append(apply_T(seq[-1]) * Fraction(1, k))
    return seq


# ---------------------------------------------------------------------------
# composition rules


def _check_length(seq, n, what="sequence"):
    if len(seq) < n + 1:
        raise OrderError(f"{what} has orders 0..{len(seq) - 1}, need 0..{n}")


def _default_order(seqs):
    return min(len(s) for s in seqs) - 1


def identity_sequence(n, var="u", conj=False):
    """Adomian polynomials of ``N(u) = u`` (or ``conj(u)``): ``A_k = u_k``."""
    return [AdomianPoly.component(var, k, conj) for k in range(n + 1)]


def constant_sequence(c, n):
    return [AdomianPoly.constant(c)] + [AdomianPoly.zero() for _ in range(n)]


def combine_sum(seqs, scalars=None, n=None):
    """Linear combination: ``A_n = sum alpha_k A_{k,n}``."""
    n = _default_order(seqs) if n is None else n
    scalars = [1] * len(seqs) if scalars is None else list(scalars)
    if len(scalars) != len(seqs):
        raise ValueError("one scalar per sequence")
    for s in seqs:
        _check_length(s, n)
    out = []
    for k in range(n + 1):
        total = AdomianPoly.zero()
        for s, alpha in zip(seqs, scalars):
            total = total + s[k] * alpha
        out.append(total)
    return out


def combine_product(seqs, n=None):
    """Product rule: ``A_n = sum over weak compositions of n of prod A_{j,k_j}``."""
    if not seqs:
        raise ValueError("need at least one sequence")
    n = _default_order(seqs) if n is None else n
    for s in seqs:
        _check_length(s, n)
    if len(seqs) == 1:
        return list(seqs[0][: n + 1])
    out = []
    for k in range(n + 1):
        total = AdomianPoly.zero()
        for comp in enumerate_weak_compositions(k, len(seqs)):
            factors = [s[i] for s, i in zip(seqs, comp)]
            if any(f.is_zero() for f in factors):
                continue
            prod = factors[0]
            for f in factors[1:]:
                prod = prod * f
            total = total + prod
        out.append(total)
    return out


def combine_quotient(numerator, denominator, n=None):
    """Quotient rule via the formal power-series division recurrence."""
    n = _default_order([numerator, denominator]) if n is None else n
    _check_length(numerator, n, "numerator")
    _check_length(denominator, n, "denominator")
    try:
        c = quotient(SeriesVec(numerator[: n + 1]), SeriesVec(denominator[: n + 1]))
    except SingularSeriesError as exc:
        raise SingularDenominatorError(str(exc)) from None
    return list(c)


def combine_power(seq, p, n=None):
    """``N_1^p`` via the power-series power recurrence (``p >= 1``)."""
    n = _default_order([seq]) if n is None else n
    _check_length(seq, n)
    try:
        c = int_power(SeriesVec(seq[: n + 1]), p)
    except SingularSeriesError as exc:
        raise SingularDenominatorError(str(exc)) from None
    return list(c)


def combine_compose(outer, inner, n=None):
    """Composition ``N_1(N_2(u))`` by Faa di Bruno over partitions of ``n``.

    ``outer`` is an expression in a single variable; ``inner`` the Adomian
    sequence of ``N_2``.  ``A_n = sum N_1^(sum k_j)(A_{2,0}) prod A_{2,j}^{k_j}/k_j!``.
    """
    outer = as_nonlinearity(outer)
    x = univariate_name(outer, default=OUTER_VAR)
    if ex.has_conjugate(outer):
        raise UnsupportedError("outer function of a composition must be conjugate-free")
    n = _default_order([inner]) if n is None else n
    _check_length(inner, n)
    a20 = inner[0].to_expr()
    derivs = [outer]
    factors = {}

    def factor(k):
        while len(derivs) <= k:
            derivs.append(ex.differentiate(derivs[-1], x))
        if k not in factors:
            factors[k] = AdomianPoly.from_expr(ex.substitute(derivs[k], {(x, False): a20}))
        return factors[k]

    out = [factor(0)]
    powers = {}
    for m in range(1, n + 1):
        total = AdomianPoly.zero()
        for part in enumerate_partitions(m):
            term = factor(part.order)
            if term.is_zero():
                continue
            for j, k in part.items():
                if (j, k) not in powers:
                    powers[(j, k)] = inner[j] ** k * Fraction(1, factorial(k))
                term = term * powers[(j, k)]
            total = total + term
        out.append(total)
    return out


# ---------------------------------------------------------------------------
# structural route


def gen_structural(N, n):
    """Adomian sequence ``A_0..A_n`` assembled from the expression tree.

    Handles conjugated and multiple variables, since each leaf
    ``u``/``conj(u)`` contributes its own component sequence.
    """
    return _structural(as_nonlinearity(N), n)


def _structural(e, n):
    if isinstance(e, ex.Const):
        return constant_sequence(e.value, n)
    if isinstance(e, ex.Var):
        return identity_sequence(n, e.name, e.conj)
    if isinstance(e, ex.Sum):
        return combine_sum([_structural(t, n) for t in e.terms], n=n)
    if isinstance(e, ex.Product):
        consts = [f for f in e.factors if isinstance(f, ex.Const)]
        rest = [f for f in e.factors if not isinstance(f, ex.Const)]
        seqs = [_structural(f, n) for f in rest]
        out = combine_product(seqs, n=n) if seqs else constant_sequence(1, n)
        for c in consts:
            out = [a * c.value for a in out]
        return out
    if isinstance(e, ex.IntPow):
        base = _structural(e.base, n)
        if e.exponent > 0:
            return combine_power(base, e.exponent, n=n)
        denom = combine_power(base, -e.exponent, n=n)
        return combine_quotient(constant_sequence(1, n), denom, n=n)
    if isinstance(e, ex.RealPow):
        outer = ex.power(ex.Var(OUTER_VAR), e.exponent)
        return combine_compose(outer, _structural(e.base, n), n=n)
    if isinstance(e, ex.Apply):
        outer = ex.apply(e.func, ex.Var(OUTER_VAR))
        return combine_compose(outer, _structural(e.arg, n), n=n)
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# sequences and numeric bridge


SYMBOLIC_METHODS = ("rach", "recursive", "structural")


def adomian_sequence(N, n, method="rach", mode="substituted"):
    """``[A_0, ..., A_n]`` by one of the symbolic methods."""
    if method == "rach":
        return [gen_rach(N, k, mode) for k in range(n + 1)]
    if method == "recursive":
        return recursive_sequence(N, n, mode)
    if method == "structural":
        return gen_structural(N, n)
    raise ValueError(f"unknown symbolic method {method!r}")


def evaluate_poly(a, components):
    """Numeric value of a concrete polynomial at the given components."""
    return a.evaluate(components)
