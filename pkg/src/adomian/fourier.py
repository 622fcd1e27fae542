"""Numeric Adomian polynomials from Fourier coefficients of ``N(u_lambda)``.

With ``u_lambda = sum_k u_k e^{ik lambda}`` the polynomial ``A_n`` is the
``n``-th Fourier coefficient of ``lambda -> N(u_lambda)``.  The integrand is
periodic and smooth, so the trapezoidal rule on ``M`` uniform nodes (a DFT)
converges spectrally.  Conjugated variables are sampled with the *same*
phase, ``ubar_lambda = sum_k ubar_k e^{ik lambda}``, which is what makes the
conjugate sequence an independent set of coefficients.

The recursive variant evaluates
``A_n = (1/n) mean_lambda A_{n-1}(v(lambda)) e^{-i lambda}`` with shifted
components ``v_k = u_k + (k+1) u_{k+1} e^{i lambda}``, nesting ``n`` levels
of quadrature.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from adomian import expr as ex
from adomian.components import (
    ComponentSet,
    MultiComponentSet,
    branch_distance,
    direct_spread,
    recursive_spread,
)
from adomian.exceptions import AccuracyError, CostError, DomainError, OrderError

DEFAULT_MAX_NODES = 2**16
_CHUNK = 2**20
_EPS = np.finfo(float).eps


def _env_max_nodes():
    raw = os.environ.get("ADOMIAN_QUAD_MAX_M")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_NODES
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"ADOMIAN_QUAD_MAX_M must be an integer, got {raw!r}") from None


def _is_pow2(m):
    return isinstance(m, (int, np.integer)) and m > 0 and (m & (m - 1)) == 0


@dataclass(frozen=True)
class QuadratureConfig:
    """Node counts and tolerances for both Fourier backends.

    ``max_nodes`` defaults to ``$ADOMIAN_QUAD_MAX_M`` (or 65536).
    """

    nodes: int = 64
    adaptive: bool = True
    rtol: float = 1e-12
    max_nodes: int = field(default_factory=_env_max_nodes)
    recursive_nodes: int = 32
    cost_budget: int = 2**25

    def __post_init__(self):
        for name in ("nodes", "max_nodes", "recursive_nodes"):
            m = getattr(self, name)
            if not _is_pow2(m) or m < 8:
                raise ValueError(f"{name} must be a power of two >= 8, got {m!r}")
        if self.max_nodes < self.nodes:
            raise ValueError("max_nodes must be >= nodes")
        if not self.rtol > 0:
            raise ValueError("rtol must be > 0")
        if self.cost_budget < 1:
            raise ValueError("cost_budget must be positive")

    def as_dict(self):
        return {
            "nodes": self.nodes,
            "adaptive": self.adaptive,
            "rtol": self.rtol,
            "max_nodes": self.max_nodes,
            "recursive_nodes": self.recursive_nodes,
            "cost_budget": self.cost_budget,
        }


def nodes(m):
    """``M`` uniform nodes on ``[-pi, pi)``."""
    return -np.pi + 2 * np.pi * np.arange(m) / m


def polynomial_nodes(degree, n):
    """Smallest power of two above ``(degree + 1) n`` (at least 8): exact for polynomials."""
    m = 8
    while m <= (degree + 1) * n:
        m *= 2
    return m


# ---------------------------------------------------------------------------
# binding expressions to component values


def _as_expr(N):
    return ex.parse(N) if isinstance(N, str) else N


def bind(N, cs):
    """Map each base variable of ``N`` to ``(values, conjugates)`` from ``cs``.

    A single-variable ``ComponentSet`` binds to whatever name ``N`` uses.
    """
    series = cs.series()
    names = ex.base_names(N)
    if isinstance(cs, ComponentSet) and len(names) <= 1:
        name = names[0] if names else cs.var
        return {name: series[cs.var]}
    missing = [v for v in names if v not in series]
    if missing:
        raise ValueError(f"no component values for {', '.join(missing)}")
    return {v: series[v] for v in names}


def _assignment(bound, order_index=None):
    out = {}
    for name, (vals, conj) in bound.items():
        if order_index is not None:
            vals, conj = vals[order_index], conj[order_index]
        out[(name, False)] = vals
        out[(name, True)] = conj
    return out


def _guard_distance(N, z0):
    if _has_branch(N):
        return branch_distance(z0)
    return np.abs(z0)


def _has_branch(e):
    if isinstance(e, ex.RealPow) or (isinstance(e, ex.Apply) and e.func == "ln"):
        return True
    return any(_has_branch(c) for c in ex.children(e))


def check_domain(N, bound, n, spread="direct"):
    """Raise :class:`DomainError` when the sampled arguments may leave the analytic domain.

    Only nonlinearities with ln, negative or fractional powers are guarded.
    The direct method needs ``sum_{k>=1} |u_k|`` below the distance from
    ``u_0`` to the singular set; the recursive method the larger nested bound.
    """
    if not ex.has_singular_nodes(N) or n == 0:
        return
    for name, (vals, conj) in bound.items():
        for label, seq in ((name, vals), (f"conj({name})", conj)):
            seq = seq[: n + 1]
            s = direct_spread(seq) if spread == "direct" else recursive_spread(seq, n)
            d = _guard_distance(N, seq[0])
            bad = np.asarray(s >= d)
            if bad.any():
                idx = tuple(int(i) for i in np.argwhere(bad)[0]) if bad.ndim else None
                where = "" if not idx else f" at batch index {idx}"
                raise DomainError(
                    f"domain guard failed for {label}{where}: spread "
                    f"{float(np.max(s)):.6g} >= distance {float(np.min(d)):.6g} from the singular set",
                    node=label,
                )


def _evaluate_nodes(N, assignment, lam):
    """``N`` at every node; failures name the first offending node."""
    try:
        out = ex.evaluate(N, assignment)
    except ex.EvaluationError:
        out = None
    if out is not None and np.all(np.isfinite(out)):
        return np.asarray(out, dtype=complex)
    for j, l in enumerate(lam):
        point = {k: np.asarray(v)[j] for k, v in assignment.items()}
        try:
            val = ex.evaluate(N, point)
        except ex.EvaluationError as exc:
            raise DomainError(f"node {j} (lambda={l:.6g}): {exc}", node=j) from None
        if not np.all(np.isfinite(val)):
            raise DomainError(f"node {j} (lambda={l:.6g}): non-finite value", node=j)
    raise DomainError("non-finite value at a quadrature node")


# ---------------------------------------------------------------------------
# direct method


def _direct_at(N, bound, n, m):
    lam = nodes(m)
    phase = np.exp(1j * np.outer(np.arange(n + 1), lam))  # (n+1, M)
    assignment = {}
    for name, (vals, conj) in bound.items():
        extra = vals.ndim - 1
        ph = phase.reshape(phase.shape + (1,) * extra)
        # node axis first: (M, batch...)
        assignment[(name, False)] = np.sum(vals[: n + 1, None] * ph, axis=0)
        assignment[(name, True)] = np.sum(conj[: n + 1, None] * ph, axis=0)
    f = _evaluate_nodes(N, assignment, lam)
    shape = next(iter(assignment.values())).shape if assignment else (m,)
    f = np.broadcast_to(f, shape)
    # lambda_j = -pi + 2 pi j / M, so e^{-ik lambda_j} = (-1)^k e^{-2 pi i jk / M}
    coeffs = np.fft.fft(f, axis=0)[: n + 1] / m
    sign = np.where(np.arange(n + 1) % 2 == 0, 1.0, -1.0)
    coeffs = coeffs * sign.reshape((-1,) + (1,) * (coeffs.ndim - 1))
    scale = np.mean(np.abs(f), axis=0)
    return coeffs, scale


def direct_coefficients(N, cs, n, config=None):
    """``A_0..A_n`` at once; shape ``(n + 1, *batch)``.

    Polynomial nonlinearities use an exact node count; otherwise ``M``
    doubles from ``config.nodes`` until two successive estimates agree to
    ``rtol`` (plus a roundoff floor relative to the integrand size).
    """
    config = config or QuadratureConfig()
    N = _as_expr(N)
    if n < 0:
        raise ValueError("order must be >= 0")
    if cs.order < n:
        raise OrderError(f"need components up to order {n}, have {cs.order}")
    bound = bind(N, cs)
    check_domain(N, bound, n, "direct")
    deg = ex.polynomial_degree(N)
    if deg is not None:
        return _direct_at(N, bound, n, polynomial_nodes(deg, n))[0]
    m = config.nodes
    prev, _ = _direct_at(N, bound, n, m)
    if not config.adaptive:
        return prev
    history = [prev[n]]
    while 2 * m <= config.max_nodes:
        m *= 2
        cur, scale = _direct_at(N, bound, n, m)
        history.append(cur[n])
        tol = config.rtol * np.abs(cur) + 64 * _EPS * scale
        if np.all(np.abs(cur - prev) <= tol):
            return cur
        prev = cur
    raise AccuracyError(
        f"no convergence with {m} nodes (cap {config.max_nodes})", estimates=history[-2:]
    )


def gen_fourier_direct(N, cs, n, config=None):
    """``A_n`` (scalar or batch array) by direct Fourier quadrature."""
    out = direct_coefficients(N, cs, n, config)[n]
    return complex(out) if np.ndim(out) == 0 else out


def negative_frequency(N, cs, n, m=None):
    """Trapezoidal ``mean N(u_lambda) e^{+i lambda}``: vanishes for analytic ``N``."""
    N = _as_expr(N)
    bound = bind(N, cs)
    deg = ex.polynomial_degree(N)
    m = m or (polynomial_nodes(deg, n) if deg is not None else 256)
    lam = nodes(m)
    phase = np.exp(1j * np.outer(np.arange(n + 1), lam))
    assignment = {}
    for name, (vals, conj) in bound.items():
        ph = phase.reshape(phase.shape + (1,) * (vals.ndim - 1))
        assignment[(name, False)] = np.sum(vals[: n + 1, None] * ph, axis=0)
        assignment[(name, True)] = np.sum(conj[: n + 1, None] * ph, axis=0)
    f = _evaluate_nodes(N, assignment, lam)
    w = np.exp(1j * lam).reshape((-1,) + (1,) * (np.ndim(f) - 1))
    return np.mean(f * w, axis=0)


# ---------------------------------------------------------------------------
# recursive method


def _shift(vals, n, ph):
    """``v_k = u_k + (k+1) u_{k+1} e^{i lambda}`` for ``k < n`` (``ph`` broadcast on the last axis)."""
    k = np.arange(1, n + 1).reshape((-1,) + (1,) * (vals.ndim - 1))
    return vals[:n, ..., None] + (k * vals[1: n + 1])[..., None] * ph


def _recursive(N, bound, n, m, lam, phase):
    if n == 0:
        assignment = _assignment(bound, 0)
        try:
            out = ex.evaluate(N, assignment)
        except ex.EvaluationError as exc:
            raise DomainError(str(exc), node=None) from None
        out = np.asarray(out, dtype=complex)
        if not np.all(np.isfinite(out)):
            raise DomainError("non-finite value in the recursive quadrature")
        return out
    batch = next(iter(bound.values()))[0][0].size
    if m**n * max(batch, 1) <= _CHUNK:
        shifted = {
            name: (_shift(v, n, phase), _shift(c, n, phase)) for name, (v, c) in bound.items()
        }
        r = _recursive(N, shifted, n - 1, m, lam, phase)
        r = np.broadcast_to(r, next(iter(shifted.values()))[0][0].shape)
        return np.mean(r * np.conj(phase), axis=-1) / n
    total = 0
    for j in range(m):
        p = phase[j: j + 1]
        shifted = {
            name: (_shift(v, n, p)[..., 0], _shift(c, n, p)[..., 0])
            for name, (v, c) in bound.items()
        }
        total = total + _recursive(N, shifted, n - 1, m, lam, phase) * np.conj(p[0])
    return total / (m * n)


def recursive_cost(m, n):
    return m**n


def gen_fourier_recursive(N, cs, n, config=None):
    """``A_n`` by the nested recursive quadrature (``n >= 1``; ``n = 0`` is ``N(u_0)``).

    Each of the ``n`` levels uses ``config.recursive_nodes`` nodes.  With
    ``adaptive`` set, the result is compared with a half-resolution estimate
    and the node count doubles (within ``cost_budget``) until they agree.
    """
    config = config or QuadratureConfig()
    N = _as_expr(N)
    if n < 0:
        raise ValueError("order must be >= 0")
    if cs.order < n:
        raise OrderError(f"need components up to order {n}, have {cs.order}")
    m = config.recursive_nodes
    deg = ex.polynomial_degree(N)
    if deg is not None:
        # each level integrates a polynomial of degree <= deg in e^{i lambda}
        m = min(m, polynomial_nodes(deg, 1))
    if recursive_cost(m, n) > config.cost_budget:
        raise CostError(
            f"recursive quadrature needs {m}^{n} = {m**n} evaluations, budget {config.cost_budget}"
        )
    bound = {name: (v[: n + 1], c[: n + 1]) for name, (v, c) in bind(N, cs).items()}
    if not bound:
        value = ex.evaluate(N, {}) if n == 0 else 0j
        return np.broadcast_to(value, cs.batch_shape).astype(complex) if cs.batch_shape else complex(value)
    check_domain(N, bound, n, "recursive")

    def run(mm):
        lam = nodes(mm)
        return _recursive(N, bound, n, mm, lam, np.exp(1j * lam))

    out = run(m)
    if not config.adaptive or n == 0 or deg is not None:
        return complex(out) if np.ndim(out) == 0 else out
    # geometric convergence: the full-resolution error is about the square of
    # the (relative) half-resolution one, so sqrt(rtol) on the difference suffices
    prev = run(m // 2)
    tol = np.sqrt(config.rtol)
    while not np.all(np.abs(out - prev) <= tol * np.abs(out) + 64 * _EPS):
        if recursive_cost(2 * m, n) > config.cost_budget:
            raise AccuracyError(
                f"recursive quadrature did not converge with {m} nodes per level",
                estimates=(prev, out),
            )
        m *= 2
        prev, out = out, run(m)
    return complex(out) if np.ndim(out) == 0 else out


def fourier_sequence(N, cs, n, method="fourier", config=None):
    """Values of ``A_0..A_n`` as an array ``(n + 1, *batch)``."""
    if method == "fourier":
        return direct_coefficients(N, cs, n, config)
    if method == "fourier-recursive":
        return np.stack(
            [np.asarray(gen_fourier_recursive(N, cs, k, config)) for k in range(n + 1)]
        )
    raise ValueError(f"unknown numeric method {method!r}")


__all__ = [
    "ComponentSet",
    "MultiComponentSet",
    "QuadratureConfig",
    "direct_coefficients",
    "fourier_sequence",
    "gen_fourier_direct",
    "gen_fourier_recursive",
    "negative_frequency",
]
