"""Adomian polynomials of nonlinearities in several variables.

All variables share one parameter: ``u_{j,lambda} = sum_k u_{j,k} e^{ik lambda}``.
Linear operators inside a nonlinearity (spatial derivatives, fractional
derivatives) are not applied by the engine: their component sequences are
supplied as extra variables, since ``L(u)`` has Adomian polynomials ``L(u_n)``.
"""

from __future__ import annotations

import numpy as np

from adomian import expr as ex
from adomian.components import MultiComponentSet
from adomian.exceptions import OrderError
from adomian.fourier import direct_coefficients, gen_fourier_direct, gen_fourier_recursive
from adomian.generators import gen_structural

AXES = ("x", "y", "z")


def _as_multi(cs):
    if isinstance(cs, MultiComponentSet):
        return cs
    return MultiComponentSet(cs)


def gen_fourier_direct_multi(N, cs, n, config=None):
    """``A_n`` of ``N(u_1, ..., u_m)`` by direct quadrature."""
    return gen_fourier_direct(N, _as_multi(cs), n, config)


def gen_fourier_recursive_multi(N, cs, n, config=None):
    """``A_n`` by the recursive quadrature, shifting every variable at once."""
    return gen_fourier_recursive(N, _as_multi(cs), n, config)


def multi_sequence(N, n):
    """Symbolic ``A_0..A_n`` for a multivariable (or conjugate-bearing) ``N``."""
    return gen_structural(N, n)


def velocity_name(j):
    return f"u{j}"


def gradient_name(j, axis):
    """Variable holding ``d u_j / d axis``; its components print as e.g. ``du2dx1``."""
    return f"du{j}d{axis}"


def advection_expr(j):
    """``(V . grad) u_j = u_1 du_j/dx + u_2 du_j/dy + u_3 du_j/dz``."""
    return ex.add(*[
        ex.mul(ex.Var(velocity_name(w + 1)), ex.Var(gradient_name(j, a)))
        for w, a in enumerate(AXES)
    ])


def navier_stokes_advection(n, velocity=None, gradients=None, method="symbolic", config=None):
    """Adomian polynomials of the three advection terms ``(V . grad) u_j``.

    Without data, returns three symbolic sequences ``A_{j,0..n}``, each a
    sum over axes ``w`` and splits ``a + b = k`` of ``u_{w,a} du_{j,b}/dw``.
    With ``velocity`` of shape ``(3, n+1, ...)`` and ``gradients`` of shape
    ``(3, 3, n+1, ...)`` (``gradients[j][w]`` is the component sequence of
    ``d u_{j+1} / d axis_w``) it returns numeric values of shape
    ``(3, n+1, ...)`` computed by ``method`` ("symbolic", "fourier" or
    "fourier-recursive").
    """
    if velocity is None and gradients is None:
        return [gen_structural(advection_expr(j), n) for j in (1, 2, 3)]
    if velocity is None or gradients is None:
        raise ValueError("need both the velocity and the derivative sequences")
    velocity = np.asarray(velocity, dtype=complex)
    gradients = np.asarray(gradients, dtype=complex)
    if velocity.shape[:1] != (3,) or gradients.shape[:2] != (3, 3):
        raise ValueError("missing derivative sequence: expected velocity (3, ...) and gradients (3, 3, ...)")
    if velocity.shape[1] < n + 1 or gradients.shape[2] < n + 1:
        raise OrderError(f"sequences must cover orders 0..{n}")
    out = []
    for j in (1, 2, 3):
        names = [velocity_name(w) for w in (1, 2, 3)] + [gradient_name(j, a) for a in AXES]
        values = np.concatenate([velocity[:, : n + 1], gradients[j - 1, :, : n + 1]])
        cs = MultiComponentSet(values, variables=names)
        N = advection_expr(j)
        if method == "symbolic":
            seq = gen_structural(N, n)
            out.append(np.stack([np.broadcast_to(a.evaluate(cs), cs.batch_shape) for a in seq]))
        elif method == "fourier":
            out.append(direct_coefficients(N, cs, n, config))
        elif method == "fourier-recursive":
            out.append(np.stack([
                np.broadcast_to(gen_fourier_recursive(N, cs, k, config), cs.batch_shape)
                for k in range(n + 1)
            ]))
        else:
            raise ValueError(f"unknown method {method!r}")
    return np.stack(out)
