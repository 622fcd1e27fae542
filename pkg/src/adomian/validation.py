"""Input checks shared by the estimator and the CLI.

scikit-learn's ``check_array`` rejects complex input, so component arrays
are validated here.
"""

from __future__ import annotations

import numbers

import numpy as np

from adomian import expr as ex

METHODS = ("rach", "recursive", "structural", "fourier", "fourier-recursive")
SYMBOLIC = ("rach", "recursive", "structural")


def check_order(n, name="order"):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(n).__name__}")
    if n < 0:
        raise ValueError(f"{name} must be >= 0, got {n}")
    return int(n)


def check_method(method):
    if method not in METHODS:
        raise ValueError(f"method must be one of {', '.join(METHODS)}; got {method!r}")
    return method


def check_expr(e):
    """Parse strings; pass normalized trees through."""
    if isinstance(e, str):
        return ex.parse(e)
    if isinstance(e, ex.Expr):
        return ex.normalize(e)
    raise TypeError(f"expected an expression or string, got {type(e).__name__}")


def check_alpha(alpha, low=0.0, high=1.0, name="alpha"):
    """``low < alpha <= high``."""
    if isinstance(alpha, bool) or not isinstance(alpha, numbers.Real):
        raise TypeError(f"{name} must be a real number")
    if not low < alpha <= high:
        raise ValueError(f"{name} must lie in ({low}, {high}], got {alpha}")
    return float(alpha)


def check_complex_array(X, ndim=None, min_cols=None, name="X"):
    """Finite complex ndarray with the given dimensionality."""
    try:
        X = np.asarray(X, dtype=complex)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be numeric") from None
    if ndim is not None and X.ndim not in np.atleast_1d(ndim):
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains NaN or infinity")
    if min_cols is not None and X.shape[-1] < min_cols:
        raise ValueError(f"{name} needs at least {min_cols} columns (orders 0..{min_cols - 1}), got {X.shape[-1]}")
    return X


def check_random_state(seed):
    """A ``numpy.random.Generator`` from a seed, generator or None."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
