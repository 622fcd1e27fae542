"""scikit-learn style wrapper: components in, Adomian polynomial values out."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from adomian import expr as ex
from adomian.components import ComponentSet, MultiComponentSet
from adomian.fourier import QuadratureConfig, fourier_sequence
from adomian.generators import adomian_sequence
from adomian.validation import (
    SYMBOLIC,
    check_complex_array,
    check_expr,
    check_method,
    check_order,
)


class AdomianPolynomials(TransformerMixin, BaseEstimator):
    """Map component rows ``u_0..u_n`` to ``A_0..A_n`` of a fixed nonlinearity.

    ``fit`` parses the expression and (for symbolic methods) builds the
    polynomials once; ``transform`` evaluates them.  Input is complex with
    shape ``(n_samples, order + 1)``, or ``(n_samples, m, order + 1)`` for
    ``m`` variables taken in ``variables_`` order.  ``X_conj`` optionally
    overrides the conjugate companions.

    >>> est = AdomianPolynomials("u^2", order=2).fit()
    >>> est.transform([[1, 0.5, 0.25]]).real.round(3).tolist()
    [[1.0, 1.0, 0.75]]
    """

    def __init__(self, expr="exp(u)", order=4, method="structural", nodes=64,
                 adaptive=True, rtol=1e-12, max_nodes=None, recursive_nodes=32):
        self.expr = expr
        self.order = order
        self.method = method
        self.nodes = nodes
        self.adaptive = adaptive
        self.rtol = rtol
        self.max_nodes = max_nodes
        self.recursive_nodes = recursive_nodes

    def _config(self):
        kw = dict(nodes=self.nodes, adaptive=self.adaptive, rtol=self.rtol,
                  recursive_nodes=self.recursive_nodes)
        if self.max_nodes is not None:
            kw["max_nodes"] = self.max_nodes
        return QuadratureConfig(**kw)

    def fit(self, X=None, y=None):
        order = check_order(self.order)
        method = check_method(self.method)
        self.expr_ = check_expr(self.expr)
        self.variables_ = ex.base_names(self.expr_) or ["u"]
        if method in SYMBOLIC:
            self.polynomials_ = adomian_sequence(self.expr_, order, method)
            self.config_ = None
        else:
            self.polynomials_ = None
            self.config_ = self._config()
        self.n_features_in_ = order + 1
        if X is not None:
            self._components(X)
        return self

    def _components(self, X, X_conj=None):
        m = len(self.variables_)
        X = check_complex_array(X, ndim=(2, 3), min_cols=self.order + 1)
        if X.ndim == 2:
            if m != 1:
                raise ValueError(f"{m} variables need input of shape (n_samples, {m}, order + 1)")
            X = X[:, None, :]
        if X.shape[1] != m:
            raise ValueError(f"expected {m} variables on axis 1, got {X.shape[1]}")
        values = np.moveaxis(X[..., : self.order + 1], 0, -1)  # (m, n+1, samples)
        conj = None
        if X_conj is not None:
            Xc = check_complex_array(X_conj, name="X_conj").reshape(X.shape)
            conj = np.moveaxis(Xc[..., : self.order + 1], 0, -1)
        if m == 1:
            return ComponentSet(values[0], None if conj is None else conj[0], var=self.variables_[0])
        return MultiComponentSet(values, conj, self.variables_)

    def transform(self, X, X_conj=None):
        check_is_fitted(self, "expr_")
        cs = self._components(X, X_conj)
        if self.polynomials_ is not None:
            cols = [np.broadcast_to(a.evaluate(cs), cs.batch_shape) for a in self.polynomials_]
            out = np.stack(cols)
        else:
            out = fourier_sequence(self.expr_, cs, self.order, self.method, self.config_)
        return np.moveaxis(np.asarray(out, dtype=complex), 0, -1)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "expr_")
        return np.array([f"A_{k}" for k in range(self.order + 1)], dtype=object)
