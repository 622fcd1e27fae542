"""Component values ``u_k`` (and conjugate companions) fed to numeric backends."""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from adomian.exceptions import OrderError


@dataclass(frozen=True, order=True)
class Component:
    """The symbol ``u_k`` (or its conjugate) of variable ``var``."""

    var: str = "u"
    index: int = 0
    conj: bool = False

    @property
    def name(self):
        return component_name(self.var, self.index)

    @property
    def label(self):
        return f"conj({self.name})" if self.conj else self.name

    @property
    def json_key(self):
        key = f"{self.var}_{self.index}"
        return f"conj_{key}" if self.conj else key

    def shifted(self, by=1):
        return Component(self.var, self.index + by, self.conj)


def component_name(var, index):
    """Identifier used for ``var_index`` inside expressions: ``u3`` or ``u1_3``."""
    if var and var[-1].isdigit():
        return f"{var}_{index}"
    return f"{var}{index}"


_NAME = re.compile(r"^(?:(?P<a>.*\d)_(?P<i>\d+)|(?P<b>.*\D)(?P<j>\d+))$")


def parse_component_name(name):
    """Inverse of :func:`component_name`; returns ``(var, index)`` or None."""
    m = _NAME.match(name)
    if m is None:
        return None
    if m.group("a") is not None:
        return m.group("a"), int(m.group("i"))
    return m.group("b"), int(m.group("j"))


_KEY = re.compile(r"^(conj_)?(.+)_(\d+)$")


def parse_json_key(key):
    m = _KEY.match(key)
    if m is None:
        raise ValueError(f"bad monomial key {key!r}")
    return Component(m.group(2), int(m.group(3)), bool(m.group(1)))


class MultiComponentSet:
    """Values ``u_{j,k}`` for variables ``j`` and orders ``k = 0..n``.

    ``values`` has shape ``(m, n + 1)`` or ``(m, n + 1, batch...)``; the
    conjugate companions default to the elementwise conjugate but may be
    given explicitly (they are an independent sequence).
    """

    def __init__(self, values, conj=None, variables=None):
        values = np.asarray(values, dtype=complex)
        if values.ndim < 2:
            raise ValueError("values must have shape (m, n + 1, ...)")
        if conj is None:
            conj = np.conj(values)
        conj = np.asarray(conj, dtype=complex)
        if conj.shape != values.shape:
            raise ValueError(f"conjugate shape {conj.shape} != value shape {values.shape}")
        if variables is None:
            variables = [f"u{j + 1}" for j in range(values.shape[0])]
        variables = list(variables)
        if len(variables) != values.shape[0]:
            raise ValueError("one variable name per row of values")
        self.values = values
        self.conj = conj
        self.variables = variables

    @property
    def order(self):
        return self.values.shape[1] - 1

    @property
    def batch_shape(self):
        return self.values.shape[2:]

    def series(self):
        """Mapping ``var -> (values, conjugates)``, each of shape ``(n + 1, ...)``."""
        return {v: (self.values[j], self.conj[j]) for j, v in enumerate(self.variables)}

    def value(self, component):
        try:
            j = self.variables.index(component.var)
        except ValueError:
            raise OrderError(f"no values for variable {component.var!r}") from None
        if component.index > self.order:
            raise OrderError(f"component {component.label} beyond supplied order {self.order}")
        return (self.conj if component.conj else self.values)[j, component.index]

    def truncate(self, n):
        if n > self.order:
            raise OrderError(f"need order {n}, have {self.order}")
        return type(self)._rebuild(self, self.values[:, : n + 1], self.conj[:, : n + 1])

    def extend(self, extra, extra_conj=None):
        """Append components ``u_{n+1}, ...`` (shape ``(m, r, ...)``)."""
        extra = np.asarray(extra, dtype=complex)
        extra_conj = np.conj(extra) if extra_conj is None else np.asarray(extra_conj, dtype=complex)
        return type(self)._rebuild(
            self,
            np.concatenate([self.values, extra], axis=1),
            np.concatenate([self.conj, extra_conj], axis=1),
        )

    def scaled(self, t):
        """Replace ``u_k`` by ``t**k u_k`` (and likewise for conjugates)."""
        w = np.asarray([t**k for k in range(self.order + 1)])
        w = w.reshape((1, -1) + (1,) * len(self.batch_shape))
        return type(self)._rebuild(self, self.values * w, self.conj * w)

    @staticmethod
    def _rebuild(template, values, conj):
        return MultiComponentSet(values, conj, template.variables)

    def __repr__(self):
        return f"MultiComponentSet(variables={self.variables}, order={self.order})"


class ComponentSet(MultiComponentSet):
    """Single-variable component values ``u_0..u_n`` (and ``conj(u_k)``)."""

    def __init__(self, values, conj=None, var="u"):
        values = np.asarray(values, dtype=complex)
        if values.ndim < 1:
            raise ValueError("values must have shape (n + 1, ...)")
        conj = None if conj is None else np.asarray(conj, dtype=complex)[None]
        super().__init__(values[None], conj, [var])

    @property
    def var(self):
        return self.variables[0]

    @property
    def u(self):
        return self.values[0]

    @property
    def ubar(self):
        return self.conj[0]

    @staticmethod
    def _rebuild(template, values, conj):
        return ComponentSet(values[0], conj[0], template.var)

    def extend(self, extra, extra_conj=None):
        extra = np.asarray(extra, dtype=complex)[None]
        if extra_conj is not None:
            extra_conj = np.asarray(extra_conj, dtype=complex)[None]
        return super().extend(extra, extra_conj)

    def __repr__(self):
        return f"ComponentSet(var={self.var!r}, order={self.order})"


# ---------------------------------------------------------------------------
# guards and random sampling


def branch_distance(z):
    """Distance from ``z`` to the principal branch cut ``(-inf, 0]``."""
    z = np.asarray(z, dtype=complex)
    return np.where(z.real >= 0, np.abs(z), np.abs(z.imag))


def direct_spread(values):
    """``sum_{k>=1} |u_k|``: radius of the sampled circle image around ``u_0``."""
    return np.sum(np.abs(values[1:]), axis=0)


def recursive_spread(values, n):
    """Bound on ``|w_0 - u_0|`` over the nested shifts of the recursive method.

    After ``n`` shifts ``v_k = u_k + (k+1) u_{k+1} e^{i lambda}`` the order-0
    argument is ``sum_S |S|! u_{|S|} prod e^{i lambda_s}`` over subsets ``S``,
    so it deviates from ``u_0`` by at most ``sum_k C(n, k) k! |u_k|``.
    """
    total = 0.0
    for k in range(1, min(n, len(values) - 1) + 1):
        total = total + comb(n, k) * factorial(k) * np.abs(values[k])
    return total


def random_components(n, rng, size=None, var="u", u0_range=(0.75, 1.5), max_abs=0.5,
                      spread=None, margin=0.8):
    """Random complex components for property checks.

    ``|u_0|`` is uniform on ``u0_range`` (argument within 60 degrees of the
    positive real axis), ``|u_k|`` uniform on ``[0, max_abs]`` with uniform
    phase.  ``spread`` optionally maps values to a bound that must stay below
    ``margin * branch_distance(u_0)``; offending samples are rescaled.
    """
    shape = (n + 1,) if size is None else (n + 1, size)
    mag = rng.uniform(0.0, max_abs, size=shape)
    phase = rng.uniform(-np.pi, np.pi, size=shape)
    values = mag * np.exp(1j * phase)
    r0 = rng.uniform(*u0_range, size=shape[1:])
    values[0] = r0 * np.exp(1j * rng.uniform(-np.pi / 3, np.pi / 3, size=shape[1:]))
    if spread is not None and n >= 1:
        limit = margin * branch_distance(values[0])
        s = spread(values)
        factor = np.where(s > limit, limit / np.where(s > 0, s, 1.0), 1.0)
        # spreads are homogeneous of degree 1 in u_1..u_n, so one rescale suffices
        values[1:] = values[1:] * factor
    return ComponentSet(values, var=var)


# ---------------------------------------------------------------------------
# text file format: one line per index, ``re im [conj_re conj_im]``


def parse_components(text, var="u"):
    values, conj = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) not in (2, 4):
            raise ValueError(f"line {lineno}: expected 2 or 4 numbers, got {len(fields)}")
        try:
            nums = [float(f) for f in fields]
        except ValueError:
            raise ValueError(f"line {lineno}: not a number") from None
        z = complex(nums[0], nums[1])
        values.append(z)
        conj.append(complex(nums[2], nums[3]) if len(nums) == 4 else z.conjugate())
    if not values:
        raise ValueError("no components found")
    return ComponentSet(values, conj, var=var)


def read_components(path, var="u"):
    with open(path) as fh:
        return parse_components(fh.read(), var=var)


def format_components(cs):
    lines = ["# k: re im conj_re conj_im"]
    for z, w in zip(cs.u, cs.ubar):
        lines.append(" ".join(repr(float(x)) for x in (z.real, z.imag, w.real, w.imag)))
    return "\n".join(lines) + "\n"
