import json
from fractions import Fraction

import numpy as np
import pytest

from adomian import expr as ex
from adomian.components import (
    Component,
    ComponentSet,
    MultiComponentSet,
    branch_distance,
    component_name,
    direct_spread,
    format_components,
    parse_component_name,
    parse_components,
    random_components,
    recursive_spread,
)
from adomian.exceptions import AdomianError, OrderError
from adomian.generators import gen_rach
from adomian.poly import AdomianPoly, sequence_str


def test_like_terms_merge_and_zero_drops():
    u1 = AdomianPoly.component("u", 1)
    assert len(u1 + u1) == 1
    assert (u1 - u1).is_zero()
    assert str(2 * u1 * AdomianPoly.component("u", 0)) == "2*u0*u1"


def test_expanded_canonical_form():
    a = AdomianPoly.from_expr(ex.parse("(u2 + u1^2/2)*exp(u0)"))
    b = AdomianPoly.from_expr(ex.parse("u2*exp(u0) + 1/2*u1^2*exp(u0)"))
    assert a == b
    assert a.order == 2


def test_mixed_weights_rejected():
    p = AdomianPoly.from_expr(ex.parse("u1 + u2"))
    with pytest.raises(AdomianError):
        p.order


def test_opaque_cannot_evaluate():
    a = gen_rach("u^2", 2, mode="opaque")
    assert a.is_opaque
    with pytest.raises(AdomianError):
        a.evaluate(ComponentSet([1, 2, 3]))


@pytest.mark.parametrize("N", ["exp(u)", "ln(u)", "u^2*(cosh(u) + sin(u))"])
def test_json_roundtrip(N):
    for mode in ("opaque", "substituted"):
        a = gen_rach(N, 3, mode=mode)
        back = AdomianPoly.from_json(json.loads(json.dumps(a.to_json())))
        assert back == a


def test_coefficients_are_rational():
    a = gen_rach("u^3", 2)
    assert all(isinstance(c, Fraction) for c, _, _ in a)


def test_evaluate_and_sequence_str():
    a = AdomianPoly.from_expr(ex.parse("2*u0*u1"))
    assert a.evaluate(ComponentSet([1, 2])) == 4
    assert "A_1" in sequence_str([AdomianPoly.zero(), a])


def test_evaluate_beyond_order():
    a = AdomianPoly.from_expr(ex.parse("u3"))
    with pytest.raises(OrderError):
        a.evaluate(ComponentSet([1, 2]))


# ---------------------------------------------------------------------------
# components


def test_component_names():
    assert component_name("u", 3) == "u3"
    assert component_name("u1", 3) == "u1_3"
    assert parse_component_name("u1_3") == ("u1", 3)
    assert parse_component_name("du2dx4") == ("du2dx", 4)
    assert Component("u", 2, True).label == "conj(u2)"


def test_component_set_defaults():
    cs = ComponentSet([1j, 2])
    np.testing.assert_array_equal(cs.ubar, [-1j, 2])
    with pytest.raises(ValueError):
        ComponentSet([1, 2], [1])
    with pytest.raises(OrderError):
        cs.truncate(3)


def test_multi_component_set_names():
    m = MultiComponentSet(np.ones((2, 3)))
    assert m.variables == ["u1", "u2"]
    assert m.order == 2


def test_components_file_roundtrip():
    cs = ComponentSet([1 + 2j, 0.5], [3, 4j])
    back = parse_components(format_components(cs))
    np.testing.assert_array_equal(back.u, cs.u)
    np.testing.assert_array_equal(back.ubar, cs.ubar)
    with pytest.raises(ValueError, match="line 1"):
        parse_components("1 2 3")
    with pytest.raises(ValueError):
        parse_components("# nothing\n")


def test_guards():
    assert branch_distance(-2 + 0.5j) == pytest.approx(0.5)
    assert branch_distance(3j) == pytest.approx(3)
    v = np.array([1, 0.5, 0.25])
    assert direct_spread(v) == pytest.approx(0.75)
    # C(2,1)1!|u1| + C(2,2)2!|u2|
    assert recursive_spread(v, 2) == pytest.approx(2 * 0.5 + 2 * 0.25)


def test_random_components_respect_guard():
    rng = np.random.default_rng(0)
    cs = random_components(5, rng, size=200, spread=direct_spread, margin=0.5)
    assert np.all(direct_spread(cs.u) <= 0.5 * branch_distance(cs.u[0]) + 1e-12)
    assert np.all((np.abs(cs.u[0]) >= 0.75) & (np.abs(cs.u[0]) <= 1.5))
