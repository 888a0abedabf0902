from __future__ import annotations

import pytest

from loophom import qsk
from loophom.core import Element, EngineInconsistency, MissingData, Pi0Spec, Symbol
from loophom.dyer_lashof import normalize
from loophom.expr import parse_expression


@pytest.mark.parametrize("k", range(0, 10))
def test_pi0_lines_round_trip(k):
    spec = qsk.pi0_spec(k)
    assert qsk.parse_pi0_line(qsk.format_pi0_line(spec)) == spec


def test_pi0_table_contents():
    assert qsk.pi0_spec(3).orders == (8,)
    assert qsk.pi0_spec(7).orders == (16,)
    assert qsk.pi0_spec(4).orders == ()
    assert qsk.pi0_spec(9).rank == 3
    with pytest.raises(MissingData):
        qsk.pi0_spec(10)


@pytest.mark.parametrize("line", ["pi0 k=1 summands=3 names=a", "pi0 k=1 summands=2^0 names=a", "pi k=1"])
def test_malformed_pi0_lines(line):
    with pytest.raises(ValueError):
        qsk.parse_pi0_line(line)


def test_translation_moves_components():
    spec = qsk.pi0_spec(3)
    nu = spec.generator("nu")
    e = normalize(Element.atom((1,), nu))
    assert qsk.component(e) == nu.scale(2)
    assert qsk.component(qsk.translate(e, nu)) == nu.scale(3)


def test_inverse_atoms_are_eliminated():
    ctx = qsk.context(qsk.pi0_spec(3))
    e = qsk.eliminate_inverses(parse_expression("Q[2][3 nu]", ctx))
    # Cartan on [nu] * [2 nu], with Q^1[2 nu] = 0 and Q^2[2 nu] = (Q^1[nu])^2
    assert e == normalize(parse_expression("[2 nu] * Q[1][nu]^2 + Q[2][nu] * [4 nu]", ctx))


def test_gamma_classes_live_in_the_base_point_component():
    spec = qsk.pi0_spec(3)
    g = qsk.gamma_class(spec, "nu", (2, 1))
    assert qsk.component(g).is_zero
    with pytest.raises(ValueError):
        qsk.gamma_class(qsk.pi0_spec(1), "eta", (2, 1))


def test_truncation_trace():
    trace = qsk.verify_truncation(qsk.pi0_spec(3), "nu", (2,), (1,))
    assert trace.d == 3
    assert trace.result == "0"
    assert [name for name, _ in trace.steps][:2] == ["gamma_J", "Q^I gamma_J"]


def test_truncation_failure_is_reported():
    # a Z/8 class is not killed by its square
    spec = Pi0Spec(0, (8,), ("g",))
    x = qsk.gamma_class(spec, "g", (1,))
    assert not (x * x).is_zero
    with pytest.raises(ValueError):
        qsk.verify_truncation(qsk.pi0_spec(0), "1", (), (1,))


def test_x_notation_round_trip():
    ctx = qsk.qs0_context()
    for text in ["Q[3] x(1)", "x(1) * x(2) + x(3)", "Q[4,2] x(1)", "[0]"]:
        e = normalize(parse_expression(text, ctx))
        assert qsk.from_x_notation(qsk.to_x_notation(e)) == e


def test_x_notation_rejects_other_components():
    with pytest.raises(ValueError):
        qsk.to_x_notation(normalize(parse_expression("Q[1][1]", qsk.qs0_context())))


def test_suspension():
    g1 = Symbol("g", (1,), 1, None, "space-generator")
    table = {"1": g1}
    x3 = Element.symbol(qsk.x_symbol(3))
    assert qsk.suspend(x3, table).render() == "Q[3] g(1)"
    assert qsk.suspend(x3 * Element.symbol(qsk.x_symbol(1)), table).is_zero
    with pytest.raises(MissingData):
        qsk.suspend(x3, {})


def test_pushforward_needs_images():
    k1 = qsk.pi0_spec(1)
    with pytest.raises(MissingData):
        qsk.pushforward(normalize(Element.symbol(qsk.x_symbol(1))), k1, {})


def test_truncation_engine_raises_on_inconsistency(monkeypatch):
    monkeypatch.setattr(qsk, "q_seq", lambda I, e: Element.one())
    with pytest.raises(EngineInconsistency):
        qsk.verify_truncation(qsk.pi0_spec(1), "eta", (), (1,))
