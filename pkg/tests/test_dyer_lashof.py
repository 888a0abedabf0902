from __future__ import annotations

from math import comb

import pytest

from loophom.atlas import load_space
from loophom.core import Element, MissingData, Pi0Spec, Tensor, is_admissible
from loophom.dyer_lashof import (
    SpacePresentation,
    adem_terms,
    counit,
    coproduct,
    normalize,
    normalize_sequence,
    power,
    q_apply,
    q_seq,
)

Z = Pi0Spec.integers()
ONE = Z.generator(0)


@pytest.mark.parametrize("r,s", [(r, s) for s in range(1, 9) for r in range(2 * s + 1, 2 * s + 10)])
def test_adem_terms_match_binomial_formula(r, s):
    want = sorted((r + s - i, i) for i in range(0, r + s + 1)
                  if i - s - 1 >= 0 and 2 * i - r >= 0 and comb(i - s - 1, 2 * i - r) % 2)
    assert sorted(adem_terms(r, s)) == want


@pytest.mark.parametrize("seq", [(3, 1), (5, 2), (7, 3, 1), (6, 2, 1), (9, 2, 2)])
def test_normal_sequences_are_admissible(seq):
    for out in normalize_sequence(seq):
        assert is_admissible(out)


def test_known_relations_on_the_unit_class():
    one = Element.pi0(ONE)
    assert q_seq((3, 1), one).is_zero
    assert q_seq((5, 1), one) == normalize(Element.atom((3,), ONE) ** 2)


def test_instability():
    x = Element.atom((2,), ONE)
    assert q_apply(1, x).is_zero
    assert q_apply(2, x) == normalize(x * x)


def test_inverse_component_formula():
    # 0 = Q^1([1] * [-1]) = Q^1[1] * [-2] + [2] * Q^1[-1]
    minus = Element.atom((1,), Z.element((-1,)))
    lhs = normalize(Element.atom((1,), ONE) * Element.pi0(Z.element((-2,))) + Element.pi0(Z.element((2,))) * minus)
    assert lhs.is_zero
    assert normalize(minus).render() == "Q[1][1] * [-4]"


def test_power_law_closed_form():
    x = normalize(Element.atom((2, 1), ONE))
    assert power(x, 2) == q_seq((8, 4), power(Element.pi0(ONE), 2))


def test_coproduct_of_group_like_class():
    psi = coproduct(Element.atom((3,), ONE))
    want = Tensor({})
    for a in range(4):
        left = Element.atom((a,), ONE) if a else Element.pi0(Z.element((2,)))
        right = Element.atom((3 - a,), ONE) if 3 - a else Element.pi0(Z.element((2,)))
        want = want + Tensor.pure(normalize(left), normalize(right))
    assert psi == want


def test_counit():
    bu = load_space("BU")
    assert counit(Element.one()) == 1
    assert counit(bu.parse("c(2)")) == 0


def _even_partitions(n):
    if n % 2:
        return 0
    m = n // 2
    p = [1] + [0] * m
    for part in range(1, m + 1):
        for k in range(part, m + 1):
            p[k] += p[k - part]
    return p[m]


def test_bu_poincare_series_counts_partitions():
    assert load_space("BU").poincare_series(20) == [_even_partitions(n) for n in range(21)]


def test_bu_coproduct_is_coassociative():
    load_space("BU").check_coproduct(12)


def test_presentation_text_round_trip():
    bu = load_space("BU")
    again = SpacePresentation.from_text(bu.to_text())
    assert again.to_text() == bu.to_text()
    assert again.poincare_series(10) == bu.poincare_series(10)


def test_sq_above_declared_bound_is_missing():
    text = "space T\nbottom 2\nsqbound 4\ngen t(2) dim=2 rel=poly\ngen t(6) dim=6 rel=poly\n"
    sp = SpacePresentation.from_text(text)
    assert sp.sq_of(1, sp.symbol("t(2)")).is_zero
    with pytest.raises(MissingData):
        sp.sq_of(2, sp.symbol("t(6)"))
