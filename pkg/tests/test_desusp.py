from __future__ import annotations

import pytest

from loophom import desusp
from loophom.core import MalformedSequence
from loophom.dyer_lashof import coproduct


def _partitions(n):
    p = [1] + [0] * n
    for part in range(1, n + 1):
        for k in range(part, n + 1):
            p[k] += p[k - part]
    return p[n]


@pytest.mark.parametrize("d", range(2, 21, 2))
def test_cj_monomials_are_partitions(d):
    assert len(desusp.cj_monomials(d)) == _partitions(d // 2)
    assert desusp.cj_monomials(d + 1) == []


@pytest.mark.parametrize("J", [(), (3,), (4, 2), (0,)])
def test_cj_validation(J):
    with pytest.raises(MalformedSequence):
        desusp.CJMonomial(J)


def test_qbu_structure_matches_bu():
    q = desusp.qbu()
    psi = coproduct(q.element((2, 2)))
    # c_2 c_2 in H_*BU: psi = c2c2 x 1 + 2 c2 x c2 + 1 x c2c2, the middle term vanishing mod 2
    assert psi.render() == "1 (x) c(2,2) + c(2,2) (x) 1"
    assert q.sq_of(2, q.symbol((4,))) == q.element((2,))


def test_blocks():
    assert [str(b) for b in desusp.blocks(2)] == ["p(2)"]
    assert [str(b) for b in desusp.blocks(4)] == ["p(2,2)"]
    assert "p(2;4)" in [str(b) for b in desusp.blocks(9)]
    assert not any(b.kind == "iJ" for b in desusp.blocks(5))


def test_block_representatives_are_primitive_with_the_right_leading_term():
    ps = desusp.PrimitiveSpace()
    for d in range(1, 12):
        for b in desusp.blocks(d):
            x = ps.block(b)
            assert desusp._is_primitive(x)
            lead = desusp._indecomposable(x)
            assert len(list(lead.items())) == 1


def test_decomposition_with_a_square():
    ps = desusp.PrimitiveSpace()
    p2 = ps.block(desusp.Block("L", (2,)))
    rec = desusp.primitive_decompose(p2 * p2, ps)
    assert rec.terms == [] and rec.root is not None
    assert rec.render() == "(p(2))^2"
    assert rec.reassemble(ps) == p2 * p2


def test_decomposition_rejects_non_primitives():
    with pytest.raises(ValueError):
        desusp.primitive_decompose(desusp.qbu().element((4,)))
    # c_2 c_2 is primitive, its middle coproduct term being 2 c_2 (x) c_2
    assert desusp.primitive_decompose(desusp.qbu().element((2, 2))).render() == "p(2,2)"


def test_generator_counts_match_primitives():
    ps = desusp.PrimitiveSpace()
    gens = desusp.desusp_generators(12)
    for n in range(1, 13):
        assert sum(g.degree == n for g in gens) == len(ps.primitives(n + 1))


def test_no_generators_are_identified():
    assert desusp.desusp_basis(10, check_images=True).merges == []


def test_exterior_series():
    assert desusp.exterior_series([1, 1, 2], 4) == [1, 2, 2, 2, 1]


def test_image_rule_and_w_classes():
    w = desusp.w_desusp_class("L", 2, (2, 4))
    assert w.in_j_image and w.trivial_in_image and w.degree == 5
    w = desusp.w_desusp_class("L", 1, (2, 2))
    assert not w.in_j_image
    w = desusp.w_desusp_class("L", 1, (2, 6))
    assert w.in_j_image and not w.trivial_in_image
    w = desusp.w_desusp_class("iJ", 0, (4,), 2)
    assert not w.in_j_image and w.degree == 8
    with pytest.raises(ValueError):
        desusp.w_desusp_class("iJ", 0, (4,), 1)
    with pytest.raises(ValueError):
        desusp.w_desusp_class("L", 0, (4,))
