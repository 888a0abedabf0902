from __future__ import annotations

import random
from math import comb

import pytest

from loophom.atlas import load_space
from loophom.core import Element, Pi0Spec
from loophom.dyer_lashof import normalize
from loophom.steenrod import (
    a_annihilated_primitives,
    kernel,
    nishida_binom,
    primitives,
    sq_act,
    square_root,
    square_root_via_sq,
)


def _general_binom(n, k):
    # n(n-1)...(n-k+1)/k! over the integers
    num = 1
    for j in range(k):
        num *= n - j
    den = 1
    for j in range(1, k + 1):
        den *= j
    return num // den


@pytest.mark.parametrize("n", range(-12, 13))
def test_nishida_binomial_is_the_generalized_binomial(n):
    for k in range(0, 12):
        assert nishida_binom(n, k) == _general_binom(n, k) % 2


def test_so_table_matches_binomials():
    so = load_space("SO")
    for n in range(2, 33):
        s = Element.symbol(so.symbol(f"s({n})"))
        for r in range(1, n // 2 + 1):
            want = Element.symbol(so.symbol(f"s({n - r})")) if comb(n - r, r) % 2 else Element.zero()
            assert sq_act(r, s) == want, (n, r)


def test_nishida_on_a_zero_dimensional_class():
    nu = Pi0Spec(3, (8,), ("nu",)).generator(0)
    assert sq_act(1, normalize(Element.atom((2,), nu))) == normalize(Element.atom((1,), nu))


def test_square_root_on_bu():
    bu = load_space("BU")
    c = lambda d: bu.parse(f"c({d})")
    assert square_root(c(2)).is_zero
    assert square_root(c(4)) == c(2)
    assert square_root(c(8)) == c(4)
    assert square_root(c(4) * c(4)) == c(2) * c(2)


def test_root_of_a_square_is_not_the_class():
    # r(c_2^2) = r(c_2)^2 = 0, so "r(x^2) = x" fails in general
    bu = load_space("BU")
    c2 = bu.parse("c(2)")
    assert square_root(c2 * c2).is_zero
    assert square_root(c2 * c2) != c2


def test_root_agrees_with_top_square():
    bu = load_space("BU")
    for text in ["c(4) * c(2)", "c(6) + c(2)^3", "c(8) * c(4)"]:
        e = bu.parse(text)
        assert square_root(e) == square_root_via_sq(e)


def test_kernel_against_brute_force():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 7)
        cols = [rng.getrandbits(5) for _ in range(n)]
        brute = set()
        for mask in range(1, 1 << n):
            acc = 0
            for j in range(n):
                if mask >> j & 1:
                    acc ^= cols[j]
            if acc == 0:
                brute.add(mask)
        ker = kernel(cols)
        span = {0}
        for v in ker:
            span |= {s ^ v for s in span}
        assert span - {0} == brute


def test_so_primitives_sit_in_odd_dimensions():
    # dual to the odd-degree indecomposables of the cohomology of SO
    so = load_space("SO")
    for d in range(1, 16):
        assert len(primitives(so, d)) == d % 2


def test_bu_primitives_in_even_dimensions_only():
    bu = load_space("BU")
    assert [len(primitives(bu, d)) for d in range(1, 13)] == [0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]


def test_a_annihilated_primitives_of_so():
    so = load_space("SO")
    assert sorted({d for d, _ in a_annihilated_primitives(so, 16)}) == [1, 3, 7, 15]


def test_sq_of_square_is_square_of_half():
    bu = load_space("BU")
    for text in ["c(2)", "c(4)", "c(6) + c(2) * c(4)"]:
        x = bu.parse(text)
        for t in range(0, 4):
            assert sq_act(2 * t, x * x) == sq_act(t, x) * sq_act(t, x)
            assert sq_act(2 * t + 1, x * x).is_zero
