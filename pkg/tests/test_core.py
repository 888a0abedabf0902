from __future__ import annotations

import itertools
from math import comb

import pytest

from loophom.core import (
    INFINITY,
    Element,
    MalformedSequence,
    Pi0Spec,
    PrimeContext,
    UnsupportedPrime,
    admissible_sequences,
    binom_mod_p,
    excess,
    is_admissible,
)


def _compositions(n):
    for k in range(1, n + 1):
        for cuts in itertools.combinations(range(1, n), k - 1):
            bounds = (0,) + cuts + (n,)
            yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


@pytest.mark.parametrize("n", range(1, 13))
def test_admissible_sequences_match_brute_force(n):
    brute = sorted(s for s in _compositions(n) if all(a <= 2 * b for a, b in zip(s, s[1:])))
    assert admissible_sequences(n) == brute


def test_admissibility_and_excess():
    assert is_admissible((4, 2, 1))
    assert not is_admissible((5, 2))
    assert excess((4, 2, 1)) == 1
    assert excess((6, 2), base_dim=1) == 3
    assert excess(()) is INFINITY
    with pytest.raises(MalformedSequence):
        excess((2, -1))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_binomials_agree_with_integer_binomials(p):
    for n in range(0, 40):
        for k in range(0, n + 3):
            assert binom_mod_p(n, k, p) == comb(n, k) % p


def test_binomial_negative_convention_is_zero():
    assert binom_mod_p(-1, 1) == 0
    assert binom_mod_p(3, -1) == 0


def test_prime_context():
    assert PrimeContext(2).full_engine
    assert not PrimeContext(3).full_engine
    with pytest.raises(UnsupportedPrime):
        PrimeContext(4)
    with pytest.raises(UnsupportedPrime):
        PrimeContext(3).require_two("normalize")


def test_pi0_spec_keeps_two_primary_part():
    spec = Pi0Spec.from_orders(9, [2, 2, 6], ["a", "b", "c"])
    assert spec.orders == (2, 2, 2)
    spec = Pi0Spec.from_orders(3, [24], ["nu"])
    assert spec.orders == (8,)
    assert Pi0Spec.from_orders(4, [3]).orders == ()


def test_pi0_arithmetic():
    spec = Pi0Spec(3, (8,), ("nu",))
    nu = spec.generator("nu")
    assert (nu.scale(8)).is_zero
    assert str(nu.scale(3)) == "[3 nu]"
    assert (nu + nu.scale(7)).is_zero
    with pytest.raises(ValueError):
        Pi0Spec(1, (3,), ("x",))


def test_element_arithmetic_in_characteristic_two():
    spec = Pi0Spec(1, (2,), ("eta",))
    x = Element.atom((1,), spec.generator(0))
    assert (x + x).is_zero
    assert Element.zero().render() == "0"
    assert (x * Element.one()) == x


def test_truncation_height_kills_products():
    # (Q^1[eta])^2 = Q^2[2 eta] = Q^2[0] = 0
    eta = Pi0Spec(1, (2,), ("eta",)).generator(0)
    x = Element.atom((1,), eta)
    assert (x * x).is_zero


def test_homogeneous_parts():
    z = Pi0Spec.integers()
    e = Element.atom((1,), z.generator(0)) + Element.atom((2,), z.generator(0))
    assert sorted(p.dim for p in e.homogeneous_parts()) == [1, 2]
    assert e.dim is None
