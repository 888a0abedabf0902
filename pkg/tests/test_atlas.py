from __future__ import annotations

from importlib import resources

import pytest

from loophom import atlas
from loophom.core import Element, MissingData


@pytest.mark.parametrize("name", atlas.ATLAS_NAMES)
def test_shipped_files_regenerate_exactly(name):
    shipped = resources.files("loophom").joinpath("data", name.replace("/", "_") + ".space").read_text("utf-8")
    assert atlas.generate_presentation(name) == shipped


@pytest.mark.parametrize("name", atlas.ATLAS_NAMES)
def test_shipped_files_load(name):
    sp = atlas.load_space(name)
    assert sp.generators
    assert sp.poincare_series(6)[0] == 1


def test_every_table_entry_has_an_anchor():
    table = atlas.predicate_table()
    assert table
    for entry in table.values():
        assert entry.anchor.strip()


def test_bott_periodicity_names():
    names = [atlas.bott_space_name(k) for k in range(16)]
    assert names[:8] == ["SO", "SO/U", "U/Sp", "BSp", "Sp", "Sp/U", "U/O", "BO"]
    assert names[8:] == names[:8]


@pytest.mark.parametrize("j", range(1, 9))
def test_nu_is_the_two_adic_valuation(j):
    n = 3 ** (4 * j) - 1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    assert atlas.nu(j) == v


def test_q_of_p_small_primes():
    assert [atlas.q_of_p(p) for p in (3, 5, 7)] == [2, 2, 3]
    with pytest.raises(ValueError):
        atlas.q_of_p(2)


def test_epsilon_and_domains():
    assert [atlas.epsilon(k) for k in range(4)] == [0, 1, 0, 1]
    assert [atlas.iota_domain(t) for t in range(4)] == ["U", "BU", "U", "BU"]


def test_x_class_verdicts_carry_anchors():
    v = atlas.x_class(7, 0)
    assert v.nontrivial and v.anchor and v.handle is not None
    assert atlas.x_class(4, 3).nontrivial
    assert not atlas.x_class(15, 8).nontrivial
    assert atlas.x_class(14, 8).nontrivial
    assert atlas.x_class(3, 7).notes == ("(Omega^{8j-1} d)_* kills a_n^{2^4} for every n",)


def test_x_class_above_the_declared_range():
    with pytest.raises(MissingData):
        atlas.x_class(1000, 0)


def test_w_class_dimensions():
    assert atlas.w_class(3, 0).dim == 7
    assert atlas.w_class(3, 1).dim == 6
    assert not atlas.w_class(2, 5).nontrivial


def test_spin_is_tagged_not_shipped():
    with pytest.raises(MissingData):
        atlas.load_space("Spin")


def test_closed_form_so_primitives():
    atlas.check_so_primitives(15)
    so = atlas.load_space("SO")
    assert atlas.so_primitive_closed_form(1, so).render() == "s(1) * s(2) + s(3)"


def test_iota_on_low_classes():
    bu = atlas.load_space("BU")
    c = Element.symbol(bu.symbol("c(4)"))
    assert atlas.iota_pushforward(1, c).render() == "c(4)"
    assert atlas.iota_pushforward(3, c).render() == "p(4)"
    assert atlas.iota_pushforward(3, Element.symbol(bu.symbol("c(2)"))).is_zero
    with pytest.raises(ValueError):
        atlas.iota_pushforward(8, c)


def test_spherical_and_bounds():
    assert atlas.spherical_dims(0) == {1, 3, 7}
    assert atlas.spherical_dims(8) == {1, 3, 7}
    assert atlas.suspension_bound("real") == 7
