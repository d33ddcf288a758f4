import pytest

from modsat.rootdata import build_root_datum
from modsat.weyl import (
    compose,
    conjugacy_normal_form,
    conjugate,
    dominant_conjugate,
    element_from_word,
    inverse,
    orbit,
    parse_word,
    weyl_group,
)

ORDERS = [("A", 1, 2), ("A", 2, 6), ("A", 3, 24), ("B", 2, 8), ("B", 3, 48), ("C", 3, 48), ("G", 2, 12), ("D", 4, 192)]


@pytest.mark.parametrize("s,n,order", ORDERS)
def test_weyl_orders(s, n, order):
    d = build_root_datum(s, n)
    group = weyl_group(d)
    assert len(group) == order
    assert max(g.length for g in group) == len(d.positive_roots)
    for g in group[:50]:
        assert element_from_word(d, g.word) == g


def test_words_and_inverse():
    d = build_root_datum("A", 2)
    c = element_from_word(d, parse_word("s1 s2"))
    assert c.length == 2
    assert compose(c, inverse(c), d).is_identity()
    assert compose(c, compose(c, c, d), d).is_identity()
    s1 = element_from_word(d, (0,))
    assert conjugate(s1, c, d) == element_from_word(d, parse_word("s2 s1"))


def test_dominant_conjugate_and_orbit():
    d = build_root_datum("B", 2)
    for lam in [(1, 0), (0, 1), (2, -3)]:
        dom, _ = dominant_conjugate(d, lam)
        assert d.is_dominant(dom)
        assert dom in orbit(d, lam)
    assert len(orbit(d, (1, 0))) == 4


def test_conjugacy_normal_form_is_class_invariant():
    d = build_root_datum("A", 2)
    group = weyl_group(d)
    c = element_from_word(d, (0, 1))
    nf = conjugacy_normal_form(d, c, group)
    for v in group:
        assert conjugacy_normal_form(d, conjugate(v, c, d), group) == nf
