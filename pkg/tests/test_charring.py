import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modsat.automorphism import block_cyclic_automorphism, inner_torsion_automorphism, pinned_automorphism
from modsat.charring import (
    CharacterElement,
    CharacterError,
    classify_weight,
    decompose,
    dominant_weights,
    from_decomposition,
    goodness_of_norm,
    monomial,
    multiply,
    norm_character,
    one,
    restrict_along,
    weight_tuple_sets,
    weyl_character,
    weyl_dimension,
)
from modsat.rootdata import build_root_datum, product_datum

A1 = build_root_datum("A", 1)
A2 = build_root_datum("A", 2)
B2 = build_root_datum("B", 2)
B3 = build_root_datum("B", 3)
G2 = build_root_datum("G", 2)
SMALL = [A1, A2, B2, G2, build_root_datum("C", 3), build_root_datum("A", 3)]


def test_weyl_character_examples():
    std = weyl_character(A1, (1,))
    assert std.coeffs == {(1,): 1, (-1,): 1}
    adj = weyl_character(A2, (1, 1))
    assert adj.dim() == 8 and adj.coeff((0, 0)) == 2
    # brute-force tensor construction: V (x) V* - 1
    tensor = multiply(weyl_character(A2, (1, 0)), weyl_character(A2, (0, 1)))
    assert (tensor - one(A2)).coeffs == adj.coeffs
    assert weyl_character(G2, (1, 0)).dim() == 7
    with pytest.raises(CharacterError):
        weyl_character(A1, (-1,))


@pytest.mark.parametrize("d", SMALL, ids=lambda d: d.label)
def test_freudenthal_matches_weyl_dimension(d):
    for mu in dominant_weights(d, 16):
        chi = weyl_character(d, mu)
        assert chi.dim() == weyl_dimension(d, mu)
        assert chi.coeff(mu) == 1
        assert chi.is_weyl_invariant()


def test_multiply_examples():
    f = weyl_character(B2, (1, 1))
    assert multiply(f, one(B2)) == f
    std = weyl_character(A1, (1,))
    assert multiply(std, std) == weyl_character(A1, (2,)) + weyl_character(A1, (0,))


def test_decompose_examples():
    for d in SMALL:
        for mu in dominant_weights(d, 8):
            assert decompose(weyl_character(d, mu)) == [(mu, 1)]
    std = weyl_character(A1, (1,))
    assert decompose(std * std) == [((0,), 1), ((2,), 1)]


@pytest.mark.parametrize("d,n", [(B2, 2), (B3, 3)])
def test_spin_square(d, n):
    spin = tuple(int(i == n - 1) for i in range(n))
    got = decompose(weyl_character(d, spin) * weyl_character(d, spin))
    expected = [(tuple(2 * x for x in spin), 1), ((0,) * n, 1)]
    expected += [(tuple(int(i == k) for i in range(n)), 1) for k in range(n - 1)]
    assert got == sorted(expected)


def test_decompose_rejects_non_invariant():
    with pytest.raises(CharacterError):
        decompose(monomial(A1, (1,)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0, 2, 3, 5]))
def test_decompose_round_trip(seed, ring):
    rng = random.Random(seed)
    d = rng.choice(SMALL[:4])
    weights = dominant_weights(d, 10)
    pieces = {}
    for mu in rng.sample(weights, min(3, len(weights))):
        c = rng.randint(1, 4)
        if ring:
            c %= ring
        if c:
            pieces[mu] = c
    f = from_decomposition(d, pieces.items(), ring)
    assert decompose(f) == sorted(pieces.items())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_ring_axioms(seed):
    rng = random.Random(seed)
    d = rng.choice([A1, A2, B2])
    ring = rng.choice([0, 3])

    def rand():
        return CharacterElement.from_dict(
            d, {tuple(rng.randint(-2, 2) for _ in range(d.rank)): rng.randint(-3, 3) for _ in range(4)}, ring
        )

    f, g, h = rand(), rand(), rand()
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    lmap = [[rng.randint(-2, 2) for _ in range(d.rank)] for _ in range(2)]
    target = build_root_datum("Torus", 2)
    assert restrict_along(f * g, lmap, target) == restrict_along(f, lmap, target) * restrict_along(g, lmap, target)


def test_restrict_examples():
    std = weyl_character(A1, (1,))
    assert restrict_along(std, [[1]], A1) == std
    three = restrict_along(std, [[3]], A1)
    assert three.coeffs == {(3,): 1, (-3,): 1}
    a1a1 = product_datum(A1, A1)
    outer = weyl_character(a1a1, (1, 2))
    diag = restrict_along(outer, [[1, 1]], A1)
    assert diag == weyl_character(A1, (1,)) * weyl_character(A1, (2,))
    assert diag.dim() == outer.dim()


def test_classify():
    for n in (1, 2, 3, 4):
        d = build_root_datum("A", n)
        for i in range(n):
            assert classify_weight(d, tuple(int(j == i) for j in range(n))) == "minuscule"
    assert classify_weight(A1, (2,)) == "quasi_minuscule"
    assert classify_weight(B2, (0, 2)) == "neither"
    assert classify_weight(B2, (1, 0)) == "quasi_minuscule"
    assert classify_weight(B2, (0, 1)) == "minuscule"
    assert classify_weight(G2, (1, 0)) == "quasi_minuscule"
    assert classify_weight(G2, (0, 1)) == "neither"


def test_minuscule_single_orbit_bruteforce():
    from modsat.weyl import orbit

    for d in SMALL:
        for mu in dominant_weights(d, 10):
            chi = weyl_character(d, mu)
            single = set(chi.support) == set(orbit(d, mu))
            assert single == (classify_weight(d, mu) == "minuscule")


def test_norm_character_examples():
    a = inner_torsion_automorphism(A1, (0,), 3)
    lam = monomial(A1, (1,))
    assert norm_character(lam, a) == monomial(A1, (3,))
    std = weyl_character(A1, (1,))
    assert norm_character(std, a) == std * std * std
    assert norm_character(std, a).dim() == std.dim() ** 3
    sets = weight_tuple_sets(std, a)
    assert len(sets[(3,)].tuples) == 1 and sets[(3,)].fixed == 1
    assert sets[(1,)].fixed == 0


def test_goodness_examples():
    a = inner_torsion_automorphism(A1, (0,), 3)
    rep = goodness_of_norm(weyl_character(A1, (1,)), a)
    assert rep.all_good
    for row in rep.weights:
        if row["fixed"] == 0:
            assert row["decomposition"][0] == 0
    b = block_cyclic_automorphism(A1, 2)
    f = weyl_character(b.base, (1, 0))
    assert goodness_of_norm(f, b).all_good
    p = pinned_automorphism(A2, (1, 0), 2)
    assert goodness_of_norm(weyl_character(A2, (1, 0)), p).all_good


def test_json_round_trip():
    f = weyl_character(B2, (1, 1), 5)
    assert CharacterElement.from_json(f.to_json()) == f
