import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modsat.automorphism import block_cyclic_automorphism, inner_torsion_automorphism, pinned_automorphism
from modsat.grcombi import (
    CosetTriple,
    GroupError,
    StratumLabel,
    affine_factors,
    coset_fixed_points,
    coset_library,
    coset_negative_control,
    cycle,
    dl_tate_multiset,
    fixed_stratum,
    iwahori_orbit_dimension,
    pariversity,
    relative_pariversity,
)
from modsat.rootdata import build_root_datum, pair
from modsat.weyl import element_from_word, weyl_group

A1 = build_root_datum("A", 1, "sc")
A2 = build_root_datum("A", 2, "sc")
SMALL = [A1, A2, build_root_datum("B", 2, "sc"), build_root_datum("G", 2, "sc"), build_root_datum("C", 3, "sc")]


def _dominant(rng, d):
    while True:
        lam = tuple(rng.randint(-3, 3) for _ in range(d.rank))
        if all(pair(lam, r) >= 0 for r in d.simple_roots):
            return lam


def test_iwahori_examples():
    assert iwahori_orbit_dimension(StratumLabel(A2, (0, 0))) == 0
    # lambda = alpha^vee in A_1: factors (alpha, 0), (alpha, 1)
    assert iwahori_orbit_dimension(StratumLabel(A1, (1,))) == 2
    assert affine_factors(StratumLabel(A1, (1,))) == [((2,), 0), ((2,), 1)]
    # the literal convention of the displayed product drops one factor per positive root
    assert iwahori_orbit_dimension(StratumLabel(A1, (1,)), "positive") == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(range(len(SMALL))))
def test_dominant_dimension(seed, k):
    d = SMALL[k]
    lam = _dominant(random.Random(seed), d)
    s = StratumLabel(d, lam)
    assert iwahori_orbit_dimension(s) == pair(lam, d.two_rho) == len(affine_factors(s))


def test_non_dominant_literal_count():
    # antidominant: only negative roots contribute, one fewer factor each
    s = StratumLabel(A2, (-1, -1))
    assert iwahori_orbit_dimension(s) == sum(max(0, pair((-1, -1), r) - 1) for r in A2.roots)
    assert iwahori_orbit_dimension(s) < iwahori_orbit_dimension(StratumLabel(A2, (1, 1)))


def test_fixed_stratum_base_change():
    b = block_cyclic_automorphism(A1, 3)
    assert fixed_stratum(StratumLabel(b.base, (2, 0, 0)), b) is None
    fs = fixed_stratum(StratumLabel(b.base, (1, 1, 1)), b)
    assert fs.dim == iwahori_orbit_dimension(StratumLabel(A1, (1,))) == fs.fixed_factor_count
    assert fs.dim < iwahori_orbit_dimension(StratumLabel(b.base, (1, 1, 1)))


def test_fixed_stratum_a2_fold():
    a = pinned_automorphism(A2, (1, 0), 2)
    for k in range(4):
        fs = fixed_stratum(StratumLabel(A2, (k, k)), a)
        assert fs.dim == pair(fs.label.lam, a.fixed_datum.two_rho) == fs.fixed_factor_count
    assert fixed_stratum(StratumLabel(A2, (1, 0)), a) is None


def test_fixed_dim_bounded_and_equality_for_trivial_action():
    trivial = inner_torsion_automorphism(A2, (0, 0), 3)
    rng = random.Random(0)
    autos = [pinned_automorphism(A2, (1, 0), 2), block_cyclic_automorphism(A1, 2), trivial]
    for _ in range(60):
        a = rng.choice(autos)
        lam = tuple(rng.randint(-2, 2) for _ in range(a.base.rank))
        x, total = lam, list(lam)
        for _ in range(a.order - 1):
            x = a.act_coweight(x)
            total = [p + q for p, q in zip(total, x)]
        s = StratumLabel(a.base, total)
        fs = fixed_stratum(s, a)
        assert fs.dim <= iwahori_orbit_dimension(s)
        if a is trivial:
            assert fs.dim == iwahori_orbit_dimension(s)


def test_pariversity():
    a = inner_torsion_automorphism(build_root_datum("A", 1, "adjoint"), (1,), 3, on="simple_roots")
    s0 = StratumLabel(a.base, (0,))
    assert pariversity(s0) == 0 and relative_pariversity(s0, a) == 0
    # adjoint A_1: the co-lattice is spanned by the fundamental coweight, alpha^vee = 2 * basis
    s = StratumLabel(a.base, (2,))
    assert relative_pariversity(s, a) == pair((2,), a.base.two_rho) % 2 == 0
    rng = random.Random(2)
    for _ in range(50):
        d = rng.choice(SMALL)
        lam = tuple(rng.randint(-3, 3) for _ in range(d.rank))
        mu = tuple(rng.randint(-3, 3) for _ in range(d.rank))
        both = tuple(x + y for x, y in zip(lam, mu))
        assert pariversity(StratumLabel(d, both)) == (pariversity(StratumLabel(d, lam)) + pariversity(StratumLabel(d, mu))) % 2
    b = pinned_automorphism(A2, (1, 0), 2)
    with pytest.raises(ValueError):
        relative_pariversity(StratumLabel(A2, (1, 0)), b)


def test_dl_tate_examples():
    theta = [Fraction(1, 5)]
    triv = dl_tate_multiset(A1, [], element_from_word(A1, []), theta)
    assert triv.multiset == [(Fraction(1, 5),)]
    r = dl_tate_multiset(A1, [[0]], element_from_word(A1, [0]), theta)
    assert r.multiset == [(Fraction(1, 5),), (Fraction(4, 5),)]
    c = element_from_word(A2, [0, 1])
    r2 = dl_tate_multiset(A2, [[0], [1]], c, [Fraction(1, 7), Fraction(2, 7)])
    assert r2.size == 3
    assert {v.matrix for v in r2.fixed_elements} == {c.matrix, element_from_word(A2, [1, 0]).matrix, element_from_word(A2, []).matrix}


def test_dl_tate_brute_force_and_j():
    group = weyl_group(A2)
    theta = [Fraction(1, 7), Fraction(3, 7)]
    for w in group:
        r0 = dl_tate_multiset(A2, [[0], [1]], w, theta, j=0)
        r1 = dl_tate_multiset(A2, [[0], [1]], w, theta, j=1)
        assert r0.multiset == r1.multiset
        centralizer = [v for v in group if _commute(v, w)]
        assert r0.size == len(centralizer)


def _commute(a, b):
    from modsat import linalg

    return linalg.matmul(a.matrix, b.matrix) == linalg.matmul(b.matrix, a.matrix)


def test_dl_tate_cap():
    with pytest.raises(Exception):
        dl_tate_multiset(build_root_datum("A", 4), [[0], [1], [2], [3]], element_from_word(build_root_datum("A", 4), []), [0] * 4, cap=10)


def test_coset_trivial_k():
    t = CosetTriple("S4", 4, (cycle(4, (0, 1)), cycle(4, (0, 1, 2, 3))), (), cycle(4, (0, 1, 2)), 3)
    r = coset_fixed_points(t)
    assert r.fixed_cosets == r.fixed_quotient == 3  # centralizer of a 3-cycle in S_4


def test_coset_s4_two_group():
    v4 = (cycle(4, (0, 1), (2, 3)), cycle(4, (0, 2), (1, 3)))
    t = CosetTriple("S4/V4", 4, (cycle(4, (0, 1)), cycle(4, (0, 1, 2, 3))), v4, cycle(4, (0, 1, 2)), 3)
    assert coset_fixed_points(t).bijective


def test_coset_library_and_negative_control():
    lib = coset_library()
    assert len(lib) >= 20
    assert len({t.name for t in lib}) == len(lib)
    assert all(coset_fixed_points(t).bijective for t in lib)
    neg = coset_fixed_points(coset_negative_control())
    assert not neg.bijective and neg.witness is not None and not neg.coprime


def test_coset_rejects_non_automorphism():
    t = CosetTriple("bad", 4, (cycle(4, (0, 1, 2, 3)),), (), cycle(4, (0, 1)), 2)
    with pytest.raises(GroupError):
        coset_fixed_points(t)
    assert CosetTriple.from_json(coset_negative_control().to_json()) == coset_negative_control()
