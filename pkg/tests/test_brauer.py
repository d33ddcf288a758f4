import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modsat.automorphism import block_cyclic_automorphism, inner_torsion_automorphism, pinned_automorphism
from modsat.brauer import (
    HypothesisViolation,
    NonMultiplicativeWarning,
    SatakeSetup,
    brauer_closed_form,
    brauer_restrict,
    char_zero_counterexample,
    char_zero_liftability,
    linearized_norm,
    normalized_brauer,
    random_invariant_character,
    random_invariant_element,
    satake_matrix,
    setup_from_json,
    tate_diagonal,
)
from modsat.charring import (
    CharacterElement,
    CharacterError,
    decompose,
    monomial,
    multiply,
    one,
    weyl_character,
)
from modsat.rootdata import build_root_datum, dual_datum

A1a = build_root_datum("A", 1, "adjoint")
A2 = build_root_datum("A", 2, "sc")

INNER3 = SatakeSetup(inner_torsion_automorphism(A1a, (1,), 3, on="simple_roots"))
TRIVIAL3 = SatakeSetup(inner_torsion_automorphism(A1a, (0,), 3, on="simple_roots"))
BASE3 = SatakeSetup(block_cyclic_automorphism(A1a, 3))
FOLD2 = SatakeSetup(pinned_automorphism(A2, (1, 0), 2))
SETUPS = [INNER3, TRIVIAL3, BASE3, FOLD2, SatakeSetup(block_cyclic_automorphism(A1a, 2))]


def test_setup_invariants():
    for s in SETUPS:
        s.check()
        assert s.g_datum == dual_datum(s.auto.base)
    assert BASE3.N_matrix == [[1, 1, 1]]
    assert INNER3.N_matrix == [[3]]


def test_br_trivial_sigma_is_identity():
    rng = random.Random(1)
    for _ in range(20):
        f = random_invariant_element(rng, TRIVIAL3)
        assert brauer_restrict(f, TRIVIAL3).terms == f.terms


def test_br_kills_free_orbit():
    f = CharacterElement.from_dict(BASE3.g_datum, {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1}, 3)
    assert brauer_restrict(f, BASE3).is_zero()


def test_br_rejects_non_invariant():
    f = monomial(BASE3.g_datum, (1, 0, 0), 3)
    with pytest.raises(CharacterError):
        brauer_restrict(f, BASE3)


def test_br_flags_other_rings():
    f = one(FOLD2.g_datum, 0)
    with pytest.warns(NonMultiplicativeWarning):
        brauer_restrict(f, FOLD2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(range(len(SETUPS))))
def test_br_multiplicative_mod_ell(seed, k):
    s = SETUPS[k]
    rng = random.Random(seed)
    f, g = random_invariant_element(rng, s), random_invariant_element(rng, s)
    assert brauer_restrict(f * g, s) == brauer_restrict(f, s) * brauer_restrict(g, s)


def test_char_zero_counterexample():
    f, g, lhs, rhs = char_zero_counterexample(FOLD2)
    assert lhs != rhs
    assert char_zero_counterexample(TRIVIAL3) is None


def test_tate_diagonal():
    lam = monomial(BASE3.g_datum, (1, 0, 2), 3)
    t = tate_diagonal(lam, BASE3)
    assert t.normal_form == monomial(BASE3.g_datum, (3, 3, 3), 3)
    assert t.frob_twist == 1
    rng = random.Random(3)
    for _ in range(20):
        f = random_invariant_character(rng, FOLD2)
        g = random_invariant_character(rng, FOLD2)
        assert tate_diagonal(f * g, FOLD2) == _class_product(tate_diagonal(f, FOLD2), tate_diagonal(g, FOLD2), FOLD2)


def _class_product(a, b, s):
    from modsat.brauer import tate_class

    return tate_class(a.representative * b.representative, s, a.frob_twist)


def test_scalar_semilinearity():
    f = weyl_character(INNER3.g_datum, (1,), 3)
    two_f = CharacterElement.from_dict(f.datum, {w: 2 * c for w, c in f.terms}, 3)
    lhs = tate_diagonal(two_f, INNER3).normal_form
    rhs = tate_diagonal(f, INNER3).normal_form
    assert lhs == CharacterElement.from_dict(rhs.datum, {w: 8 * c for w, c in rhs.terms}, 3)


def test_linearized_norm_tags():
    f = weyl_character(FOLD2.g_datum, (1, 1), 2)
    t, lin = tate_diagonal(f, FOLD2), linearized_norm(f, FOLD2)
    assert t.normal_form == lin.normal_form
    assert t.frob_twist - lin.frob_twist == 1
    assert normalized_brauer(f, FOLD2).frob_twist == 0
    g = CharacterElement(f.datum, f.ring, f.terms, 2)
    assert linearized_norm(g, FOLD2).frob_twist == 2


def test_br_unit_and_examples():
    for s in SETUPS:
        assert normalized_brauer(one(s.g_datum, s.ell), s) == one(s.h_datum, s.ell)
    chi = weyl_character(INNER3.g_datum, (1,), 3)
    assert normalized_brauer(chi, INNER3).coeffs == {(3,): 1, (-3,): 1}
    chi3 = weyl_character(BASE3.g_datum, (1, 1, 1), 3)
    assert dict(decompose(normalized_brauer(chi3, BASE3))) == {(3,): 1, (1,): 2}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(range(len(SETUPS))))
def test_br_additive_multiplicative_and_closed_form(seed, k):
    s = SETUPS[k]
    rng = random.Random(seed)
    f = random_invariant_character(rng, s, bound=4)
    g = random_invariant_character(rng, s, bound=4)
    bf, bg = normalized_brauer(f, s), normalized_brauer(g, s)
    assert bf == brauer_closed_form(f, s)
    assert normalized_brauer(f + g, s) == bf + bg
    assert normalized_brauer(f * g, s) == bf * bg
    assert bf.is_weyl_invariant()


def test_closed_form_examples():
    lam = monomial(TRIVIAL3.g_datum, (2,), 3)
    assert brauer_closed_form(lam, TRIVIAL3).coeffs == {(6,): 1}
    lam = monomial(BASE3.g_datum, (1, -2, 4), 3)
    assert brauer_closed_form(lam, BASE3).coeffs == {(3,): 1}


def test_satake_matrix_examples():
    m = satake_matrix(INNER3, 2)
    assert m.columns == [(0,), (1,), (2,)]
    assert m.column((1,)) == {(-3,): 1, (3,): 1}
    b = satake_matrix(BASE3, 3)
    assert b.column((1, 1, 1)) == {(3,): 1, (1,): 2}
    f = satake_matrix(FOLD2, 6)
    assert all(0 <= x < 2 for row in f.entries for x in row)


def test_satake_matrix_multiplicative():
    s = FOLD2
    m = satake_matrix(s, 8)
    g = s.g_datum
    for mu in m.columns[:4]:
        for nu in m.columns[:4]:
            prod = multiply(weyl_character(g, mu, 2), weyl_character(g, nu, 2))
            lhs = {}
            for w, c in decompose(prod):
                for r, x in _column(s, w).items():
                    lhs[r] = (lhs.get(r, 0) + c * x) % 2
            br = normalized_brauer(weyl_character(g, mu, 2), s) * normalized_brauer(weyl_character(g, nu, 2), s)
            rhs = {w: c % 2 for w, c in decompose(br)}
            assert {k: v for k, v in lhs.items() if v} == {k: v for k, v in rhs.items() if v}


def _column(s, w):
    return dict(decompose(normalized_brauer(weyl_character(s.g_datum, w, s.ell), s)))


def test_satake_matrix_deterministic_across_threads():
    a = satake_matrix(FOLD2, 8, threads=1).to_json()
    b = satake_matrix(FOLD2, 8, threads=4).to_json()
    assert a == b


def test_hypothesis_enforced():
    C3 = build_root_datum("C", 3, "adjoint")
    s = SatakeSetup(inner_torsion_automorphism(C3, (1, 0, 0), 2, on="simple_roots"))
    with pytest.raises(HypothesisViolation, match="excluded-primes"):
        satake_matrix(s, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        brauer_restrict(one(s.g_datum, 2), s)  # primitives stay available


def test_liftability():
    for s in (BASE3, INNER3):
        rep = char_zero_liftability(s, 4)
        assert all(r["nonnegative"] for r in rep)
        assert rep == sorted(rep, key=lambda r: (s.g_datum.height(tuple(r["weight"])), r["weight"]))


def test_setup_json():
    s = setup_from_json({"g_datum": {"type": "A", "rank": 1}, "auto": {"kind": "block_cyclic", "order": 3}})
    assert s.g_datum.label == "A1xA1xA1" and s.h_datum.label == "A1"
    s = setup_from_json({"g_datum": FOLD2.g_datum.to_json(), "auto": FOLD2.auto.to_json()})
    assert s.h_datum == FOLD2.h_datum
    with pytest.raises(ValueError):
        setup_from_json({"g_datum": {"type": "A", "rank": 1}})
