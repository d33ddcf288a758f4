"""Brauer homomorphisms on mod-ell group algebras and Satake rings.

A :class:`SatakeSetup` starts from a root datum of G and an order-ell
automorphism sigma of it with fixed datum H. Satake characters live on the
weight lattice of the dual group, i.e. on X^vee(G), where sigma acts by the
contragredient. The norm map N = 1 + sigma + ... lands in (X^vee(G))^sigma,
which is identified with X^vee(H), the weight lattice of the dual of H.
"""
from __future__ import annotations

import random
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import linalg
from .automorphism import DatumAutomorphism, automorphism_from_json
from .charring import (
    CharacterElement,
    CharacterError,
    decompose,
    dominant_weights,
    multiply,
    weyl_character,
)
from .rootdata import RootDatum, Vector, bad_prime_bound, build_root_datum, dual_datum

SCHEMA_VERSION = 1
EXCLUDED_PRIMES_NOTE = (
    "excluded-primes table b: A_n 1; B_n, D_n 2; C_n n; G_2, F_4, E_6 3; E_7 19; E_8 31; torus 1"
)


class HypothesisViolation(ValueError):
    """The theorem-level hypothesis ell > max(b(G^vee), b(H^vee)) fails."""


class InternalInvariantError(RuntimeError):
    pass


class NonMultiplicativeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SatakeSetup:
    auto: DatumAutomorphism

    @property
    def ell(self) -> int:
        return self.auto.order

    @cached_property
    def g_datum(self) -> RootDatum:
        """Datum of the dual group of G (characters live on its lattice X^vee(G))."""
        return dual_datum(self.auto.base)

    @cached_property
    def h_datum(self) -> RootDatum:
        return dual_datum(self.auto.fixed_datum)

    @cached_property
    def sigma(self) -> tuple[tuple[int, ...], ...]:
        return self.auto.coweight_matrix

    def act(self, v: Sequence[int]) -> Vector:
        return linalg.matvec(self.sigma, v)

    def is_fixed(self, v: Sequence[int]) -> bool:
        return self.act(v) == tuple(v)

    def norm(self, v: Sequence[int]) -> Vector:
        """N(v) = v + sigma v + ... in X^vee(G)."""
        total = [0] * len(v)
        x = tuple(v)
        for _ in range(self.ell):
            total = [a + b for a, b in zip(total, x)]
            x = self.act(x)
        return tuple(total)

    def to_h(self, v: Sequence[int]) -> Vector:
        """Coordinates in X^vee(H) of a sigma-fixed vector."""
        return self.auto.fixed_coordinates(v)

    def N_map(self, v: Sequence[int]) -> Vector:
        return self.to_h(self.norm(v))

    @cached_property
    def N_matrix(self) -> list[list[int]]:
        """N as an integer matrix X^vee(G) -> X^vee(H)."""
        n = self.g_datum.rank
        cols = [self.N_map([int(i == j) for i in range(n)]) for j in range(n)]
        r = self.h_datum.rank
        return [[cols[j][i] for j in range(n)] for i in range(r)]

    def check(self) -> None:
        n = self.g_datum.rank
        for j in range(n):
            e = [int(i == j) for i in range(n)]
            nv = self.norm(e)
            if not self.is_fixed(nv):
                raise InternalInvariantError("N does not land in the fixed sublattice")
            if self.norm(self.act(e)) != nv:
                raise InternalInvariantError("N o sigma != N")

    def hypothesis_bound(self) -> int:
        return max(bad_prime_bound(self.g_datum), bad_prime_bound(self.h_datum))

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "g_datum": self.g_datum.to_json(),
            "auto": self.auto.to_json(),
        }


def setup_from_json(data: dict) -> SatakeSetup:
    """``{"g_datum": <datum of the dual group>, "auto": <automorphism of its dual>}``.

    ``g_datum`` may be a shorthand ``{"type": "A", "rank": 2, "isogeny": "sc"}``. For
    ``block_cyclic`` it names one factor of the dual group; the setup is the ell-fold product.
    """
    if "g_datum" not in data or "auto" not in data:
        raise ValueError("setup.json needs 'g_datum' and 'auto'")
    g_dual = _datum(data["g_datum"])
    auto_data = dict(data["auto"])
    if auto_data.get("kind") == "block_cyclic":
        auto_data["factor"] = dual_datum(g_dual).to_json()
        a = automorphism_from_json(dual_datum(g_dual), auto_data)
    else:
        a = automorphism_from_json(dual_datum(g_dual), auto_data)
        if dual_datum(a.base) != g_dual:
            raise ValueError("g_datum does not match the automorphism's base")
    s = SatakeSetup(a)
    s.check()
    return s


def _datum(data: dict) -> RootDatum:
    if "type" in data:
        return build_root_datum(data["type"], int(data["rank"]), data.get("isogeny", "sc"))
    return RootDatum.from_json(data)


# ---------------------------------------------------------------------------
# Br and Nm


def is_sigma_invariant(f: CharacterElement, s: SatakeSetup) -> bool:
    cf = f.coeffs
    return all(cf.get(s.act(w), 0) == c for w, c in f.terms)


def brauer_restrict(f: CharacterElement, s: SatakeSetup, check: bool = True) -> CharacterElement:
    """Keep the terms e^lam with sigma(lam) = lam, reindexed to X^vee(H)."""
    if f.datum != s.g_datum:
        raise CharacterError("Br expects a character of the dual group of G")
    if check and not is_sigma_invariant(f, s):
        raise CharacterError("Br needs a sigma-invariant element")
    if f.ring != s.ell:
        warnings.warn(
            f"Br over ring {f.ring or 'Z'} is not multiplicative; the guarantee holds in characteristic {s.ell}",
            NonMultiplicativeWarning,
            stacklevel=2,
        )
    out = {}
    for w, c in f.terms:
        if s.is_fixed(w):
            out[s.to_h(w)] = out.get(s.to_h(w), 0) + c
    return CharacterElement.from_dict(s.h_datum, out, f.ring, f.frob_twist)


@dataclass(frozen=True)
class TateClass:
    """A class in T^0 of the group algebra: sigma-invariants modulo N(group algebra).

    N kills fixed monomials (ell = 0) and sends a free-orbit monomial to its orbit
    sum, so a class is determined by the fixed-exponent part of any representative.
    """

    representative: CharacterElement
    normal_form: CharacterElement
    frob_twist: int = field(default=0)

    def __eq__(self, other):
        return isinstance(other, TateClass) and self.normal_form == other.normal_form and self.frob_twist == other.frob_twist

    def __hash__(self):
        return hash((self.normal_form, self.frob_twist))


def tate_class(f: CharacterElement, s: SatakeSetup, frob_twist: int | None = None) -> TateClass:
    if not is_sigma_invariant(f, s):
        raise CharacterError("T^0 classes need sigma-invariant representatives")
    fixed = {w: c for w, c in f.terms if s.is_fixed(w)}
    nf = CharacterElement.from_dict(f.datum, fixed, f.ring, f.frob_twist)
    return TateClass(f, nf, f.frob_twist if frob_twist is None else frob_twist)


def norm_product(f: CharacterElement, s: SatakeSetup) -> CharacterElement:
    """f * sigma(f) * ... * sigma^{ell-1}(f), expanded in the group algebra."""
    out = CharacterElement.from_dict(f.datum, {(0,) * f.datum.rank: 1}, f.ring, f.frob_twist)
    g = f
    for _ in range(s.ell):
        out = multiply(out, g)
        g = CharacterElement.from_dict(f.datum, {s.act(w): c for w, c in g.terms}, g.ring, g.frob_twist)
    return out


def tate_diagonal(f: CharacterElement, s: SatakeSetup) -> TateClass:
    """Nm(f) as a class in T^0; Frobenius-semilinear, so the twist tag goes up by one."""
    if f.ring != s.ell:
        raise CharacterError(f"the Tate diagonal is taken over F_{s.ell}")
    return tate_class(norm_product(f, s), s, f.frob_twist + 1)


def linearized_norm(f: CharacterElement, s: SatakeSetup) -> TateClass:
    """Nm composed with Frob^{-1}: same values over F_ell, twist tag unchanged."""
    t = tate_diagonal(f, s)
    return TateClass(t.representative, t.normal_form, t.frob_twist - 1)


def normalized_brauer(f: CharacterElement, s: SatakeSetup) -> CharacterElement:
    """br = Br o Nm^(1/ell) on W(G^vee)-invariant elements over F_ell."""
    if f.ring != s.ell:
        raise CharacterError(f"br is defined over F_{s.ell}")
    if not f.is_weyl_invariant():
        raise CharacterError("br expects a Weyl-invariant element")
    t = linearized_norm(f, s)
    out = brauer_restrict(t.normal_form, s, check=False)
    out = CharacterElement(out.datum, out.ring, out.terms, t.frob_twist)
    if not out.is_weyl_invariant():
        raise InternalInvariantError("br output is not W(H)-invariant")
    return out


def brauer_closed_form(f: CharacterElement, s: SatakeSetup) -> CharacterElement:
    """sum a_lam e^lam -> sum a_lam e^{N lam}."""
    out: dict[Vector, int] = {}
    for w, c in f.terms:
        v = s.N_map(w)
        out[v] = out.get(v, 0) + c
    return CharacterElement.from_dict(s.h_datum, out, f.ring, f.frob_twist)


# ---------------------------------------------------------------------------
# Satake matrices


@dataclass
class SatakeMatrix:
    ell: int
    columns: list[Vector]
    rows: list[Vector]
    entries: list[list[int]]
    liftability: list[dict]

    def column(self, mu: Sequence[int]) -> dict[Vector, int]:
        j = self.columns.index(tuple(mu))
        return {r: self.entries[i][j] for i, r in enumerate(self.rows) if self.entries[i][j]}

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "ell": self.ell,
            "columns": [list(c) for c in self.columns],
            "rows": [list(r) for r in self.rows],
            "entries": [list(r) for r in self.entries],
            "liftability": self.liftability,
        }


def check_hypothesis(s: SatakeSetup) -> None:
    b = s.hypothesis_bound()
    if s.ell <= b:
        raise HypothesisViolation(
            f"ell = {s.ell} must exceed max(b(G^vee), b(H^vee)) = {b} "
            f"for G^vee = {s.g_datum.label}, H^vee = {s.h_datum.label} ({EXCLUDED_PRIMES_NOTE})"
        )


def _column(s: SatakeSetup, mu: Vector) -> tuple[Vector, dict[Vector, int], dict]:
    chi = weyl_character(s.g_datum, mu, s.ell)
    image = normalized_brauer(chi, s)
    try:
        col = dict(decompose(image))
    except CharacterError as exc:
        raise InternalInvariantError(f"decomposition failed for column {mu}: {exc}") from exc
    lift = _lift_report(s, mu)
    return mu, col, lift


def _lift_report(s: SatakeSetup, mu: Vector) -> dict:
    chi = weyl_character(s.g_datum, mu, 0)
    image = brauer_closed_form(chi, s)
    coeffs = decompose(image)
    return {
        "weight": list(mu),
        "nonnegative": all(c >= 0 for _, c in coeffs),
        "coefficients": [{"weight": list(w), "coeff": c} for w, c in coeffs],
    }


def satake_matrix(s: SatakeSetup, weight_bound: int, threads: int = 1, central_bound: int = 1) -> SatakeMatrix:
    """Matrix of br in Weyl-character bases: column mu is the decomposition of br(chi(mu)) over F_ell."""
    check_hypothesis(s)
    s.check()
    cols = dominant_weights(s.g_datum, weight_bound, central_bound)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda mu: _column(s, mu), cols))
    else:
        results = [_column(s, mu) for mu in cols]
    results.sort(key=lambda r: (s.g_datum.height(r[0]), r[0]))
    rows = sorted({w for _, col, _ in results for w in col}, key=lambda v: (s.h_datum.height(v), v))
    index = {r: i for i, r in enumerate(rows)}
    entries = [[0] * len(results) for _ in rows]
    for j, (_, col, _) in enumerate(results):
        for w, c in col.items():
            entries[index[w]][j] = c % s.ell
    lift = [r[2] for r in results]
    return SatakeMatrix(s.ell, [r[0] for r in results], rows, entries, lift)


def char_zero_liftability(s: SatakeSetup, weight_bound: int, central_bound: int = 1) -> list[dict]:
    """Per column: does the integral closed form decompose with nonnegative coefficients? (diagnostic)"""
    check_hypothesis(s)
    cols = dominant_weights(s.g_datum, weight_bound, central_bound)
    return sorted((_lift_report(s, mu) for mu in cols), key=lambda r: (s.g_datum.height(tuple(r["weight"])), r["weight"]))


# ---------------------------------------------------------------------------
# random fixtures and the characteristic-zero counterexample


def random_invariant_element(rng: random.Random, s: SatakeSetup, ring: int | None = None, terms: int = 3, box: int = 2) -> CharacterElement:
    """A random sigma-invariant element: a combination of sigma-orbit sums of small weights."""
    ring = s.ell if ring is None else ring
    n = s.g_datum.rank
    out: dict[Vector, int] = {}
    for _ in range(terms):
        lam = tuple(rng.randint(-box, box) for _ in range(n))
        c = rng.randint(1, max(ring - 1, 1)) if ring else rng.randint(-3, 3)
        orb = {lam}
        x = s.act(lam)
        while x != lam:
            orb.add(x)
            x = s.act(x)
        for w in orb:
            out[w] = out.get(w, 0) + c
    return CharacterElement.from_dict(s.g_datum, out, ring)


def random_invariant_character(rng: random.Random, s: SatakeSetup, ring: int | None = None, bound: int = 6, terms: int = 2) -> CharacterElement:
    """A random combination of Weyl characters (W-invariant but not necessarily sigma-invariant)."""
    ring = s.ell if ring is None else ring
    weights = dominant_weights(s.g_datum, bound)
    out = CharacterElement.from_dict(s.g_datum, {}, ring)
    for _ in range(terms):
        mu = rng.choice(weights)
        c = rng.randint(1, max(ring - 1, 1)) if ring else rng.randint(1, 3)
        chi = weyl_character(s.g_datum, mu, ring)
        out = out + CharacterElement.from_dict(s.g_datum, {w: c * x for w, x in chi.terms}, ring)
    return out


def char_zero_counterexample(s: SatakeSetup, box: int = 2):
    """f, g over Z with Br(f g) != Br(f) Br(g): f a free sigma-orbit sum, g = f^(ell-1)."""
    n = s.g_datum.rank
    import itertools

    for lam in sorted(itertools.product(range(-box, box + 1), repeat=n), key=lambda v: (sum(map(abs, v)), v)):
        if s.is_fixed(lam):
            continue
        orb = [lam]
        x = s.act(lam)
        while x != lam:
            orb.append(x)
            x = s.act(x)
        f = CharacterElement.from_dict(s.g_datum, {w: 1 for w in orb}, 0)
        g = CharacterElement.from_dict(s.g_datum, {(0,) * n: 1}, 0)
        for _ in range(s.ell - 1):
            g = multiply(g, f)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonMultiplicativeWarning)
            lhs = brauer_restrict(multiply(f, g), s)
            rhs = multiply(brauer_restrict(f, s), brauer_restrict(g, s))
        if lhs != rhs:
            return f, g, lhs, rhs
    return None
