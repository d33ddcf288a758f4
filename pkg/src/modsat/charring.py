"""Weyl-invariant character ring arithmetic.

Elements are finitely supported maps from the weight lattice of a root datum to
Z (``ring=0``) or F_ell (``ring=ell``), with a formal Frobenius-twist tag.
Weyl characters are computed with Freudenthal's recursion and form the working
basis for decomposition in every characteristic.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import linalg
from .rootdata import RootDatum, Vector, dual_datum, pair
from .weyl import dominant_conjugate, orbit

DEFAULT_WEIGHT_BOUND = 24
DEFAULT_TUPLE_BOUND = 200_000


class CharacterError(ValueError):
    pass


def _normalize(terms: Mapping[Vector, int], ring: int) -> tuple[tuple[Vector, int], ...]:
    out = {}
    for w, c in terms.items():
        c = int(c)
        if ring:
            c %= ring
        if c:
            out[tuple(int(x) for x in w)] = c
    return tuple(sorted(out.items()))


@dataclass(frozen=True)
class CharacterElement:
    datum: RootDatum
    ring: int
    terms: tuple[tuple[Vector, int], ...]
    frob_twist: int = 0

    def __post_init__(self):
        if self.ring < 0:
            raise CharacterError("ring must be 0 (Z) or a prime ell")
        if isinstance(self.terms, dict):
            object.__setattr__(self, "terms", _normalize(self.terms, self.ring))
        for w, _ in self.terms:
            if len(w) != self.datum.rank:
                raise CharacterError(f"weight {w} has the wrong length for rank {self.datum.rank}")

    @classmethod
    def from_dict(cls, datum: RootDatum, terms: Mapping, ring: int = 0, frob_twist: int = 0) -> "CharacterElement":
        return cls(datum, ring, _normalize(terms, ring), frob_twist)

    @cached_property
    def coeffs(self) -> dict[Vector, int]:
        return dict(self.terms)

    def coeff(self, w: Sequence[int]) -> int:
        return self.coeffs.get(tuple(w), 0)

    @property
    def support(self) -> list[Vector]:
        return [w for w, _ in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def dim(self) -> int:
        s = sum(c for _, c in self.terms)
        return s % self.ring if self.ring else s

    def is_weyl_invariant(self) -> bool:
        d = self.datum
        cf = self.coeffs
        for w, c in self.terms:
            for i in range(d.semisimple_rank):
                if cf.get(d.reflect(i, w), 0) != c:
                    return False
        return True

    def __add__(self, other: "CharacterElement") -> "CharacterElement":
        return add(self, other)

    def __sub__(self, other: "CharacterElement") -> "CharacterElement":
        return add(self, scale(-1, other))

    def __mul__(self, other: "CharacterElement") -> "CharacterElement":
        return multiply(self, other)

    def reduce(self, ell: int) -> "CharacterElement":
        """Reduction mod ell of an integral element."""
        if self.ring not in (0, ell):
            raise CharacterError("cannot reduce between different primes")
        return CharacterElement(self.datum, ell, _normalize(self.coeffs, ell), self.frob_twist)

    def lift(self) -> "CharacterElement":
        """Integral lift with coefficients in [0, ell)."""
        return CharacterElement(self.datum, 0, self.terms, self.frob_twist)

    def to_json(self) -> dict:
        return {
            "datum_ref": self.datum.label,
            "datum": self.datum.to_json(),
            "ring": "Z" if self.ring == 0 else f"F_{self.ring}",
            "frob_twist": self.frob_twist,
            "terms": [{"weight": list(w), "coeff": c} for w, c in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict, datum: RootDatum | None = None) -> "CharacterElement":
        if datum is None:
            if "datum" not in data:
                raise CharacterError("character.json needs an embedded datum or an explicit one")
            datum = RootDatum.from_json(data["datum"])
        ring = parse_ring(data.get("ring", "Z"))
        terms = {}
        for t in data.get("terms", []):
            w, c = t["weight"], t["coeff"]
            if not isinstance(c, int) or any(not isinstance(x, int) for x in w):
                raise CharacterError("character.json must contain integers only")
            terms[tuple(w)] = terms.get(tuple(w), 0) + c
        return cls.from_dict(datum, terms, ring, int(data.get("frob_twist", 0)))


def parse_ring(text) -> int:
    if isinstance(text, int):
        return text
    if text in ("Z", "0"):
        return 0
    if isinstance(text, str) and text.startswith("F"):
        return int(text.lstrip("F_"))
    raise CharacterError(f"unknown ring {text!r}")


def _check_compatible(f: CharacterElement, g: CharacterElement) -> None:
    if f.datum != g.datum:
        raise CharacterError("characters live on different data")
    if f.ring != g.ring:
        raise CharacterError("characters have different coefficient rings")
    if f.frob_twist != g.frob_twist:
        raise CharacterError("characters have different Frobenius twists")


def zero(d: RootDatum, ring: int = 0, frob_twist: int = 0) -> CharacterElement:
    return CharacterElement(d, ring, (), frob_twist)


def monomial(d: RootDatum, weight: Sequence[int], ring: int = 0, coeff: int = 1, frob_twist: int = 0) -> CharacterElement:
    return CharacterElement.from_dict(d, {tuple(weight): coeff}, ring, frob_twist)


def one(d: RootDatum, ring: int = 0, frob_twist: int = 0) -> CharacterElement:
    return monomial(d, (0,) * d.rank, ring, 1, frob_twist)


def add(f: CharacterElement, g: CharacterElement) -> CharacterElement:
    _check_compatible(f, g)
    out = dict(f.coeffs)
    for w, c in g.terms:
        out[w] = out.get(w, 0) + c
    return CharacterElement.from_dict(f.datum, out, f.ring, f.frob_twist)


def scale(c: int, f: CharacterElement) -> CharacterElement:
    return CharacterElement.from_dict(f.datum, {w: c * x for w, x in f.terms}, f.ring, f.frob_twist)


def multiply(f: CharacterElement, g: CharacterElement) -> CharacterElement:
    _check_compatible(f, g)
    out: dict[Vector, int] = {}
    for w1, c1 in f.terms:
        for w2, c2 in g.terms:
            w = tuple(a + b for a, b in zip(w1, w2))
            out[w] = out.get(w, 0) + c1 * c2
    return CharacterElement.from_dict(f.datum, out, f.ring, f.frob_twist)


def power(f: CharacterElement, k: int) -> CharacterElement:
    out = one(f.datum, f.ring, f.frob_twist)
    for _ in range(k):
        out = multiply(out, f)
    return out


def act(f: CharacterElement, matrix) -> CharacterElement:
    """Transport along a lattice automorphism: e^lam -> e^{matrix lam}."""
    return CharacterElement.from_dict(f.datum, {linalg.matvec(matrix, w): c for w, c in f.terms}, f.ring, f.frob_twist)


# ---------------------------------------------------------------------------
# Weyl characters


def invariant_form(d: RootDatum):
    """(x, y) = sum over roots of <x, b^vee><y, b^vee>; W-invariant, central part in the radical."""
    cor = d.coroots

    def form(x, y):
        return sum(pair(x, c) * pair(y, c) for c in cor)

    return form


def dominant_weights_below(d: RootDatum, lam: Sequence[int]) -> list[Vector]:
    """Dominant mu with lam - mu a nonnegative sum of positive roots, sorted by decreasing height."""
    lam = tuple(lam)
    seen = {lam}
    stack = [lam]
    pos = d.positive_roots
    while stack:
        mu = stack.pop()
        for a in pos:
            nu = tuple(x - y for x, y in zip(mu, a))
            if nu not in seen and d.is_dominant(nu):
                seen.add(nu)
                stack.append(nu)
    return sorted(seen, key=lambda v: (-d.height(v), tuple(-x for x in v)))


_CACHE_LOCK = threading.Lock()
_WEYL_CACHE: dict = {}


def dominant_multiplicities(d: RootDatum, lam: Sequence[int]) -> dict[Vector, int]:
    """Freudenthal: multiplicities of the dominant weights of the Weyl module V(lam)."""
    lam = tuple(lam)
    if not d.is_dominant(lam):
        raise CharacterError(f"{lam} is not dominant")
    key = (d, lam)
    with _CACHE_LOCK:
        if key in _WEYL_CACHE:
            return dict(_WEYL_CACHE[key])
    form = invariant_form(d)
    doms = dominant_weights_below(d, lam)
    dom_set = set(doms)
    two_rho = d.two_rho
    mult: dict[Vector, int] = {}
    dom_cache: dict[Vector, Vector] = {}

    def dom(v):
        if v not in dom_cache:
            dom_cache[v] = dominant_conjugate(d, v)[0]
        return dom_cache[v]

    def shifted(v):
        return tuple(2 * x + r for x, r in zip(v, two_rho))

    top = form(shifted(lam), shifted(lam))
    for mu in doms:
        if mu == lam:
            mult[mu] = 1
            continue
        denom = top - form(shifted(mu), shifted(mu))
        total = 0
        for a in d.positive_roots:
            k = 1
            while True:
                nu = tuple(x + k * y for x, y in zip(mu, a))
                dn = dom(nu)
                if dn not in dom_set:
                    break
                total += mult[dn] * form(nu, a)
                k += 1
        # (|lam+rho|^2 - |mu+rho|^2) m = 2 sum ..., with the 2rho scaling giving a factor 4
        value = Fraction(8 * total, denom)
        if value.denominator != 1 or value < 0:
            raise CharacterError("Freudenthal recursion produced a non-integer multiplicity")
        mult[mu] = int(value)
    mult = {m: c for m, c in mult.items() if c}
    with _CACHE_LOCK:
        _WEYL_CACHE[key] = dict(mult)
    return mult


def weyl_character(d: RootDatum, lam: Sequence[int], ring: int = 0, frob_twist: int = 0) -> CharacterElement:
    mult = dominant_multiplicities(d, lam)
    terms: dict[Vector, int] = {}
    for mu, m in mult.items():
        for w in orbit(d, mu):
            terms[w] = m
    return CharacterElement.from_dict(d, terms, ring, frob_twist)


def weyl_dimension(d: RootDatum, lam: Sequence[int]) -> int:
    """Weyl dimension formula: prod over positive coroots of <lam + rho, a^vee> / <rho, a^vee>."""
    num, den = 1, 1
    two_rho = d.two_rho
    for a in d.positive_roots:
        c = d.coroot_of[a]
        num *= pair(tuple(2 * x + r for x, r in zip(lam, two_rho)), c)
        den *= pair(two_rho, c)
    return num // den


# ---------------------------------------------------------------------------
# decomposition


def decompose(f: CharacterElement) -> list[tuple[Vector, int]]:
    """Coefficients of f in the basis of Weyl characters, sorted by weight."""
    if not f.is_weyl_invariant():
        raise CharacterError("decompose needs a Weyl-invariant element")
    d = f.datum
    rest = dict(f.coeffs)
    out = []
    while rest:
        doms = [w for w in rest if d.is_dominant(w)]
        if not doms:
            raise CharacterError("invariant element without dominant support")
        top = max(doms, key=lambda v: (d.height(v), v))
        c = rest[top]
        out.append((top, c % f.ring if f.ring else c))
        for mu, m in dominant_multiplicities(d, top).items():
            for w in orbit(d, mu):
                x = rest.get(w, 0) - c * m
                if f.ring:
                    x %= f.ring
                if x:
                    rest[w] = x
                else:
                    rest.pop(w, None)
    return sorted(out)


def from_decomposition(d: RootDatum, pieces: Iterable[tuple[Sequence[int], int]], ring: int = 0, frob_twist: int = 0) -> CharacterElement:
    out = zero(d, ring, frob_twist)
    for mu, c in pieces:
        out = add(out, scale(c, weyl_character(d, mu, ring, frob_twist)))
    return out


# ---------------------------------------------------------------------------
# restriction, classification


def restrict_along(f: CharacterElement, lattice_map, target: RootDatum) -> CharacterElement:
    """e^lam -> e^{L lam} for an integer matrix L of shape target.rank x source.rank."""
    rows = [list(r) for r in lattice_map]
    if len(rows) != target.rank or any(len(r) != f.datum.rank for r in rows):
        raise CharacterError(f"lattice map must be {target.rank} x {f.datum.rank}")
    out: dict[Vector, int] = {}
    for w, c in f.terms:
        v = linalg.matvec(rows, w) if rows else ()
        out[v] = out.get(v, 0) + c
    return CharacterElement.from_dict(target, out, f.ring, f.frob_twist)


def classify_weight(d: RootDatum, mu: Sequence[int]) -> str:
    """"minuscule", "quasi_minuscule" or "neither" (0 counts as minuscule)."""
    mu = tuple(mu)
    if not d.is_dominant(mu):
        raise CharacterError(f"{mu} is not dominant")
    if dominant_weights_below(d, mu) == [mu]:
        return "minuscule"
    if mu in d.root_set and _is_short_in_component(d, mu):
        return "quasi_minuscule"
    return "neither"


def _is_short_in_component(d: RootDatum, root: Vector) -> bool:
    """Whether ``root`` has minimal length among roots of its simple component."""
    form = invariant_form(d)
    closure = {root}
    changed = True
    while changed:
        changed = False
        for r in d.roots:
            if r not in closure and any(form(r, s) != 0 for s in closure):
                closure.add(r)
                changed = True
    lengths = [form(r, r) for r in closure]
    return form(root, root) == min(lengths)


# ---------------------------------------------------------------------------
# dominant weight enumeration


def dominant_weights(d: RootDatum, bound: int = DEFAULT_WEIGHT_BOUND, central_bound: int = 1) -> list[Vector]:
    """Dominant mu with <mu, 2rho^vee> <= bound; central coordinates boxed by ``central_bound``."""
    n, r = d.rank, d.semisimple_rank
    pairing = [list(c) for c in d.simple_coroots]
    heights = []
    if r:
        cart_inv = linalg.rational_inverse([[pair(a, c) for a in d.simple_roots] for c in d.simple_coroots])
        # the fundamental weight varpi_i pairs with 2rho^vee to sum_j 2 (A^-1)_{ji} ... computed directly
        for i in range(r):
            e = [Fraction(int(i == j)) for j in range(r)]
            coeffs = [sum(cart_inv[k][j] * e[j] for j in range(r)) for k in range(r)]
            # varpi_i = sum_k coeffs[k] alpha_k (rationally), height = sum_k coeffs[k] * height(alpha_k)
            heights.append(sum(coeffs[k] * d.height(d.simple_roots[k]) for k in range(r)))
    if r:
        kernel = linalg.integer_kernel(pairing, n)
        kcols = [[kernel[i][j] for i in range(n)] for j in range(len(kernel[0]))] if kernel and kernel[0] else []
    else:
        kcols = [[int(i == j) for i in range(n)] for j in range(n)]
    out = set()

    def boxes(i, remaining, acc):
        if i == r:
            yield tuple(acc)
            return
        c = 0
        while heights[i] * c <= remaining:
            yield from boxes(i + 1, remaining - heights[i] * c, acc + [c])
            c += 1

    for cvec in boxes(0, Fraction(bound), []):
        if r:
            base = linalg.integer_solve(pairing, list(cvec))
            if base is None:
                continue
        else:
            base = (0,) * n
        for t in itertools.product(range(-central_bound, central_bound + 1), repeat=len(kcols)):
            v = list(base)
            for coef, col in zip(t, kcols):
                v = [x + coef * y for x, y in zip(v, col)]
            v = tuple(v)
            if d.is_dominant(v) and d.height(v) <= bound:
                out.add(v)
    return sorted(out, key=lambda v: (d.height(v), v))


# ---------------------------------------------------------------------------
# norm character and goodness


def sigma_on(d: RootDatum, a) -> list[list[int]]:
    """Matrix of sigma on the weight lattice of ``d``: a itself, or its contragredient on the dual."""
    if d == a.base:
        return [list(r) for r in a.matrix]
    if d == dual_datum(a.base):
        return [list(r) for r in a.coweight_matrix]
    raise CharacterError("the automorphism does not act on this datum")


def norm_character(f: CharacterElement, a, matrix=None) -> CharacterElement:
    """Character of Nm(V) = V (x) sigma V (x) ... (x) sigma^{ell-1} V."""
    m = matrix if matrix is not None else sigma_on(f.datum, a)
    out = one(f.datum, f.ring, f.frob_twist)
    g = f
    for _ in range(a.order):
        out = multiply(out, g)
        g = act(g, m)
    return out


def norm_map(matrix, ell: int, v: Sequence[int]) -> Vector:
    total = [0] * len(v)
    x = tuple(v)
    for _ in range(ell):
        total = [s + y for s, y in zip(total, x)]
        x = linalg.matvec(matrix, x)
    return tuple(total)


@dataclass(frozen=True)
class WeightTupleSet:
    """Basis tuples of Nm(V) over one sigma-orbit of weights, with the rotation as a permutation.

    Rotation carries the mu weight space to the sigma(mu) one, so a Sigma-set is
    attached to each sigma-orbit of weights; ``weight`` is the orbit's least element.
    """

    weight: Vector
    orbit: tuple[Vector, ...]
    tuples: tuple
    perm: tuple[int, ...]

    @property
    def fixed(self) -> int:
        return sum(1 for i, j in enumerate(self.perm) if i == j)


def weight_tuple_sets(f: CharacterElement, a, matrix=None, bound: int = DEFAULT_TUPLE_BOUND) -> dict[Vector, WeightTupleSet]:
    """Per sigma-orbit of weights of Nm(f), the basis tuples (b_0, ..., b_{ell-1}) and the rotation on them."""
    if f.ring != 0 or any(c < 0 for _, c in f.terms):
        raise CharacterError("weight tuples need a genuine character (nonnegative integer coefficients)")
    m = matrix if matrix is not None else sigma_on(f.datum, a)
    ell = a.order
    basis = [(w, k) for w, c in f.terms for k in range(c)]
    if len(basis) ** ell > bound:
        raise CharacterError(f"{len(basis)}^{ell} weight tuples exceed the bound {bound}")
    powers = [linalg.identity(f.datum.rank)]
    for _ in range(ell - 1):
        powers.append(linalg.matmul(m, powers[-1]))
    # weight of b in the i-th factor sigma^i V is sigma^i(wt b)
    twisted = [[linalg.matvec(p, w) for (w, _) in basis] for p in powers]
    groups: dict[Vector, list[tuple[int, ...]]] = {}
    orbits: dict[Vector, tuple[Vector, ...]] = {}
    for idx in itertools.product(range(len(basis)), repeat=ell):
        wt = [0] * f.datum.rank
        for i, b in enumerate(idx):
            wt = [x + y for x, y in zip(wt, twisted[i][b])]
        wt = tuple(wt)
        if wt not in orbits:
            orb = [wt]
            nxt = linalg.matvec(m, wt)
            while nxt != wt:
                orb.append(nxt)
                nxt = linalg.matvec(m, nxt)
            orbits[wt] = tuple(sorted(orb))
        groups.setdefault(orbits[wt][0], []).append(idx)
    out = {}
    for rep, tuples in groups.items():
        pos = {t: k for k, t in enumerate(tuples)}
        # sigma: rotation (b_0, ..., b_{ell-1}) -> (b_{ell-1}, b_0, ...)
        perm = tuple(pos[(t[-1],) + t[:-1]] for t in tuples)
        out[rep] = WeightTupleSet(rep, orbits[rep], tuple(tuples), perm)
    return out


@dataclass
class GoodnessReport:
    all_good: bool
    weights: list[dict]

    def to_json(self) -> dict:
        return {"all_good": self.all_good, "weights": self.weights}


def goodness_of_norm(f: CharacterElement, a, matrix=None, bound: int = DEFAULT_TUPLE_BOUND) -> GoodnessReport:
    """Feed each per-weight Sigma-set of Nm(f) to the lattice goodness test as a permutation lattice."""
    from .tate import is_good, permutation_module

    m = matrix if matrix is not None else sigma_on(f.datum, a)
    sets = weight_tuple_sets(f, a, m, bound)
    expected: dict[Vector, int] = {}
    for w, c in f.terms:
        nw = norm_map(m, a.order, w)
        expected[nw] = expected.get(nw, 0) + c
    rows = []
    ok = True
    for wt in sorted(sets):
        s = sets[wt]
        cert = is_good(permutation_module(s.perm, "Zl", a.order))
        consistent = s.fixed == expected.get(wt, 0) and cert.decomposition.a == s.fixed
        ok = ok and cert.good and consistent
        rows.append({
            "weight": list(wt),
            "orbit_size": len(s.orbit),
            "tuples": len(s.tuples),
            "fixed": s.fixed,
            "expected_fixed": expected.get(wt, 0),
            "decomposition": list(cert.decomposition.as_tuple()),
            "good": cert.good,
        })
    return GoodnessReport(ok, rows)
