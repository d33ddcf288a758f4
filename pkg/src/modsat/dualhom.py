"""sigma-dual homomorphisms as lattice data, canonical L-embeddings of tori and toral parameters.

Lattice maps act on weights: a ``torus_map`` of shape rank(H^vee) x rank(G^vee)
sends a character of the maximal torus of G^vee to its restriction along the
homomorphism of dual tori.  Values in k^x are recorded in Q/Z with
denominators prime to ell.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .brauer import SatakeMatrix, SatakeSetup, check_hypothesis
from .charring import decompose, dominant_weights, restrict_along, weyl_character
from .rootdata import RootDatum
from .weyl import (
    WeylElement,
    conjugate,
    element_from_word,
    format_word,
    inverse,
    parse_word,
    weyl_group,
)

SCHEMA_VERSION = 1


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class DualHomData:
    datum: RootDatum  # the dual group G^vee; the cocycle lives in its Weyl group
    torus_map: tuple[tuple[int, ...], ...]
    cocycle: WeylElement  # image of the Frobenius generator
    frob_twist: int = 0
    ell: int | None = None

    @property
    def elliptic(self) -> bool:
        return is_elliptic(self.datum, self.cocycle)

    def normal_form(self, group: Sequence[WeylElement] | None = None):
        """(torus_map, W-conjugacy normal form of the cocycle, tag)."""
        return (self.torus_map, _class_key(self.datum, self.cocycle, group), self.frob_twist)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "torus_map": [list(r) for r in self.torus_map],
            "cocycle": format_word(self.cocycle.word),
            "frob_twist": self.frob_twist,
            "ell": self.ell,
        }


def _freeze(m):
    return tuple(tuple(int(x) for x in r) for r in m)


def is_elliptic(d: RootDatum, w: WeylElement) -> bool:
    """No nonzero w-fixed vector in the span of the roots."""
    n = d.semisimple_rank
    if n == 0:
        return True
    # restrict 1 - w to the root span: coordinates in the simple roots
    simple = d.simple_roots
    cols = []
    for r in simple:
        img = [a - b for a, b in zip(r, w(r))]
        cols.append(img)
    return linalg.column_rank([list(c) for c in zip(*cols)]) == n


def _class_key(d: RootDatum, w: WeylElement, group=None):
    group = group if group is not None else weyl_group(d)
    best = None
    for v in group:
        c = conjugate(v, w, d)
        key = (c.length, c.word, c.matrix)
        if best is None or key < best:
            best = key
    return best


def sigma_dual_torus_map(s: SatakeSetup) -> tuple[tuple[int, ...], ...]:
    """N: X^vee(G) -> X^vee(H), lam -> lam + sigma lam + ..., in H coordinates."""
    return _freeze(s.N_matrix)


def canonical_embedding_cocycle(g: RootDatum, w: WeylElement | Sequence[int] | str) -> DualHomData:
    """The canonical L-embedding of the unramified torus with class w: identity on the lattice, cocycle w.

    The lift is unique for elliptic w and semisimple g; otherwise w itself is the chosen representative.
    """
    w = _as_element(g, w)
    return DualHomData(g, _freeze(linalg.identity(g.rank)), w, 0, None)


def _as_element(g: RootDatum, w) -> WeylElement:
    if isinstance(w, WeylElement):
        return w
    if isinstance(w, str):
        w = parse_word(w)
    return element_from_word(g, w)


def inner_case_dual_hom(s: SatakeSetup, w) -> DualHomData:
    """^Lj composed with Fr_ell for inner sigma with fixed group an unramified torus."""
    if s.auto.kind != "inner_torsion":
        raise ParameterError("inner_case_dual_hom needs an inner automorphism")
    if s.auto.fixed_datum.semisimple_rank != 0:
        raise ParameterError("the fixed group must be a maximal torus")
    check_hypothesis(s)
    base = canonical_embedding_cocycle(s.g_datum, w)
    ell = s.ell
    # restriction along the embedding of the fixed lattice, then the Frobenius twist
    n = s.g_datum.rank
    cols = [s.to_h([ell * int(i == j) for i in range(n)]) for j in range(n)]
    tm = [[cols[j][i] for j in range(n)] for i in range(s.h_datum.rank)]
    tm = linalg.matmul(tm, base.torus_map)
    return DualHomData(s.g_datum, _freeze(tm), base.cocycle, base.frob_twist + 1, ell)


def elliptic_inner_setup(g: RootDatum, ell: int) -> SatakeSetup:
    """An inner sigma of order ell on dual(g) whose fixed datum is the maximal torus.

    Searches torsion values on the simple roots with t(alpha) != 0 mod ell for every root.
    """
    from .automorphism import inner_torsion_automorphism
    from .rootdata import dual_datum

    G = dual_datum(g)
    n = G.semisimple_rank
    coords = [G.simple_coordinates(r) for r in G.positive_roots]
    for t in itertools.product(range(1, ell), repeat=n):
        if all(sum(a * b for a, b in zip(t, c)) % ell for c in coords):
            return SatakeSetup(inner_torsion_automorphism(G, t, ell, on="simple_roots"))
    raise ParameterError(f"no inner automorphism of order {ell} of {G.label} has a torus as fixed datum")


# ---------------------------------------------------------------------------
# parameters


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class UnramLParameter:
    torus_part: tuple[Fraction, ...]  # values on the basis of X^vee(G), in Q/Z
    weyl_part: WeylElement
    frob_twist: int = 0
    ell: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "torus_part", tuple(_mod1(Fraction(x)) for x in self.torus_part))
        if self.ell is not None:
            for x in self.torus_part:
                if x.denominator % self.ell == 0:
                    raise ParameterError(f"value {x} has denominator divisible by ell = {self.ell}")

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "torus_part": [{"num": x.numerator, "den": x.denominator} for x in self.torus_part],
            "weyl_part": format_word(self.weyl_part.word),
            "frob_twist": self.frob_twist,
        }


def parse_theta(values) -> tuple[Fraction, ...]:
    out = []
    for v in values:
        if isinstance(v, dict):
            out.append(Fraction(int(v["num"]), int(v["den"])))
        else:
            out.append(Fraction(str(v)))
    return tuple(_mod1(x) for x in out)


def toral_parameter(theta: Sequence, dh: DualHomData, ell: int | None = None) -> UnramLParameter:
    """theta: X^vee(H) -> Q/Z transported along the torus map, with Frobenius image the cocycle."""
    ell = dh.ell if ell is None else ell
    theta = parse_theta(theta)
    tm = dh.torus_map
    if len(theta) != len(tm):
        raise ParameterError(f"theta needs {len(tm)} values")
    if ell is not None and any(x.denominator % ell == 0 for x in theta):
        raise ParameterError(f"theta has a denominator divisible by ell = {ell}")
    n = dh.datum.rank
    part = tuple(sum((theta[i] * tm[i][j] for i in range(len(tm))), Fraction(0)) for j in range(n))
    return UnramLParameter(part, dh.cocycle, dh.frob_twist, ell)


def frobenius_twist_parameter(rho: UnramLParameter, ell: int | None = None) -> UnramLParameter:
    ell = rho.ell if ell is None else ell
    if ell is None:
        raise ParameterError("the Frobenius twist needs ell")
    return UnramLParameter(tuple(ell * x for x in rho.torus_part), rho.weyl_part, rho.frob_twist + 1, ell)


def act_on_theta(v: WeylElement, theta: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """(v . theta)(x) = theta(v^{-1} x) for theta given by its values on a basis."""
    vi = inverse(v).matrix
    n = len(theta)
    return tuple(_mod1(sum((Fraction(theta[i]) * vi[i][j] for i in range(n)), Fraction(0))) for j in range(n))


def parameter_normal_form(d: RootDatum, theta: Sequence, w: WeylElement, group=None):
    """Lexicographically least (v.theta, v w v^{-1}) over v in W; ties broken by the word order."""
    group = group if group is not None else weyl_group(d)
    theta = parse_theta(theta)
    best = None
    for v in group:
        c = conjugate(v, w, d)
        key = (act_on_theta(v, theta), c.length, c.word, c.matrix)
        if best is None or key < best:
            best = key
    return best


def parameter_invariant(rho: UnramLParameter, d: RootDatum, group=None):
    return parameter_normal_form(d, rho.torus_part, rho.weyl_part, group) + (rho.frob_twist,)


# ---------------------------------------------------------------------------
# induced Satake matrix


def induced_satake_matrix(dh: DualHomData, h_datum: RootDatum, ell: int, weight_bound: int, central_bound: int = 1) -> SatakeMatrix:
    """Matrix of restriction along the torus map, in Weyl-character bases, over F_ell."""
    g = dh.datum
    cols = dominant_weights(g, weight_bound, central_bound)
    columns = []
    for mu in cols:
        chi = weyl_character(g, mu, ell)
        columns.append((mu, dict(decompose(restrict_along(chi, dh.torus_map, h_datum)))))
    columns.sort(key=lambda r: (g.height(r[0]), r[0]))
    rows = sorted({w for _, col in columns for w in col}, key=lambda v: (h_datum.height(v), v))
    index = {r: i for i, r in enumerate(rows)}
    entries = [[0] * len(columns) for _ in rows]
    for j, (_, col) in enumerate(columns):
        for w, c in col.items():
            entries[index[w]][j] = c % ell
    return SatakeMatrix(ell, [c[0] for c in columns], rows, entries, [])
