"""Affine Grassmannian stratum combinatorics, deep-level Deligne-Lusztig Tate multisets,
and fixed points on finite coset spaces.

Strata of the affine Grassmannian are labelled by co-lattice vectors lam. The
Iwahori orbit through t^lam is a product of affine root groups U_{alpha + m}
over delta_alpha <= m < <lam, alpha>, so its dimension is a count of pairs.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .automorphism import DatumAutomorphism
from .rootdata import RootDatum, Vector, pair
from .weyl import WeylElement, generated_group, inverse

DELTA_CONVENTIONS = ("negative", "positive")
GROUP_CAP = 100_000


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class StratumLabel:
    datum: RootDatum
    lam: Vector

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(int(x) for x in self.lam))
        if len(self.lam) != self.datum.rank:
            raise ValueError(f"lambda needs {self.datum.rank} coordinates")


def _delta(d: RootDatum, alpha: Vector, convention: str) -> int:
    positive = alpha in d.positive_set
    if convention == "negative":
        return 0 if positive else 1
    if convention == "positive":
        return 1 if positive else 0
    raise ValueError(f"unknown delta convention {convention!r}")


def affine_factors(s: StratumLabel, convention: str = "negative") -> list[tuple[Vector, int]]:
    """The pairs (alpha, m) with delta_alpha <= m < <lam, alpha>."""
    d = s.datum
    out = []
    for a in d.roots:
        for m in range(_delta(d, a, convention), pair(s.lam, a)):
            out.append((a, m))
    return out


def iwahori_orbit_dimension(s: StratumLabel, convention: str = "negative") -> int:
    """Number of affine root factors of the Iwahori orbit of t^lam.

    With the default convention (delta = 1 on negative roots) a dominant lam gives <lam, 2 rho>.
    """
    d = s.datum
    total = 0
    for a in d.roots:
        total += max(0, pair(s.lam, a) - _delta(d, a, convention))
    return total


@dataclass(frozen=True)
class FixedStratum:
    label: StratumLabel  # the H-stratum
    dim: int
    fixed_factor_count: int

    def to_json(self) -> dict:
        return {"empty": False, "lambda_H": list(self.label.lam), "dim": self.dim, "fixed_factors": self.fixed_factor_count}


def fixed_factor_count(s: StratumLabel, a: DatumAutomorphism, convention: str = "negative") -> int:
    """sigma-orbits of affine factors whose root restricts to a root of H (each contributes one line)."""
    h_roots = set(a.fixed_datum.roots)
    seen = set()
    count = 0
    for alpha, m in affine_factors(s, convention):
        if (alpha, m) in seen:
            continue
        orb = [alpha]
        x = a.act(alpha)
        while x != alpha:
            orb.append(x)
            x = a.act(x)
        seen.update((b, m) for b in orb)
        if a.restrict(alpha) in h_roots:
            count += 1
    return count


def fixed_stratum(s: StratumLabel, a: DatumAutomorphism, convention: str = "negative") -> FixedStratum | None:
    """None if sigma moves lam; otherwise the H-stratum through lam and its dimension."""
    if s.datum != a.base:
        raise ValueError("the automorphism acts on a different datum")
    if not a.is_fixed_coweight(s.lam):
        return None
    h_label = StratumLabel(a.fixed_datum, a.fixed_coordinates(s.lam))
    dim = iwahori_orbit_dimension(h_label, convention)
    return FixedStratum(h_label, dim, fixed_factor_count(s, a, convention))


def pariversity(s: StratumLabel) -> int:
    return pair(s.lam, s.datum.two_rho) % 2


def relative_pariversity(s: StratumLabel, a: DatumAutomorphism) -> int:
    if not a.is_fixed_coweight(s.lam):
        raise ValueError(f"lambda = {s.lam} is not sigma-fixed")
    lam_h = a.fixed_coordinates(s.lam)
    return (pair(s.lam, s.datum.two_rho) - pair(lam_h, a.fixed_datum.two_rho)) % 2


# ---------------------------------------------------------------------------
# Tate cohomology of deep-level Deligne-Lusztig induction


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def theta_action(v: WeylElement, theta: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """theta^v(x) = theta(v^{-1} x), for theta given by its Q/Z values on the basis of X."""
    vi = inverse(v).matrix
    n = len(theta)
    return tuple(_mod1(sum((Fraction(theta[i]) * vi[i][j] for i in range(n)), Fraction(0))) for j in range(n))


@dataclass
class DLTate:
    j: int
    fixed_elements: list[WeylElement]
    multiset: list[tuple[Fraction, ...]]

    @property
    def size(self) -> int:
        return len(self.multiset)

    def to_json(self) -> dict:
        counts = Counter(self.multiset)
        return {
            "schema_version": 1,
            "j": self.j,
            "size": self.size,
            "fixed_elements": sorted(" ".join(f"s{i + 1}" for i in v.word) for v in self.fixed_elements),
            "multiset": [
                {"theta": [{"num": x.numerator, "den": x.denominator} for x in key], "multiplicity": counts[key]}
                for key in sorted(counts)
            ],
        }


def dl_tate_multiset(
    d: RootDatum,
    wx_gens: Sequence[Sequence[int]],
    twist: WeylElement,
    theta: Sequence[Fraction],
    vartheta=None,
    j: int = 0,
    cap: int = GROUP_CAP,
) -> DLTate:
    """{theta^v : v in W_x(T), F(v) = v} with F(v) = w vartheta(v) w^{-1}.

    ``wx_gens`` are words generating W_x(T); ``vartheta`` is a lattice automorphism
    normalizing W (identity by default) acting by conjugation. The answer does not
    depend on j.
    """
    group = generated_group(d, wx_gens, cap)
    n = d.rank
    vt = linalg.identity(n) if vartheta is None else [list(r) for r in vartheta]
    vt_inv = linalg.integer_inverse(vt)
    fixed = []
    for v in group:
        img = linalg.matmul(linalg.matmul(vt, [list(r) for r in v.matrix]), vt_inv)
        img = linalg.matmul(linalg.matmul([list(r) for r in twist.matrix], img), linalg.integer_inverse(twist.matrix))
        if tuple(tuple(r) for r in img) == v.matrix:
            fixed.append(v)
    theta = tuple(_mod1(Fraction(x)) for x in theta)
    multiset = sorted(theta_action(v, theta) for v in fixed)
    return DLTate(j % 2, fixed, multiset)


# ---------------------------------------------------------------------------
# finite coset fixed points


Perm = tuple[int, ...]


def perm_mul(a: Perm, b: Perm) -> Perm:
    """(a b)(i) = a(b(i))."""
    return tuple(a[i] for i in b)


def perm_inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def perm_order(a: Perm) -> int:
    n, x = 1, a
    ident = tuple(range(len(a)))
    while x != ident:
        x = perm_mul(a, x)
        n += 1
    return n


def cycle(n: int, *cycles: Sequence[int]) -> Perm:
    p = list(range(n))
    for c in cycles:
        for i, x in enumerate(c):
            p[x] = c[(i + 1) % len(c)]
    return tuple(p)


def closure(gens: Sequence[Perm], n: int, cap: int = GROUP_CAP) -> frozenset[Perm]:
    ident = tuple(range(n))
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = perm_mul(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
                if len(seen) > cap:
                    raise GroupError(f"group exceeds {cap} elements")
    return frozenset(seen)


@dataclass(frozen=True)
class CosetTriple:
    """A finite permutation group, a subgroup, and sigma = conjugation by ``conj``."""

    name: str
    degree: int
    gamma_gens: tuple[Perm, ...]
    k_gens: tuple[Perm, ...]
    conj: Perm
    ell: int

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "gamma": [list(g) for g in self.gamma_gens],
            "K": [list(g) for g in self.k_gens],
            "sigma_conj": list(self.conj),
            "ell": self.ell,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CosetTriple":
        n = int(data["degree"])
        return cls(
            data.get("name", "custom"),
            n,
            tuple(tuple(g) for g in data["gamma"]),
            tuple(tuple(g) for g in data.get("K", [])),
            tuple(data["sigma_conj"]),
            int(data["ell"]),
        )


@dataclass
class CosetReport:
    name: str
    ell: int
    order_gamma: int
    order_k: int
    fixed_cosets: int
    fixed_quotient: int
    injective: bool
    surjective: bool
    coprime: bool
    witness: Perm | None = field(default=None)

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ell": self.ell,
            "order_gamma": self.order_gamma,
            "order_K": self.order_k,
            "fixed_cosets": self.fixed_cosets,
            "fixed_quotient": self.fixed_quotient,
            "injective": self.injective,
            "surjective": self.surjective,
            "bijective": self.bijective,
            "coprime": self.coprime,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def coset_fixed_points(t: CosetTriple, cap: int = GROUP_CAP) -> CosetReport:
    """Compare (Gamma/K)^sigma with Gamma^sigma / K^sigma by brute force."""
    n = t.degree
    gamma = closure(t.gamma_gens, n, cap)
    k = closure(t.k_gens, n, cap)
    c, ci = t.conj, perm_inv(t.conj)

    def sigma(g):
        return perm_mul(perm_mul(c, g), ci)

    if any(sigma(g) not in gamma for g in t.gamma_gens):
        raise GroupError("sigma does not preserve Gamma")
    if any(sigma(g) not in k for g in t.k_gens):
        raise GroupError("sigma does not preserve K")
    if not k <= gamma:
        raise GroupError("K is not a subgroup of Gamma")
    ident = tuple(range(n))
    power = ident
    for _ in range(t.ell):
        power = perm_mul(c, power)
    # sigma^ell must be the identity automorphism of Gamma
    if any(perm_mul(perm_mul(power, g), perm_inv(power)) != g for g in t.gamma_gens):
        raise GroupError("sigma^ell is not the identity on Gamma")

    cosets: dict[frozenset, Perm] = {}
    for g in sorted(gamma):
        key = frozenset(perm_mul(g, h) for h in k)
        cosets.setdefault(key, g)
    fixed_cosets = [key for key, g in cosets.items() if frozenset(sigma(y) for y in key) == key]
    gamma_fixed = [g for g in gamma if sigma(g) == g]
    k_fixed = [h for h in k if sigma(h) == h]
    images = {frozenset(perm_mul(g, h) for h in k) for g in gamma_fixed}
    fixed_quotient = len(gamma_fixed) // len(k_fixed)
    injective = len(images) == fixed_quotient
    missing = [key for key in fixed_cosets if key not in images]
    witness = min(cosets[key] for key in missing) if missing else None
    return CosetReport(
        t.name,
        t.ell,
        len(gamma),
        len(k),
        len(fixed_cosets),
        fixed_quotient,
        injective,
        not missing,
        math.gcd(len(k), t.ell) == 1,
        witness,
    )


def _small_groups() -> list[tuple[str, int, tuple[Perm, ...]]]:
    return [
        ("S3", 3, (cycle(3, (0, 1)), cycle(3, (0, 1, 2)))),
        ("C4", 4, (cycle(4, (0, 1, 2, 3)),)),
        ("V4", 4, (cycle(4, (0, 1), (2, 3)), cycle(4, (0, 2), (1, 3)))),
        ("D4", 4, (cycle(4, (0, 1, 2, 3)), cycle(4, (0, 2)))),
        ("A4", 4, (cycle(4, (0, 1, 2)), cycle(4, (0, 1), (2, 3)))),
        ("S4", 4, (cycle(4, (0, 1)), cycle(4, (0, 1, 2, 3)))),
        ("C5", 5, (cycle(5, (0, 1, 2, 3, 4)),)),
        ("D5", 5, (cycle(5, (0, 1, 2, 3, 4)), cycle(5, (1, 4), (2, 3)))),
        ("C6", 6, (cycle(6, (0, 1, 2, 3, 4, 5)),)),
        ("S3xC2", 5, (cycle(5, (0, 1)), cycle(5, (0, 1, 2)), cycle(5, (3, 4)))),
        ("C3xC3", 6, (cycle(6, (0, 1, 2)), cycle(6, (3, 4, 5)))),
    ]


def _prime_order_normalizers(n: int, gamma: frozenset, gens) -> list[tuple[Perm, int]]:
    out = []
    for c in itertools.permutations(range(n)):
        o = perm_order(c)
        if o not in (2, 3, 5):
            continue
        ci = perm_inv(c)
        if all(perm_mul(perm_mul(c, g), ci) in gamma for g in gens):
            out.append((c, o))
    return out


def _stable_subgroups(n: int, gamma: frozenset, conj: Perm) -> list[tuple[Perm, ...]]:
    ci = perm_inv(conj)
    seen = set()
    out = []
    elems = sorted(gamma)
    for a in elems:
        for b in elems:
            if b < a:
                continue
            gens = tuple(sorted({a, b}))
            k = closure(gens, n)
            if k in seen:
                continue
            seen.add(k)
            if all(perm_mul(perm_mul(conj, g), ci) in k for g in gens):
                out.append(gens)
    return out


def coset_library(min_size: int = 24, per_group: int = 4) -> list[CosetTriple]:
    """Deterministic (Gamma, K, sigma) triples with gcd(|K|, ell) = 1."""
    out = []
    for name, n, gens in _small_groups():
        gamma = closure(gens, n)
        taken = 0
        for c, ell in _prime_order_normalizers(n, gamma, gens):
            if taken >= per_group:
                break
            options = [kg for kg in _stable_subgroups(n, gamma, c) if math.gcd(len(closure(kg, n)), ell) == 1]
            options.sort(key=lambda kg: (len(closure(kg, n)) == 1, kg))
            if options:
                kg = options[0]
                out.append(CosetTriple(f"{name}/K{len(closure(kg, n))}/sigma{ell}#{taken}", n, gens, kg, c, ell))
                taken += 1
    if len(out) < min_size:
        raise GroupError(f"coset library has only {len(out)} triples")
    return out


def coset_negative_control() -> CosetTriple:
    """S3 with sigma = conjugation by a 3-cycle and K = A3: ell = 3 divides |K|."""
    return CosetTriple(
        "S3/A3/sigma3",
        3,
        (cycle(3, (0, 1)), cycle(3, (0, 1, 2))),
        (cycle(3, (0, 1, 2)),),
        cycle(3, (0, 1, 2)),
        3,
    )
