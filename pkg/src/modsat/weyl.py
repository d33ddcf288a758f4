"""Weyl groups of root data: orbits, dominant conjugates, element enumeration."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import linalg
from .rootdata import RootDatum, Vector, pair

MatrixT = tuple[tuple[int, ...], ...]

DEFAULT_GROUP_CAP = 100_000


class GroupTooLarge(RuntimeError):
    pass


def _freeze(m) -> MatrixT:
    return tuple(tuple(int(x) for x in row) for row in m)


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element: its matrix on X and a reduced word in simple reflections.

    Equality and hashing use the matrix only.
    """

    matrix: MatrixT
    word: tuple[int, ...] = ()

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __call__(self, v: Sequence[int]) -> Vector:
        return linalg.matvec(self.matrix, v)

    @property
    def length(self) -> int:
        return len(self.word)

    def is_identity(self) -> bool:
        return linalg.is_identity(self.matrix)


def element_from_word(d: RootDatum, word: Iterable[int]) -> WeylElement:
    """``s_{w[0]} s_{w[1]} ... s_{w[-1]}`` as a matrix on X."""
    word = tuple(word)
    m = linalg.identity(d.rank)
    for i in word:
        if not 0 <= i < d.semisimple_rank:
            raise ValueError(f"simple reflection index {i} out of range")
        m = linalg.matmul(m, d.simple_reflection_matrices[i])
    return WeylElement(_freeze(m), reduce_word(d, word))


def parse_word(text: str) -> tuple[int, ...]:
    """Parse ``"s1 s2"`` (1-based labels) into 0-based indices; empty string is the identity."""
    out = []
    for tok in text.replace(",", " ").split():
        tok = tok.strip().lower()
        if tok in ("1", "e", "id"):
            continue
        if not tok.startswith("s"):
            raise ValueError(f"cannot parse Weyl word token {tok!r}")
        out.append(int(tok[1:]) - 1)
    return tuple(out)


def format_word(word: Sequence[int]) -> str:
    return " ".join(f"s{i + 1}" for i in word)


def compose(a: WeylElement, b: WeylElement, d: RootDatum | None = None) -> WeylElement:
    m = _freeze(linalg.matmul(a.matrix, b.matrix))
    word = a.word + b.word
    return WeylElement(m, reduce_word(d, word) if d is not None else word)


def inverse(a: WeylElement) -> WeylElement:
    return WeylElement(_freeze(linalg.integer_inverse(a.matrix)), tuple(reversed(a.word)))


def conjugate(v: WeylElement, w: WeylElement, d: RootDatum | None = None) -> WeylElement:
    """``v w v^{-1}``."""
    return compose(compose(v, w, d), inverse(v), d)


def reduce_word(d: RootDatum | None, word: Sequence[int]) -> tuple[int, ...]:
    """A reduced word for the element, read off from descents of a regular dominant vector."""
    if d is None:
        return tuple(word)
    # w(rho) for the element, then walk it back to dominant recording reflections
    m = linalg.identity(d.rank)
    for i in word:
        m = linalg.matmul(m, d.simple_reflection_matrices[i])
    rho = _regular_dominant(d)
    v = linalg.matvec(m, rho)
    _, steps = dominant_conjugate(d, v)
    # steps s_{k1}, ..., s_{kr} applied to w(rho) give rho, so w = s_{k1} ... s_{kr}
    return tuple(steps)


def _regular_dominant(d: RootDatum) -> Vector:
    """A vector of X_Q scaled into X with <v, alpha_i^vee> > 0 for every simple coroot."""
    cached = getattr(d, "_modsat_regular", None)
    if cached is not None:
        return cached
    n = d.semisimple_rank
    # solve <v, alpha_i^vee> = 1 rationally inside the span of the simple roots, then clear denominators
    a = linalg.transpose(d.simple_roots)
    cart = [[pair(d.simple_roots[j], d.simple_coroots[i]) for j in range(n)] for i in range(n)]
    coeffs = linalg.rational_solve(cart, [1] * n) if n else []
    denom = 1
    for c in coeffs:
        denom = denom * c.denominator // _gcd(denom, c.denominator)
    v = tuple(int(sum(c * denom * a[k][j] for j, c in enumerate(coeffs))) for k in range(d.rank)) if n else (0,) * d.rank
    object.__setattr__(d, "_modsat_regular", v)
    return v


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def dominant_conjugate(d: RootDatum, v: Sequence[int]) -> tuple[Vector, list[int]]:
    """Return the dominant element of the W-orbit of ``v`` and the reflections applied."""
    v = tuple(v)
    steps = []
    coroots = d.simple_coroots
    while True:
        for i, c in enumerate(coroots):
            if pair(v, c) < 0:
                v = d.reflect(i, v)
                steps.append(i)
                break
        else:
            return v, steps


def orbit(d: RootDatum, v: Sequence[int]) -> list[Vector]:
    """The W-orbit of ``v`` (sorted)."""
    start = tuple(v)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for i in range(d.semisimple_rank):
            y = d.reflect(i, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def coweight_orbit(d: RootDatum, v: Sequence[int]) -> list[Vector]:
    start = tuple(v)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for i in range(d.semisimple_rank):
            y = d.reflect_coweight(i, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def weyl_group(d: RootDatum, cap: int = DEFAULT_GROUP_CAP) -> list[WeylElement]:
    """All elements, in breadth-first (length, then discovery) order."""
    return generated_group(d, [(i,) for i in range(d.semisimple_rank)], cap)


def generated_group(d: RootDatum, gen_words: Sequence[Sequence[int]], cap: int = DEFAULT_GROUP_CAP) -> list[WeylElement]:
    """Subgroup of W generated by the elements with the given words."""
    gens = [element_from_word(d, w) for w in gen_words]
    ident = WeylElement(_freeze(linalg.identity(d.rank)), ())
    seen = {ident.matrix: ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            m = _freeze(linalg.matmul(x.matrix, g.matrix))
            if m not in seen:
                el = WeylElement(m, x.word + g.word)
                seen[m] = el
                order.append(el)
                queue.append(el)
                if len(order) > cap:
                    raise GroupTooLarge(f"group exceeds {cap} elements")
    return [WeylElement(e.matrix, reduce_word(d, e.word)) for e in order]


def weyl_order(d: RootDatum, cap: int = DEFAULT_GROUP_CAP) -> int:
    return len(weyl_group(d, cap))


def conjugacy_normal_form(d: RootDatum, w: WeylElement, group: Sequence[WeylElement] | None = None) -> WeylElement:
    """Minimal representative of the conjugacy class of ``w`` under (length, word, matrix) order."""
    group = group if group is not None else weyl_group(d)
    best = None
    for v in group:
        c = conjugate(v, w, d)
        key = (c.length, c.word, c.matrix)
        if best is None or key < best[0]:
            best = (key, c)
    return best[1]


def contragredient(w: WeylElement) -> WeylElement:
    """The same element acting on the co-lattice: inverse transpose."""
    inv = linalg.integer_inverse(w.matrix)
    return WeylElement(_freeze(linalg.transpose(inv)), w.word)
