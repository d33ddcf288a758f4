"""Based root data on concrete integer lattices.

A datum lives on ``X = Z^rank`` (roots) and ``X^vee = Z^rank`` (coroots) with
the standard dot product as the perfect pairing. Cartan matrices follow the
Kac convention ``a[i][j] = <alpha_i^vee, alpha_j>`` with Bourbaki numbering.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg

Vector = tuple[int, ...]

ISOGENIES = ("sc", "adjoint", "general")


class RootDatumError(ValueError):
    """A root datum (or automorphism) failed one of its axioms."""

    def __init__(self, message: str, axiom: str = "root_datum"):
        super().__init__(message)
        self.axiom = axiom


def pair(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


def _vec(v: Iterable[int]) -> Vector:
    return tuple(int(x) for x in v)


@dataclass(frozen=True)
class RootDatum:
    rank: int
    roots: tuple[Vector, ...]
    coroots: tuple[Vector, ...]
    simple: tuple[int, ...]
    isogeny: str = "general"

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(_vec(r) for r in self.roots))
        object.__setattr__(self, "coroots", tuple(_vec(r) for r in self.coroots))
        object.__setattr__(self, "simple", tuple(int(i) for i in self.simple))
        if self.isogeny not in ISOGENIES:
            raise RootDatumError(f"unknown isogeny tag {self.isogeny!r}", "isogeny")

    @cached_property
    def label(self) -> str:
        return cartan_label(self)

    # -- basic derived data -------------------------------------------------

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple)

    @property
    def is_semisimple(self) -> bool:
        return self.semisimple_rank == self.rank

    @cached_property
    def simple_roots(self) -> tuple[Vector, ...]:
        return tuple(self.roots[i] for i in self.simple)

    @cached_property
    def simple_coroots(self) -> tuple[Vector, ...]:
        return tuple(self.coroots[i] for i in self.simple)

    @cached_property
    def coroot_of(self) -> dict[Vector, Vector]:
        return dict(zip(self.roots, self.coroots))

    @cached_property
    def root_set(self) -> frozenset[Vector]:
        return frozenset(self.roots)

    @cached_property
    def cartan_matrix(self) -> list[list[int]]:
        return [[pair(c, r) for r in self.simple_roots] for c in self.simple_coroots]

    def simple_coordinates(self, v: Sequence[int]) -> tuple[Fraction, ...] | None:
        """Coordinates of ``v`` in the simple roots, or None if outside their span."""
        if not self.simple:
            return () if not any(v) else None
        a = linalg.transpose(self.simple_roots)
        x = linalg.rational_solve(a, list(v))
        return None if x is None else tuple(x)

    @cached_property
    def positive_roots(self) -> tuple[Vector, ...]:
        out = []
        for r in self.roots:
            c = self.simple_coordinates(r)
            if c is not None and all(x >= 0 for x in c):
                out.append(r)
        return tuple(out)

    @cached_property
    def positive_set(self) -> frozenset[Vector]:
        return frozenset(self.positive_roots)

    @cached_property
    def two_rho(self) -> Vector:
        """Sum of the positive roots."""
        return _vec(sum(col) for col in zip(*self.positive_roots)) if self.positive_roots else (0,) * self.rank

    @cached_property
    def two_rho_check(self) -> Vector:
        """Sum of the positive coroots."""
        cos = [self.coroot_of[r] for r in self.positive_roots]
        return _vec(sum(col) for col in zip(*cos)) if cos else (0,) * self.rank

    def height(self, v: Sequence[int]) -> int:
        return pair(v, self.two_rho_check)

    def is_dominant(self, v: Sequence[int]) -> bool:
        return all(pair(v, c) >= 0 for c in self.simple_coroots)

    def reflect(self, i: int, v: Sequence[int]) -> Vector:
        """Apply the simple reflection ``s_i`` (position in ``simple``) to a lattice vector."""
        a = self.simple_roots[i]
        k = pair(v, self.simple_coroots[i])
        return tuple(x - k * y for x, y in zip(v, a))

    def reflect_coweight(self, i: int, v: Sequence[int]) -> Vector:
        c = self.simple_coroots[i]
        k = pair(self.simple_roots[i], v)
        return tuple(x - k * y for x, y in zip(v, c))

    @cached_property
    def simple_reflection_matrices(self) -> tuple[tuple[Vector, ...], ...]:
        """Matrices of the simple reflections acting on X (column-vector convention)."""
        mats = []
        n = self.rank
        for a, c in zip(self.simple_roots, self.simple_coroots):
            mats.append(tuple(tuple(int(i == j) - a[i] * c[j] for j in range(n)) for i in range(n)))
        return tuple(mats)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components of the Dynkin diagram, as positions into ``simple``."""
        n = len(self.simple)
        a = self.cartan_matrix
        seen = [False] * n
        comps = []
        for s in range(n):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(n):
                    if not seen[j] and a[i][j]:
                        seen[j] = True
                        stack.append(j)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @cached_property
    def simple_types(self) -> tuple[tuple[str, int], ...]:
        a = self.cartan_matrix
        return tuple(_classify_component(a, comp) for comp in self.components)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "roots": [list(r) for r in self.roots],
            "coroots": [list(r) for r in self.coroots],
            "simple": list(self.simple),
            "isogeny": self.isogeny,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RootDatum":
        for key in ("rank", "roots", "coroots", "simple"):
            if key not in data:
                raise RootDatumError(f"root datum JSON is missing {key!r}", "schema")
        for vecs in (data["roots"], data["coroots"]):
            for v in vecs:
                if any(not isinstance(x, int) or isinstance(x, bool) for x in v):
                    raise RootDatumError("root datum JSON must contain integers only", "schema")
        d = cls(int(data["rank"]), data["roots"], data["coroots"], data["simple"], data.get("isogeny", "general"))
        validate_datum(d)
        return d


def validate_datum(d: RootDatum) -> RootDatum:
    """Check the root datum axioms; raise RootDatumError naming the failed axiom."""
    n = d.rank
    if len(d.roots) != len(d.coroots):
        raise RootDatumError("roots and coroots differ in number", "bijection")
    if len(set(d.roots)) != len(d.roots):
        raise RootDatumError("duplicate roots", "bijection")
    for v in d.roots + d.coroots:
        if len(v) != n:
            raise RootDatumError(f"vector {v} does not have length {n}", "shape")
    for r, c in zip(d.roots, d.coroots):
        if pair(r, c) != 2:
            raise RootDatumError(f"<{r}, {c}> != 2", "pairing")
        if tuple(-x for x in r) not in d.root_set:
            raise RootDatumError(f"-{r} is not a root", "negation")
    cmap = d.coroot_of
    for i in range(len(d.simple)):
        for r, c in zip(d.roots, d.coroots):
            sr = d.reflect(i, r)
            sc = d.reflect_coweight(i, c)
            if sr not in d.root_set:
                raise RootDatumError(f"s_{i} {r} is not a root", "reflection_closure")
            if cmap[sr] != sc:
                raise RootDatumError(f"coroot of s_{i} {r} mismatch", "coroot_compatibility")
    if d.simple:
        if linalg.column_rank(linalg.transpose(d.simple_roots)) != len(d.simple):
            raise RootDatumError("simple roots are linearly dependent", "simple_independence")
    for r in d.roots:
        c = d.simple_coordinates(r)
        if c is None or any(x.denominator != 1 for x in c):
            raise RootDatumError(f"root {r} is not an integer combination of simple roots", "simple_span")
        if not (all(x >= 0 for x in c) or all(x <= 0 for x in c)):
            raise RootDatumError(f"root {r} is neither positive nor negative", "positivity")
    if len(d.positive_roots) * 2 != len(d.roots):
        raise RootDatumError("positive roots are not half of the roots", "positivity")
    return d


# ---------------------------------------------------------------------------
# Cartan types


def cartan_matrix(series: str, rank: int) -> list[list[int]]:
    """Cartan matrix ``a[i][j] = <alpha_i^vee, alpha_j>``, Bourbaki numbering."""
    n = rank
    a = linalg.identity(n)
    a = [[2 * x for x in row] for row in a]

    def link(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if series == "A":
        for i in range(n - 1):
            link(i, i + 1)
    elif series == "B":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 2, n - 1, -1, -2)
    elif series == "C":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 2, n - 1, -2, -1)
    elif series == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif series == "E":
        # 1 - 3 - 4 - 5 - ..., with 2 attached to 4
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif series == "F":
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif series == "G":
        link(0, 1, -3, -1)
    else:
        raise RootDatumError(f"unknown Cartan series {series!r}", "cartan_type")
    return a


_ADMISSIBLE = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 3,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
    "Torus": lambda n: n >= 0,
}


def build_root_datum(series: str, rank: int, isogeny: str = "sc") -> RootDatum:
    """Root datum of a simple Cartan type (or a split torus) of the given isogeny."""
    if series not in _ADMISSIBLE:
        raise RootDatumError(f"unknown Cartan series {series!r}", "cartan_type")
    if not _ADMISSIBLE[series](rank):
        raise RootDatumError(f"rank {rank} is not admissible for type {series}", "cartan_type")
    if series == "Torus":
        return RootDatum(rank, (), (), (), "general")
    if isogeny not in ("sc", "adjoint"):
        raise RootDatumError("build_root_datum supports isogeny 'sc' or 'adjoint'", "isogeny")
    a = cartan_matrix(series, rank)
    n = rank
    if isogeny == "sc":
        simple_roots = [tuple(a[i][j] for i in range(n)) for j in range(n)]
        simple_coroots = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    else:
        simple_roots = [tuple(int(i == j) for i in range(n)) for j in range(n)]
        simple_coroots = [tuple(a[j][i] for i in range(n)) for j in range(n)]
    roots, coroots = _close_under_reflections(simple_roots, simple_coroots)
    # simple roots first, in order
    order = {r: k for k, r in enumerate(simple_roots)}
    pairs = sorted(zip(roots, coroots), key=lambda rc: (order.get(rc[0], n), rc[0]))
    roots = tuple(p[0] for p in pairs)
    coroots = tuple(p[1] for p in pairs)
    d = RootDatum(n, roots, coroots, tuple(range(n)), isogeny)
    return validate_datum(d)


def _close_under_reflections(simple_roots, simple_coroots):
    def refl(i, r, c):
        k = pair(r, simple_coroots[i])
        m = pair(simple_roots[i], c)
        return (
            tuple(x - k * y for x, y in zip(r, simple_roots[i])),
            tuple(x - m * y for x, y in zip(c, simple_coroots[i])),
        )

    seen = {}
    frontier = list(zip(simple_roots, simple_coroots))
    for r, c in frontier:
        seen[r] = c
    while frontier:
        nxt = []
        for r, c in frontier:
            for i in range(len(simple_roots)):
                r2, c2 = refl(i, r, c)
                if r2 not in seen:
                    seen[r2] = c2
                    nxt.append((r2, c2))
        frontier = nxt
    roots = sorted(seen)
    return roots, [seen[r] for r in roots]


def _node_lengths(a, comp):
    """Relative squared lengths of the simple roots of one component (integers)."""
    lengths = {comp[0]: Fraction(1)}
    stack = [comp[0]]
    while stack:
        i = stack.pop()
        for j in comp:
            if j not in lengths and a[i][j]:
                # a_ij / a_ji = |alpha_j|^2 / |alpha_i|^2
                lengths[j] = lengths[i] * Fraction(a[i][j], a[j][i])
                stack.append(j)
    return lengths


def _classify_component(a, comp) -> tuple[str, int]:
    n = len(comp)
    if n == 1:
        return ("A", 1)
    sub = {(i, j): a[i][j] for i in comp for j in comp}
    if any(abs(v) == 3 for v in sub.values()):
        return ("G", 2)
    degree = {i: sum(1 for j in comp if j != i and a[i][j]) for i in comp}
    lengths = _node_lengths(a, comp)
    simply_laced = len(set(lengths.values())) == 1
    if simply_laced:
        branch = [i for i in comp if degree[i] == 3]
        if not branch:
            return ("A", n)
        b = branch[0]
        arms = []
        for start in (j for j in comp if j != b and a[b][j]):
            length, prev, cur = 1, b, start
            while True:
                nxt = [k for k in comp if k not in (prev, cur) and a[cur][k]]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                length += 1
            arms.append(length)
        arms.sort()
        if arms[0] == 1 and arms[1] == 1:
            return ("D", n) if n >= 4 else ("A", 3)
        if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
            return ("E", n)
        raise RootDatumError(f"unrecognised simply-laced component of rank {n}", "cartan_type")
    if n == 2:
        i, j = comp
        return ("B", 2) if lengths[i] > lengths[j] else ("C", 2)
    if n == 4:
        leaves = [i for i in comp if degree[i] == 1]
        inner_double = all(lengths[i] == lengths[next(j for j in comp if j != i and a[i][j])] for i in leaves)
        if inner_double:
            return ("F", 4)
    leaves = [i for i in comp if degree[i] == 1]
    for leaf in leaves:
        nb = next(j for j in comp if j != leaf and a[leaf][j])
        if lengths[leaf] != lengths[nb]:
            return ("B", n) if lengths[leaf] < lengths[nb] else ("C", n)
    raise RootDatumError(f"unrecognised component of rank {n}", "cartan_type")


def cartan_label(d: RootDatum) -> str:
    parts = [f"{s}{n}" for s, n in d.simple_types]
    central = d.rank - d.semisimple_rank
    if central or not parts:
        parts.append(f"T{central}")
    return "x".join(parts)


# ---------------------------------------------------------------------------
# Duality and products


def dual_datum(d: RootDatum) -> RootDatum:
    """Swap roots with coroots (and the lattice with the co-lattice)."""
    iso = {"sc": "adjoint", "adjoint": "sc"}.get(d.isogeny, "general")
    return RootDatum(d.rank, d.coroots, d.roots, d.simple, iso)


def product_datum(*data: RootDatum) -> RootDatum:
    rank = sum(d.rank for d in data)
    roots, coroots, simple = [], [], []
    offset = 0
    for d in data:
        pad_l, pad_r = (0,) * offset, (0,) * (rank - offset - d.rank)
        base = len(roots)
        roots.extend(pad_l + r + pad_r for r in d.roots)
        coroots.extend(pad_l + c + pad_r for c in d.coroots)
        simple.extend(base + i for i in d.simple)
        offset += d.rank
    isos = {d.isogeny for d in data}
    iso = isos.pop() if len(isos) == 1 else "general"
    return RootDatum(rank, roots, coroots, simple, iso)


def torus(rank: int) -> RootDatum:
    return build_root_datum("Torus", rank)


# ---------------------------------------------------------------------------
# Bad primes

BAD_PRIME_TABLE = (
    (("A_n",), "1"),
    (("B_n", "D_n"), "2"),
    (("C_n",), "n"),
    (("G_2", "F_4", "E_6"), "3"),
    (("E_7",), "19"),
    (("E_8",), "31"),
)


def bad_prime_of_type(series: str, rank: int) -> int:
    if series == "A":
        return 1
    if series in ("B", "D"):
        return 2
    if series == "C":
        return rank
    if series in ("G", "F") or (series == "E" and rank == 6):
        return 3
    if series == "E" and rank == 7:
        return 19
    if series == "E" and rank == 8:
        return 31
    raise RootDatumError(f"no bad-prime entry for {series}{rank}", "cartan_type")


def bad_prime_bound(d: RootDatum) -> int:
    """Maximum of the excluded-prime bound over simple factors; 1 for a torus."""
    return max((bad_prime_of_type(s, n) for s, n in d.simple_types), default=1)
