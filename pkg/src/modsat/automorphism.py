"""Order-ell automorphisms of root data and their fixed root data.

The automorphism acts on X by ``matrix`` and on the co-lattice by the
contragredient. The fixed datum H has co-lattice ``(X^vee)^sigma``; the
``embedding`` is the integer matrix whose columns are a basis of that fixed
sublattice, written in X^vee coordinates. Restriction of characters to the
fixed torus is the transpose of the embedding.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

from . import linalg
from .rootdata import (
    RootDatum,
    RootDatumError,
    Vector,
    dual_datum,
    pair,
    product_datum,
    validate_datum,
)

KINDS = ("inner_torsion", "pinned", "block_cyclic", "general")

# (series, ell) -> fixed type, for the pinned diagram automorphisms we support.
# A_{2n} -> B_n, A_{2n-1} -> C_n, D_n -> B_{n-1}, D_4 (triality) -> G_2, E_6 -> F_4.
FOLDING_TABLE: dict[tuple[str, int], Callable[[int], tuple[str, int]]] = {
    ("A_even", 2): lambda n: ("B", n // 2),
    ("A_odd", 2): lambda n: ("C", (n + 1) // 2),
    ("D", 2): lambda n: ("B", n - 1),
    ("D", 3): lambda n: ("G", 2),
    ("E", 2): lambda n: ("F", 4),
}


class UnsupportedAutomorphism(RootDatumError):
    def __init__(self, message: str):
        super().__init__(message, "unsupported_automorphism")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _require_prime(ell: int) -> None:
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")


def _freeze(m):
    return tuple(tuple(int(x) for x in row) for row in m)


def normalize_type(series: str, n: int) -> str:
    """Canonical name of a root system up to isomorphism (B1 = A1, C2 = B2, D3 = A3, ...)."""
    if series in ("B", "C") and n == 1:
        return "A1"
    if series == "C" and n == 2:
        return "B2"
    if series == "D" and n == 3:
        return "A3"
    if series == "D" and n == 2:
        return "A1xA1"
    return f"{series}{n}"


def type_signature(d: RootDatum) -> tuple[str, ...]:
    return tuple(sorted(normalize_type(s, n) for s, n in d.simple_types))


@dataclass(frozen=True)
class DatumAutomorphism:
    base: RootDatum
    matrix: tuple[tuple[int, ...], ...]
    order: int
    kind: str
    fixed_datum: RootDatum
    embedding: tuple[tuple[int, ...], ...]
    t: tuple[int, ...] | None = None
    t_on: str = "lattice"
    perm: tuple[int, ...] | None = None
    folded_type: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown automorphism kind {self.kind!r}")
        object.__setattr__(self, "matrix", _freeze(self.matrix))
        object.__setattr__(self, "embedding", _freeze(self.embedding))

    @cached_property
    def coweight_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Action on the co-lattice X^vee (inverse transpose)."""
        return _freeze(linalg.transpose(linalg.integer_inverse(self.matrix)))

    @property
    def ell(self) -> int:
        return self.order

    def act(self, v: Sequence[int]) -> Vector:
        return linalg.matvec(self.matrix, v)

    def act_coweight(self, v: Sequence[int]) -> Vector:
        return linalg.matvec(self.coweight_matrix, v)

    @cached_property
    def restriction(self) -> tuple[tuple[int, ...], ...]:
        """X -> X_H, the transpose of the embedding."""
        return _freeze(linalg.transpose(self.embedding, self.fixed_datum.rank))

    def restrict(self, v: Sequence[int]) -> Vector:
        return linalg.matvec(self.restriction, v)

    def embed(self, y: Sequence[int]) -> Vector:
        """H co-lattice coordinates -> X^vee."""
        return linalg.matvec(self.embedding, y) if self.embedding else (0,) * self.base.rank

    def fixed_coordinates(self, v: Sequence[int]) -> Vector:
        """Coordinates in the H co-lattice of a sigma-fixed vector of X^vee."""
        if self.fixed_datum.rank == 0:
            if any(v):
                raise ValueError(f"{v} is not in the fixed sublattice")
            return ()
        x = linalg.integer_solve(self.embedding, list(v))
        if x is None:
            raise ValueError(f"{v} is not in the fixed sublattice")
        return tuple(x)

    def is_fixed_coweight(self, v: Sequence[int]) -> bool:
        return self.act_coweight(v) == tuple(v)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "matrix": [list(r) for r in self.matrix], "order": self.order}
        if self.t is not None:
            out["t"] = list(self.t)
            if self.t_on != "lattice":
                out["t_on"] = self.t_on
        if self.perm is not None:
            out["perm"] = list(self.perm)
        if self.kind == "general":
            out["fixed_datum"] = self.fixed_datum.to_json()
            out["embedding"] = [list(r) for r in self.embedding]
        return out


# ---------------------------------------------------------------------------
# fixed datum from root orbits


def fixed_sublattice(coweight_matrix) -> list[list[int]]:
    n = len(coweight_matrix)
    a = linalg.sub(coweight_matrix, linalg.identity(n))
    return linalg.integer_kernel(a, n)


def root_orbits(base: RootDatum, matrix) -> list[tuple[Vector, ...]]:
    seen = set()
    orbits = []
    for r in base.roots:
        if r in seen:
            continue
        orb = [r]
        x = linalg.matvec(matrix, r)
        while x != r:
            orb.append(x)
            x = linalg.matvec(matrix, x)
        seen.update(orb)
        orbits.append(tuple(orb))
    return orbits


def _fixed_datum_from_orbits(base: RootDatum, matrix, ell: int, fixed_root_ok) -> tuple[RootDatum, list[list[int]]]:
    n = base.rank
    cw = linalg.transpose(linalg.integer_inverse(matrix))
    emb = fixed_sublattice(cw)
    r = len(emb[0]) if emb and emb[0] else 0
    restr = linalg.transpose(emb, r)
    cmap = base.coroot_of

    def res(v):
        return linalg.matvec(restr, v) if r else ()

    def coords(c):
        x = linalg.integer_solve(emb, list(c))
        if x is None:
            raise RootDatumError(f"coroot {c} is not in the fixed co-lattice", "embedding")
        return tuple(x)

    roots, coroots, positive = [], [], []
    for orb in root_orbits(base, matrix):
        a = orb[0]
        if len(orb) == 1:
            if not fixed_root_ok(a):
                continue
            co = cmap[a]
        elif len(orb) == ell:
            cos = [cmap[b] for b in orb]
            orthogonal = all(pair(orb[i], cos[j]) == 0 for i in range(ell) for j in range(ell) if i != j)
            if orthogonal:
                co = tuple(sum(col) for col in zip(*cos))
            elif ell == 2 and pair(orb[0], cos[1]) == -1:
                co = tuple(2 * (x + y) for x, y in zip(cos[0], cos[1]))
            else:
                raise UnsupportedAutomorphism(f"root orbit {orb} has no supported fixed-point rule")
        else:
            raise RootDatumError(f"root orbit of size {len(orb)} for an automorphism of order {ell}", "matrix_order")
        ra = res(a)
        if ra in roots:
            continue
        roots.append(ra)
        coroots.append(coords(co))
        positive.append(a in base.positive_set)
    pos_roots = [x for x, p in zip(roots, positive) if p]
    pos_set = set(pos_roots)
    simple_roots = [x for x in pos_roots if not any(tuple(u - v for u, v in zip(x, y)) in pos_set for y in pos_roots)]
    simple_roots.sort(key=lambda x: tuple(-c for c in x))
    order = {x: k for k, x in enumerate(simple_roots)}
    pairs = sorted(zip(roots, coroots), key=lambda rc: (order.get(rc[0], len(order)), rc[0]))
    roots = [p[0] for p in pairs]
    coroots = [p[1] for p in pairs]
    simple = [roots.index(x) for x in simple_roots]
    h = RootDatum(r, roots, coroots, simple, "general")
    return h, emb


def _check_automorphism(base: RootDatum, matrix, ell: int, allow_identity: bool) -> None:
    n = base.rank
    if not linalg.is_identity(linalg.matpow(matrix, ell)):
        raise RootDatumError("matrix^ell is not the identity", "matrix_order")
    if not allow_identity and linalg.is_identity(matrix):
        raise RootDatumError("matrix is the identity", "matrix_order")
    cw = linalg.transpose(linalg.integer_inverse(matrix))
    for a, c in zip(base.roots, base.coroots):
        sa = linalg.matvec(matrix, a)
        if sa not in base.root_set:
            raise RootDatumError(f"sigma({a}) is not a root", "permutes_roots")
        if base.coroot_of[sa] != linalg.matvec(cw, c):
            raise RootDatumError(f"sigma does not match coroot of {a}", "permutes_coroots")


# ---------------------------------------------------------------------------
# constructors


def torsion_value(d: RootDatum, t: Sequence[int], on: str, ell: int, v: Sequence[int]) -> int:
    """Value of the torsion functional on a vector of the root lattice (or of X when on="lattice")."""
    if on == "lattice":
        return pair(t, v) % ell
    coords = d.simple_coordinates(v)
    if coords is None or any(c.denominator != 1 for c in coords):
        raise ValueError(f"{v} is not in the root lattice")
    return sum(int(c) * x for c, x in zip(coords, t)) % ell


def inner_torsion_automorphism(d: RootDatum, t: Sequence[int], ell: int, on: str = "lattice") -> DatumAutomorphism:
    """Conjugation by an ell-torsion point of the torus, acting trivially on the datum.

    With ``on="lattice"`` ``t`` is a functional X -> Z/ell (a point of T[ell]); with
    ``on="simple_roots"`` it lists the values t(alpha_i), i.e. a point of the adjoint
    torus, which is needed e.g. for the Levi A_1 inside SL_3 at ell = 3.
    """
    _require_prime(ell)
    if on not in ("lattice", "simple_roots"):
        raise ValueError(f"unknown torsion convention {on!r}")
    t = tuple(int(x) % ell for x in t)
    expected = d.rank if on == "lattice" else d.semisimple_rank
    if len(t) != expected:
        raise ValueError(f"t must have length {expected}")
    matrix = linalg.identity(d.rank)

    def ok(a):
        return torsion_value(d, t, on, ell, a) == 0

    h, emb = _fixed_datum_from_orbits(d, matrix, ell, ok)
    validate_datum(h)
    return DatumAutomorphism(d, matrix, ell, "inner_torsion", h, emb, t=t, t_on=on)


def _diagram_matrix(d: RootDatum, perm: Sequence[int]) -> list[list[int]]:
    n = d.rank
    k = d.semisimple_rank
    if sorted(perm) != list(range(k)):
        raise UnsupportedAutomorphism("perm is not a permutation of the simple roots")
    a = d.cartan_matrix
    if any(a[perm[i]][perm[j]] != a[i][j] for i in range(k) for j in range(k)):
        raise UnsupportedAutomorphism("perm is not a Dynkin diagram automorphism")
    if k != n:
        raise UnsupportedAutomorphism("pinned automorphisms need a semisimple datum")
    sc = linalg.transpose(d.simple_coroots)
    sr = linalg.transpose(d.simple_roots)
    if abs(_det(sc)) == 1:
        target = linalg.transpose([d.simple_coroots[perm[i]] for i in range(k)])
        cw = linalg.matmul(target, linalg.integer_inverse(sc))
        return linalg.transpose(linalg.integer_inverse(cw))
    if abs(_det(sr)) == 1:
        target = linalg.transpose([d.simple_roots[perm[i]] for i in range(k)])
        return linalg.matmul(target, linalg.integer_inverse(sr))
    raise UnsupportedAutomorphism("pinned automorphisms need an sc or adjoint datum")


def _det(m) -> int:
    d, _, _ = linalg.smith_normal_form(m)
    prod = 1
    for x in d:
        prod *= x
    return prod if len(d) == len(m) else 0


def _perm_order(perm) -> int:
    k = 1
    cur = list(perm)
    while cur != list(range(len(perm))):
        cur = [perm[i] for i in cur]
        k += 1
    return k


def _folding_target(d: RootDatum, perm, ell: int, table=None) -> tuple[str, int]:
    table = FOLDING_TABLE if table is None else table
    types = d.simple_types
    if len(types) != 1:
        raise UnsupportedAutomorphism("pinned folding is tabulated for simple types only")
    series, n = types[0]
    if series == "A":
        key = ("A_even", ell) if n % 2 == 0 else ("A_odd", ell)
    else:
        key = (series, ell)
    if series == "E" and n != 6:
        raise UnsupportedAutomorphism(f"no diagram automorphism of order {ell} on E{n}")
    if series == "D" and ell == 3 and n != 4:
        raise UnsupportedAutomorphism("triality exists only on D4")
    if key not in table:
        raise UnsupportedAutomorphism(f"({series}{n}, order {ell}) is not in the folding table")
    return table[key](n)


def pinned_automorphism(d: RootDatum, perm: Sequence[int], ell: int) -> DatumAutomorphism:
    """Diagram automorphism fixing a pinning, with its tabulated folded type."""
    _require_prime(ell)
    perm = tuple(int(i) for i in perm)
    if _perm_order(perm) != ell:
        raise UnsupportedAutomorphism(f"perm does not have order exactly {ell}")
    target = _folding_target(d, perm, ell)
    matrix = _diagram_matrix(d, perm)
    _check_automorphism(d, matrix, ell, allow_identity=False)
    roots = d.root_set

    def ok(a):
        # a fixed root of the form b + sigma(b) carries the sign -1 (A_{2n} chains)
        for b in d.roots:
            sb = linalg.matvec(matrix, b)
            if sb != b and tuple(x + y for x, y in zip(b, sb)) == a:
                return False
        return True

    h, emb = _fixed_datum_from_orbits(d, matrix, ell, ok)
    validate_datum(h)
    folded = normalize_type(*target)
    got = "x".join(type_signature(h))
    if got != folded:
        raise RootDatumError(f"fixed datum has type {got}, table says {folded}", "folding_table")
    return DatumAutomorphism(d, matrix, ell, "pinned", h, emb, perm=perm, folded_type=folded)


def block_cyclic_automorphism(m: RootDatum, ell: int) -> DatumAutomorphism:
    """Cyclic shift of the factors of ``m^ell``; fixed datum ``m`` embedded diagonally."""
    _require_prime(ell)
    base = product_datum(*([m] * ell))
    n, k = base.rank, m.rank
    matrix = linalg.zeros(n, n)
    # (x_1, ..., x_ell) -> (x_ell, x_1, ..., x_{ell-1})
    for b in range(ell):
        tgt = (b + 1) % ell
        for i in range(k):
            matrix[tgt * k + i][b * k + i] = 1
    emb = [[int(i % k == j) for j in range(k)] for i in range(n)]
    return DatumAutomorphism(base, matrix, ell, "block_cyclic", m, emb)


def general_automorphism(d: RootDatum, matrix, ell: int, fixed_datum: RootDatum, embedding) -> DatumAutomorphism:
    """Arbitrary order-ell automorphism with a user-supplied fixed datum (validated separately)."""
    _require_prime(ell)
    _check_automorphism(d, matrix, ell, allow_identity=True)
    return DatumAutomorphism(d, matrix, ell, "general", fixed_datum, embedding)


def computed_fixed_datum(a: DatumAutomorphism) -> RootDatum:
    """Recompute H from root orbits, using the kind's rule for sigma-fixed roots."""
    if a.kind == "inner_torsion":
        ok = lambda r: torsion_value(a.base, a.t, a.t_on, a.order, r) == 0  # noqa: E731
    else:
        ok = lambda r: True  # noqa: E731
    if a.kind == "pinned":
        m = a.matrix

        def ok(r):
            for b in a.base.roots:
                sb = linalg.matvec(m, b)
                if sb != b and tuple(x + y for x, y in zip(b, sb)) == r:
                    return False
            return True

    return _fixed_datum_from_orbits(a.base, a.matrix, a.order, ok)[0]


def same_datum(d1: RootDatum, d2: RootDatum) -> bool:
    """Equality of root data up to the ordering of roots and the choice of simple system listing."""
    return (
        d1.rank == d2.rank
        and set(zip(d1.roots, d1.coroots)) == set(zip(d2.roots, d2.coroots))
        and set(d1.positive_roots) == set(d2.positive_roots)
    )


# ---------------------------------------------------------------------------
# validation


@dataclass
class AxiomResult:
    axiom: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    results: list[AxiomResult]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failed(self) -> list[str]:
        return [r.axiom for r in self.results if not r.passed]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "axioms": [{"axiom": r.axiom, "passed": r.passed, "detail": r.detail} for r in self.results],
        }


def validate_fixed_datum(a: DatumAutomorphism, folding_table=None) -> ValidationReport:
    """Check every axiom linking an automorphism to its fixed datum, individually.

    ``folding_table`` overrides the tabulated folds (used to test that a bad table is caught).
    """
    out: list[AxiomResult] = []
    base, h, ell = a.base, a.fixed_datum, a.order
    n, r = base.rank, h.rank

    def record(name, fn):
        try:
            msg = fn()
            out.append(AxiomResult(name, True, msg or ""))
        except (RootDatumError, ValueError, ArithmeticError) as exc:
            out.append(AxiomResult(name, False, str(exc)))

    def order():
        if not linalg.is_identity(linalg.matpow(a.matrix, ell)):
            raise RootDatumError("matrix^ell != id")
        if a.kind == "inner_torsion":
            if not linalg.is_identity(a.matrix):
                raise RootDatumError("inner torsion must act trivially on the lattice")
        elif a.kind != "general" and linalg.is_identity(a.matrix):
            raise RootDatumError("matrix is the identity")

    def permutes():
        _check_automorphism(base, a.matrix, ell, allow_identity=True)
        if a.kind == "pinned":
            simple = set(base.simple_roots)
            if any(a.act(x) not in simple for x in simple):
                raise RootDatumError("pinned automorphism does not permute simple roots")

    def axioms():
        validate_datum(h)

    def image():
        emb = [list(row) for row in a.embedding]
        cols = linalg.transpose(emb, r) if r else []
        for c in cols:
            if a.act_coweight(c) != tuple(c):
                raise RootDatumError(f"embedded vector {c} is not sigma-fixed")
        fixed = fixed_sublattice(a.coweight_matrix)
        k = len(fixed[0]) if fixed and fixed[0] else 0
        if k != r:
            raise RootDatumError(f"fixed sublattice has rank {k}, H has rank {r}")
        if r:
            divs = linalg.elementary_divisors(emb)
            if any(x != 1 for x in divs):
                raise RootDatumError(f"embedding image has index {divs} in the fixed sublattice")

    def coroots():
        for hr, hc in zip(h.roots, h.coroots):
            sources = [x for x in base.roots if a.restrict(x) == hr]
            if not sources:
                raise RootDatumError(f"H root {hr} is not a restricted root")
            ec = a.embed(hc)
            if a.act_coweight(ec) != ec:
                raise RootDatumError(f"embedded coroot {ec} is not fixed")
            if pair(hr, hc) != 2:
                raise RootDatumError(f"<{hr}, {hc}> != 2")
            for x in sources:
                if pair(x, ec) != pair(hr, hc):
                    raise RootDatumError(f"restricted pairing mismatch for {x}")

    def weyl():
        for i in range(h.semisimple_rank):
            hr = h.simple_roots[i]
            if _lift_reflection(a, hr, h.simple_coroots[i]) is None:
                raise RootDatumError(f"no sigma-centralizing lift of the H reflection along {hr}")
        return "simple reflections of H lift to the sigma-centralizer of W(G)"

    record("matrix_order", order)
    record("permutes_roots", permutes)
    record("fixed_datum_axioms", axioms)
    record("embedding_image", image)
    record("coroot_compatibility", coroots)
    record("weyl_embedding", weyl)
    if a.kind == "pinned" and a.folded_type is not None:
        record("folding_table", lambda: _table_check(a, folding_table))
    return ValidationReport(out)


def _table_check(a: DatumAutomorphism, table=None):
    target = normalize_type(*_folding_target(a.base, a.perm, a.order, table))
    got = "x".join(type_signature(a.fixed_datum))
    if got != target:
        raise RootDatumError(f"fixed datum type {got} != table entry {target}")
    return target


def _reflection_matrix_coweight(root, coroot, n):
    # s(y) = y - <root, y> coroot on the co-lattice
    return [[int(i == j) - coroot[i] * root[j] for j in range(n)] for i in range(n)]


def _lift_reflection(a: DatumAutomorphism, hr, hc):
    """An element of W(G) commuting with sigma that restricts to s_{hr} on the fixed co-lattice."""
    base, n = a.base, a.base.rank
    h_refl = _reflection_matrix_coweight(hr, hc, a.fixed_datum.rank)
    candidates = []
    for x in base.roots:
        if a.restrict(x) != hr:
            continue
        orb = [x]
        y = a.act(x)
        while y != x:
            orb.append(y)
            y = a.act(y)
        mats = [_reflection_matrix_coweight(b, base.coroot_of[b], n) for b in orb]
        prod = linalg.identity(n)
        for m in mats:
            prod = linalg.matmul(prod, m)
        candidates.append(prod)
        if len(orb) == 2:
            s = tuple(u + v for u, v in zip(orb[0], orb[1]))
            if s in base.root_set:
                candidates.append(_reflection_matrix_coweight(s, base.coroot_of[s], n))
    cw = [list(r) for r in a.coweight_matrix]
    for w in candidates:
        if linalg.matmul(w, cw) != linalg.matmul(cw, w):
            continue
        ok = True
        for j in range(a.fixed_datum.rank):
            e = [int(k == j) for k in range(a.fixed_datum.rank)]
            lhs = linalg.matvec(w, a.embed(e))
            rhs = a.embed(linalg.matvec(h_refl, e))
            if lhs != rhs:
                ok = False
                break
        if ok:
            return w
    return None


# ---------------------------------------------------------------------------
# JSON


def automorphism_from_json(base: RootDatum, data: dict) -> DatumAutomorphism:
    kind = data.get("kind")
    ell = data.get("order")
    if not isinstance(ell, int):
        raise ValueError("automorphism JSON needs an integer 'order'")
    if kind == "inner_torsion":
        return inner_torsion_automorphism(base, data["t"], ell, data.get("t_on", "lattice"))
    if kind == "pinned":
        return pinned_automorphism(base, data["perm"], ell)
    if kind == "block_cyclic":
        factor = RootDatum.from_json(data["factor"]) if "factor" in data else base
        return block_cyclic_automorphism(factor, ell)
    if kind == "general":
        h = RootDatum.from_json(data["fixed_datum"])
        return general_automorphism(base, data["matrix"], ell, h, data["embedding"])
    raise ValueError(f"unknown automorphism kind {kind!r}")


def dual_of(a: DatumAutomorphism) -> RootDatum:
    return dual_datum(a.base)
