"""Tate cohomology of modules and bounded complexes over Z_(ell)[Sigma] and F_ell[Sigma].

A module is the cokernel of an integer ``presentation`` (n x k, columns are
relations) with an integer matrix ``sigma`` acting on Z^n. Over ``"Zl"`` the
cokernel is read ell-locally: elementary divisors prime to ell are units.
Over ``"Fl"`` everything is reduced mod ell.

T^0 = ker(1 - sigma) / im(N) and T^1 = ker(N) / im(1 - sigma); both are
F_ell-vector spaces, reported by dimension and representative vectors in Z^n.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg

COEFFS = ("Fl", "Zl")
DEFAULT_TENSOR_BOUND = 10**7


class TateError(ValueError):
    pass


class NotLattice(TateError):
    pass


def _rows(m) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in m)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n**0.5) + 1))


def _valuation(x: int, ell: int) -> int:
    if x == 0:
        return 10**9
    v = 0
    while x % ell == 0:
        x //= ell
        v += 1
    return v


def _cols(m, nrows: int) -> list[list[int]]:
    if nrows == 0 or not m or not m[0]:
        return []
    return linalg.transpose(m)


def _from_cols(cols, nrows: int) -> list[list[int]]:
    if not cols:
        return [[] for _ in range(nrows)]
    return linalg.transpose(cols)


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True)
class SigmaModule:
    coeff: str
    ell: int
    presentation: tuple[tuple[int, ...], ...]
    sigma: tuple[tuple[int, ...], ...]
    frob_twist: int = 0

    def __post_init__(self):
        if self.coeff not in COEFFS:
            raise TateError(f"coeff must be one of {COEFFS}")
        if not _is_prime(self.ell):
            raise TateError(f"{self.ell} is not prime")
        object.__setattr__(self, "presentation", _rows(self.presentation))
        object.__setattr__(self, "sigma", _rows(self.sigma))
        n = len(self.sigma)
        if any(len(r) != n for r in self.sigma):
            raise TateError("sigma must be square")
        if len(self.presentation) != n:
            if n == 0 and not self.presentation:
                pass
            else:
                raise TateError("presentation must have one row per generator")
        k = {len(r) for r in self.presentation}
        if len(k) > 1:
            raise TateError("ragged presentation")

    @property
    def ngens(self) -> int:
        return len(self.sigma)

    @property
    def nrels(self) -> int:
        return len(self.presentation[0]) if self.presentation else 0

    @property
    def relations(self) -> list[list[int]]:
        return _cols(self.presentation, self.ngens)

    def validate(self) -> "SigmaModule":
        """Check that sigma descends to the cokernel and has order dividing ell there."""
        rels = self.relations
        for c in rels:
            if not self.in_relations(linalg.matvec(self.sigma, c)):
                raise TateError("sigma does not preserve the relations")
        n = self.ngens
        s_ell = linalg.matpow(self.sigma, self.ell) if n else []
        diff = linalg.sub(s_ell, linalg.identity(n)) if n else []
        for c in _cols(diff, n):
            if not self.in_relations(c):
                raise TateError("sigma^ell is not the identity on the cokernel")
        return self

    def in_relations(self, v: Sequence[int]) -> bool:
        """Whether ``v`` lies in the relation module (ell-locally for Zl, mod ell for Fl)."""
        return _in_span(self.relations, v, self.coeff, self.ell, self.ngens)

    def norm_matrix(self) -> list[list[int]]:
        return norm_element(self.ell).matrix(self)

    def one_minus_sigma(self) -> list[list[int]]:
        return linalg.sub(linalg.identity(self.ngens), self.sigma)

    def to_json(self) -> dict:
        return {
            "coeff": self.coeff,
            "ell": self.ell,
            "presentation": [list(r) for r in self.presentation],
            "sigma": [list(r) for r in self.sigma],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SigmaModule":
        for key in ("coeff", "ell", "presentation", "sigma"):
            if key not in data:
                raise TateError(f"sigma_module.json is missing {key!r}")
        for row in list(data["presentation"]) + list(data["sigma"]):
            if any(not isinstance(x, int) or isinstance(x, bool) for x in row):
                raise TateError("sigma_module.json must contain integers only")
        return cls(data["coeff"], data["ell"], data["presentation"], data["sigma"]).validate()


def _in_span(cols, v, coeff, ell, n) -> bool:
    if not any(v):
        return True
    if coeff == "Fl":
        if all(x % ell == 0 for x in v):
            return True
        if not cols:
            return False
        return linalg.solve_mod(_from_cols(cols, n), list(v), ell) is not None
    if not cols:
        return False
    a = _from_cols(cols, n)
    d, u, _ = linalg.smith_normal_form(a)
    b = linalg.matvec(u, v)
    for i, x in enumerate(b):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if x != 0:
                return False
        elif _valuation(x, ell) < _valuation(di, ell):
            return False
    return True


def free_module(coeff: str, ell: int, n: int, sigma=None) -> SigmaModule:
    sigma = sigma if sigma is not None else linalg.identity(n)
    return SigmaModule(coeff, ell, [[] for _ in range(n)], sigma)


def trivial_module(coeff: str, ell: int) -> SigmaModule:
    return free_module(coeff, ell, 1)


def cyclic_shift(ell: int) -> list[list[int]]:
    """Permutation matrix sending e_i to e_{i+1 mod ell}."""
    m = linalg.zeros(ell, ell)
    for i in range(ell):
        m[(i + 1) % ell][i] = 1
    return m


def regular_module(coeff: str, ell: int) -> SigmaModule:
    return free_module(coeff, ell, ell, cyclic_shift(ell))


def augmentation_ideal(coeff: str, ell: int) -> SigmaModule:
    """The kernel of Z[Sigma] -> Z, with basis u_i = g^i - 1 (i = 1 .. ell-1)."""
    n = ell - 1
    m = linalg.zeros(n, n)
    # sigma(u_i) = u_{i+1} - u_1, with u_ell = 0
    for i in range(1, ell):
        col = i - 1
        if i + 1 < ell:
            m[i][col] += 1
        m[0][col] -= 1
    return free_module(coeff, ell, n, m)


def permutation_module(perm: Sequence[int], coeff: str, ell: int) -> SigmaModule:
    """Permutation module of a Sigma-set given by sigma's action on its points."""
    n = len(perm)
    m = linalg.zeros(n, n)
    for i, j in enumerate(perm):
        m[j][i] = 1
    return free_module(coeff, ell, n, m)


def direct_sum(*mods: SigmaModule) -> SigmaModule:
    if not mods:
        raise TateError("direct_sum needs at least one module")
    coeff, ell = mods[0].coeff, mods[0].ell
    if any(m.coeff != coeff or m.ell != ell for m in mods):
        raise TateError("direct_sum of modules over different rings")
    pres = linalg.block_diag(*[m.presentation for m in mods], shapes=[(m.ngens, m.nrels) for m in mods])
    sig = linalg.block_diag(*[m.sigma for m in mods], shapes=[(m.ngens, m.ngens) for m in mods])
    return SigmaModule(coeff, ell, pres, sig)


def quotient_module(coeff: str, ell: int, sigma, relations) -> SigmaModule:
    n = len(sigma)
    return SigmaModule(coeff, ell, _from_cols([list(c) for c in relations], n), sigma)


# ---------------------------------------------------------------------------
# the norm element


@dataclass(frozen=True)
class NormElement:
    """N = 1 + sigma + ... + sigma^(ell-1) in the group ring, as coefficients on sigma^i."""

    ell: int
    coefficients: tuple[int, ...]

    def matrix(self, m: SigmaModule) -> list[list[int]]:
        n = m.ngens
        out = linalg.zeros(n, n)
        power = linalg.identity(n)
        for c in self.coefficients:
            out = linalg.add(out, linalg.scale(c, power))
            power = linalg.matmul(m.sigma, power)
        return out


def norm_element(ell: int) -> NormElement:
    if not _is_prime(ell):
        raise TateError(f"{ell} is not prime")
    return NormElement(ell, (1,) * ell)


# ---------------------------------------------------------------------------
# Tate cohomology of a module


@dataclass(frozen=True)
class TateGroup:
    """T^j as an F_ell-vector space: ``basis`` are representatives, ``modulo`` spans the boundaries."""

    j: int
    dim: int
    basis: tuple[tuple[int, ...], ...]
    coeff: str
    ell: int
    frob_twist: int = 0
    modulo: tuple[tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "dim": self.dim,
            "basis": [list(b) for b in self.basis],
            "coeff": self.coeff,
            "ell": self.ell,
            "frob_twist": self.frob_twist,
        }


def _components(m: SigmaModule) -> list[list[int]]:
    """Coordinate blocks that sigma and the relations never mix."""
    n = m.ngens
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for i in range(n):
        for j in range(n):
            if m.sigma[i][j]:
                union(i, j)
    for c in m.relations:
        support = [i for i, x in enumerate(c) if x]
        for i in support[1:]:
            union(support[0], i)
    blocks: dict[int, list[int]] = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    return sorted(blocks.values())


def _restrict(m: SigmaModule, block: list[int]) -> SigmaModule:
    idx = set(block)
    rels = [[c[i] for i in block] for c in m.relations if any(c[i] for i in idx)]
    sig = [[m.sigma[i][j] for j in block] for i in block]
    return SigmaModule(m.coeff, m.ell, _from_cols(rels, len(block)), sig)


def tate_cohomology(m: SigmaModule, j: int, split: bool = True) -> TateGroup:
    """T^j(M) for j mod 2, computed blockwise when the module visibly splits."""
    j = j % 2
    n = m.ngens
    if split and n > 1:
        blocks = _components(m)
        if len(blocks) > 1:
            basis, modulo = [], []
            for block in blocks:
                t = _tate_single(_restrict(m, block), j)
                for vec in t.basis:
                    full = [0] * n
                    for i, x in zip(block, vec):
                        full[i] = x
                    basis.append(tuple(full))
                for vec in t.modulo:
                    full = [0] * n
                    for i, x in zip(block, vec):
                        full[i] = x
                    modulo.append(tuple(full))
            return TateGroup(j, len(basis), tuple(basis), m.coeff, m.ell, m.frob_twist, tuple(modulo))
    return _tate_single(m, j)


def _tate_single(m: SigmaModule, j: int) -> TateGroup:
    n = m.ngens
    if n == 0:
        return TateGroup(j, 0, (), m.coeff, m.ell, m.frob_twist)
    one_minus = m.one_minus_sigma()
    norm = m.norm_matrix()
    phi, psi = (one_minus, norm) if j == 0 else (norm, one_minus)
    if m.coeff == "Fl":
        return _tate_fl(m, j, phi, psi)
    return _tate_zl(m, j, phi, psi)


def _cycles_generators(phi, rels, n):
    """Generators of {x : phi x in span(rels)} from the kernel of [phi | -rels]."""
    k = len(rels)
    block = [list(phi[i]) + [-c[i] for c in rels] for i in range(n)]
    return block, k


def _tate_fl(m: SigmaModule, j: int, phi, psi) -> TateGroup:
    ell, n = m.ell, m.ngens
    rels = m.relations
    block, _ = _cycles_generators(phi, rels, n)
    ker = linalg.kernel_mod(block, ell, n + len(rels))
    cycles = linalg.span_basis_mod([v[:n] for v in ker], ell, n)
    bounds = linalg.span_basis_mod([list(c) for c in _cols(psi, n)] + [list(c) for c in rels], ell, n)
    basis = linalg.complement_basis_mod(bounds, cycles, ell, n)
    return TateGroup(j, len(basis), tuple(tuple(b) for b in basis), "Fl", ell, m.frob_twist, tuple(tuple(b) for b in bounds))


def _tate_zl(m: SigmaModule, j: int, phi, psi) -> TateGroup:
    ell, n = m.ell, m.ngens
    rels = m.relations
    block, _ = _cycles_generators(phi, rels, n)
    ker = linalg.integer_kernel(block, n + len(rels))
    gens = [c[:n] for c in _cols(ker, n + len(rels))]
    bounds = [list(c) for c in _cols(psi, n)] + [list(c) for c in rels]
    dim, basis = _local_quotient(gens + bounds, bounds, n, ell)
    return TateGroup(j, dim, tuple(basis), "Zl", ell, m.frob_twist, tuple(tuple(b) for b in bounds))


def _local_quotient(big, small, n, ell):
    """dim over F_ell of (span big / span small) tensored with Z_(ell), assumed killed by ell."""
    a = linalg.lattice_basis(big, n)
    r = len(a[0]) if a and a[0] else 0
    if r == 0:
        return 0, []
    coords = []
    for v in small:
        x = linalg.integer_solve(a, v)
        if x is None:
            raise TateError("boundary is not contained in the cycles")
        coords.append(list(x))
    cmat = _from_cols(coords, r) if coords else [[] for _ in range(r)]
    if coords:
        d, u, _ = linalg.smith_normal_form(cmat)
    else:
        d, u = [], linalg.identity(r)
    uinv = linalg.integer_inverse(u)
    basis = []
    for i in range(r):
        di = d[i] if i < len(d) else 0
        if di == 0 or di % ell == 0:
            if _valuation(di, ell) > 1:
                raise TateError("quotient is not killed by ell; sigma does not have order ell")
            col = [uinv[k][i] for k in range(r)]
            basis.append(tuple(linalg.matvec(a, col)))
    return len(basis), basis


# ---------------------------------------------------------------------------
# lattices, goodness


def lattice_rank(m: SigmaModule) -> int:
    """Rank of an ell-locally free module; raises NotLattice if there is ell-torsion."""
    if m.coeff != "Zl":
        raise TateError("lattice operations need coeff Zl")
    if m.nrels == 0:
        return m.ngens
    d = linalg.elementary_divisors(m.presentation)
    if any(x and x % m.ell == 0 for x in d):
        raise NotLattice("module has ell-torsion")
    return m.ngens - sum(1 for x in d if x)


@dataclass(frozen=True)
class LatticeDecomposition:
    """M = trivial^a + augmentation^b + regular^c."""

    a: int
    b: int
    c: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def decompose_lattice(m: SigmaModule) -> LatticeDecomposition:
    rank = lattice_rank(m)
    a = tate_cohomology(m, 0).dim
    b = tate_cohomology(m, 1).dim
    rest = rank - a - b * (m.ell - 1)
    if rest < 0 or rest % m.ell:
        raise TateError(f"inconsistent ranks: rank {rank}, a={a}, b={b}")
    return LatticeDecomposition(a, b, rest // m.ell)


@dataclass(frozen=True)
class GoodnessCertificate:
    good: bool
    decomposition: LatticeDecomposition


def is_good(m: SigmaModule) -> GoodnessCertificate:
    dec = decompose_lattice(m)
    return GoodnessCertificate(dec.b == 0, dec)


# ---------------------------------------------------------------------------
# free models and complexes


def free_model(m: SigmaModule):
    """(sigma', proj, lift): the module as a free F_ell- or Z_(ell)-module.

    ``proj`` (r x n) maps Z^n onto the free coordinates and kills the relations;
    ``lift`` (n x r) is a section. Over Zl this needs a lattice.
    """
    n, ell = m.ngens, m.ell
    if m.nrels == 0:
        ident = linalg.identity(n)
        return [list(r) for r in m.sigma], ident, ident
    if m.coeff == "Fl":
        rels = linalg.span_basis_mod(m.relations, ell, n)
        units = [[int(i == k) for i in range(n)] for k in range(n)]
        comp = linalg.complement_basis_mod(rels, units, ell, n)
        full = _from_cols(comp + rels, n)
        inv = inverse_mod(full, ell)
        r = len(comp)
        proj = [inv[i] for i in range(r)]
        lift = _from_cols(comp, n)
    else:
        lattice_rank(m)
        d, u, _ = linalg.smith_normal_form(m.presentation)
        k = sum(1 for x in d if x)
        r = n - k
        proj = [list(u[i]) for i in range(k, n)]
        uinv = linalg.integer_inverse(u)
        lift = [[uinv[i][j] for j in range(k, n)] for i in range(n)]
    sig = linalg.matmul(linalg.matmul(proj, m.sigma), lift) if r else []
    if m.coeff == "Fl":
        sig = [[x % ell for x in row] for row in sig]
    return sig, proj, lift


def inverse_mod(a, p: int) -> list[list[int]]:
    n = len(a)
    aug = [[x % p for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    rows, pivots = linalg.rref_mod(aug, p, 2 * n)
    if pivots[:n] != list(range(n)):
        raise TateError("matrix is not invertible mod p")
    return [row[n:] for row in rows[:n]]


@dataclass(frozen=True)
class SigmaComplex:
    """Bounded complex C^a -> ... -> C^b; ``differentials[i]`` maps terms[i] to terms[i+1]."""

    terms: tuple[SigmaModule, ...]
    differentials: tuple[tuple[tuple[int, ...], ...], ...]
    start: int = 0

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "differentials", tuple(_rows(d) for d in self.differentials))
        if len(self.differentials) != max(len(self.terms) - 1, 0):
            raise TateError("need one differential between consecutive terms")
        coeffs = {(t.coeff, t.ell) for t in self.terms}
        if len(coeffs) > 1:
            raise TateError("complex terms over different rings")

    @property
    def coeff(self) -> str:
        return self.terms[0].coeff

    @property
    def ell(self) -> int:
        return self.terms[0].ell

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.terms))

    def shift(self, k: int) -> "SigmaComplex":
        """C[k]: degree q term is C^{q+k}, differentials multiplied by (-1)^k."""
        sign = -1 if k % 2 else 1
        diffs = [linalg.scale(sign, d) for d in self.differentials]
        return SigmaComplex(self.terms, diffs, self.start - k)

    def validate(self) -> "SigmaComplex":
        free = [free_model(t) for t in self.terms]
        ell = self.ell
        for i, d in enumerate(self.differentials):
            s0, s1 = free[i][0], free[i + 1][0]
            dd = _induced(d, free[i], free[i + 1], self.coeff, ell)
            lhs = linalg.matmul(s1, dd) if s1 else []
            rhs = linalg.matmul(dd, s0) if dd and dd[0] else []
            if not _zero(linalg.sub(lhs, rhs) if lhs and rhs else [], self.coeff, ell):
                raise TateError(f"differential {i} does not commute with sigma")
            if i + 1 < len(self.differentials):
                nxt = _induced(self.differentials[i + 1], free[i + 1], free[i + 2], self.coeff, ell)
                comp = linalg.matmul(nxt, dd) if nxt and dd and dd[0] else []
                if not _zero(comp, self.coeff, ell):
                    raise TateError("d o d != 0")
        return self


def _zero(m, coeff, ell) -> bool:
    if coeff == "Fl":
        return all(x % ell == 0 for row in m for x in row)
    return all(x == 0 for row in m for x in row)


def _induced(d, src_model, tgt_model, coeff, ell):
    _, _, lift = src_model
    _, proj, _ = tgt_model
    if not proj or not lift or not lift[0]:
        return [[0] * (len(lift[0]) if lift and lift[0] else 0) for _ in range(len(proj))]
    out = linalg.matmul(linalg.matmul(proj, d), lift)
    if coeff == "Fl":
        out = [[x % ell for x in row] for row in out]
    return out


def _norm_of(sig, ell):
    n = len(sig)
    out = linalg.zeros(n, n)
    power = linalg.identity(n)
    for _ in range(ell):
        out = linalg.add(out, power)
        power = linalg.matmul(sig, power) if n else power
    return out


def total_differential(c: SigmaComplex, n: int, models=None):
    """Matrix of Tot^n -> Tot^{n+1} for the totalization against the complete resolution."""
    models = models or [free_model(t) for t in c.terms]
    sig = [mm[0] for mm in models]
    dims = [len(s) for s in sig]
    diffs = [_induced(d, models[i], models[i + 1], c.coeff, c.ell) for i, d in enumerate(c.differentials)]
    offs = [sum(dims[:i]) for i in range(len(dims))]
    total = sum(dims)
    out = linalg.zeros(total, total)
    for i, q in enumerate(c.degrees):
        p = n - q
        if p % 2 == 0:
            h = linalg.sub(linalg.identity(dims[i]), sig[i]) if dims[i] else []
        else:
            h = _norm_of(sig[i], c.ell)
        for r in range(dims[i]):
            for s in range(dims[i]):
                out[offs[i] + r][offs[i] + s] += h[r][s]
        if i + 1 < len(c.terms):
            sign = -1 if p % 2 else 1
            d = diffs[i]
            for r in range(dims[i + 1]):
                for s in range(dims[i]):
                    out[offs[i + 1] + r][offs[i] + s] += sign * d[r][s]
    if c.coeff == "Fl":
        out = [[x % c.ell for x in row] for row in out]
    return out, total


def tate_of_complex(c: SigmaComplex, n: int) -> TateGroup:
    """T^n(C) as the cohomology of Tot(C against ... -> (1 - sigma) -> N -> (1 - sigma) -> ...).

    Every Tot^n is the finite sum of all terms (one column index per term), so the
    computation is exact with no truncation.
    """
    c.validate()
    models = [free_model(t) for t in c.terms]
    d_in, total = total_differential(c, n - 1, models)
    d_out, _ = total_differential(c, n, models)
    ell = c.ell
    j = n % 2
    if total == 0:
        return TateGroup(j, 0, (), c.coeff, ell)
    if c.coeff == "Fl":
        cycles = linalg.kernel_mod(d_out, ell, total)
        bounds = linalg.span_basis_mod(_cols(d_in, total), ell, total)
        basis = linalg.complement_basis_mod(bounds, cycles, ell, total)
        return TateGroup(j, len(basis), tuple(tuple(b) for b in basis), "Fl", ell, 0, tuple(tuple(b) for b in bounds))
    ker = linalg.integer_kernel(d_out, total)
    cycles = _cols(ker, total)
    bounds = [list(x) for x in _cols(d_in, total)]
    dim, basis = _local_quotient(cycles + bounds, bounds, total, ell)
    return TateGroup(j, dim, tuple(basis), "Zl", ell, 0, tuple(tuple(b) for b in bounds))


def complex_from_module(m: SigmaModule, degree: int = 0) -> SigmaComplex:
    return SigmaComplex((m,), (), degree)


def cohomology_dims(c: SigmaComplex) -> dict[int, int]:
    """Ordinary cohomology of C (Fl) or of C tensor^L F_ell (Zl, terms must be lattices)."""
    models = [free_model(t) for t in c.terms]
    diffs = [_induced(d, models[i], models[i + 1], c.coeff, c.ell) for i, d in enumerate(c.differentials)]
    dims = [len(mm[0]) for mm in models]
    out = {}
    for i, q in enumerate(c.degrees):
        rk_out = linalg.rank_mod(diffs[i], c.ell) if i < len(diffs) and dims[i] and dims[i + 1] else 0
        rk_in = linalg.rank_mod(diffs[i - 1], c.ell) if i > 0 and dims[i] and dims[i - 1] else 0
        out[q] = dims[i] - rk_out - rk_in
    return out


# ---------------------------------------------------------------------------
# tensor powers


@dataclass(frozen=True)
class TensorPowerTate:
    dims: dict
    basis: dict
    frob_twist: int
    coeff: str
    ell: int

    def to_json(self) -> dict:
        return {
            "coeff": self.coeff,
            "ell": self.ell,
            "frob_twist": self.frob_twist,
            "dims": {str(j): self.dims[j] for j in (0, 1)},
            "basis": {str(j): [list(t) for t in self.basis[j]] for j in (0, 1)},
        }


def _rotation_sign(degrees: Sequence[int], idx: Sequence[int]) -> int:
    """Koszul sign of moving the last tensor factor to the front."""
    last = degrees[idx[-1]] % 2
    rest = sum(degrees[i] for i in idx[:-1]) % 2
    return -1 if last and rest else 1


def tate_of_tensor_power(
    dim: int,
    ell: int,
    coeff: str = "Zl",
    degrees: Sequence[int] | None = None,
    frob_twist: int = 0,
    bound: int = DEFAULT_TENSOR_BOUND,
) -> TensorPowerTate:
    """T^*(V^{tensor ell}) for sigma the cyclic rotation, on the monomial basis.

    Only the diagonal monomials v_i^{tensor ell} are sigma-fixed; every other monomial
    lies in a free orbit and contributes nothing. A diagonal monomial spans the
    trivial module unless ell = 2 and v_i is odd, where the Koszul sign makes it the
    sign module. Over Zl trivial contributes to T^0 and sign to T^1; over Fl both
    contribute to both degrees. A graded V shifts the contribution of v_i by ell*|v_i|.
    """
    if not _is_prime(ell):
        raise TateError(f"{ell} is not prime")
    if coeff not in COEFFS:
        raise TateError(f"coeff must be one of {COEFFS}")
    if dim**ell > bound:
        raise TateError(f"dim V^ell = {dim}^{ell} exceeds the bound {bound}")
    degrees = list(degrees) if degrees is not None else [0] * dim
    if len(degrees) != dim:
        raise TateError("need one degree per basis vector")
    basis: dict[int, list[tuple[int, ...]]] = {0: [], 1: []}
    for i in range(dim):
        mono = (i,) * ell
        eps = _rotation_sign(degrees, mono)
        shift = (ell * degrees[i]) % 2
        if coeff == "Fl":
            targets = (0, 1)
        else:
            targets = ((shift + (0 if eps == 1 else 1)) % 2,)
        for j in targets:
            basis[j].append(mono)
    dims = {j: len(basis[j]) for j in (0, 1)}
    return TensorPowerTate(dims, {j: tuple(v) for j, v in basis.items()}, frob_twist + 1, coeff, ell)


def tensor_power_module(dim: int, ell: int, coeff: str = "Zl", degrees: Sequence[int] | None = None) -> SigmaModule:
    """The materialized signed permutation module V^{tensor ell} (for brute-force checks)."""
    import itertools

    degrees = list(degrees) if degrees is not None else [0] * dim
    monos = list(itertools.product(range(dim), repeat=ell))
    index = {mono: k for k, mono in enumerate(monos)}
    n = len(monos)
    m = linalg.zeros(n, n)
    for mono, k in index.items():
        tgt = (mono[-1],) + mono[:-1]
        m[index[tgt]][k] = _rotation_sign(degrees, mono)
    return free_module(coeff, ell, n, m)


# ---------------------------------------------------------------------------
# long exact sequence


@dataclass
class LESReport:
    spots: list[dict]
    connecting_nonzero: bool

    @property
    def exact(self) -> bool:
        return all(s["exact"] for s in self.spots)

    def to_json(self) -> dict:
        return {"exact": self.exact, "connecting_nonzero": self.connecting_nonzero, "spots": self.spots}


def _class_matrix(src: TateGroup, tgt: TateGroup, fn, ell) -> list[list[int]]:
    """Matrix (tgt.dim x src.dim) of an induced map on Tate groups over F_ell."""
    cols = []
    for b in src.basis:
        v = fn(b)
        if tgt.dim == 0:
            cols.append([])
            continue
        cols.append(linalg.coordinates_mod(tgt.basis, tgt.modulo, v, ell))
    if tgt.dim == 0:
        return [[] for _ in range(0)]
    return _from_cols(cols, tgt.dim) if cols else [[] for _ in range(tgt.dim)]


def _rank(m, ell) -> int:
    if not m or not m[0]:
        return 0
    return linalg.rank_mod(m, ell)


def les_check(sub: SigmaModule, mid: SigmaModule, quo: SigmaModule, inc, proj) -> LESReport:
    """Six-term periodic Tate sequence of 0 -> M' -> M -> M'' -> 0 over F_ell with exactness at each spot."""
    ell = mid.ell
    if not all(x.coeff == "Fl" and x.ell == ell for x in (sub, mid, quo)):
        raise TateError("les_check works over F_ell")
    sp, pp, lp = free_model(sub)
    sm, pm, lm = free_model(mid)
    sq, pq, lq = free_model(quo)
    inc = _induced(inc, (sp, pp, lp), (sm, pm, lm), "Fl", ell)
    proj = _induced(proj, (sm, pm, lm), (sq, pq, lq), "Fl", ell)
    a, b, c = len(sp), len(sm), len(sq)
    _check_ses(sp, sm, sq, inc, proj, ell)
    mods = [free_module("Fl", ell, k, s) for k, s in ((a, sp), (b, sm), (c, sq))]
    t = {(k, j): tate_cohomology(mods[k], j, split=False) for k in range(3) for j in (0, 1)}

    def apply(mat):
        return lambda v: [x % ell for x in linalg.matvec(mat, v)] if mat and mat[0] else [0] * len(mat)

    def lift_through(mat, v):
        x = linalg.solve_mod(mat, list(v), ell)
        if x is None:
            raise TateError("lift failed: sequence is not exact")
        return x

    def delta(j):
        # j = 0: T^0(M'') -> T^1(M') via (1 - sigma); j = 1: T^1(M'') -> T^0(M') via N
        op = linalg.sub(linalg.identity(b), sm) if j == 0 else _norm_of(sm, ell)

        def fn(v):
            x = lift_through(proj, v)
            y = [z % ell for z in linalg.matvec(op, x)]
            return lift_through(inc, y)

        return fn

    maps = [
        ("T0(M')->T0(M)", t[0, 0], t[1, 0], apply(inc)),
        ("T0(M)->T0(M'')", t[1, 0], t[2, 0], apply(proj)),
        ("T0(M'')->T1(M')", t[2, 0], t[0, 1], delta(0)),
        ("T1(M')->T1(M)", t[0, 1], t[1, 1], apply(inc)),
        ("T1(M)->T1(M'')", t[1, 1], t[2, 1], apply(proj)),
        ("T1(M'')->T0(M')", t[2, 1], t[0, 0], delta(1)),
    ]
    mats = [(name, s, tg, _class_matrix(s, tg, fn, ell)) for name, s, tg, fn in maps]
    spots = []
    names = ["T0(M)", "T0(M'')", "T1(M')", "T1(M)", "T1(M'')", "T0(M')"]
    for k in range(6):
        _, _, spot, m_in = mats[k]
        _, _, _, m_out = mats[(k + 1) % 6]
        r_in, r_out = _rank(m_in, ell), _rank(m_out, ell)
        comp_zero = True
        if m_in and m_in[0] and m_out and m_out[0]:
            comp_zero = all(x % ell == 0 for row in linalg.matmul(m_out, m_in) for x in row)
        spots.append({
            "spot": names[k],
            "dim": spot.dim,
            "rank_in": r_in,
            "rank_out": r_out,
            "exact": comp_zero and r_in + r_out == spot.dim,
        })
    conn = any(_rank(mats[k][3], ell) for k in (2, 5))
    return LESReport(spots, conn)


def _check_ses(sp, sm, sq, inc, proj, ell):
    a, b, c = len(sp), len(sm), len(sq)
    if a + c != b:
        raise TateError("dimensions do not add up for a short exact sequence")
    if a and _rank(inc, ell) != a:
        raise TateError("first map is not injective")
    if c and _rank(proj, ell) != c:
        raise TateError("second map is not surjective")
    if a and c and not _zero(linalg.matmul(proj, inc), "Fl", ell):
        raise TateError("composite is not zero")
    if a and not _zero(linalg.sub(linalg.matmul(sm, inc), linalg.matmul(inc, sp)), "Fl", ell):
        raise TateError("first map is not sigma-equivariant")
    if c and not _zero(linalg.sub(linalg.matmul(sq, proj), linalg.matmul(proj, sm)), "Fl", ell):
        raise TateError("second map is not sigma-equivariant")


# ---------------------------------------------------------------------------
# random fixtures


def random_invertible_mod(rng: random.Random, n: int, p: int) -> list[list[int]]:
    while True:
        g = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        if linalg.rank_mod(g, p) == n:
            return g


def random_unimodular(rng: random.Random, n: int, steps: int = 6) -> list[list[int]]:
    g = linalg.identity(n)
    for _ in range(steps * n if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-1, 1])
        for k in range(n):
            g[i][k] += c * g[j][k]
    return g


def jordan_sum(sizes: Sequence[int]) -> list[list[int]]:
    n = sum(sizes)
    m = linalg.identity(n)
    off = 0
    for s in sizes:
        for i in range(s - 1):
            m[off + i + 1][off + i] = 1
        off += s
    return m


def random_fl_module(rng: random.Random, ell: int, max_dim: int = 6) -> SigmaModule:
    """Sum of unipotent Jordan blocks of size <= ell, in a random basis."""
    sizes = []
    total = rng.randint(1, max_dim)
    while sum(sizes) < total:
        sizes.append(rng.randint(1, min(ell, total - sum(sizes))))
    j = jordan_sum(sizes)
    n = sum(sizes)
    g = random_invertible_mod(rng, n, ell)
    ginv = inverse_mod(g, ell)
    s = [[x % ell for x in row] for row in linalg.matmul(linalg.matmul(g, j), ginv)]
    return free_module("Fl", ell, n, s)


def random_lattice(rng: random.Random, ell: int, max_each: int = 2, max_rank: int | None = None) -> tuple[SigmaModule, tuple[int, int, int]]:
    """trivial^a + augmentation^b + regular^c in a random unimodular basis."""
    while True:
        a, b, c = (rng.randint(0, max_each) for _ in range(3))
        rank = a + b * (ell - 1) + c * ell
        if rank and (max_rank is None or rank <= max_rank):
            break
    pieces = [trivial_module("Zl", ell)] * a + [augmentation_ideal("Zl", ell)] * b + [regular_module("Zl", ell)] * c
    m = direct_sum(*pieces)
    n = m.ngens
    g = random_unimodular(rng, n)
    ginv = linalg.integer_inverse(g)
    s = linalg.matmul(linalg.matmul(g, m.sigma), ginv)
    return free_module("Zl", ell, n, s), (a, b, c)


def random_ses(rng: random.Random, ell: int, max_dim: int = 6):
    """A cyclic submodule of a random F_ell[Sigma]-module and its quotient."""
    mid = random_fl_module(rng, ell, max_dim)
    n = mid.ngens
    sig = [list(r) for r in mid.sigma]
    v = [rng.randrange(ell) for _ in range(n)]
    orbit = [v]
    for _ in range(ell - 1):
        orbit.append([x % ell for x in linalg.matvec(sig, orbit[-1])])
    sub_basis = linalg.span_basis_mod(orbit, ell, n) if any(v) else []
    units = [[int(i == k) for i in range(n)] for k in range(n)]
    comp = linalg.complement_basis_mod(sub_basis, units, ell, n)
    full = _from_cols(sub_basis + comp, n)
    inv = inverse_mod(full, ell)
    a = len(sub_basis)
    inc = _from_cols(sub_basis, n) if a else [[] for _ in range(n)]
    proj = [inv[i] for i in range(a, n)]
    # sigma on the sub: coordinates of sigma(b_k) in the sub basis
    sig_full = [[x % ell for x in row] for row in linalg.matmul(linalg.matmul(inv, sig), full)]
    s_sub = [row[:a] for row in sig_full[:a]]
    s_quo = [row[a:] for row in sig_full[a:]]
    sub = free_module("Fl", ell, a, s_sub)
    quo = free_module("Fl", ell, n - a, s_quo)
    return sub, mid, quo, inc, proj


def _equivariant_maps(s_src, s_tgt, coeff, ell, prev=None, nxt=None):
    """Basis of {d : s_tgt d = d s_src, d prev = 0} as flattened integer vectors."""
    m, n = len(s_tgt), len(s_src)
    rows = []
    # unknown d[i][j] at index i*n + j
    for i in range(m):
        for j in range(n):
            row = [0] * (m * n)
            for k in range(m):
                row[k * n + j] += s_tgt[i][k]
            for k in range(n):
                row[i * n + k] -= s_src[k][j]
            rows.append(row)
    if prev is not None:
        pn = len(prev[0]) if prev and prev[0] else 0
        for i in range(m):
            for j in range(pn):
                row = [0] * (m * n)
                for k in range(n):
                    row[i * n + k] += prev[k][j]
                rows.append(row)
    if coeff == "Fl":
        return linalg.kernel_mod(rows, ell, m * n)
    ker = linalg.integer_kernel(rows, m * n)
    return _cols(ker, m * n)


def random_complex(rng: random.Random, coeff: str, ell: int, length: int = 3, max_dim: int = 4) -> SigmaComplex:
    terms = []
    for _ in range(length):
        if coeff == "Fl":
            terms.append(random_fl_module(rng, ell, max_dim))
        else:
            terms.append(random_lattice(rng, ell, 1, max_rank=max(max_dim, ell))[0])
    diffs = []
    prev = None
    for i in range(length - 1):
        s0 = [list(r) for r in terms[i].sigma]
        s1 = [list(r) for r in terms[i + 1].sigma]
        basis = _equivariant_maps(s0, s1, coeff, ell, prev)
        n, m = len(s0), len(s1)
        flat = [0] * (m * n)
        for vec in basis:
            c = rng.randint(-2, 2)
            flat = [x + c * y for x, y in zip(flat, vec)]
        if coeff == "Fl":
            flat = [x % ell for x in flat]
        d = [[flat[r * n + c] for c in range(n)] for r in range(m)]
        diffs.append(d)
        prev = d
    return SigmaComplex(terms, diffs, rng.randint(-2, 2))
