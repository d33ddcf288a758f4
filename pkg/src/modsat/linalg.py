"""Exact integer and prime-field linear algebra on plain nested lists.

Matrices are lists of rows of Python ints. Nothing here touches floats.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def zeros(n: int, m: int) -> Matrix:
    return [[0] * m for _ in range(n)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def copy(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(row) for row in a]


def shape(a: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[int, int]:
    if not a:
        return 0, (ncols or 0)
    return len(a), len(a[0])


def transpose(a: Sequence[Sequence[int]], ncols: int = 0) -> Matrix:
    if not a:
        return [[] for _ in range(ncols)]
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    n = len(a)
    inner = len(b)
    m = len(b[0]) if b else 0
    if n and len(a[0]) != inner:
        raise ValueError(f"shape mismatch: {len(a[0])} vs {inner}")
    bt = transpose(b, m)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def add(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def sub(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(c: int, a: Sequence[Sequence[int]]) -> Matrix:
    return [[c * x for x in row] for row in a]


def matpow(a: Sequence[Sequence[int]], k: int) -> Matrix:
    result = identity(len(a))
    for _ in range(k):
        result = matmul(result, a)
    return result


def hstack(*blocks: Sequence[Sequence[int]], nrows: int | None = None) -> Matrix:
    if nrows is None:
        nrows = max(len(b) for b in blocks)
    out = [[] for _ in range(nrows)]
    for b in blocks:
        if not b:
            continue
        for i in range(nrows):
            out[i].extend(b[i])
    return out


def block_diag(*blocks: Sequence[Sequence[int]], shapes: Sequence[tuple[int, int]] | None = None) -> Matrix:
    """Block-diagonal matrix; ``shapes`` lets callers pass blocks with zero rows or columns."""
    if shapes is None:
        shapes = [shape(b) for b in blocks]
    n = sum(s[0] for s in shapes)
    m = sum(s[1] for s in shapes)
    out = zeros(n, m)
    r = c = 0
    for b, (bn, bm) in zip(blocks, shapes):
        for i in range(bn):
            for j in range(bm):
                out[r + i][c + j] = b[i][j]
        r += bn
        c += bm
    return out


def is_identity(a: Sequence[Sequence[int]]) -> bool:
    return all(a[i][j] == int(i == j) for i in range(len(a)) for j in range(len(a)))


# ---------------------------------------------------------------------------
# Smith normal form over Z


def smith_normal_form(a: Sequence[Sequence[int]], ncols: int | None = None):
    """Return ``(d, u, v)`` with ``u @ a @ v`` diagonal and ``d`` its diagonal.

    ``u`` and ``v`` are unimodular. The diagonal entries are nonnegative and
    each divides the next; trailing zeros are included up to ``min(n, m)``.
    """
    n = len(a)
    m = len(a[0]) if a else (ncols or 0)
    s = copy(a)
    u = identity(n)
    v = identity(m)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row dst += c * row src
        if c:
            s[dst] = [x + c * y for x, y in zip(s[dst], s[src])]
            u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        if c:
            for row in s:
                row[dst] += c * row[src]
            for row in v:
                row[dst] += c * row[src]

    t = 0
    while t < min(n, m):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, n):
            for j in range(t, m):
                x = s[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            p = s[t][t]
            for i in range(t + 1, n):
                if s[i][t]:
                    add_row(t, i, -(s[i][t] // p))
                    if s[i][t]:
                        done = False
            for j in range(t + 1, m):
                if s[t][j]:
                    add_col(t, j, -(s[t][j] // p))
                    if s[t][j]:
                        done = False
            if done:
                # divisibility of the rest of the block
                bad = None
                for i in range(t + 1, n):
                    for j in range(t + 1, m):
                        if s[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # move the new smallest entry of row/col t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, n):
                if s[i][t] and abs(s[i][t]) < best[0]:
                    best = (abs(s[i][t]), i, t)
            for j in range(t + 1, m):
                if s[t][j] and abs(s[t][j]) < best[0]:
                    best = (abs(s[t][j]), t, j)
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    d = [s[i][i] for i in range(min(n, m))]
    return d, u, v


def elementary_divisors(a: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    return smith_normal_form(a, ncols)[0]


def integer_inverse(a: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    inv = rational_inverse(a)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not invertible over Z")
        out.append([int(x) for x in row])
    return out


def rational_inverse(a: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def rational_solve(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Some rational solution of ``a x = b`` (free variables set to 0), or None."""
    n = len(a)
    m = len(a[0]) if a else 0
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][m] != 0 for i in range(r, n)):
        return None
    x = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        x[c] = aug[i][m]
    return x


def integer_solve(a: Sequence[Sequence[int]], b: Sequence[int]) -> tuple | None:
    """An integer solution of ``a x = b`` or None when none exists."""
    n = len(a)
    m = len(a[0]) if a else 0
    if m == 0:
        return () if all(y == 0 for y in b) else None
    d, u, v = smith_normal_form(a)
    ub = matvec(u, b)
    y = [0] * m
    for i in range(n):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
    return matvec(v, y)


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis of ``{x in Z^m : a x = 0}`` as the columns of the returned m x k matrix."""
    m = len(a[0]) if a else (ncols or 0)
    if not a:
        return identity(m)
    d, _, v = smith_normal_form(a)
    r = sum(1 for x in d if x)
    cols = [[v[i][j] for i in range(m)] for j in range(r, m)]
    return transpose(cols, 0) if cols else [[] for _ in range(m)]


def column_rank(a: Sequence[Sequence[int]]) -> int:
    return sum(1 for x in elementary_divisors(a) if x)


def lattice_basis(cols: Sequence[Sequence[int]], dim: int) -> Matrix:
    """A Z-basis (as columns of a dim x k matrix) of the lattice spanned by ``cols``."""
    if not cols:
        return [[] for _ in range(dim)]
    rows = hermite_rows([list(c) for c in cols])
    return transpose(rows, 0) if rows else [[] for _ in range(dim)]


def hermite_rows(a: Sequence[Sequence[int]]) -> Matrix:
    """Nonzero rows of an echelon form of ``a`` under unimodular row operations."""
    s = [list(r) for r in a if any(r)]
    if not s:
        return []
    m = len(s[0])
    out = []
    col = 0
    while s and col < m:
        nz = [r for r in s if r[col]]
        if not nz:
            col += 1
            continue
        while len([r for r in s if r[col]]) > 1:
            nz = sorted((r for r in s if r[col]), key=lambda r: abs(r[col]))
            p = nz[0]
            for r in nz[1:]:
                q = r[col] // p[col]
                for j in range(m):
                    r[j] -= q * p[j]
            s = [r for r in s if any(r)]
        p = next(r for r in s if r[col])
        if p[col] < 0:
            p[:] = [-x for x in p]
        out.append(p)
        s = [r for r in s if r is not p]
        col += 1
    return out


# ---------------------------------------------------------------------------
# Linear algebra over F_p


def rref_mod(a: Sequence[Sequence[int]], p: int, ncols: int | None = None):
    """Reduced row echelon form mod p; returns (rows, pivot_columns)."""
    m = len(a[0]) if a else (ncols or 0)
    s = [[x % p for x in row] for row in a]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(s)) if s[i][c]), None)
        if piv is None:
            continue
        s[r], s[piv] = s[piv], s[r]
        inv = pow(s[r][c], -1, p)
        s[r] = [(x * inv) % p for x in s[r]]
        for i in range(len(s)):
            if i != r and s[i][c]:
                f = s[i][c]
                s[i] = [(x - f * y) % p for x, y in zip(s[i], s[r])]
        pivots.append(c)
        r += 1
    return s[:r], pivots


def rank_mod(a: Sequence[Sequence[int]], p: int) -> int:
    if not a or not a[0]:
        return 0
    return len(rref_mod(a, p)[1])


def kernel_mod(a: Sequence[Sequence[int]], p: int, ncols: int | None = None) -> list[list[int]]:
    """Basis vectors (as a list) of the null space of ``a`` over F_p."""
    m = len(a[0]) if a else (ncols or 0)
    if not a:
        return [[int(i == j) for i in range(m)] for j in range(m)]
    rows, pivots = rref_mod(a, p, m)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * m
        v[f] = 1
        for row, pc in zip(rows, pivots):
            v[pc] = (-row[f]) % p
        basis.append(v)
    return basis


def span_basis_mod(vectors: Sequence[Sequence[int]], p: int, dim: int) -> list[list[int]]:
    """Row-reduced basis of the span of ``vectors`` in F_p^dim."""
    if not vectors:
        return []
    rows, _ = rref_mod(vectors, p, dim)
    return rows


def solve_mod(a: Sequence[Sequence[int]], b: Sequence[int], p: int) -> list[int] | None:
    """Some solution of ``a x = b`` over F_p, or None."""
    n = len(a)
    m = len(a[0]) if a else 0
    aug = [[x % p for x in row] + [y % p] for row, y in zip(a, b)]
    rows, pivots = rref_mod(aug, p, m + 1)
    if m in pivots:
        return None
    x = [0] * m
    for row, pc in zip(rows, pivots):
        x[pc] = row[m]
    return x


def complement_basis_mod(sub: Sequence[Sequence[int]], ambient: Sequence[Sequence[int]], p: int, dim: int):
    """Vectors from ``ambient`` extending a basis of ``sub`` to a basis of ``sub + ambient``."""
    current = span_basis_mod(sub, p, dim)
    r = len(current)
    chosen = []
    for v in ambient:
        trial = current + [list(v)]
        if rank_mod(trial, p) > r:
            current = span_basis_mod(trial, p, dim)
            r += 1
            chosen.append([x % p for x in v])
    return chosen


def coordinates_mod(basis: Sequence[Sequence[int]], modulo: Sequence[Sequence[int]], v: Sequence[int], p: int) -> list[int]:
    """Coordinates of ``v`` in ``basis`` modulo the span of ``modulo`` over F_p."""
    cols = list(basis) + list(modulo)
    a = transpose(cols, 0) if cols else [[] for _ in range(len(v))]
    x = solve_mod(a, v, p)
    if x is None:
        raise ValueError("vector not in span")
    return x[: len(basis)]
