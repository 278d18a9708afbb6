"""Smith normal form over the integers, with transforms.

Matrices are lists of rows of Python ints.  ``smith(A)`` returns (U, D, V)
with U A V = D, U and V unimodular, D diagonal with d_1 | d_2 | ... and all
d_i >= 0.  Everything else here (kernels, solving, lattice and coset
membership) is read off from that factorization.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a:
        return []
    cols = list(zip(*b)) if b else []
    if not cols:
        return [[] for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def matvec(a: list[list[int]], v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: list[list[int]], ncols: int | None = None) -> list[list[int]]:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


@dataclass
class SmithForm:
    U: list[list[int]]
    D: list[list[int]]
    V: list[list[int]]
    nrows: int
    ncols: int

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(self.nrows, self.ncols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def invariant_factors(self) -> list[int]:
        """Nonzero diagonal entries, in divisibility order."""
        return [d for d in self.diagonal if d]


def smith(a: list[list[int]], ncols: int | None = None) -> SmithForm:
    m = len(a)
    n = len(a[0]) if a else (ncols or 0)
    D = [list(map(int, row)) for row in a]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        if c:
            D[dst] = [x + c * y for x, y in zip(D[dst], D[src])]
            U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):  # col_dst += c * col_src
        if c:
            for row in D:
                row[dst] += c * row[src]
            for row in V:
                row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the lower-right block goes to (t, t)
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return _finish(U, D, V, m, n)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                add_row(i, t, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                add_col(j, t, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            # divisibility: fold an offending row into row t and go again
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return _finish(U, D, V, m, n)


def _finish(U, D, V, m, n) -> SmithForm:
    for t in range(min(m, n)):
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return SmithForm(U, D, V, m, n)


def kernel_basis(a: list[list[int]], ncols: int) -> list[list[int]]:
    """Integer basis of {x in Z^ncols : a x = 0} (a saturated lattice)."""
    if not a:
        return identity(ncols)
    f = smith(a, ncols)
    r = f.rank
    return [[f.V[i][k] for i in range(ncols)] for k in range(r, ncols)]


def solve(a: list[list[int]], b: list[int], ncols: int | None = None) -> list[int] | None:
    """An integer x with a x = b, or None when there is none."""
    n = len(a[0]) if a else (ncols or 0)
    if not a:
        return [0] * n if not any(b) else None
    f = smith(a, n)
    ub = matvec(f.U, b)
    y = [0] * n
    for i, ui in enumerate(ub):
        d = f.D[i][i] if i < min(f.nrows, n) else 0
        if d == 0:
            if ui:
                return None
        else:
            if ui % d:
                return None
            y[i] = ui // d
    return matvec(f.V, y)


def in_lattice(v: list[int], gens: list[list[int]]) -> bool:
    """Is v an integer combination of the vectors in ``gens``?"""
    if not gens:
        return not any(v)
    return solve(transpose(gens), v) is not None


def coset_member(v: list[int], rep: list[int], gens: list[list[int]]) -> bool:
    """Decide v in rep + span_Z(gens)."""
    return in_lattice([x - y for x, y in zip(v, rep)], gens)


def hermite(gens: list[list[int]], n: int) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``gens``.

    Returns the nonzero rows: pivots move strictly right, pivot entries are
    positive and entries above a pivot are reduced into [0, pivot).
    """
    rows = [list(g) for g in gens if any(g)]
    out: list[list[int]] = []
    col = 0
    while rows and col < n:
        live = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not live:
            col += 1
            continue
        # Euclid down the column until one row holds the gcd
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        p = live[0]
        if p[col] < 0:
            p = [-x for x in p]
        for k, r in enumerate(out):
            q = r[col] // p[col]
            if q:
                out[k] = [x - q * y for x, y in zip(r, p)]
        out.append(p)
        rows = [r for r in rest if any(r)]
        col += 1
    return out


def lattice_basis(gens: list[list[int]], n: int) -> list[list[int]]:
    """A basis of the lattice spanned by gens (Hermite normal form rows)."""
    return hermite(gens, n)


def inverse_unimodular(a: list[list[int]]) -> list[list[int]]:
    n = len(a)
    f = smith(a, n)
    if any(d != 1 for d in f.diagonal) or len(f.diagonal) != n:
        raise ValueError("matrix is not unimodular")
    # U A V = I  =>  A^{-1} = V U
    return matmul(f.V, f.U)


def det(a: list[list[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def determinantal_invariants(a: list[list[int]]) -> list[int]:
    """Invariant factors via gcds of k x k minors: s_k = d_k / d_{k-1}.

    Independent of ``smith``; used as its test oracle on small matrices.
    """
    from itertools import combinations

    m = len(a)
    n = len(a[0]) if a else 0
    out = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, det([[a[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out
