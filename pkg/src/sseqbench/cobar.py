"""Brute-force Ext over a finite algebra from the normalized bar complex.

This is the independent oracle for the minimal resolution.  B_s in internal
degree t has basis the s-tuples [a_1|...|a_s] of non-unit basis elements with
degrees summing to t, and d[a_1|...|a_s] = sum_i [...|a_i a_{i+1}|...].  Over
F_2, dim Ext^{s,t} = dim Tor_{s,t} = dim B_{s,t} - rank d_s - rank d_{s+1}.

Nothing here touches the resolution code; the only shared input is the
structure constants of the algebra.
"""
from __future__ import annotations

from . import gf2
from .steenrod import GradedAlgebra


class BarComplex:
    def __init__(self, alg: GradedAlgebra):
        self.alg = alg
        self._basis: dict[tuple[int, int], list[tuple[int, ...]]] = {}
        self._rank: dict[tuple[int, int], int] = {}
        self._nonunit = [(i, alg.degrees[i]) for i in range(1, len(alg.basis))]
        self.min_degree = min(d for _, d in self._nonunit) if self._nonunit else 1

    def basis(self, s: int, t: int) -> list[tuple[int, ...]]:
        key = (s, t)
        if key in self._basis:
            return self._basis[key]
        out: list[tuple[int, ...]] = []
        lo = self.min_degree

        def rec(k, rem, acc):
            if k == 0:
                if rem == 0:
                    out.append(tuple(acc))
                return
            for i, d in self._nonunit:
                if d + lo * (k - 1) <= rem:
                    acc.append(i)
                    rec(k - 1, rem - d, acc)
                    acc.pop()

        if s >= 0 and t >= 0:
            rec(s, t, [])
        self._basis[key] = out
        return out

    def boundary_rows(self, s: int, t: int) -> list[set[int]]:
        """Rows of d: B_{s,t} -> B_{s-1,t} as sets of target indices."""
        src = self.basis(s, t)
        index = {b: i for i, b in enumerate(self.basis(s - 1, t))}
        mult = self.alg.multiply
        rows = []
        for tup in src:
            v: set[int] = set()
            for i in range(len(tup) - 1):
                for p in mult(tup[i], tup[i + 1]):
                    v ^= {index[tup[:i] + (p,) + tup[i + 2:]]}
            rows.append(v)
        return rows

    def rank(self, s: int, t: int) -> int:
        """Rank of d_s in internal degree t (d_1 = 0 into the normalized B_0)."""
        key = (s, t)
        if key not in self._rank:
            self._rank[key] = 0 if s <= 1 else sparse_rank(self.boundary_rows(s, t))
        return self._rank[key]

    def ext_dim(self, s: int, t: int) -> int:
        if s == 0:
            return 1 if t == 0 else 0
        return len(self.basis(s, t)) - self.rank(s, t) - self.rank(s + 1, t)

    def ext_table(self, max_stem: int, max_filtration: int) -> dict[tuple[int, int], int]:
        """{(stem, s): dim Ext^{s, stem + s}} for the window, zeros omitted."""
        out = {}
        for s in range(max_filtration + 1):
            for stem in range(max_stem + 1):
                d = self.ext_dim(s, stem + s)
                if d:
                    out[(stem, s)] = d
        return out

    # products, via cup product of cochains on the bar complex

    def _dense(self, s: int, t: int) -> list[int]:
        return [gf2.from_bits(r) for r in self.boundary_rows(s, t)]

    def h_product_rank(self, s: int, t: int, i: int) -> int:
        """Rank of multiplication by h_i from Ext^{s,t} to Ext^{s+1, t + 2^i}.

        A cochain f on B_{s,t} is a cocycle when f vanishes on the image of
        d_{s+1}.  The product f * h_i sends [a_1|...|a_{s+1}] to
        f[a_1|...|a_s] times the coefficient of Sq(2^i) in a_{s+1}.
        """
        alg = self.alg
        w = 1 << i
        target = alg.index.get(f"Sq({w})")
        if target is None:
            raise KeyError(f"Sq({w}) is not in {alg.name}")
        src_basis = self.basis(s, t)
        up_basis = self.basis(s + 1, t + w)
        n_src, n_up = len(src_basis), len(up_basis)
        if not n_src or not n_up:
            return 0
        # cochains are rows over basis indices; d^T sends f to f o d
        d_next = self._dense(s + 1, t)  # rows: B_{s+1,t} -> B_{s,t}
        # cocycles on B_{s,t}: f with f(d x) = 0 for all x, i.e. kernel of the
        # transpose of d_next, which is the orthogonal complement of its rows
        cocycles = _orthogonal_complement(d_next, n_src)
        # coboundaries in C^{s+1, t+w}: images of cochains on B_{s,t+w}
        d_up = self._dense(s + 1, t + w)  # rows indexed by B_{s+1,t+w}
        cob = _transpose(d_up, len(self.basis(s, t + w)))
        src_index = {b: k for k, b in enumerate(src_basis)}
        products = []
        for f in cocycles:
            row = 0
            for k, tup in enumerate(up_basis):
                if tup[-1] == target:
                    j = src_index.get(tup[:-1])
                    if j is not None and f >> j & 1:
                        row |= 1 << k
            products.append(row)
        return gf2.rank(products + cob) - gf2.rank(cob)


def _transpose(rows: list[int], ncols: int) -> list[int]:
    out = [0] * ncols
    for r, row in enumerate(rows):
        for c in gf2.bits(row):
            out[c] |= 1 << r
    return out


def _orthogonal_complement(rows: list[int], n: int) -> list[int]:
    """Basis of {f in F_2^n : <f, r> = 0 for every row r}."""
    return gf2.kernel(_transpose(rows, n), len(rows)) if rows else [1 << k for k in range(n)]


def sparse_rank(rows: list[set[int]]) -> int:
    pivots: dict[int, set[int]] = {}
    for r in sorted(rows, key=len):
        r = set(r)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                break
            r ^= p
    return len(pivots)


def oracle_ext_table(alg: GradedAlgebra, max_stem: int, max_filtration: int):
    return BarComplex(alg).ext_table(max_stem, max_filtration)


__all__ = ["BarComplex", "oracle_ext_table", "sparse_rank"]
