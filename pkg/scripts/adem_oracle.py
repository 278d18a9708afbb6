"""Independent Ext oracle: admissible (Serre-Cartan) basis, Adem relations, dense numpy elimination.

Shares no code with sseqbench. A(n) is generated inside A as the span of words in
Sq^1, Sq^2, ..., Sq^(2^n); Ext is read off a minimal resolution built with plain
mod-2 Gaussian elimination on uint8 arrays.

    python3 scripts/adem_oracle.py 2 15 16 tests/data/oracle_A2_adem.json
"""
import argparse
import json
from functools import lru_cache
from math import comb

import numpy as np


@lru_cache(maxsize=None)
def admissible(seq: tuple) -> frozenset:
    """Sq^seq as a set of admissible sequences (mod 2 sum)."""
    for i in range(len(seq) - 1):
        a, b = seq[i], seq[i + 1]
        if a < 2 * b:
            out = set()
            for c in range(a // 2 + 1):
                if comb(b - c - 1, a - 2 * c) % 2:
                    mid = (a + b - c, c) if c else (a + b - c,)
                    for term in admissible(seq[:i] + mid + seq[i + 2:]):
                        out ^= {term}
            return frozenset(out)
    return frozenset({seq})


def mult(x: frozenset, y: frozenset) -> frozenset:
    out = set()
    for p in x:
        for q in y:
            out ^= set(admissible(p + q))
    return frozenset(out)


def deg(seq) -> int:
    return sum(seq)


def reduce_rows(rows):
    """Row echelon over GF(2); returns the independent rows and their pivots."""
    basis, pivots = [], []
    for r in rows:
        r = r.copy()
        for b, p in zip(basis, pivots):
            if r[p]:
                r ^= b
        nz = np.flatnonzero(r)
        if len(nz):
            p = nz[0]
            for k, b in enumerate(basis):
                if b[p]:
                    basis[k] = b ^ r
            basis.append(r)
            pivots.append(p)
    return basis, pivots


def in_span(v, basis, pivots) -> bool:
    v = v.copy()
    for b, p in zip(basis, pivots):
        if v[p]:
            v ^= b
    return not v.any()


def kernel(m):
    """Basis of {x : x m = 0} for a 0/1 matrix m (rows are images of basis vectors)."""
    n = m.shape[0]
    aug = np.concatenate([m, np.eye(n, dtype=np.uint8)], axis=1)
    aug = aug.copy()
    w = m.shape[1]
    row = 0
    for col in range(w):
        piv = [i for i in range(row, n) if aug[i, col]]
        if not piv:
            continue
        aug[[row, piv[0]]] = aug[[piv[0], row]]
        for i in range(n):
            if i != row and aug[i, col]:
                aug[i] ^= aug[row]
        row += 1
    return [aug[i, w:] for i in range(row, n)]


class SubAlgebra:
    def __init__(self, n: int):
        gens = [frozenset({(2 ** k,)}) for k in range(n + 1)]
        found = {0: [frozenset({()})]}
        frontier = [frozenset({()})]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = mult(g, x)
                    if not y:
                        continue
                    d = deg(next(iter(y)))
                    if self._independent(found.setdefault(d, []), y):
                        found[d].append(y)
                        nxt.append(y)
            frontier = nxt
        self.basis = {d: v for d, v in found.items() if v}
        self.dim = sum(len(v) for v in self.basis.values())

    @staticmethod
    def _vec(x, monos):
        v = np.zeros(len(monos), dtype=np.uint8)
        for m in x:
            v[monos.index(m)] = 1
        return v

    def _independent(self, existing, y) -> bool:
        monos = sorted({m for x in existing + [y] for m in x})
        basis, piv = reduce_rows([self._vec(x, monos) for x in existing])
        return not in_span(self._vec(y, monos), basis, piv)

    def coords(self, x, d):
        """Coordinates of x in the degree-d basis."""
        b = self.basis.get(d, [])
        if not x:
            return np.zeros(len(b), dtype=np.uint8)
        monos = sorted({m for y in b for m in y} | set(x))
        m = np.array([self._vec(y, monos) for y in b], dtype=np.uint8)
        target = self._vec(x, monos)
        # solve c m = target by elimination on the augmented transpose
        aug = np.concatenate([m.T, target[:, None]], axis=1)
        k = len(b)
        row, pivcols = 0, []
        for col in range(k):
            piv = [i for i in range(row, aug.shape[0]) if aug[i, col]]
            if not piv:
                continue
            aug[[row, piv[0]]] = aug[[piv[0], row]]
            for i in range(aug.shape[0]):
                if i != row and aug[i, col]:
                    aug[i] ^= aug[row]
            pivcols.append(col)
            row += 1
        if aug[row:, k].any():
            raise ValueError("element not in the subalgebra")
        c = np.zeros(k, dtype=np.uint8)
        for i, col in enumerate(pivcols):
            c[col] = aug[i, k]
        return c


def ext_table(n: int, max_stem: int, max_s: int):
    alg = SubAlgebra(n)
    # gens[s] = list of (degree t, image: dict gen_index -> element of A(n)) in F_{s-1}
    gens = [[] for _ in range(max_s + 1)]
    dims = [[0] * (max_stem + 1) for _ in range(max_s + 1)]

    def layout(s, t):
        cols = []
        for gi, (gt, _) in enumerate(gens[s]):
            for bi in range(len(alg.basis.get(t - gt, []))):
                cols.append((gi, bi))
        return cols

    def image(s, t, gi, a):
        """d(a . g_gi) in F_{s-1}, degree t, as a vector in layout(s-1, t)."""
        cols = layout(s - 1, t)
        v = np.zeros(len(cols), dtype=np.uint8)
        for hj, elt in gens[s][gi][1].items():
            prod = mult(a, elt)
            ht = gens[s - 1][hj][0]
            c = alg.coords(prod, t - ht)
            for bi in np.flatnonzero(c):
                v[cols.index((hj, bi))] ^= 1
        return v

    max_t = max_stem + max_s
    for t in range(max_t + 1):
        for s in range(max_s + 1):
            if t - s > max_stem or t - s < 0:
                continue
            if s == 0:
                if t == 0:
                    gens[0].append((0, {}))
                    dims[0][0] = 1
                continue
            src = layout(s - 1, t)
            if s == 1:
                ker = [np.eye(len(src), dtype=np.uint8)[i] for i in range(len(src))] if t > 0 else []
            else:
                tgt = layout(s - 2, t)
                m = np.zeros((len(src), len(tgt)), dtype=np.uint8)
                for row, (gi, bi) in enumerate(src):
                    a = alg.basis[t - gens[s - 1][gi][0]][bi]
                    m[row] = image(s - 1, t, gi, a)
                ker = kernel(m) if len(src) else []
            imgs = []
            for gi, (gt, _) in enumerate(gens[s]):
                for a in alg.basis.get(t - gt, []):
                    imgs.append(image(s, t, gi, a))
            basis, piv = reduce_rows(imgs)
            for k in ker:
                if not in_span(k, basis, piv):
                    elt = {}
                    for idx in np.flatnonzero(k):
                        gi, bi = src[idx]
                        a = alg.basis[t - gens[s - 1][gi][0]][bi]
                        elt[gi] = frozenset(set(elt.get(gi, frozenset())) ^ set(a))
                    gens[s].append((t, elt))
                    dims[s][t - s] += 1
                    basis, piv = reduce_rows(basis + [k])
    return alg, dims


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("n", type=int)
    ap.add_argument("max_stem", type=int)
    ap.add_argument("max_filtration", type=int)
    ap.add_argument("out")
    args = ap.parse_args()
    alg, dims = ext_table(args.n, args.max_stem, args.max_filtration)
    doc = {
        "algebra": f"A({args.n})",
        "method": "admissible basis, Adem relations, dense minimal resolution",
        "algebra_dim": alg.dim,
        "max_stem": args.max_stem,
        "max_filtration": args.max_filtration,
        "dims": dims,
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")
    for s in range(args.max_filtration, -1, -1):
        print(f"{s:>2}", " ".join(str(x or ".") for x in dims[s]))


if __name__ == "__main__":
    main()
