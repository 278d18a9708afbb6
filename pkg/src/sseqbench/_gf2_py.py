"""Pure-Python GF(2) elimination on rows packed into Python ints.

Bit j of a row is the entry in column j.  These functions define the
reference semantics for the compiled kernel in ``_gf2_core.pyx``.
"""
from __future__ import annotations


def echelonize(rows: list[int]) -> tuple[list[int], list[int]]:
    """Reduced row echelon form.

    Returns (basis, pivots): ``basis[k]`` has lowest set bit ``pivots[k]``,
    no other basis row has that bit set, and pivots are increasing.
    """
    basis: list[int] = []
    pivots: list[int] = []
    for row in rows:
        for b, p in zip(basis, pivots):
            if row >> p & 1:
                row ^= b
        if not row:
            continue
        p = (row & -row).bit_length() - 1
        for k, b in enumerate(basis):
            if b >> p & 1:
                basis[k] = b ^ row
        basis.append(row)
        pivots.append(p)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [basis[k] for k in order], [pivots[k] for k in order]


def rank(rows: list[int]) -> int:
    pivot_rows: dict[int, int] = {}
    for row in rows:
        while row:
            p = (row & -row).bit_length() - 1
            b = pivot_rows.get(p)
            if b is None:
                pivot_rows[p] = row
                break
            row ^= b
    return len(pivot_rows)


def reduce(vec: int, basis: list[int], pivots: list[int]) -> int:
    for b, p in zip(basis, pivots):
        if vec >> p & 1:
            vec ^= b
    return vec


def kernel(rows: list[int], ncols: int) -> list[int]:
    """Basis of {x : sum_i x_i rows[i] = 0}, as ints over len(rows) bits."""
    shifted = [(row | (1 << (ncols + i))) for i, row in enumerate(rows)]
    mask = (1 << ncols) - 1
    pivot_rows: dict[int, int] = {}
    out = []
    for row in shifted:
        while row & mask:
            p = (row & -row).bit_length() - 1
            b = pivot_rows.get(p)
            if b is None:
                pivot_rows[p] = row
                break
            row ^= b
        else:
            out.append(row >> ncols)
    basis, pivots = echelonize(out)
    return basis


def image_and_kernel(rows: list[int], ncols: int):
    """Echelon basis of the row space together with a kernel basis."""
    shifted = [(row | (1 << (ncols + i))) for i, row in enumerate(rows)]
    mask = (1 << ncols) - 1
    pivot_rows: dict[int, int] = {}
    ker = []
    for row in shifted:
        while row & mask:
            p = (row & -row).bit_length() - 1
            b = pivot_rows.get(p)
            if b is None:
                pivot_rows[p] = row
                break
            row ^= b
        else:
            ker.append(row >> ncols)
    img, piv = echelonize([r & mask for r in pivot_rows.values()])
    kb, _ = echelonize(ker)
    return img, piv, kb
