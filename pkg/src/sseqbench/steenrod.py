"""Finite sub-Hopf algebras A(n) of the mod 2 Steenrod algebra in the Milnor basis.

A Milnor basis element Sq(r_1, ..., r_k) is stored as a tuple with trailing
zeros stripped; the unit is ``()``.  A(n) is spanned by the Sq(R) with
r_i < 2**(n + 2 - i) for 1 <= i <= n + 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from pathlib import Path


def milnor_degree(r: tuple[int, ...]) -> int:
    return sum(ri * ((1 << (i + 1)) - 1) for i, ri in enumerate(r))


def _strip(r) -> tuple[int, ...]:
    r = list(r)
    while r and r[-1] == 0:
        r.pop()
    return tuple(r)


def _row_choices(ri: int, ncols: int):
    """All (x_1..x_ncols) with sum 2**j x_j <= ri; yields (x_0, (x_1..))."""

    def rec(j, remaining, acc):
        if j > ncols:
            yield remaining, tuple(acc)
            return
        w = 1 << j
        for x in range(remaining // w + 1):
            acc.append(x)
            yield from rec(j + 1, remaining - x * w, acc)
            acc.pop()

    yield from rec(1, ri, [])


@lru_cache(maxsize=None)
def milnor_product(r: tuple[int, ...], s: tuple[int, ...]) -> frozenset:
    """Sq(r) * Sq(s) as a frozenset of Milnor basis tuples (coefficients in F_2)."""
    rows, cols = len(r), len(s)
    if rows == 0:
        return frozenset([s])
    if cols == 0:
        return frozenset([r])
    result: set = set()

    def rec(i, colsum, matrix):
        if i > rows:
            x0 = [s[j - 1] - colsum[j - 1] for j in range(1, cols + 1)]
            if min(x0) < 0:
                return
            full = [[None] + x0] + matrix
            t = []
            for n in range(1, rows + cols + 1):
                acc = 0
                total = 0
                for a in range(0, min(n, rows) + 1):
                    b = n - a
                    if b > cols:
                        continue
                    x = full[a][b]
                    if acc & x:
                        return
                    acc |= x
                    total += x
                t.append(total)
            result.symmetric_difference_update([_strip(t)])
            return
        for x_i0, xs in _row_choices(r[i - 1], cols):
            new_colsum = [c + x for c, x in zip(colsum, xs)]
            if any(c > s[j] for j, c in enumerate(new_colsum)):
                continue
            rec(i + 1, new_colsum, matrix + [[x_i0] + list(xs)])

    rec(1, [0] * cols, [])
    return frozenset(result)


def sq_name(r: tuple[int, ...]) -> str:
    if not r:
        return "1"
    return "Sq(" + ",".join(map(str, r)) + ")"


@dataclass
class GradedAlgebra:
    """A connected finite graded F_2-algebra with an explicit basis.

    ``mult[(i, j)]`` is the set of basis indices in the product of basis
    elements i and j.  Index 0 is the unit.
    """

    name: str
    generators: list[tuple[str, int]]
    basis: list[str]
    degrees: list[int]
    mult: dict[tuple[int, int], frozenset] = field(repr=False)

    def __post_init__(self):
        self.by_degree: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            self.by_degree.setdefault(d, []).append(i)
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.top_degree = max(self.degrees)

    def dim(self, degree: int) -> int:
        return len(self.by_degree.get(degree, ()))

    def in_degree(self, degree: int) -> list[int]:
        return self.by_degree.get(degree, [])

    def multiply(self, i: int, j: int) -> frozenset:
        return self.mult.get((i, j), frozenset())

    def check(self) -> list[str]:
        """Exhaustive structural checks; returns a list of violations."""
        problems = []
        if self.dim(0) != 1 or self.degrees[0] != 0:
            problems.append("degree 0 part is not spanned by the unit")
        n = len(self.basis)
        for i in range(n):
            if self.multiply(0, i) != frozenset([i]) or self.multiply(i, 0) != frozenset([i]):
                problems.append(f"unit law fails on {self.basis[i]}")
        for (i, j), out in self.mult.items():
            for k in out:
                if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    problems.append(f"product {self.basis[i]}*{self.basis[j]} is not graded")
        for i, j, k in product(range(1, n), repeat=3):
            if self.degrees[i] + self.degrees[j] + self.degrees[k] > self.top_degree:
                continue
            left: set = set()
            for ij in self.multiply(i, j):
                left.symmetric_difference_update(self.multiply(ij, k))
            right: set = set()
            for jk in self.multiply(j, k):
                right.symmetric_difference_update(self.multiply(i, jk))
            if left != right:
                problems.append(
                    f"associativity fails on ({self.basis[i]}, {self.basis[j]}, {self.basis[k]})"
                )
                break
        return problems

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "generators": [list(g) for g in self.generators],
            "basis": [{"name": b, "degree": d} for b, d in zip(self.basis, self.degrees)],
            "multiplication": [
                [self.basis[i], self.basis[j], sorted(self.basis[k] for k in out)]
                for (i, j), out in sorted(self.mult.items())
                if out
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GradedAlgebra":
        basis = [b["name"] for b in data["basis"]]
        degrees = [int(b["degree"]) for b in data["basis"]]
        index = {b: i for i, b in enumerate(basis)}
        mult = {}
        for left, right, out in data["multiplication"]:
            mult[(index[left], index[right])] = frozenset(index[o] for o in out)
        return cls(data["name"], [tuple(g) for g in data["generators"]], basis, degrees, mult)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "GradedAlgebra":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def milnor_basis_A(n: int) -> list[tuple[int, ...]]:
    bounds = [range(1 << (n + 2 - i)) for i in range(1, n + 2)]
    elems = {_strip(r) for r in product(*bounds)}
    return sorted(elems, key=lambda r: (milnor_degree(r), r))


@lru_cache(maxsize=None)
def subalgebra_A(n: int) -> GradedAlgebra:
    """A(n) = <Sq^1, Sq^2, ..., Sq^(2^n)> in the Milnor basis."""
    if n < 0:
        raise ValueError("A(n) needs n >= 0")
    elems = milnor_basis_A(n)
    index = {r: i for i, r in enumerate(elems)}
    mult = {}
    for i, r in enumerate(elems):
        for j, s in enumerate(elems):
            out = milnor_product(r, s)
            missing = [t for t in out if t not in index]
            if missing:
                raise AssertionError(f"A({n}) not closed: {sq_name(r)}*{sq_name(s)}")
            mult[(i, j)] = frozenset(index[t] for t in out)
    generators = [(f"Sq{1 << k}", 1 << k) for k in range(n + 1)]
    return GradedAlgebra(
        f"A({n})", generators, [sq_name(r) for r in elems], [milnor_degree(r) for r in elems], mult
    )


ALGEBRAS = {"A0": 0, "A1": 1, "A2": 2, "A3": 3}


def algebra_by_name(name: str) -> GradedAlgebra:
    key = name.replace("(", "").replace(")", "").upper()
    if key not in ALGEBRAS:
        raise KeyError(f"unknown algebra {name!r}; expected one of {sorted(ALGEBRAS)}")
    return subalgebra_A(ALGEBRAS[key])
