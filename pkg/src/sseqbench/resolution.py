"""Minimal free resolutions of F_2 over a finite graded algebra, and Ext from them.

F_s is free on generators g_{s,k} of internal degree deg_{s,k}.  An element
of F_s in degree t is a bitset over the basis {a g : deg a + deg g = t},
a running over the algebra basis.  Stage s is built degree by degree: new
generators are kernel elements of d_{s-1} not yet hit by d_s.  Minimality
means d(g) lies in the augmentation ideal times F_{s-1}, so the dual
complex Hom_A(F_*, F_2) has zero differential and Ext^{s,t} has one basis
element per generator of F_s in degree t.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import gf2
from .steenrod import GradedAlgebra


class ResourceError(RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class WindowError(ValueError):
    pass


@dataclass
class ResolutionStage:
    s: int
    degrees: list[int] = field(default_factory=list)
    # boundary[k] = d(g_{s,k}) as a list of (generator index in F_{s-1}, algebra basis index)
    boundary: list[list[tuple[int, int]]] = field(default_factory=list)
    computed_through: int = -1

    def generators_in_degree(self, t: int) -> list[int]:
        return [k for k, d in enumerate(self.degrees) if d == t]

    def ngens(self) -> int:
        return len(self.degrees)


class _FreeModuleDegree:
    """Basis of F_s in one internal degree: pairs (generator, algebra element)."""

    __slots__ = ("pairs", "index")

    def __init__(self, alg: GradedAlgebra, gen_degrees: list[int], t: int):
        pairs = []
        for g, dg in enumerate(gen_degrees):
            if dg <= t:
                for a in alg.in_degree(t - dg):
                    pairs.append((g, a))
        self.pairs = pairs
        self.index = {p: i for i, p in enumerate(pairs)}


class Resolution:
    def __init__(self, alg: GradedAlgebra, max_stem: int, max_filtration: int, time_budget: float | None = None):
        if max_stem < 0 or max_filtration < 0:
            raise ValueError("window bounds must be nonnegative")
        self.alg = alg
        self.max_stem = max_stem
        self.max_filtration = max_filtration
        self.time_budget = time_budget
        self.stages: list[ResolutionStage] = []
        self._bases: dict[tuple[int, int], _FreeModuleDegree] = {}
        # kernel of d_s in degree t, as vectors over the F_s basis in degree t
        self._kernels: dict[tuple[int, int], list[int]] = {}

    # basis bookkeeping

    def basis(self, s: int, t: int) -> _FreeModuleDegree:
        key = (s, t)
        b = self._bases.get(key)
        if b is None:
            b = _FreeModuleDegree(self.alg, self.stages[s].degrees, t)
            self._bases[key] = b
        return b

    def act(self, a: int, element: list[tuple[int, int]], s_target: int, t: int) -> int:
        """a * element, element a list of (gen, alg index) pairs in F_{s_target}, as a bitset."""
        mult = self.alg.multiply
        index = self.basis(s_target, t).index
        row = 0
        for g, b in element:
            for c in mult(a, b):
                row ^= 1 << index[(g, c)]
        return row

    def max_degree(self, s: int) -> int:
        return self.max_stem + s

    # construction

    def run(self) -> "Resolution":
        start = time.time()
        alg = self.alg
        # stage 0: F_0 = A on one generator in degree 0, d_0 = augmentation
        st0 = ResolutionStage(0, [0], [[]])
        self.stages.append(st0)
        for t in range(0, self.max_degree(self.max_filtration) + 1):
            n = len(self.basis(0, t).pairs)
            # kernel of the augmentation: everything in positive degree
            self._kernels[(0, t)] = [1 << i for i in range(n)] if t > 0 else []
        st0.computed_through = self.max_degree(self.max_filtration)
        for s in range(1, self.max_filtration + 1):
            stage = ResolutionStage(s)
            self.stages.append(stage)
            top = self.max_degree(s)
            keep_kernel = s < self.max_filtration
            # one degree past the top, only the kernel is needed by the next
            # stage; generators born there would not contribute to it
            last = top + 1 if keep_kernel else top
            for t in range(s, last + 1):
                if self.time_budget is not None and time.time() - start > self.time_budget:
                    raise ResourceError(
                        f"time budget exceeded at s={s}, t={t}",
                        partial={"stage": s, "degree": t, "ext": self.ext_dims()},
                    )
                self._step(stage, t, keep_kernel, add=t <= top)
            stage.computed_through = top
            # the kernel of d_{s-1} is no longer needed
            for key in [k for k in self._kernels if k[0] == s - 1]:
                del self._kernels[key]
        return self

    def _step(self, stage: ResolutionStage, t: int, keep_kernel: bool, add: bool = True):
        s = stage.s
        alg = self.alg
        if add:
            self._add_generators(stage, t)
        if keep_kernel:
            # kernel of d_s on the full F_s basis in degree t; the cached basis
            # may predate the generators just added
            self._bases.pop((s, t), None)
            basis_s = self.basis(s, t)
            ncols = len(self.basis(s - 1, t).pairs)
            full_rows = [self.act(a, stage.boundary[g], s - 1, t) for g, a in basis_s.pairs]
            self._kernels[(s, t)] = gf2.kernel(full_rows, ncols)

    def _add_generators(self, stage: ResolutionStage, t: int):
        s = stage.s
        alg = self.alg
        # images of the old generators' A-multiples in F_{s-1} degree t
        target_basis = self.basis(s - 1, t)
        ncols = len(target_basis.pairs)
        rows = []
        for k, dg in enumerate(stage.degrees):
            for a in alg.in_degree(t - dg):
                rows.append(self.act(a, stage.boundary[k], s - 1, t))
        kernel_prev = self._kernels.get((s - 1, t), [])
        img, pivots, _ = gf2.image_and_kernel(rows, ncols) if rows else ([], [], [])
        img = list(img)
        pivots = list(pivots)
        new = []
        for v in kernel_prev:
            r = gf2.reduce(v, img, pivots)
            if r:
                new.append(v)
                # keep the echelon basis reduced as we add to it
                img, pivots = gf2.echelonize(img + [r])
        for v in new:
            stage.degrees.append(t)
            stage.boundary.append([target_basis.pairs[i] for i in gf2.bits(v)])

    # queries

    def ext_dims(self) -> dict[tuple[int, int], int]:
        """{(stem, s): dim} for every nonzero group in the window."""
        out = {}
        for st in self.stages:
            for d in st.degrees:
                stem = d - st.s
                if stem <= self.max_stem:
                    out[(stem, st.s)] = out.get((stem, st.s), 0) + 1
        return out

    def dim(self, stem: int, s: int) -> int:
        return self.ext_dims().get((stem, s), 0)

    def generators(self, stem: int, s: int) -> list[int]:
        if s >= len(self.stages):
            return []
        return self.stages[s].generators_in_degree(stem + s)

    def check_d_squared(self) -> list[str]:
        """d o d = 0 on every generator (exact)."""
        problems = []
        for s in range(2, len(self.stages)):
            st = self.stages[s]
            for k, dg in enumerate(st.degrees):
                total = 0
                for g, a in st.boundary[k]:
                    total ^= self.act(a, self.stages[s - 1].boundary[g], s - 2, dg)
                if total:
                    problems.append(f"d^2 != 0 on generator {k} of F_{s}")
        return problems

    def check_minimal(self) -> list[str]:
        """No unit coefficients in any boundary."""
        problems = []
        for st in self.stages[1:]:
            for k, b in enumerate(st.boundary):
                if any(a == 0 for _, a in b):
                    problems.append(f"unit entry in d(g_{{{st.s},{k}}})")
                if not b:
                    problems.append(f"d(g_{{{st.s},{k}}}) = 0")
        return problems


def minimal_resolution(alg: GradedAlgebra, max_stem: int, max_filtration: int, time_budget: float | None = None) -> Resolution:
    return Resolution(alg, max_stem, max_filtration, time_budget).run()


# products with h_i


def h_index(alg: GradedAlgebra, i: int) -> int:
    name = f"Sq({1 << i})"
    if name not in alg.index:
        raise WindowError(f"h_{i} is not defined over {alg.name}")
    return alg.index[name]


def ext_product(res: Resolution, x: dict[int, int] | list[int], s: int, t: int, i: int) -> list[int]:
    """h_i * x for x in Ext^{s,t}, given as a set of generator indices of F_s in degree t.

    Returns the generator indices of F_{s+1} in degree t + 2^i.  The value of
    h_i x on the dual of g_y is the coefficient of Sq(2^i) g_x in d(g_y);
    Sq(2^i) is dual to the primitive xi_1^(2^i), so this is a cocycle
    representative of the Yoneda product.
    """
    w = 1 << i
    sq = h_index(res.alg, i)
    if s + 1 > res.max_filtration or t + w - (s + 1) > res.max_stem:
        raise WindowError(f"h_{i} * x leaves the computed window")
    xs = set(x)
    out = []
    up = res.stages[s + 1]
    for k in up.generators_in_degree(t + w):
        c = 0
        for g, a in up.boundary[k]:
            if a == sq and g in xs:
                c ^= 1
        if c:
            out.append(k)
    return out


def product_rank(res: Resolution, stem: int, s: int, i: int) -> int:
    """Rank of h_i: Ext^{s, stem+s} -> Ext^{s+1, ...}."""
    t = stem + s
    gens = res.generators(stem, s)
    up = res.stages[s + 1].generators_in_degree(t + (1 << i))
    index = {k: j for j, k in enumerate(up)}
    rows = []
    for g in gens:
        row = 0
        for k in ext_product(res, [g], s, t, i):
            row |= 1 << index[k]
        rows.append(row)
    return gf2.rank(rows)


def _monomial_name(mono: dict[int, int]) -> str:
    return "".join(f"h{i}" + (f"^{e}" if e > 1 else "") for i, e in sorted(mono.items()))


def export_chart(res: Resolution, name: str | None = None):
    """The Ext window as an F_2 chart with h_0, h_1, h_2 products.

    A one-dimensional cell reached from a named h-monomial by some h_i is
    named by the product monomial (h0^2, h1h3, ...); anything else is
    x{stem}_{s}, suffixed by an index when the cell has several classes.
    """
    from .chart import BiDegree, Chart, ProductEntry
    from .groups import PresentedAbGroup

    names: dict[tuple[int, int], str] = {}
    monos: dict[str, dict[int, int]] = {}
    ops = [i for i in range(3) if _has_h(res, i)]
    for s in range(res.max_filtration + 1):
        for stem in range(res.max_stem + 1):
            gens = res.generators(stem, s)
            if s == 0 and stem == 0:
                names[(0, gens[0])] = "1"
                monos["1"] = {}
                continue
            if s == 1 and len(gens) == 1 and stem + 1 in (1, 2, 4, 8, 16, 32) and _has_h(res, (stem + 1).bit_length() - 1):
                i = (stem + 1).bit_length() - 1
                names[(1, gens[0])] = f"h{i}"
                monos[f"h{i}"] = {i: 1}
                continue
            label = None
            if len(gens) == 1:
                for i in ops:
                    w = 1 << i
                    pstem = stem - w + 1
                    if pstem < 0 or s == 0:
                        continue
                    for y in res.generators(pstem, s - 1):
                        yname = names.get((s - 1, y))
                        if yname not in monos:
                            continue
                        if ext_product(res, [y], s - 1, pstem + s - 1, i) == gens:
                            m = dict(monos[yname])
                            m[i] = m.get(i, 0) + 1
                            label = _monomial_name(m)
                            monos[label] = m
                            break
                    if label:
                        break
            for k, g in enumerate(gens):
                if label and label not in names.values():
                    names[(s, g)] = label
                else:
                    names[(s, g)] = f"x{stem}_{s}" + (f"_{k}" if len(gens) > 1 else "")
    cells = {}
    for s in range(res.max_filtration + 1):
        for stem in range(res.max_stem + 1):
            gens = res.generators(stem, s)
            if gens:
                cells[BiDegree(stem, s)] = PresentedAbGroup([(names[(s, g)], 2) for g in gens])
    prods = []
    for s in range(res.max_filtration):
        for stem in range(res.max_stem + 1):
            for g in res.generators(stem, s):
                for i in ops:
                    w = 1 << i
                    if stem + w - 1 > res.max_stem:
                        continue
                    out = ext_product(res, [g], s, stem + s, i)
                    prods.append(ProductEntry(f"h{i}", names[(s, g)], {names[(s + 1, k)]: 1 for k in out}))
    return Chart(
        name or f"Ext_{res.alg.name}",
        (0, res.max_stem, 0, res.max_filtration),
        cells,
        [],
        prods,
        max_page=None,
        parity=None,
        provenance={"cells": "minimal resolution", "products": "Yoneda products with h_i from the resolution"},
    )


def _has_h(res: Resolution, i: int) -> bool:
    try:
        h_index(res.alg, i)
    except WindowError:
        return False
    return True
