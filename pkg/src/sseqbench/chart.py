"""Bigraded spectral sequence charts and the tau-torsion calculus on them.

A chart is a finite window of (stem, filtration) cells.  Each cell is a
PresentedAbGroup with named generators (the E_2, or first recorded page,
classes).  Differentials are homomorphisms between cells given on those
generators.  Pages are computed as subquotients Z_r / B_r of the first page,
with Z_r and B_r stored as lattices in Z^n that contain the cell's relations.

Under the synthetic reading, a class hit by a d_r lifts to a tau^(r-1)-torsion
class, so ``min_kill_page(x) > k + 1`` certifies that tau^k times any lift of
x is nonzero.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import snf
from .groups import GroupError, LatticeMap, PresentedAbGroup, parse_key, simplify, subquotient


class ChartError(ValueError):
    """Structural problem in a chart (bad bidegree arithmetic, unknown names)."""


class ConsistencyError(ChartError):
    """Differentials that do not fit together on the computed pages."""


class WindowError(ChartError):
    pass


INF = math.inf


@dataclass(frozen=True, order=True)
class BiDegree:
    stem: int
    filtration: int

    def shift(self, dstem: int, dfilt: int) -> "BiDegree":
        return BiDegree(self.stem + dstem, self.filtration + dfilt)

    def __add__(self, other: "BiDegree") -> "BiDegree":
        return BiDegree(self.stem + other.stem, self.filtration + other.filtration)

    def __str__(self) -> str:
        return f"({self.stem},{self.filtration})"

    def as_list(self) -> list[int]:
        return [self.stem, self.filtration]

    @classmethod
    def parse(cls, text) -> "BiDegree":
        if isinstance(text, BiDegree):
            return text
        if isinstance(text, (list, tuple)):
            return cls(int(text[0]), int(text[1]))
        a, b = str(text).strip().strip("()").split(",")
        return cls(int(a), int(b))

    @property
    def total(self) -> int:
        return self.stem + self.filtration


def d_target(source: BiDegree, r: int) -> BiDegree:
    return BiDegree(source.stem - 1, source.filtration + r)


@dataclass
class Differential:
    page: int
    source: BiDegree
    target: BiDegree
    images: dict[str, dict[str, int]]
    provenance: str = ""

    def to_dict(self) -> dict:
        out = {
            "page": self.page,
            "source": self.source.as_list(),
            "target": self.target.as_list(),
            "map": {k: dict(v) for k, v in self.images.items()},
        }
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    @classmethod
    def from_dict(cls, d) -> "Differential":
        return cls(
            int(d["page"]),
            BiDegree.parse(d["source"]),
            BiDegree.parse(d["target"]),
            {k: {n: int(c) for n, c in v.items()} for k, v in d.get("map", {}).items()},
            d.get("provenance", ""),
        )


@dataclass
class ProductEntry:
    """left * right = result.

    ``kind`` is "product" for products visible on the chart and "extension"
    for hidden extensions; ``tau`` is the tau power absorbed by the jump in
    filtration (result filtration = left + right + tau).  ``left`` may be an
    integer written as a string ("4") for additive extensions.
    """

    left: str
    right: str
    result: dict[str, int]
    kind: str = "product"
    tau: int = 0
    provenance: str = ""

    def to_dict(self) -> dict:
        out = {"left": self.left, "right": self.right, "result": dict(self.result)}
        if self.kind != "product":
            out["kind"] = self.kind
        if self.tau:
            out["tau"] = self.tau
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    @classmethod
    def from_dict(cls, d) -> "ProductEntry":
        return cls(
            str(d["left"]),
            str(d["right"]),
            {k: int(v) for k, v in d.get("result", {}).items()},
            d.get("kind", "product"),
            int(d.get("tau", 0)),
            d.get("provenance", ""),
        )


UNDECLARED = "undeclared"


@dataclass
class ChartElement:
    bidegree: BiDegree
    terms: dict[str, int]
    tau: int = 0

    def is_zero_in(self, chart: "Chart") -> bool:
        cell = chart.cell(self.bidegree)
        return cell.is_trivial_element(cell.vector(self.terms))


def _is_scalar(name: str) -> bool:
    return name.lstrip("-").isdigit()


@dataclass
class Chart:
    name: str
    window: tuple[int, int, int, int]
    cells: dict[BiDegree, PresentedAbGroup]
    differentials: list[Differential] = field(default_factory=list)
    products: list[ProductEntry] = field(default_factory=list)
    max_page: int | None = None
    parity: str | None = None
    connective: bool = True
    first_page: int = 2
    provenance: dict[str, str] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self._where: dict[str, BiDegree] = {}
        for bd, cell in self.cells.items():
            for name in cell.names:
                if name in self._where:
                    raise ChartError(f"generator {name!r} appears at {self._where[name]} and {bd}")
                self._where[name] = bd
        self._pages = None

    # lookup

    def cell(self, bd) -> PresentedAbGroup:
        bd = BiDegree.parse(bd)
        return self.cells.get(bd, PresentedAbGroup.zero())

    def has_cell(self, bd) -> bool:
        return BiDegree.parse(bd) in self.cells

    def where(self, name: str) -> BiDegree:
        if _is_scalar(name):
            return BiDegree(0, 0)
        try:
            return self._where[name]
        except KeyError:
            raise ChartError(f"chart {self.name}: no generator named {name!r}") from None

    def has_generator(self, name: str) -> bool:
        return name in self._where

    def generator_names(self) -> list[str]:
        return sorted(self._where, key=lambda n: (self._where[n], n))

    def in_window(self, bd: BiDegree) -> bool:
        s0, s1, f0, f1 = self.window
        return s0 <= bd.stem <= s1 and f0 <= bd.filtration <= f1

    def element(self, terms: dict[str, int] | str) -> ChartElement:
        if isinstance(terms, str):
            terms = {terms: 1}
        bds = {self.where(n) for n in terms}
        if len(bds) != 1:
            raise ChartError(f"terms {terms} are not homogeneous")
        return ChartElement(bds.pop(), dict(terms))

    def effective_max_page(self) -> int:
        if self.max_page is not None:
            return self.max_page
        return max([d.page for d in self.differentials], default=self.first_page)

    def hom(self, d: Differential) -> LatticeMap:
        return LatticeMap.from_terms(self.cell(d.source), self.cell(d.target), d.images)

    # serialization

    def to_dict(self) -> dict:
        s0, s1, f0, f1 = self.window
        cells = []
        for bd in sorted(self.cells):
            entry = {"at": bd.as_list(), **self.cells[bd].to_dict()}
            cells.append(entry)
        out = {
            "name": self.name,
            "window": {"stems": [s0, s1], "filtrations": [f0, f1]},
            "cells": cells,
            "differentials": [d.to_dict() for d in self.differentials],
            "products": [p.to_dict() for p in self.products],
            "max_page": self.max_page,
            "parity": self.parity,
        }
        if not self.connective:
            out["connective"] = False
        if self.first_page != 2:
            out["first_page"] = self.first_page
        if self.provenance:
            out["provenance"] = dict(sorted(self.provenance.items()))
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Chart":
        w = data["window"]
        window = (int(w["stems"][0]), int(w["stems"][1]), int(w["filtrations"][0]), int(w["filtrations"][1]))
        cells = {}
        provenance = dict(data.get("provenance", {}))
        for c in data.get("cells", []):
            bd = BiDegree.parse(c["at"])
            if bd in cells:
                raise ChartError(f"cell {bd} listed twice")
            cells[bd] = PresentedAbGroup.from_dict(c)
            if "provenance" in c:
                for name in cells[bd].names:
                    provenance.setdefault(name, c["provenance"])
        return cls(
            data.get("name", "chart"),
            window,
            cells,
            [Differential.from_dict(d) for d in data.get("differentials", [])],
            [ProductEntry.from_dict(p) for p in data.get("products", [])],
            data.get("max_page"),
            data.get("parity"),
            bool(data.get("connective", True)),
            int(data.get("first_page", 2)),
            provenance,
            data.get("meta", {}),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Chart":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def without_differentials(self, predicate) -> "Chart":
        """Copy with the differentials matching ``predicate`` removed."""
        data = self.to_dict()
        data["differentials"] = [d.to_dict() for d in self.differentials if not predicate(d)]
        return Chart.from_dict(data)

    # pages

    def pages(self) -> "PageEngine":
        if self._pages is None:
            self._pages = PageEngine(self)
        return self._pages


class PageEngine:
    """Z_r and B_r lattices for every cell and every page up to max_page + 1."""

    def __init__(self, chart: Chart):
        self.chart = chart
        self.first = chart.first_page
        self.last = chart.effective_max_page() + 1
        self.Z: dict[int, dict[BiDegree, list[list[int]]]] = {}
        self.B: dict[int, dict[BiDegree, list[list[int]]]] = {}
        self.errors: list[str] = []
        self._run()

    def _run(self):
        chart = self.chart
        z = {bd: snf.identity(c.ngens) for bd, c in chart.cells.items()}
        b = {bd: snf.lattice_basis(c.relation_lattice(), c.ngens) for bd, c in chart.cells.items()}
        by_page: dict[int, list[Differential]] = {}
        for d in chart.differentials:
            by_page.setdefault(d.page, []).append(d)
        for r in range(self.first, self.last + 1):
            self.Z[r] = z
            self.B[r] = b
            if r == self.last:
                break
            new_z = dict(z)
            new_b = dict(b)
            homs = {}
            for d in sorted(by_page.get(r, []), key=lambda d: (d.source, d.target)):
                if d.source not in chart.cells or d.target not in chart.cells:
                    self.errors.append(f"d_{r} {d.source}->{d.target}: missing cell")
                    continue
                try:
                    f = chart.hom(d)
                except GroupError as exc:
                    self.errors.append(f"d_{r} {d.source}->{d.target}: {exc}")
                    continue
                n_t = f.target.ngens
                try:
                    images = [f.apply(v) for v in z[d.source]]
                except GroupError:
                    self.errors.append(f"d_{r} {d.source}->{d.target}: not defined on the E_{r} cycles")
                    continue
                homs[d.source] = (d, f)
                for v, img in zip(z[d.source], images):
                    if not snf.in_lattice(img, z[d.target]):
                        self.errors.append(
                            f"d_{r} {d.source}->{d.target}: image of {f.source.format(v)} "
                            f"does not survive to E_{r}"
                        )
                new_z[d.source] = _preimage(images, z[d.source], b[d.target], f.source.ngens)
                new_b[d.target] = snf.lattice_basis(list(new_b[d.target]) + images, n_t)
            # d_r o d_r = 0 on E_r
            for src, (d1, f1) in homs.items():
                nxt = homs.get(d1.target)
                if nxt is None:
                    continue
                d2, f2 = nxt
                for v in z[src]:
                    w = f2.apply(f1.apply(v))
                    if not snf.in_lattice(w, b[d2.target]):
                        self.errors.append(f"d_{r} o d_{r} is nonzero starting at {src}")
                        break
            z, b = new_z, new_b

    def page_index(self, r: int) -> int:
        if r < self.first:
            raise ChartError(f"page {r} precedes the first page {self.first}")
        return min(r, self.last)

    def cycles(self, r: int, bd: BiDegree):
        return self.Z[self.page_index(r)].get(bd, [])

    def boundaries(self, r: int, bd: BiDegree):
        return self.B[self.page_index(r)].get(bd, [])

    def group(self, r: int, bd: BiDegree) -> tuple[PresentedAbGroup, list[list[int]]]:
        cell = self.chart.cell(bd)
        grp, basis = subquotient(self.cycles(r, bd), self.boundaries(r, bd), cell.names)
        return simplify(grp, basis, cell.names)


def _preimage(imgs, zbasis, bbasis, n):
    """{z in span(zbasis) : f(z) in span(bbasis)} given imgs = f(zbasis), as a lattice basis."""
    if not zbasis:
        return []
    m = len(imgs[0])
    if m == 0:
        return list(zbasis)
    # columns: images of z basis, then minus the b basis
    block = [[img[i] for img in imgs] + [-bv[i] for bv in bbasis] for i in range(m)]
    ker = snf.kernel_basis(block, len(imgs) + len(bbasis))
    out = []
    for k in ker:
        c = k[: len(zbasis)]
        out.append([sum(ci * zv[j] for ci, zv in zip(c, zbasis)) for j in range(n)])
    return snf.lattice_basis(out, n)


# operations


def turn_page(chart: Chart, r: int) -> Chart:
    """The E_r page: subquotients of the earlier differentials, later ones transported."""
    if r < chart.first_page:
        raise ChartError(f"cannot turn back to page {r} from page {chart.first_page}")
    limit = chart.effective_max_page() + 1
    if r > limit:
        raise ChartError(f"page {r} is beyond E_{limit} = E_infinity of the window")
    eng = chart.pages()
    if eng.errors:
        raise ConsistencyError(eng.errors[0])
    for d in chart.differentials:
        if d_target(d.source, d.page) != d.target:
            raise ChartError(f"d_{d.page} from {d.source} cannot land in {d.target}")
    cells = {}
    bases = {}
    for bd in chart.cells:
        grp, basis = eng.group(r, bd)
        if grp.ngens:
            cells[bd] = grp
            bases[bd] = basis
    diffs = []
    for d in chart.differentials:
        if d.page < r or d.source not in cells:
            continue
        f = chart.hom(d)
        images = {}
        for name, v in zip(cells[d.source].names, bases[d.source]):
            img = f.apply(v)
            coords = _coordinates(img, eng, r, d.target, bases.get(d.target, []))
            if coords is None:
                raise ConsistencyError(f"d_{d.page} of {name} does not survive to E_{r}")
            terms = {n: c for n, c in zip(cells[d.target].names, coords) if c} if d.target in cells else {}
            if terms:
                images[name] = terms
        diffs.append(Differential(d.page, d.source, d.target, images, d.provenance))
    products = []
    for p in chart.products:
        names_ok = all(_is_scalar(x) or any(x in c.names for c in cells.values()) for x in (p.left, p.right))
        if not names_ok:
            continue
        try:
            bd = chart.element(p.result).bidegree if p.result else None
        except ChartError:
            continue
        if bd is None:
            products.append(p)
            continue
        v = chart.cell(bd).vector(p.result)
        coords = _coordinates(v, eng, r, bd, bases.get(bd, []))
        if coords is None:
            continue
        terms = {n: c for n, c in zip(cells[bd].names, coords) if c} if bd in cells else {}
        products.append(ProductEntry(p.left, p.right, terms, p.kind, p.tau, p.provenance))
    out = Chart(
        chart.name,
        chart.window,
        cells,
        diffs,
        products,
        chart.max_page,
        chart.parity,
        chart.connective,
        r,
        {k: v for k, v in chart.provenance.items()},
        dict(chart.meta),
    )
    return out


def _coordinates(v, eng: PageEngine, r: int, bd: BiDegree, basis):
    """Coordinates of v in the kept E_r basis at bd, or None if v is not an E_r cycle."""
    z = eng.cycles(r, bd)
    if not snf.in_lattice(v, z):
        return None
    b = eng.boundaries(r, bd)
    if snf.in_lattice(v, b):
        return [0] * len(basis)
    if not basis:
        return []
    cols = snf.transpose(list(basis) + list(b))
    sol = snf.solve(cols, v)
    if sol is None:
        return None
    return sol[: len(basis)]


@dataclass
class SyntheticClass:
    home: Chart
    bidegree: BiDegree
    element: list[int]
    kill_page: float | None = None
    support_page: float | None = None

    @classmethod
    def named(cls, chart: Chart, terms) -> "SyntheticClass":
        e = chart.element(terms)
        return cls(chart, e.bidegree, chart.cell(e.bidegree).vector(e.terms))

    def check(self) -> list[str]:
        """Stored kill/support pages must match recomputation."""
        out = []
        if self.kill_page is not None and self.kill_page != min_kill_page(self):
            out.append(f"stored kill page {self.kill_page} != {min_kill_page(self)}")
        if self.support_page is not None and self.support_page != support_page(self):
            out.append(f"stored support page {self.support_page} != {support_page(self)}")
        return out

    def label(self) -> str:
        return f"{self.home.cell(self.bidegree).format(self.element)}@{self.bidegree.stem},{self.bidegree.filtration}"


def min_kill_page(x: SyntheticClass):
    """Smallest r such that x becomes a d_r-boundary; INF if it never does."""
    eng = x.home.pages()
    if eng.errors:
        raise ConsistencyError(eng.errors[0])
    bd = x.bidegree
    if snf.in_lattice(list(x.element), eng.boundaries(eng.first, bd)):
        raise ChartError(f"{x.label()} is zero on the first page")
    for r in range(eng.first, eng.last):
        if snf.in_lattice(list(x.element), eng.boundaries(r + 1, bd)):
            return r
    return INF


def support_page(x: SyntheticClass):
    """Smallest r such that x survives to E_r and supports a nonzero d_r; INF if none."""
    eng = x.home.pages()
    bd = x.bidegree
    for r in range(eng.first, eng.last):
        if not snf.in_lattice(list(x.element), eng.cycles(r + 1, bd)):
            return r
    return INF


def tau_power_nonzero(x: SyntheticClass, k: int) -> bool:
    """No differential of page <= k + 1 hits x, so tau^k times any lift is nonzero."""
    return min_kill_page(x) > k + 1


def is_detected_permanent_cycle(x: SyntheticClass) -> bool:
    return min_kill_page(x) == INF and support_page(x) == INF


# products


def _lookup_product(chart: Chart, x: str, y: str, kinds=("product", "extension")):
    for p in chart.products:
        if p.kind not in kinds:
            continue
        if (p.left, p.right) == (x, y):
            return p, 1
        if (p.left, p.right) == (y, x):
            # graded commutativity with the Koszul sign in the stem
            sx = 0 if _is_scalar(x) else chart.where(x).stem
            sy = 0 if _is_scalar(y) else chart.where(y).stem
            return p, (-1) ** (sx * sy)
    return None, 0


def multiply(x: str, y: str, chart: Chart, kinds=("product",)):
    """x * y from the product table, or UNDECLARED.  Never silently zero."""
    bx, by = chart.where(x), chart.where(y)
    p, sign = _lookup_product(chart, x, y, kinds)
    if p is None:
        return UNDECLARED
    bd = bx + by + BiDegree(0, p.tau)
    if not chart.in_window(bd):
        raise WindowError(f"{x}*{y} lands at {bd}, outside the window of {chart.name}")
    return ChartElement(bd, {k: sign * v for k, v in p.result.items()}, p.tau)


def extension(x: str, y: str, chart: Chart):
    return multiply(x, y, chart, kinds=("extension",))


def differential_value(chart: Chart, r: int, name: str):
    """d_r(name) as terms, or UNDECLARED if no d_r leaves that cell."""
    bd = chart.where(name)
    found = None
    for d in chart.differentials:
        if d.page == r and d.source == bd:
            found = d
            if name in d.images:
                return d.target, dict(d.images[name])
    if found is not None:
        if any(parse_key(k)[1] == name for k in found.images):
            # only a multiple of name has a declared image
            return UNDECLARED
        return found.target, {}
    return UNDECLARED


# validation


@dataclass
class Report:
    subject: str
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> str | None:
        return self.violations[0] if self.violations else None

    def text(self) -> str:
        head = f"{self.subject}: {'PASS' if self.ok else 'FAIL'}"
        lines = [head] + [f"  violation: {v}" for v in self.violations] + [f"  note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def validate(chart: Chart) -> Report:
    rep = Report(f"chart {chart.name}")
    v = rep.violations
    for bd, cell in sorted(chart.cells.items()):
        if not chart.in_window(bd):
            v.append(f"cell {bd} lies outside the window {chart.window}")
        if chart.connective and bd.filtration < 0:
            v.append(f"cell {bd} has negative filtration")
        if chart.parity == "even" and bd.total % 2 and not cell.is_zero():
            v.append(f"parity: nonzero cell at {bd} has odd stem + filtration")
    maxp = chart.max_page
    for d in chart.differentials:
        tag = f"d_{d.page} {d.source}->{d.target}"
        if d.page < 2:
            v.append(f"{tag}: page must be at least 2")
        if d_target(d.source, d.page) != d.target:
            v.append(f"{tag}: target should be {d_target(d.source, d.page)}")
        if maxp is not None and d.page > maxp:
            v.append(f"{tag}: page exceeds the declared max page {maxp}")
        if chart.parity == "even" and d.page % 2 == 0:
            v.append(f"parity: {tag} has even page in an even chart")
        for bd in (d.source, d.target):
            if bd not in chart.cells:
                v.append(f"{tag}: no cell at {bd}")
        if d.source in chart.cells and d.target in chart.cells:
            try:
                f = chart.hom(d)
            except GroupError as exc:
                v.append(f"{tag}: {exc}")
                continue
            if not f.well_defined():
                v.append(f"{tag}: not a homomorphism of the presented groups")
    for p in chart.products:
        try:
            bl, br = chart.where(p.left), chart.where(p.right)
        except ChartError as exc:
            v.append(f"product {p.left}*{p.right}: {exc}")
            continue
        if not p.result:
            continue
        try:
            e = chart.element(p.result)
        except ChartError as exc:
            v.append(f"product {p.left}*{p.right}: {exc}")
            continue
        want = bl + br + BiDegree(0, p.tau)
        if e.bidegree != want:
            v.append(f"product {p.left}*{p.right}: result at {e.bidegree}, expected {want}")
    if not v:
        eng = chart.pages()
        v.extend(eng.errors)
        if not eng.errors:
            v.extend(leibniz_check(chart))
    return rep


def leibniz_check(chart: Chart) -> list[str]:
    """d_r(xy) = d_r(x) y +- x d_r(y) wherever every ingredient is declared."""
    out = []
    pages = sorted({d.page for d in chart.differentials})
    for p in chart.products:
        if p.kind != "product" or _is_scalar(p.left) or _is_scalar(p.right) or not p.result:
            continue
        for r in pages:
            dx = differential_value(chart, r, p.left)
            dy = differential_value(chart, r, p.right)
            dz_terms = [differential_value(chart, r, n) for n in p.result]
            if UNDECLARED in (dx, dy) or UNDECLARED in dz_terms:
                continue
            lhs: dict[str, int] = {}
            for (tb, terms), (n, c) in zip(dz_terms, p.result.items()):
                for k, val in terms.items():
                    lhs[k] = lhs.get(k, 0) + c * val
            a = _times(chart, dx[1], p.right, left=True)
            b = _times(chart, dy[1], p.left, left=False)
            if a is None or b is None:
                continue
            tgt = d_target(chart.where(p.left) + chart.where(p.right), r)
            if tgt not in chart.cells:
                continue
            cell = chart.cell(tgt)
            try:
                lv = cell.vector(lhs)
                av = cell.vector(a)
                bv = cell.vector(b)
            except GroupError:
                continue
            plus = [x - y - z for x, y, z in zip(lv, av, bv)]
            minus = [x - y + z for x, y, z in zip(lv, av, bv)]
            if not (cell.is_trivial_element(plus) or cell.is_trivial_element(minus)):
                out.append(f"Leibniz fails for d_{r}({p.left}*{p.right})")
    return out


def _times(chart: Chart, terms: dict[str, int], other: str, left: bool):
    acc: dict[str, int] = {}
    for n, c in terms.items():
        res = multiply(n, other, chart) if left else multiply(other, n, chart)
        if res == UNDECLARED:
            return None
        for k, val in res.terms.items():
            acc[k] = acc.get(k, 0) + c * val
    return acc


def canonical_cells(chart: Chart) -> dict[BiDegree, tuple[int, tuple[int, ...]]]:
    return {bd: c.invariants() for bd, c in sorted(chart.cells.items()) if not c.is_zero()}
