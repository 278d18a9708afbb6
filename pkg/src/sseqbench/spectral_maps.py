"""Maps between charts, fibre charts, and the deleted-differential test.

A ChartMap is a family of homomorphisms, one per bidegree, between the cells
of two charts.  The fibre of f: X -> Y has, in bidegree (s, f0), the kernel
of f at (s, f0) extended by the cokernel of f at (s + 1, f0 - 1).

``delete_differential_check`` decides the coset condition: if b = d_r(a0)
and f(a0) is not in f(K) for K the d_r-cycles of the source cell, then no
lift of b to the fibre is tau^(r-1)-torsion.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import snf
from .chart import INF, BiDegree, Chart, ChartError, Differential, SyntheticClass, min_kill_page
from .groups import GroupError, Hom, PresentedAbGroup, kernel_lattice, simplify, subquotient


class MapError(ValueError):
    pass


class IncompleteFixture(MapError):
    """The fixture lacks a cell or map component needed by a check."""


class Inapplicable(MapError):
    """The check's hypotheses fail (for example f(target) != 0)."""


class PreconditionError(MapError):
    pass


# maps


@dataclass
class MapComponent:
    at: BiDegree
    images: dict[str, dict[str, int]]
    tau_level: int | None = None
    provenance: str = ""
    zero: bool = False

    def to_dict(self) -> dict:
        out = {"at": self.at.as_list()}
        if self.zero:
            out["zero"] = True
        else:
            out["map"] = {k: dict(v) for k, v in self.images.items()}
        if self.tau_level is not None:
            out["tau_level"] = self.tau_level
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    @classmethod
    def from_dict(cls, d) -> "MapComponent":
        return cls(
            BiDegree.parse(d["at"]),
            {k: {n: int(c) for n, c in v.items()} for k, v in d.get("map", {}).items()},
            d.get("tau_level"),
            d.get("provenance", ""),
            bool(d.get("zero", False)),
        )


@dataclass
class ChartMap:
    name: str
    source: Chart
    target: Chart
    components: dict[BiDegree, MapComponent] = field(default_factory=dict)
    compat: dict[str, bool] = field(default_factory=dict)
    axioms: dict = field(default_factory=dict)
    provenance: str = ""

    def component(self, bd) -> Hom:
        bd = BiDegree.parse(bd)
        src, tgt = self.source.cell(bd), self.target.cell(bd)
        comp = self.components.get(bd)
        if comp is None:
            if src.ngens == 0 or src.is_zero():
                return Hom(src, tgt, [[0] * src.ngens for _ in range(tgt.ngens)])
            raise IncompleteFixture(f"map {self.name} has no component at {bd}")
        if comp.zero:
            return Hom(src, tgt, [[0] * src.ngens for _ in range(tgt.ngens)])
        try:
            return Hom.from_terms(src, tgt, comp.images)
        except GroupError as exc:
            raise MapError(f"map {self.name} at {bd}: {exc}") from None

    def tau_level(self, bd) -> int | None:
        comp = self.components.get(BiDegree.parse(bd))
        return None if comp is None else comp.tau_level

    def apply(self, bd, v) -> list[int]:
        return self.component(bd).apply(list(v))

    def check(self) -> list[str]:
        """Component well-definedness; commutation with differentials if declared."""
        out = []
        for bd, comp in sorted(self.components.items()):
            if not comp.zero:
                for n in comp.images:
                    if not self.source.cell(bd).has(n):
                        out.append(f"{bd}: {n!r} is not a source generator there")
                for terms in comp.images.values():
                    for n in terms:
                        if not self.target.cell(bd).has(n):
                            out.append(f"{bd}: {n!r} is not a target generator there")
            if out:
                continue
            h = self.component(bd)
            if not h.well_defined():
                out.append(f"{bd}: component does not respect the relations")
        if not out and self.compat.get("differentials"):
            out.extend(self._commutation())
        return out

    def _commutation(self) -> list[str]:
        out = []
        tdiffs = {(d.page, d.source): d for d in self.target.differentials}
        for d in self.source.differentials:
            try:
                f0 = self.component(d.source)
                f1 = self.component(d.target)
            except IncompleteFixture:
                continue
            dx = self.source.hom(d)
            e = tdiffs.get((d.page, d.source))
            dy = self.target.hom(e) if e else None
            for v in dx.keys:
                try:
                    lhs = f1.apply(dx.apply(v))
                    fv = f0.apply(v)
                    rhs = dy.apply(fv) if dy else [0] * len(lhs)
                except GroupError:
                    continue
                if not self.target.cell(d.target).equal(lhs, rhs):
                    out.append(f"f does not commute with d_{d.page} at {d.source}")
                    break
        return out

    def incomplete_cells(self) -> list[BiDegree]:
        out = []
        for bd, cell in sorted(self.source.cells.items()):
            if bd in self.components or cell.is_zero():
                continue
            out.append(bd)
        return out

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "components": [c.to_dict() for _, c in sorted(self.components.items())],
        }
        if self.compat:
            out["compat"] = dict(self.compat)
        if self.axioms:
            out["axioms"] = self.axioms
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    @classmethod
    def from_dict(cls, data, source: Chart, target: Chart) -> "ChartMap":
        comps = {}
        for c in data.get("components", []):
            m = MapComponent.from_dict(c)
            if m.at in comps:
                raise MapError(f"component at {m.at} listed twice")
            comps[m.at] = m
        return cls(
            data.get("name", "map"),
            source,
            target,
            comps,
            dict(data.get("compat", {})),
            dict(data.get("axioms", {})),
            data.get("provenance", ""),
        )

    @classmethod
    def load(cls, path) -> "ChartMap":
        path = Path(path)
        data = json.loads(path.read_text(encoding="utf-8"))
        src = Chart.load(path.parent / data["source"])
        tgt = Chart.load(path.parent / data["target"])
        return cls.from_dict(data, src, tgt)

    def save(self, path, source_file: str, target_file: str) -> None:
        data = {"source": source_file, "target": target_file, **self.to_dict()}
        Path(path).write_text(json.dumps(data, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")


def scalar_map(name: str, chart: Chart, scalars, provenance: str = "") -> ChartMap:
    """Endomorphism multiplying each generator by scalars(bidegree, generator name)."""
    comps = {}
    for bd, cell in chart.cells.items():
        images = {}
        for n in cell.names:
            c = scalars(bd, n)
            if c:
                images[n] = {n: c}
        comps[bd] = MapComponent(bd, images)
    return ChartMap(name, chart, chart, comps, {"differentials": True}, {"connective": chart.connective}, provenance)


def identity_map(chart: Chart) -> ChartMap:
    return scalar_map("id", chart, lambda bd, n: 1)


def zero_map(chart: Chart) -> ChartMap:
    return scalar_map("0", chart, lambda bd, n: 0)


def ko_psi_minus_one(chart: Chart, N: int = 3) -> ChartMap:
    from .ko import psi_scalar

    def scal(bd, name):
        j = bd.filtration
        k = (bd.stem - j) // 4
        return psi_scalar(N, k, j) - 1

    m = scalar_map(f"psi{N}-1", chart, scal, "psi^N(u^2k) = N^2k u^2k, psi^N(eta) = eta")
    m.axioms = {"connective": True}
    return m


# psi^N on the zero line


def psiN_zero_line(chart: Chart, N: int) -> ChartMap:
    """psi^N on filtration 0, acting by N^(s/2) in stem s.

    The returned map carries ``kernels``: stem -> ker(psi^N - 1), and
    ``violations`` listing stems s != 0 with nonzero kernel.
    """
    comps = {}
    kernels = {}
    violations = []
    for bd, cell in sorted(chart.cells.items()):
        if bd.filtration != 0 or cell.is_zero():
            continue
        free, torsion = cell.invariants()
        if torsion:
            raise PreconditionError(f"torsion in filtration 0 at {bd}")
        if bd.stem % 2:
            raise PreconditionError(f"nonzero filtration-0 cell in odd stem {bd.stem}")
        w = N ** (bd.stem // 2)
        comps[bd] = MapComponent(bd, {n: {n: w} for n in cell.names}, provenance=f"psi^{N} = {N}^(s/2)")
        minus = Hom.from_terms(cell, cell, {n: {n: w - 1} for n in cell.names})
        ker, _ = subquotient(kernel_lattice(minus), cell.relation_lattice(), cell.names)
        kernels[bd.stem] = ker
        if bd.stem != 0 and not ker.is_zero():
            violations.append(f"ker(psi^{N} - 1) is nonzero in stem {bd.stem}")
    m = ChartMap(f"psi{N}|zero line", chart, chart, comps, provenance=f"psi^{N} on the zero line")
    m.kernels = kernels
    m.violations = violations
    return m


# fibre charts


@dataclass
class FiberCell:
    at: BiDegree
    lift: PresentedAbGroup
    boundary: PresentedAbGroup
    group: PresentedAbGroup
    ambiguous: bool = False
    resolution: str = ""


@dataclass
class FiberChart:
    chart: Chart
    ledger: dict[BiDegree, FiberCell]
    undetermined: list[BiDegree]
    notes: list[str] = field(default_factory=list)

    def lift_names(self) -> list[str]:
        return [n for c in self.ledger.values() for n in c.lift.names]

    def boundary_names(self) -> list[str]:
        return [n for c in self.ledger.values() for n in c.boundary.names]

    def text(self) -> str:
        lines = [f"fibre chart {self.chart.name}"]
        for bd, c in sorted(self.ledger.items()):
            tag = " ambiguous" if c.ambiguous else ""
            if c.resolution:
                tag = f" resolved: {c.resolution}"
            lines.append(
                f"{bd} {c.group.describe()}  lift {c.lift.describe()} boundary {c.boundary.describe()}{tag}"
            )
        for bd in self.undetermined:
            lines.append(f"{bd} undetermined: no map component")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def _two_part(n: int) -> int:
    if n == 0:
        return 0
    out = 1
    while n % 2 == 0:
        n //= 2
        out *= 2
    return out


def _two_local(group: PresentedAbGroup) -> PresentedAbGroup:
    """Drop odd torsion, keeping a diagonal presentation with the original names."""
    if group.relations:
        free, torsion = group.invariants()
        gens = [(f"Z/{d}#{k}", _two_part(d)) for k, d in enumerate(torsion)]
        gens += [(f"Z#{k}", 0) for k in range(free)]
        return PresentedAbGroup([(n, o) for n, o in gens if o != 1])
    return PresentedAbGroup([(n, _two_part(o)) for n, o in group.generators if _two_part(o) != 1])


def _kernel_part(f: Hom):
    cell = f.source
    if cell.ngens == 0:
        return PresentedAbGroup.zero(), []
    grp, basis = subquotient(kernel_lattice(f), cell.relation_lattice(), cell.names)
    return simplify(grp, basis, cell.names)


def _coker_part(f: Hom, prefix="del"):
    cell = f.target
    if cell.ngens == 0:
        return PresentedAbGroup.zero()
    rels = [list(r) for r in cell.relations] + [img for img in f.images() if any(img)]
    names = [f"{prefix}({n})" for n in cell.names]
    grp = PresentedAbGroup([(nm, o) for nm, (_, o) in zip(names, cell.generators)], rels)
    grp, _ = simplify(grp, snf.identity(cell.ngens), names)
    return grp


def _direct_sum(a: PresentedAbGroup, b: PresentedAbGroup) -> PresentedAbGroup:
    n, m = a.ngens, b.ngens
    rels = [list(r) + [0] * m for r in a.relations] + [[0] * n + list(r) for r in b.relations]
    return PresentedAbGroup(list(a.generators) + list(b.generators), rels)


def build_fiber_chart(f: ChartMap, window=None, two_local: bool = False, resolutions=None) -> FiberChart:
    """Fibre of f cell by cell; lift classes from ker f, boundary classes from coker f shifted by (-1, +1).

    When both parts are nonzero the cell is only known up to extension; it is
    reported as their direct sum and flagged ambiguous unless ``resolutions``
    supplies {bidegree: (group, reason)}.
    """
    X, Y = f.source, f.target
    if X.window != Y.window or X.effective_max_page() != Y.effective_max_page():
        if window is None:
            raise ChartError("source and target charts do not share window and max page; pass a window")
    if window is None:
        window = X.window
    s0, s1, f0, f1 = window
    resolutions = {BiDegree.parse(k): v for k, v in (resolutions or {}).items()}
    ledger = {}
    undetermined = []
    kbases = {}
    cells = {}
    bds = set(X.cells) | {bd.shift(-1, 1) for bd in Y.cells}
    for bd in sorted(bds):
        if not (s0 <= bd.stem <= s1 and f0 <= bd.filtration <= f1):
            continue
        up = bd.shift(1, -1)
        try:
            ker, kb = _kernel_part(f.component(bd))
            cok = _coker_part(f.component(up))
        except IncompleteFixture:
            undetermined.append(bd)
            continue
        if two_local:
            cok = _two_local(cok)
            if not ker.relations:
                keep = [i for i, (_, o) in enumerate(ker.generators) if _two_part(o) != 1]
                ker = PresentedAbGroup([(ker.generators[i][0], _two_part(ker.generators[i][1])) for i in keep])
                kb = [kb[i] for i in keep]
        if ker.is_zero() and cok.is_zero():
            continue
        amb = not ker.is_zero() and not cok.is_zero()
        res = ""
        group = _direct_sum(ker, cok)
        if amb and bd in resolutions:
            g, res = resolutions[bd]
            if not isinstance(g, PresentedAbGroup):
                g = PresentedAbGroup.from_dict(g)
            group = g
            amb = False
        ledger[bd] = FiberCell(bd, ker, cok, group, amb, res)
        cells[bd] = group
        kbases[bd] = kb
    diffs, notes = _fiber_differentials(f, cells, ledger, kbases)
    name = f"fib({f.name})"
    chart = Chart(
        name,
        (s0, s1, f0, f1),
        cells,
        diffs,
        [],
        max(X.effective_max_page(), Y.effective_max_page()),
        f.axioms.get("fiber_parity"),
        bool(f.axioms.get("connective", True)),
        provenance={"fibre": f"built from {f.name}"},
    )
    return FiberChart(chart, ledger, undetermined, notes)


def _fiber_differentials(f: ChartMap, cells, ledger, kbases):
    """Differentials between lift classes (from X) and between boundary classes (from Y)."""
    X, Y = f.source, f.target
    diffs = []
    notes = []
    for d in X.differentials:
        a, b = ledger.get(d.source), ledger.get(d.target)
        if a is None or a.ambiguous or b is None or b.ambiguous or not a.lift.ngens:
            continue
        h = X.hom(d)
        images = {}
        for name, v in zip(a.lift.names, kbases[d.source]):
            try:
                w = h.apply(v)
            except GroupError:
                notes.append(f"d_{d.page} on {name} at {d.source} is not defined on the kernel")
                continue
            coords = _solve_in(w, kbases.get(d.target, []), X.cell(d.target))
            if coords is None:
                notes.append(f"d_{d.page}({name}) leaves the kernel of {f.name}")
                continue
            terms = {n: c for n, c in zip(b.lift.names, coords) if c}
            if terms:
                images[name] = terms
        if images:
            diffs.append(Differential(d.page, d.source, d.target, images, "lift of " + (d.provenance or "source differential")))
    for d in Y.differentials:
        src, tgt = d.source.shift(-1, 1), d.target.shift(-1, 1)
        a, b = ledger.get(src), ledger.get(tgt)
        if a is None or a.ambiguous or b is None or b.ambiguous:
            continue
        images = {}
        for key, terms in d.images.items():
            nk = f"del({key})" if "*" not in key else key.split("*")[0] + f"*del({key.split('*', 1)[1]})"
            nt = {f"del({n})": c for n, c in terms.items() if b.boundary.has(f"del({n})")}
            if nt and a.boundary.has(nk.split("*")[-1]):
                images[nk] = nt
        if images:
            diffs.append(Differential(d.page, src, tgt, images, "boundary of " + (d.provenance or "target differential")))
    return diffs, notes


def _solve_in(w, basis, cell: PresentedAbGroup):
    if cell.is_trivial_element(w):
        return [0] * len(basis)
    rels = cell.relation_lattice()
    cols = snf.transpose(list(basis) + rels, cell.ngens)
    sol = snf.solve(cols, list(w), len(basis) + len(rels))
    if sol is None:
        return None
    return sol[: len(basis)]


# the level-3 ring and the leading term of q - p


class Poly:
    """Integer polynomial in a1, a3 stored as {(i, j): c}."""

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    def __add__(self, other):
        other = _poly(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        other = _poly(other)
        out: dict = {}
        for (a, b), c in self.terms.items():
            for (x, y), d in other.terms.items():
                k = (a + x, b + y)
                out[k] = out.get(k, 0) + c * d
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return self.terms == _poly(other).terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> set[int]:
        """Internal degrees present, with |a1| = 2 and |a3| = 6."""
        return {2 * i + 6 * j for i, j in self.terms}

    def mod(self, p: int) -> "Poly":
        return Poly({k: v % p for k, v in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), reverse=True):
            mono = (f"a1^{i}" if i > 1 else "a1" if i == 1 else "") + (f"a3^{j}" if j > 1 else "a3" if j == 1 else "")
            parts.append(f"{c}{'*' + mono if mono else ''}" if c != 1 or not mono else mono)
        return " + ".join(parts)


def _poly(x):
    return x if isinstance(x, Poly) else Poly.const(int(x))


class LevelThreeRing:
    """Z_(2)[a1, a3] with the Weierstrass curve y^2 + a1 xy + a3 y = x^3.

    With a2 = a4 = a6 = 0 the usual b- and c-quantities specialise and the
    discriminant is a1^3 a3^3 - 27 a3^4.
    """

    a1 = Poly({(1, 0): 1})
    a3 = Poly({(0, 1): 1})
    v1 = a1
    v2 = a3

    def __init__(self):
        a1, a3 = self.a1, self.a3
        self.b2 = a1 ** 2
        self.b4 = a1 * a3
        self.b6 = a3 ** 2
        self.b8 = Poly()  # a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2, all terms vanish
        self.c4 = self.b2 ** 2 - 24 * self.b4
        self.c6 = -(self.b2 ** 3) + 36 * self.b2 * self.b4 - 216 * self.b6
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        self.delta = -(b2 ** 2) * b8 - 8 * b4 ** 3 - 27 * b6 ** 2 + 9 * b2 * b4 * b6

    def delta_identity(self) -> bool:
        return self.delta == self.a1 ** 3 * self.a3 ** 3 - 27 * self.a3 ** 4

    def c_identity(self) -> bool:
        return 1728 * self.delta == self.c4 ** 3 - self.c6 ** 2


@dataclass(frozen=True)
class LeadingTerm:
    k: int
    r: int
    s: int
    a1_exp: int
    a3_exp: int

    @property
    def monomial(self) -> Poly:
        return Poly({(self.a1_exp, self.a3_exp): 1})

    @property
    def degree(self) -> int:
        return 2 * self.a1_exp + 6 * self.a3_exp

    @property
    def error_tag(self) -> str:
        return f"O(a1^{self.a1_exp + 1})"

    def name(self) -> str:
        return f"a1^{self.a1_exp}a3^{self.a3_exp}"

    def __str__(self) -> str:
        return f"{self.name()} + {self.error_tag}"


def two_adic_split(k: int) -> tuple[int, int]:
    """k = 2^r (2s + 1)."""
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    r = 0
    while k % 2 == 0:
        k //= 2
        r += 1
    return r, (k - 1) // 2


def qp_leading_term(k: int) -> LeadingTerm:
    """Leading term, mod 2 and in a1-order, of (q - p)(Delta^k)."""
    r, s = two_adic_split(k)
    return LeadingTerm(k, r, s, 3 * 2 ** (r + 1), 2 ** (r + 1) * (4 * s + 1))


# deleted differentials


@dataclass
class DeletionRecord:
    status: str  # "certificate" or "refused"
    target: str
    page: int
    source: BiDegree | None = None
    a0: str = ""
    kernel: list[str] = field(default_factory=list)
    f_a0: str = ""
    f_kernel: list[str] = field(default_factory=list)
    transcript: list[str] = field(default_factory=list)
    window: list[tuple[BiDegree, str]] = field(default_factory=list)
    reason: str = ""
    relies_on: str = ""

    @property
    def certified(self) -> bool:
        return self.status == "certificate"

    @property
    def window_empty(self) -> bool:
        return all(r != "unknown" for _, r in self.window)

    @property
    def detected_permanent(self) -> bool:
        return self.certified and self.window_empty

    def text(self) -> str:
        lines = [f"delete d_{self.page} onto {self.target}: {self.status.upper()}"]
        if self.reason:
            lines.append(f"  reason: {self.reason}")
        if self.source is not None:
            lines.append(f"  source cell {self.source}")
        if self.a0:
            lines.append(f"  coset witness a0 = {self.a0}, K = <{', '.join(self.kernel) or '0'}>")
            lines.append(f"  f(a0) = {self.f_a0}, f(K) = <{', '.join(self.f_kernel) or '0'}>")
        lines += [f"  snf: {t}" for t in self.transcript]
        if self.relies_on:
            lines.append(f"  relies on: {self.relies_on}")
        for bd, why in self.window:
            lines.append(f"  window {bd}: {'empty (' + why + ')' if why != 'unknown' else 'unknown'}")
        if self.certified:
            lines.append(f"  every lift c satisfies tau^{self.page - 1} c != 0")
            if self.window_empty:
                lines.append("  no later differential can hit a lift: detected permanent cycle")
        return "\n".join(lines) + "\n"


def parse_target(chart: Chart, spec: str) -> SyntheticClass:
    """"h2g@23,5" or "2*h2gDelta^4@119,5" or a bare generator name."""
    name, _, at = spec.partition("@")
    terms: dict[str, int] = {}
    for part in name.split("+"):
        part = part.strip()
        c, _, n = part.rpartition("*")
        terms[n] = terms.get(n, 0) + (int(c) if c else 1)
    x = SyntheticClass.named(chart, terms)
    if at and BiDegree.parse(at) != x.bidegree:
        raise ChartError(f"{name} lives at {x.bidegree}, not {at}")
    return x


def _window_report(target: BiDegree, r: int, axioms: dict):
    """Cells (s + 1, f - r - i), i >= 1, that could source longer differentials in the fibre."""
    out = []
    zero_line = set(axioms.get("zero_line", []))
    even = axioms.get("fiber_even", False)
    connective = axioms.get("connective", True)
    i = 1
    while True:
        bd = BiDegree(target.stem + 1, target.filtration - r - i)
        if bd.filtration < 0:
            if connective:
                out.append((bd, "negative filtration, and all below"))
            else:
                out.append((bd, "unknown"))
            break
        if bd.filtration == 0 and "zero_line" in axioms and bd.stem not in zero_line:
            out.append((bd, "zero line vanishes away from its listed stems"))
        elif even and bd.total % 2:
            out.append((bd, "even fibre, odd total degree"))
        else:
            out.append((bd, "unknown"))
        i += 1
    return out


def delete_differential_check(target: SyntheticClass, r: int, f: ChartMap, check_sign: bool = True) -> DeletionRecord:
    X = f.source
    if target.home is not X:
        raise MapError("target class does not live in the source chart of the map")
    bd = target.bidegree
    label = target.label()
    rec = DeletionRecord("refused", label, r)
    # f(b) = 0
    fb = f.apply(bd, target.element)
    if not f.target.cell(bd).is_trivial_element(fb):
        raise Inapplicable(f"f({label}) = {f.target.cell(bd).format(fb)} is nonzero")
    kill = min_kill_page(target)
    if kill < r:
        raise Inapplicable(f"{label} is already a boundary on page {kill} < {r}")
    src = bd.shift(1, -r)
    rec.source = src
    if not X.has_cell(src):
        raise IncompleteFixture(f"no cell at {src} to source d_{r} onto {label}")
    ds = [d for d in X.differentials if d.page == r and d.source == src]
    if not ds or kill == INF or kill > r:
        raise IncompleteFixture(f"the fixture records no d_{r} from {src} hitting {label}")
    d = ds[0]
    level = f.tau_level(src)
    if level is not None and r - 1 > level:
        rec.reason = f"map data at {src} is valid modulo tau^{level + 1} only; d_{r} needs tau^{r - 1}"
        return rec
    eng = X.pages()
    Z = eng.cycles(r, src)
    Bt = eng.boundaries(r, bd)
    h = X.hom(d)
    imgs = [h.apply(z) for z in Z]
    tcell = X.cell(bd)
    n_src = X.cell(src).ngens
    # d(a0) = b modulo B_r
    cols = snf.transpose(imgs + list(Bt), tcell.ngens)
    sol = snf.solve(cols, list(target.element), len(imgs) + len(Bt))
    if sol is None:
        raise IncompleteFixture(f"no E_{r} class at {src} has d_{r} = {label}")
    a0 = [sum(c * z[j] for c, z in zip(sol[: len(Z)], Z)) for j in range(n_src)]
    K = eng.cycles(r + 1, src)
    scell = X.cell(src)
    rec.a0 = scell.format(a0)
    rec.kernel = [scell.format(k) for k in K]
    fa0 = f.apply(src, a0)
    fK = [f.apply(src, k) for k in K]
    ycell = f.target.cell(src)
    rec.f_a0 = ycell.format(fa0)
    rec.f_kernel = [ycell.format(w) for w in fK]
    span = [w for w in fK if any(w)] + ycell.relation_lattice()
    rec.transcript.append(_snf_line(span, fa0, ycell.ngens))
    reps = [fa0, [-x for x in fa0]] if check_sign else [fa0]
    hit = any(snf.in_lattice(v, span) for v in reps)
    if hit:
        rec.reason = "f(a0) lies in f(K) + relations: some a with d_r(a) = b has f(a) = 0"
        return rec
    rec.status = "certificate"
    comp = f.components.get(src)
    if comp is not None and comp.provenance:
        # leading-term data: higher a1-order terms are assumed not to cancel it in a free cell
        rec.relies_on = f"map data at {src}: {comp.provenance}"
    rec.window = _window_report(bd, r, f.axioms)
    return rec


def _snf_line(span, v, n):
    if not span:
        return f"span is 0; target vector {v}"
    sf = snf.smith(snf.transpose(span, n), len(span))
    sol = snf.solve(snf.transpose(span, n), list(v), len(span))
    return f"span invariants {sf.invariant_factors()}, solve for {v}: {'solvable' if sol is not None else 'no integer solution'}"


def coset_representatives(target: SyntheticClass, r: int, f: ChartMap):
    """(a0, K) for the deleted-differential test; used by property tests."""
    X = f.source
    src = target.bidegree.shift(1, -r)
    eng = X.pages()
    d = next(d for d in X.differentials if d.page == r and d.source == src)
    Z = eng.cycles(r, src)
    imgs = [X.hom(d).apply(z) for z in Z]
    Bt = eng.boundaries(r, target.bidegree)
    cols = snf.transpose(imgs + list(Bt), X.cell(target.bidegree).ngens)
    sol = snf.solve(cols, list(target.element), len(imgs) + len(Bt))
    n = X.cell(src).ngens
    a0 = [sum(c * z[j] for c, z in zip(sol[: len(Z)], Z)) for j in range(n)]
    return a0, eng.cycles(r + 1, src)


def coset_decision(a: list[int], K, f: ChartMap, src: BiDegree) -> bool:
    """True when f(a) is outside f(K) + relations of the target cell."""
    ycell = f.target.cell(src)
    span = [f.apply(src, k) for k in K] + ycell.relation_lattice()
    span = [w for w in span if any(w)]
    fa = f.apply(src, a)
    return not snf.in_lattice(fa, span)
