"""Moore objects M(h0^i), M(h0^i, v1^j) over a sphere fixture, and lift-script replay.

The sphere fixture is a chart of F_2-synthetic homotopy: cells of named
classes (order 2), each flagged tau-free or tau-power torsion, with an h0
product table.  For M(h0^i) the long exact sequence gives, in (s, f),

    coker(h0^i : pi_{s,f-i} S -> pi_{s,f} S) -> pi_{s,f} M -> ker(h0^i on pi_{s-1,f-i+1} S)

and the boundary map shifts by (-1, -(i-1)).  Side conditions of a lift
script are checked modulo the declared tau-power torsion.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .chart import BiDegree, Chart
from .groups import Hom, PresentedAbGroup, kernel_lattice, simplify, subquotient
from .spectral_maps import IncompleteFixture

SELF_MAPS = {(1, 4): "M(2,v1^4)", (2, 4): "M(4,v1^4)", (3, 8): "M(8,v1^8)"}
V2_32_DEGREE = 192


class ReplayError(ValueError):
    pass


def nu2(k: int) -> int:
    n = 0
    while k % 2 == 0:
        k //= 2
        n += 1
    return n


# periodic families


@dataclass(frozen=True)
class PeriodicClass:
    family: str  # "mu", "j" or "j'"
    stem: int

    @classmethod
    def parse(cls, text: str) -> "PeriodicClass":
        text = ALIASES.get(text.strip(), text.strip())
        m = re.fullmatch(r"(mu|j'|j)_(\d+)", text)
        if not m:
            raise ValueError(f"not a periodic class: {text!r}")
        out = cls(m.group(1), int(m.group(2)))
        out.kind  # validates the residue
        return out

    @property
    def kind(self) -> str:
        r = self.stem % 8
        if self.family == "mu" and r in (1, 2):
            return "mu"
        if self.family == "j" and r == 3:
            return "j8k-5"
        if self.family == "j" and r == 7:
            return "j8k-1"
        if self.family == "j'" and r == 7:
            return "j'"
        if self.family == "j" and r == 0 and self.stem > 0:
            return "j8k"
        if self.family == "j" and r == 1 and self.stem > 1:
            return "j8k+1"
        raise ValueError(f"{self.name} is not a member of the mu or image-of-J families")

    @property
    def name(self) -> str:
        return f"{self.family}_{self.stem}"

    @property
    def bidegree(self) -> BiDegree:
        s = self.stem
        kind = self.kind
        if kind == "mu":
            k = (s - 1) // 8 if s % 8 == 1 else (s - 2) // 8
            return BiDegree(s, 4 * k + 1 + (s % 8 == 2))
        if kind == "j8k-5":
            k = (s + 5) // 8
            return BiDegree(s, 4 * k - 3)
        if kind == "j8k-1":
            k = (s + 1) // 8
            return BiDegree(s, 4 * k - 3 - nu2(k))
        if kind == "j'":
            k = (s + 1) // 8
            return BiDegree(s, 4 * k - 2)
        if kind == "j8k":
            return BiDegree(s, s // 2 - 1)
        k = (s - 1) // 8
        return BiDegree(s, 4 * k)

    def shifted(self, n: int) -> "PeriodicClass":
        return PeriodicClass(self.family, self.stem + 8 * n)


ALIASES = {"h0h3": "j'_7", "c0": "j_8", "h1c0": "j_9"}


def alias(text: str) -> str:
    """P^n(h0h3) -> j'_{8n+7}, P^n(c0) -> j_{8n+8}; other names unchanged."""
    text = text.strip()
    m = re.fullmatch(r"P(?:\^(\d+))?\((h0h3|c0)\)", text)
    if m:
        n = int(m.group(1) or 1)
        base = PeriodicClass.parse(ALIASES[m.group(2)])
        return base.shifted(n).name
    return ALIASES.get(text, text)


class PeriodicClassTable:
    """mu- and image-of-J families with their bidegrees, plus v2^32 metadata."""

    self_maps = dict(SELF_MAPS)
    v2_degree = V2_32_DEGREE

    def entry(self, name: str) -> PeriodicClass:
        return PeriodicClass.parse(alias(name))

    def members(self, max_stem: int) -> list[PeriodicClass]:
        out = []
        for s in range(1, max_stem + 1):
            for fam in ("mu", "j", "j'"):
                try:
                    out.append(PeriodicClass.parse(f"{fam}_{s}"))
                except ValueError:
                    pass
        return out


@dataclass
class Indeterminate:
    """A periodicity value that is only defined up to a span."""

    source: PeriodicClass
    span: str


def periodicity_apply(i: int, n: int, x: PeriodicClass, ladder: "CofiberLadder | None" = None):
    """P_i^n on a mu- or image-of-J class: shift by (8n, 4n)."""
    if isinstance(x, str):
        x = PeriodicClass.parse(alias(x))
    if not 1 <= i <= 3:
        raise ValueError("P_i is defined for 1 <= i <= 3")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return x
    kind = x.kind
    if kind in ("j8k-5", "j'") and i != 3:
        raise ValueError(f"P_{i} on {x.name} is only established for i = 3")
    if kind == "j8k-1":
        return Indeterminate(x, f"{x.name} is defined only up to tau-power torsion; use j'_{x.stem}")
    if ladder is not None and ladder.base.has_generator(x.name):
        if not ladder.is_h0_torsion(x.name, i):
            raise ReplayError(f"{x.name} is not h0^{i}-torsion in the fixture")
    return x.shifted(n)


def v1_bar(x: PeriodicClass):
    """v1^4 on the projection of x to M(h0^3): (y, a, b) with tau^a v1^4 xbar = tau^b ybar.

    For j_{8k-1} the identity holds only up to tau-power torsion and needs k >= 3.
    """
    kind = x.kind
    y = x.shifted(1)
    if kind in ("mu", "j8k", "j8k+1", "j8k-5"):
        return y, 0, 0
    if kind == "j8k-1":
        k = (x.stem + 1) // 8
        if k < 3:
            raise ReplayError(f"v1^4 on {x.name} needs k >= 3")
        f1 = x.bidegree.filtration + 4
        f2 = y.bidegree.filtration
        return (y, f1 - f2, 0) if f1 >= f2 else (y, 0, f2 - f1)
    raise ReplayError(f"no v1^4 formula for {x.name}")


def tau_name(t: int, x: PeriodicClass) -> str:
    return x.name if t == 0 else f"tau^{t}.{x.name}"


def parse_tau_class(text: str) -> tuple[int, PeriodicClass]:
    """"tau^12 P^5(h0h3)" -> (12, j'_47)."""
    text = text.strip()
    m = re.match(r"tau\^(\d+)\s*\.?\s*(.*)", text)
    t = 0
    if m:
        t, text = int(m.group(1)), m.group(2)
    return t, PeriodicClass.parse(alias(text))


# the ladder


class CofiberLadder:
    def __init__(self, base: Chart, i: int, j: int | None = None):
        self.base = base
        self.i = i
        self.j = j
        meta = base.meta or {}
        self.tau_torsion = set(meta.get("tau_torsion", []))
        self.torsion_cells = {BiDegree.parse(b) for b in meta.get("tau_torsion_cells", [])}
        self.zero_cells = {BiDegree.parse(b) for b in meta.get("zero_cells", [])}
        self._h0 = {}
        for p in base.products:
            if p.left == "h0":
                self._h0[p.right] = p.result

    @classmethod
    def load(cls, path, i: int, j: int | None = None) -> "CofiberLadder":
        return cls(Chart.load(path), i, j)

    # cells of the sphere

    def cell(self, bd) -> PresentedAbGroup:
        bd = BiDegree.parse(bd)
        if self.base.has_cell(bd):
            return self.base.cell(bd)
        if bd in self.zero_cells or bd in self.torsion_cells or bd.filtration < 0 or bd.stem < 0:
            return PresentedAbGroup.zero()
        raise IncompleteFixture(f"sphere fixture has no cell at {bd}")

    def torsion_vectors(self, bd) -> list[list[int]]:
        c = self.cell(bd)
        return [c.unit(n) for n in c.names if n in self.tau_torsion]

    def quotient(self, bd) -> PresentedAbGroup:
        """The cell modulo its declared tau-power torsion."""
        c = self.cell(bd)
        return PresentedAbGroup(list(c.generators), [list(r) for r in c.relations] + self.torsion_vectors(bd))

    def h0_map(self, bd) -> Hom:
        """h0 : pi_{s,f} -> pi_{s,f+1} from the product table; tau-torsion sources map to 0."""
        src = self.cell(bd)
        up = bd.shift(0, 1)
        images = {}
        for n in src.names:
            if n in self.tau_torsion:
                continue
            if n not in self._h0:
                raise IncompleteFixture(f"h0 * {n} is not declared")
            images[n] = self._h0[n]
        if any(images.values()):
            tgt = self.cell(up)
        else:
            tgt = self.cell(up) if self.base.has_cell(up) else PresentedAbGroup.zero()
        return Hom.from_terms(src, tgt, images)

    def h0_power(self, bd, i: int) -> Hom:
        bd = BiDegree.parse(bd)
        h = self.h0_map(bd)
        for k in range(1, i):
            if h.target.ngens == 0:
                return h
            nxt = self.h0_map(bd.shift(0, k))
            if nxt.source.ngens != h.target.ngens:
                h = Hom(h.source, nxt.target, [[0] * h.source.ngens for _ in range(nxt.target.ngens)])
                continue
            h = nxt.compose(h)
        return h

    def is_h0_torsion(self, name: str, i: int) -> bool:
        bd = self.base.where(name)
        c = self.cell(bd)
        h = self.h0_power(bd, i)
        img = h.apply(c.unit(name))
        return h.target.is_trivial_element(img)

    # M(h0^i)

    def kernel_part(self, bd, mod_tau: bool = True):
        """ker(h0^i on pi_{s-1, f-i+1}), as (group, basis vectors, cell names)."""
        bd = BiDegree.parse(bd)
        at = bd.shift(-1, -(self.i - 1))
        h = self.h0_power(at, self.i)
        cell = self.cell(at)
        if mod_tau:
            tq = PresentedAbGroup(list(h.target.generators), list(h.target.relations))
            up = at.shift(0, self.i)
            if h.target.ngens:
                tq = self.quotient(up)
            h = Hom(self.quotient(at), tq, h.matrix)
        ker = kernel_lattice(h)
        grp, basis = subquotient(ker, h.source.relation_lattice(), cell.names)
        grp, basis = simplify(grp, basis, cell.names)
        return grp, basis, at

    def coker_part(self, bd, mod_tau: bool = True):
        """coker(h0^i : pi_{s,f-i} -> pi_{s,f})."""
        bd = BiDegree.parse(bd)
        low = bd.shift(0, -self.i)
        cell = self.quotient(bd) if mod_tau else self.cell(bd)
        rels = [list(r) for r in cell.relations]
        if low.filtration >= 0:
            h = self.h0_power(low, self.i)
            if h.target.ngens == cell.ngens:
                rels += [img for img in h.images() if any(img)]
        grp = PresentedAbGroup(list(cell.generators), rels)
        return grp, bd

    def m_cell(self, bd, mod_tau: bool = False) -> "LadderCell":
        """pi_{s,f} M(h0^i) as its coker and ker parts."""
        bd = BiDegree.parse(bd)
        coker, _ = self.coker_part(bd, mod_tau=mod_tau)
        ker, basis, at = self.kernel_part(bd, mod_tau=mod_tau)
        coker = simplify(coker, [coker.unit(n) for n in coker.names], coker.names)[0]
        extension = not coker.is_zero() and not ker.is_zero()
        return LadderCell(bd, coker, ker, extension)

    def boundary_target(self, bd) -> BiDegree:
        return BiDegree.parse(bd).shift(-1, -(self.i - 1))

    def lift_bidegree(self, bd) -> BiDegree:
        return BiDegree.parse(bd).shift(1, self.i - 1)

    def exactness(self, bd) -> list[str]:
        """The kernel part is h0^i-torsion and the boundary kills the cokernel part."""
        out = []
        grp, basis, at = self.kernel_part(bd, mod_tau=False)
        h = self.h0_power(at, self.i)
        for v in basis:
            if not h.target.is_trivial_element(h.apply(v)):
                out.append(f"kernel part at {bd} contains a class with nonzero h0^{self.i} multiple")
        return out

    def boundary_v1_target(self, bd) -> BiDegree:
        """d_{1^j} : M(h0^i, v1^j) -> Sigma^{2j+1, j-1} M(h0^i)."""
        if self.j is None:
            raise ValueError("ladder has no v1 power")
        return BiDegree.parse(bd).shift(-(2 * self.j + 1), -(self.j - 1))

    def top_cell_stem(self, s: int) -> int:
        """Stem of the top-cell lift x[2 + 2j] of a class in stem s."""
        return s + 2 + 2 * (self.j or 0)


@dataclass
class LadderCell:
    at: BiDegree
    coker: PresentedAbGroup
    ker: PresentedAbGroup
    extension: bool  # both parts nonzero, so the extension is not determined here

    def order(self) -> int:
        return self.coker.order() * self.ker.order()


def boundary_of_v1_multiple(x: str, ladder: CofiberLadder, i: int = 3):
    """d_{0^3}(v1^4 xbar) = h0h3 x, read from the product table."""
    if i != 3:
        raise ValueError("only the case i = 3 is established")
    base = ladder.base
    for p in base.products:
        if p.left in ("h0h3", "j'_7") and p.right == x:
            if not p.result:
                return {}
            return dict(p.result)
    raise IncompleteFixture(f"h0h3 * {x} is not declared in the fixture")


# lift scripts


@dataclass
class Step:
    number: int
    verb: str
    args: str
    cite: str = ""


@dataclass
class LiftScript:
    name: str
    cls: str
    at: BiDegree
    i: int
    steps: list[Step]
    header: list[str] = field(default_factory=list)

    @classmethod
    def parse(cls, text: str) -> "LiftScript":
        name = ""
        klass = ""
        at = None
        i = None
        steps = []
        header = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                header.append(line.lstrip("# "))
                continue
            body, _, cite = line.partition("|")
            body, cite = body.strip(), cite.strip()
            head, _, rest = body.partition(" ")
            if head == "script":
                name = rest.strip()
            elif head == "class":
                n, _, b = rest.partition("@")
                klass, at = n.strip(), BiDegree.parse(b)
            elif head == "ladder":
                i = int(rest.strip().split("=")[1])
            else:
                num = int(head.rstrip("."))
                verb, _, args = rest.strip().partition(" ")
                steps.append(Step(num, verb, args.strip(), cite))
        if at is None or i is None:
            raise ReplayError("script needs 'class NAME @ s,f' and 'ladder i=N' lines")
        return cls(name, klass, at, i, steps, header)

    @classmethod
    def load(cls, path) -> "LiftScript":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    def without_step(self, verb: str, which: int = 0) -> "LiftScript":
        hits = [s for s in self.steps if s.verb == verb]
        drop = hits[which]
        return LiftScript(self.name, self.cls, self.at, self.i, [s for s in self.steps if s is not drop], self.header)

    def text(self) -> str:
        lines = [f"# {h}" for h in self.header]
        lines += [f"script {self.name}", f"class {self.cls} @ {self.at.stem},{self.at.filtration}", f"ladder i={self.i}"]
        for s in self.steps:
            lines.append(f"{s.number}. {s.verb} {s.args}".rstrip() + (f" | {s.cite}" if s.cite else ""))
        return "\n".join(lines) + "\n"


@dataclass
class ReplayResult:
    script: str
    ok: bool
    transcript: list[str]
    failed_step: int | None = None
    failure: str = ""
    conclusion: str = ""

    def text(self) -> str:
        head = f"replay {self.script}: {'VERIFIED' if self.ok else 'FAILED'}"
        lines = [head] + [f"  {t}" for t in self.transcript]
        if not self.ok:
            lines.append(f"  failure at step {self.failed_step}: {self.failure}")
        return "\n".join(lines) + "\n"


class _Fail(Exception):
    pass


def _span_covers(group: PresentedAbGroup, basis_needed, gens) -> bool:
    return all(group.in_subgroup(v, gens) for v in basis_needed)


def replay_lift_argument(script: LiftScript, ladder: CofiberLadder) -> ReplayResult:
    """Check every side condition of the script against the fixture."""
    if ladder.i != script.i:
        raise ReplayError(f"script works in M(h0^{script.i}), ladder is M(h0^{ladder.i})")
    tr: list[str] = []
    st = {
        "y": script.cls,
        "y_at": script.at,
        "lift_at": None,
        "z_at": None,
        "S": None,
        "S_fixes": [],
        "C": None,
        "C_fixes": [],
        "boundary_ok": False,
        "image_ok": False,
        "v1": 0,
    }
    table = PeriodicClassTable()
    current = None
    try:
        for step in script.steps:
            current = step
            _run_step(step, st, ladder, table, tr)
    except _Fail as exc:
        return ReplayResult(script.name, False, tr, current.number, str(exc))
    concl = st.get("conclusion", "")
    return ReplayResult(script.name, True, tr, conclusion=concl)


def _need(cond, msg):
    if not cond:
        raise _Fail(msg)


def _run_step(step: Step, st, ladder: CofiberLadder, table, tr):
    i = ladder.i
    cite = f"  [{step.cite}]" if step.cite else ""
    v = step.verb
    if v == "torsion-lift":
        y = st["y"]
        _need(ladder.base.has_generator(y), f"{y} is not in the fixture")
        _need(ladder.base.where(y) == st["y_at"], f"{y} is not at {st['y_at']}")
        _need(y not in ladder.tau_torsion, f"{y} is tau-power torsion")
        _need(ladder.is_h0_torsion(y, i), f"{y} is not h0^{i}-torsion")
        st["lift_at"] = ladder.lift_bidegree(st["y_at"])
        tr.append(f"{step.number}. {y} at {st['y_at']} is h0^{i}-torsion; lift {y}[1,{i - 1}] at {st['lift_at']}{cite}")
    elif v == "v1-action":
        n = int(step.args or 4)
        _need(st["lift_at"] is not None, "v1-action before a lift")
        _need(n % 4 == 0, "v1 power must be a multiple of 4")
        st["v1"] = n
        st["z_at"] = st["lift_at"].shift(2 * n, n)
        tr.append(f"{step.number}. z = v1^{n} {st['y']}[1,{i - 1}] at {st['z_at']}{cite}")
    elif v == "boundary-span":
        _need(st["z_at"] is not None, "boundary-span before the v1 action")
        grp, basis, at = ladder.kernel_part(st["z_at"])
        cell = ladder.cell(at)
        q = ladder.quotient(at)
        live = [b for b in basis if not q.is_trivial_element(b)]
        st["S"] = (at, live)
        names = [cell.format(b) for b in live]
        tr.append(
            f"{step.number}. d(z) lies in ker(h0^{i} on pi{at}) mod tau-torsion = <{', '.join(names) or '0'}>{cite}"
        )
    elif v == "tau-torsion-dismissal":
        which = step.args or "boundary"
        key = "S" if which == "boundary" else "C"
        _need(st[key] is not None, f"no {which} span computed yet")
        at, live = st[key]
        _need(not live, f"the {which} span at {at} is not tau-power torsion")
        tr.append(f"{step.number}. pi{at} contributes only tau-power torsion; nothing to correct{cite}")
    elif v == "correct-by-imJ":
        _need(st["S"] is not None, "correction before boundary-span")
        t, e = parse_tau_class(step.args)
        name = tau_name(t, e)
        bd = e.bidegree.shift(0, -t)
        _need(bd == st["y_at"], f"{name} lies in {bd}, not in the bidegree {st['y_at']} of the class being lifted")
        _need(ladder.base.has_generator(name), f"{name} is not in the fixture")
        _need(ladder.is_h0_torsion(name, i), f"{name} is not h0^{i}-torsion, so it has no lift")
        img = periodicity_apply(i, 1, e)
        _need(isinstance(img, PeriodicClass), f"P_{i}({e.name}) has indeterminacy")
        iname = tau_name(t, img)
        at, live = st["S"]
        cell = ladder.cell(at)
        _need(cell.has(iname), f"{iname} is not a class of pi{at}")
        st["S_fixes"].append(cell.unit(iname))
        tr.append(f"{step.number}. replace y by y - {name}; d(v1^4 {name}[1,{i - 1}]) = P_{i}({name}) = {iname}{cite}")
    elif v == "require":
        what = step.args
        if what == "boundary-vanishes":
            _need(st["S"] is not None, "no boundary span computed")
            at, live = st["S"]
            q = ladder.quotient(at)
            _need(
                _span_covers(q, live, st["S_fixes"]),
                f"d(v1^4 y[1,{i - 1}]) may be a nonzero class of pi{at} that no correction cancels",
            )
            st["boundary_ok"] = True
            tr.append(f"{step.number}. d(v1^4 y[1,{i - 1}]) = 0 up to tau-power torsion")
        elif what == "image-vanishes":
            _need(st["C"] is not None, "no cokernel span computed")
            at, live = st["C"]
            grp, _ = ladder.coker_part(at)
            _need(
                _span_covers(grp, live, st["C_fixes"]),
                f"v1^{st['v1']} y[1,{i - 1}] may be a nonzero class of the cokernel at {at} that no correction cancels",
            )
            st["image_ok"] = True
            tr.append(f"{step.number}. v1^{st['v1']} y[1,{i - 1}] = 0 up to tau-power torsion")
        else:
            raise ReplayError(f"unknown requirement {what!r}")
    elif v == "exact-membership":
        _need(st["boundary_ok"], "exact-membership needs the boundary to vanish first")
        grp, at = ladder.coker_part(st["z_at"])
        live = [grp.unit(n) for n in grp.names if not grp.is_trivial_element(grp.unit(n))]
        basis = live
        st["C"] = (at, basis)
        names = [grp.format(b) for b in basis]
        tr.append(
            f"{step.number}. z lies in the image of coker(h0^{i}) at {at}, mod tau-torsion <{', '.join(names) or '0'}>{cite}"
        )
    elif v == "correct-by-imJ-bar":
        _need(st["C"] is not None, "correction before exact-membership")
        t, e = parse_tau_class(step.args)
        name = tau_name(t, e)
        bd = e.bidegree.shift(0, -t)
        _need(bd == st["lift_at"], f"{name} lies in {bd}, not in the bidegree {st['lift_at']} of the lift")
        _need(ladder.base.has_generator(name), f"{name} is not in the fixture")
        y, a, b = v1_bar(e)
        _need(t >= a, f"tau^{t} is too small to absorb tau^{a} in the v1^4 identity for {e.name}")
        tt = t - a + b
        iname = tau_name(tt, y)
        at, live = st["C"]
        grp, _ = ladder.coker_part(at)
        _need(grp.has(iname), f"{iname} is not a class of pi{at}")
        _need(e.bidegree.shift(8, 4).shift(0, -a) == y.bidegree.shift(0, -b), "degrees in the v1^4 identity do not match")
        st["C_fixes"].append(grp.unit(iname))
        rule = "exact" if a == b == 0 else f"tau^{a} v1^4 {e.name}bar = tau^{b} {y.name}bar up to tau-power torsion"
        tr.append(f"{step.number}. replace y[1,{i - 1}] by y[1,{i - 1}] - {name}bar; v1^4 of it is {iname}bar ({rule}){cite}")
    elif v == "conclude":
        m = re.fullmatch(r"M\((\d+),\s*v1\^(\d+)\)", step.args.replace(" ", ""))
        _need(m is not None, f"cannot parse complex {step.args!r}")
        two_i, j = int(m.group(1)), int(m.group(2))
        _need(two_i == 2 ** i, f"{step.args} does not match M(h0^{i})")
        _need((i, j) in SELF_MAPS, f"no v1^{j} self-map is available on M({two_i})")
        _need(st["image_ok"] and st["boundary_ok"], "the v1 multiple has not been shown to vanish")
        _need(j % st["v1"] == 0, f"v1^{st['v1']}-torsion does not give v1^{j}-torsion")
        top = st["y_at"].stem + 2 + 2 * j
        st["conclusion"] = f"{st['y']} lifts to the top cell of {SELF_MAPS[(i, j)]} in stem {top}"
        tr.append(f"{step.number}. {st['conclusion']}{cite}")
    else:
        raise ReplayError(f"unknown step {v!r}")
