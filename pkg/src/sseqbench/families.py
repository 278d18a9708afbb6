"""Fixture ingestion and the family-catalog audit.

A family record names a generator of v2^32-periodic families in the sphere,
its detecting class in TMF, and the periodic factors that may carry the
self-map.  The audit runs the detection check (or bracket forcing), the
relation chain, and the counting with merges, and sums to the catalog total.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .chart import BiDegree, Chart, ChartError, validate
from .moore import CofiberLadder, LiftScript
from .spectral_maps import ChartMap, IncompleteFixture, MapError, delete_differential_check, parse_target
from .toda import BracketRecord, RelationDB, RelationError, Word, check_relation_chain, find_step, force_nonzero_from_empty, rewrite

PERIOD = 192
ORDERS = {"Z/2": 2, "Z/4": 4, "Z/8": 8}
FIXTURES = Path(__file__).resolve().parent / "fixtures"


class FixtureError(ValueError):
    pass


@dataclass
class FamilyRecord:
    label: str
    degree: int
    an_filtration: int
    group: str
    generator: str
    generator_word: str
    e2_rep: str
    count: int
    j03: bool
    detected_by: str | None
    chain: str | None
    terms: list[dict]
    carrier: str = "M(8,v1^8)"

    @classmethod
    def from_dict(cls, d) -> "FamilyRecord":
        keys = cls.__dataclass_fields__
        return cls(**{k: v for k, v in d.items() if k in keys})

    @property
    def order(self) -> int:
        return ORDERS[self.group]

    @property
    def degree_mod(self) -> int:
        return self.degree % PERIOD

    def families(self) -> list[tuple[str, Word, str]]:
        """(periodic factor, cofactor, term word) for each family the row counts."""
        out = []
        for t in self.terms:
            word = Word.parse(" ".join([t["multiplier"]] + t["periodic"]))
            for factor in dict.fromkeys(t["periodic"]):
                rest = list(t["periodic"])
                rest.remove(factor)
                cof = Word.parse(" ".join([t["multiplier"]] + rest))
                out.append((factor, cof, str(word)))
        return out


@dataclass
class DetectionRow:
    id: str
    stem: int
    page: int
    target: dict
    source: dict
    families: list[str]
    data: dict

    @classmethod
    def from_dict(cls, d) -> "DetectionRow":
        return cls(d["id"], d["stem"], d["page"], d["target"], d["source"], list(d["families"]), d)

    @property
    def in_table(self) -> bool:
        return self.data.get("in_table", True)

    def target_spec(self) -> str:
        return " + ".join(f"{c}*{n}" if c != 1 else n for n, c in self.target.items())


@dataclass
class Fixture:
    root: Path
    tmf: Chart
    qp: ChartMap
    detection: list[DetectionRow]
    records: list[FamilyRecord]
    chains: dict[str, list[str]]
    brackets: dict[str, BracketRecord]
    merges: list[dict]
    total: int
    db: RelationDB
    sphere: Chart | None = None
    scripts: dict[str, LiftScript] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    questions: list[dict] = field(default_factory=list)

    def row(self, rid: str) -> DetectionRow:
        for r in self.detection:
            if r.id == rid:
                return r
        raise FixtureError(f"no detection row {rid!r}")

    def record(self, label: str) -> FamilyRecord:
        for r in self.records:
            if r.label == label:
                return r
        raise FixtureError(f"no family record {label!r}")

    def without_differential(self, rid: str) -> "Fixture":
        """A copy with the TMF differential of detection row rid removed (a seeded mutation)."""
        row = self.row(rid)
        src = self.tmf.where(next(iter(row.source)))
        tmf = self.tmf.without_differentials(lambda d: d.page == row.page and d.source == src)
        qp = ChartMap(self.qp.name, tmf, self.qp.target, self.qp.components, self.qp.compat, self.qp.axioms, self.qp.provenance)
        out = Fixture(**{**self.__dict__, "tmf": tmf, "qp": qp})
        return out

    def without_relation(self, rid: str) -> "Fixture":
        return Fixture(**{**self.__dict__, "db": self.db.without(rid)})


def _read(path: Path):
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    except OSError as exc:
        raise FixtureError(f"{path}: {exc.strerror}") from None


def ingest(root=None) -> Fixture:
    """Load and cross-check the fixture directory."""
    root = Path(root) if root else FIXTURES
    tmf_dir = root / "tmf"
    try:
        qp = ChartMap.load(tmf_dir / "qp.json")
    except (OSError, ChartError, MapError, KeyError) as exc:
        raise FixtureError(f"{tmf_dir / 'qp.json'}: {exc}") from None
    tmf = qp.source
    for c in (tmf, qp.target):
        rep = validate(c)
        if not rep.ok:
            raise FixtureError(f"chart {c.name}: {rep.first_violation}")
    probs = qp.check()
    if probs:
        raise FixtureError(f"{tmf_dir / 'qp.json'}: {probs[0]}")
    try:
        db = RelationDB.load(tmf_dir / "relations.json")
    except RelationError as exc:
        raise FixtureError(f"{tmf_dir / 'relations.json'}: {exc}") from None
    fam = _read(tmf_dir / "families.json")
    det = _read(tmf_dir / "detection.json")
    rows = [DetectionRow.from_dict(r) for r in det["rows"]]
    records = [FamilyRecord.from_dict(r) for r in fam["records"]]
    brackets = {}
    for label, b in fam.get("brackets", {}).items():
        if not b.get("provenance", "").strip():
            raise FixtureError(f"{tmf_dir / 'families.json'}: bracket {label} has no provenance")
        brackets[label] = BracketRecord.from_dict(b)
    fx = Fixture(root, tmf, qp, rows, records, fam.get("chains", {}), brackets, fam.get("merges", []), fam["total"], db)
    fx.questions = fam.get("questions", [])
    for r in rows:
        if not r.data.get("provenance", "").strip():
            raise FixtureError(f"{tmf_dir / 'detection.json'}: row {r.id} has no provenance")
        for n in list(r.target) + list(r.source):
            if not tmf.has_generator(n):
                raise FixtureError(f"{tmf_dir / 'detection.json'}: row {r.id} names {n!r}, not in the TMF chart")
    ids = {r.id for r in rows}
    for rec in records:
        if rec.group not in ORDERS:
            raise FixtureError(f"record {rec.label}: group {rec.group} is not Z/2, Z/4 or Z/8")
        if rec.j03 and rec.detected_by not in ids:
            raise FixtureError(f"record {rec.label}: dangling detection row {rec.detected_by!r}")
        if not rec.j03 and rec.label not in brackets:
            raise FixtureError(f"record {rec.label}: no bracket record to force it")
        if rec.chain and rec.chain not in fx.chains:
            raise FixtureError(f"record {rec.label}: dangling chain {rec.chain!r}")
    sphere_dir = root / "sphere"
    if (sphere_dir / "sphere.json").exists():
        fx.sphere = Chart.load(sphere_dir / "sphere.json")
        for p in sorted(sphere_dir.glob("*.steps")):
            s = LiftScript.load(p)
            if not fx.sphere.has_generator(s.cls):
                raise FixtureError(f"{p}: class {s.cls} is not in the sphere fixture")
            fx.scripts[s.name] = s
    return fx


# the audit


@dataclass
class RowResult:
    label: str
    ok: bool
    count: int
    lines: list[str]
    failure: str = ""


@dataclass
class AuditReport:
    rows: list[RowResult]
    total: int
    expected: int
    merges: list[str]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows) and self.total == self.expected

    def failing(self) -> list[str]:
        return [r.label for r in self.rows if not r.ok]

    def per_degree(self) -> list[int]:
        return [r.count for r in self.rows]

    def text(self) -> str:
        out = []
        for r in self.rows:
            out.append(f"{r.label:>5}  {'ok  ' if r.ok else 'FAIL'}  count {r.count}")
            out += [f"       {x}" for x in r.lines]
            if not r.ok:
                out.append(f"       failure: {r.failure}")
        for m in self.merges:
            out.append(f"merge: {m}")
        out.append(f"total {self.total} (expected {self.expected}): {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(out) + "\n"


def _count(rec: FamilyRecord, fx: Fixture, lines: list[str], merged: list[str]) -> int:
    fams = rec.families()
    n = len(fams)
    s_only = ("S",)
    seen = set()
    for i, (fa, ca, wa) in enumerate(fams):
        for fb, cb, wb in fams[i + 1 :]:
            if fa != fb or (fa, wa, wb) in seen:
                continue
            hit = find_step(ca, cb, fx.db, s_only) or find_step(cb, ca, fx.db, s_only)
            if hit is None:
                # allow a tau-power difference between the cofactors
                for rel in fx.db.relations:
                    if rel.ambient != "S" or rel.rhs.is_zero:
                        continue
                    for a, b in ((ca, cb), (cb, ca)):
                        for d in ("lr", "rl"):
                            w = rewrite(a, rel, d)
                            if w is not None and w.tau_free() == b.tau_free():
                                hit = (rel, d, None)
                                break
                        if hit:
                            break
                    if hit:
                        break
            if hit:
                rel = hit[0]
                seen.add((fa, wa, wb))
                n -= 1
                msg = f"{rec.label}: {wa} and {wb} give one family on {fa} ({rel.id}: {rel.provenance})"
                merged.append(msg)
                lines.append(f"merge {wa} ~ {wb} on {fa} by {rel.id}")
    return n


def verify_record(rec: FamilyRecord, fx: Fixture, merged: list[str]) -> RowResult:
    lines: list[str] = []
    res = RowResult(rec.label, True, 0, lines)
    try:
        # degree and order
        bd = fx.db.bidegree(rec.generator_word)
        if bd.stem != rec.degree:
            raise _RowFail(f"{rec.generator_word} lives in stem {bd.stem}, not {rec.degree}")
        for fac, cof, word in rec.families():
            if fx.db.bidegree(word).stem != rec.degree:
                raise _RowFail(f"term {word} is not in stem {rec.degree}")
        lines.append(f"stem {rec.degree} = {rec.degree_mod} mod {PERIOD}; order {rec.order} ({rec.group})")
        # counting
        res.count = _count(rec, fx, lines, merged)
        lines.append(f"{len(rec.families())} factor choices, {res.count} families")
        if res.count != rec.count:
            raise _RowFail(f"counted {res.count} families, catalog lists {rec.count}")
        # chain
        words = [rec.generator_word]
        if rec.chain:
            chain = fx.chains[rec.chain]
            cr = check_relation_chain(chain, fx.db)
            if not cr.ok:
                raise _RowFail(f"chain {rec.chain}: {cr.failure}")
            lines.append(f"chain {rec.chain}: {len(chain)} words linked by " + ", ".join(s.relation for s in cr.steps))
            words += chain
            monos = {Word.parse(w).monomial() for w in chain}
            for fac, cof, word in rec.families():
                if Word.parse(word).monomial() not in monos and Word.parse(word).monomial() != Word.parse(rec.generator_word).monomial():
                    raise _RowFail(f"term {word} is not on chain {rec.chain}")
        # detection or forcing
        if rec.j03:
            row = fx.row(rec.detected_by)
            if rec.label not in row.families:
                raise _RowFail(f"detection row {row.id} does not list {rec.label}")
            tw = Word.parse(row.data["target_word"]).monomial()
            if tw not in {Word.parse(w).monomial() for w in words}:
                raise _RowFail(f"detecting class {row.data['target_word']} is not linked to {rec.generator_word}")
            x = parse_target(fx.tmf, row.target_spec())
            dr = delete_differential_check(x, row.page, fx.qp)
            if not dr.detected_permanent:
                raise _RowFail(f"row {row.id}: {dr.status}: {dr.reason}")
            lines.append(f"detected by {row.target_spec()} at {x.bidegree}: d_{row.page} from {dr.source} does not lift; certified")
        else:
            fr = force_nonzero_from_empty(fx.brackets[rec.label], fx.db)
            if fr.status != "proved":
                raise _RowFail(f"bracket {rec.label}: {fr.reason}")
            lines.append(fr.text())
    except _RowFail as exc:
        res.ok, res.failure = False, str(exc)
    except (IncompleteFixture, MapError, ChartError, RelationError) as exc:
        res.ok, res.failure = False, f"{type(exc).__name__}: {exc}"
    return res


class _RowFail(Exception):
    pass


def families_verify(fx: Fixture) -> AuditReport:
    merged: list[str] = []
    rows = [verify_record(rec, fx, merged) for rec in fx.records]
    total = sum(r.count for r in rows)
    return AuditReport(rows, total, fx.total, merged)


def verify_lift_scripts(fx: Fixture):
    """Replay every shipped lift script against the sphere fixture."""
    from .moore import replay_lift_argument

    out = {}
    for name, s in sorted(fx.scripts.items()):
        out[name] = replay_lift_argument(s, CofiberLadder(fx.sphere, s.i))
    return out
