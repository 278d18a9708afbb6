"""Words in named homotopy classes, a cited relation database, relation
chains with replayable transcripts, and Toda bracket bookkeeping.

A word is coefficient * tau^k * (product of named generators).  Bidegrees
add, and tau has bidegree (0, -1).  Relations are equalities of words that
hold in a named ambient ("S" for the sphere, "TMF" for TMF); every relation
carries a provenance string.  A chain step rewrites one word into the next
by a single relation, multiplied through by a common monomial.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .chart import BiDegree


class RelationError(ValueError):
    pass


class ProvenanceError(RelationError):
    pass


class BidegreeError(RelationError):
    pass


TAU = BiDegree(0, -1)

_TOKEN = re.compile(r"\[[^\]]*\](?:\^-?\d+)?|\S+")


def _split(text: str) -> list[str]:
    return _TOKEN.findall(text.strip())


@dataclass(frozen=True)
class Word:
    coef: int = 1
    tau: int = 0
    factors: tuple = ()  # sorted (name, power) pairs

    @classmethod
    def parse(cls, text) -> "Word":
        if isinstance(text, Word):
            return text
        text = str(text).strip()
        if text in ("0", ""):
            return ZERO
        coef, tau = 1, 0
        powers: Counter = Counter()
        for tok in _split(text):
            if re.fullmatch(r"-?\d+", tok):
                coef *= int(tok)
                continue
            if tok == "-":
                coef = -coef
                continue
            name, power = tok, 1
            m = re.fullmatch(r"(.*?)\^(-?\d+)", tok)
            if m and not tok.endswith("]"):
                name, power = m.group(1), int(m.group(2))
            if name == "tau":
                tau += power
            else:
                powers[name] += power
        return cls(coef, tau, tuple(sorted((n, p) for n, p in powers.items() if p)))

    @property
    def is_zero(self) -> bool:
        return self.coef == 0

    def counter(self) -> Counter:
        return Counter(dict(self.factors))

    def times(self, other: "Word") -> "Word":
        if self.is_zero or other.is_zero:
            return ZERO
        c = self.counter() + other.counter()
        return Word(self.coef * other.coef, self.tau + other.tau, tuple(sorted(c.items())))

    def tau_free(self) -> "Word":
        return Word(self.coef, 0, self.factors)

    def monomial(self) -> tuple:
        """The generator part, ignoring coefficient and tau."""
        return self.factors

    def bidegree(self, gens: dict[str, BiDegree]) -> BiDegree:
        s, f = 0, -self.tau
        for name, p in self.factors:
            if name not in gens:
                raise RelationError(f"unknown generator {name!r}")
            s += p * gens[name].stem
            f += p * gens[name].filtration
        return BiDegree(s, f)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        if self.coef != 1:
            parts.append(str(self.coef))
        if self.tau:
            parts.append("tau" if self.tau == 1 else f"tau^{self.tau}")
        for name, p in self.factors:
            parts.append(name if p == 1 else f"{name}^{p}")
        return " ".join(parts) if parts else "1"


ZERO = Word(0, 0, ())
ONE = Word(1, 0, ())


def divide(w: Word, d: Word) -> Word | None:
    """The monomial m with w = m * d, or None."""
    if d.is_zero or w.is_zero:
        return None
    if w.coef % d.coef or w.tau < d.tau:
        return None
    wc, dc = w.counter(), d.counter()
    if any(wc[n] < p for n, p in dc.items()):
        return None
    rest = wc - dc
    return Word(w.coef // d.coef, w.tau - d.tau, tuple(sorted(rest.items())))


@dataclass
class Relation:
    id: str
    lhs: Word
    rhs: Word
    ambient: str = "TMF"
    provenance: str = ""

    def to_dict(self) -> dict:
        return {"id": self.id, "lhs": str(self.lhs), "rhs": str(self.rhs), "ambient": self.ambient, "provenance": self.provenance}

    @classmethod
    def from_dict(cls, d) -> "Relation":
        return cls(d["id"], Word.parse(d["lhs"]), Word.parse(d["rhs"]), d.get("ambient", "TMF"), d.get("provenance", ""))

    def problems(self, gens) -> list[str]:
        out = []
        if not self.provenance.strip():
            out.append(f"relation {self.id} has no provenance")
        try:
            bl = self.lhs.bidegree(gens)
            if not self.rhs.is_zero:
                br = self.rhs.bidegree(gens)
                if bl != br:
                    out.append(f"relation {self.id}: {self.lhs} at {bl} but {self.rhs} at {br}")
        except RelationError as exc:
            out.append(f"relation {self.id}: {exc}")
        return out


@dataclass
class RelationDB:
    generators: dict[str, BiDegree]
    relations: list[Relation] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data) -> "RelationDB":
        gens = {n: BiDegree.parse(bd) for n, bd in data["generators"].items()}
        db = cls(gens)
        for r in data.get("relations", []):
            db.add(Relation.from_dict(r))
        return db

    def to_dict(self) -> dict:
        return {
            "generators": {n: bd.as_list() for n, bd in self.generators.items()},
            "relations": [r.to_dict() for r in self.relations],
        }

    @classmethod
    def load(cls, path) -> "RelationDB":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def add(self, rel: Relation) -> None:
        if not rel.provenance.strip():
            raise ProvenanceError(f"relation {rel.id} has no provenance")
        probs = rel.problems(self.generators)
        if probs:
            raise BidegreeError(probs[0])
        if any(r.id == rel.id for r in self.relations):
            raise RelationError(f"duplicate relation id {rel.id}")
        self.relations.append(rel)

    def get(self, rid: str) -> Relation:
        for r in self.relations:
            if r.id == rid:
                return r
        raise RelationError(f"no relation {rid}")

    def without(self, rid: str) -> "RelationDB":
        self.get(rid)
        return RelationDB(dict(self.generators), [r for r in self.relations if r.id != rid])

    def bidegree(self, w) -> BiDegree:
        return Word.parse(w).bidegree(self.generators)

    def is_zero(self, w, ambients=None) -> Relation | None:
        """A relation L = 0 with L dividing w, if the database has one."""
        w = Word.parse(w)
        if w.is_zero:
            return Relation("trivial", ZERO, ZERO, "any", "zero word")
        for r in self.relations:
            if ambients and r.ambient not in ambients:
                continue
            if r.rhs.is_zero and divide(w, r.lhs) is not None:
                return r
        return None


# chains


@dataclass
class Step:
    index: int
    relation: str
    direction: str  # "lr" rewrites lhs -> rhs, "rl" the reverse
    multiplier: str

    def to_dict(self):
        return {"index": self.index, "relation": self.relation, "direction": self.direction, "multiplier": self.multiplier}


@dataclass
class ChainResult:
    words: list[Word]
    steps: list[Step]
    failure: str | None = None
    bidegree: BiDegree | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def transcript(self) -> dict:
        return {
            "words": [str(w) for w in self.words],
            "bidegree": self.bidegree.as_list() if self.bidegree else None,
            "steps": [s.to_dict() for s in self.steps],
            "failure": self.failure,
        }


def rewrite(w: Word, rel: Relation, direction: str) -> Word | None:
    src, dst = (rel.lhs, rel.rhs) if direction == "lr" else (rel.rhs, rel.lhs)
    if src.is_zero or dst.is_zero:
        return None
    m = divide(w, src)
    if m is None:
        return None
    return m.times(dst)


def find_step(a: Word, b: Word, db: RelationDB, ambients=None) -> tuple[Relation, str, Word] | None:
    for rel in db.relations:
        if ambients and rel.ambient not in ambients:
            continue
        for direction in ("lr", "rl"):
            out = rewrite(a, rel, direction)
            if out is not None and out == b:
                src = rel.lhs if direction == "lr" else rel.rhs
                return rel, direction, divide(a, src)
    return None


def check_relation_chain(words, db: RelationDB, ambients=None) -> ChainResult:
    """Each consecutive pair must be related by one database relation."""
    ws = [Word.parse(w) for w in words]
    res = ChainResult(ws, [])
    try:
        bds = [db.bidegree(w) for w in ws]
    except RelationError as exc:
        res.failure = str(exc)
        return res
    res.bidegree = bds[0] if bds else None
    for i, bd in enumerate(bds):
        if bd != bds[0]:
            res.failure = f"word {i} ({ws[i]}) is at {bd}, not {bds[0]}"
            return res
    for i in range(len(ws) - 1):
        found = find_step(ws[i], ws[i + 1], db, ambients)
        if found is None:
            res.failure = f"no single relation takes {ws[i]} to {ws[i + 1]}"
            return res
        rel, direction, mult = found
        res.steps.append(Step(i, rel.id, direction, str(mult)))
    return res


def replay(transcript: dict, db: RelationDB) -> bool:
    """Re-apply a recorded transcript and confirm it regenerates every word."""
    ws = [Word.parse(w) for w in transcript["words"]]
    if transcript.get("failure"):
        return False
    if len(transcript["steps"]) != len(ws) - 1:
        return False
    for st in transcript["steps"]:
        rel = db.get(st["relation"])
        i = st["index"]
        src, dst = (rel.lhs, rel.rhs) if st["direction"] == "lr" else (rel.rhs, rel.lhs)
        mult = Word.parse(st["multiplier"])
        if mult.times(src) != ws[i] or mult.times(dst) != ws[i + 1]:
            return False
    return True


# Toda brackets


@dataclass
class BracketRecord:
    entries: list[Word]
    empty: bool = False
    contains: Word | None = None
    outer: Word | None = None
    outer_side: str | None = None
    provenance: str = ""
    label: str = ""

    @classmethod
    def from_dict(cls, d) -> "BracketRecord":
        return cls(
            [Word.parse(e) for e in d["entries"]],
            bool(d.get("empty", False)),
            Word.parse(d["contains"]) if d.get("contains") else None,
            Word.parse(d["outer"]) if d.get("outer") else None,
            d.get("outer_side"),
            d.get("provenance", ""),
            d.get("label", ""),
        )

    def to_dict(self) -> dict:
        out = {"entries": [str(e) for e in self.entries], "empty": self.empty, "provenance": self.provenance}
        if self.label:
            out["label"] = self.label
        if self.contains is not None:
            out["contains"] = str(self.contains)
        if self.outer is not None:
            out["outer"] = str(self.outer)
            out["outer_side"] = self.outer_side
        return out

    def bidegree(self, db: RelationDB) -> BiDegree:
        """Entries add, plus (1, -1) for the bracket itself."""
        bd = BiDegree(1, -1) if len(self.entries) == 3 else BiDegree(len(self.entries) - 2, -(len(self.entries) - 2))
        for e in self.entries:
            bd = bd + db.bidegree(e)
        if self.outer is not None:
            bd = bd + db.bidegree(self.outer)
        return bd

    def __str__(self) -> str:
        inner = "<" + ", ".join(str(e) for e in self.entries) + ">"
        if self.outer is None:
            return inner
        return f"{self.outer} {inner}" if self.outer_side == "left" else f"{inner} {self.outer}"


@dataclass
class ForcingResult:
    bracket: BracketRecord
    status: str  # "proved" or "unresolved"
    disjunction: tuple[Word, Word]
    nonzero: Word | None
    reason: str

    def text(self) -> str:
        a, b = self.disjunction
        head = f"{self.bracket} is empty, so {a} != 0 or {b} != 0"
        if self.status == "proved":
            return f"{head}; {self.reason}; hence {self.nonzero} != 0"
        return f"{head}; unresolved: {self.reason}"


def force_nonzero_from_empty(bracket: BracketRecord, db: RelationDB) -> ForcingResult:
    """<a, b, c> empty means a b != 0 or b c != 0; close the disjunction with the database."""
    if len(bracket.entries) != 3:
        raise RelationError("forcing is implemented for threefold brackets")
    if not bracket.empty:
        raise RelationError(f"{bracket} is not recorded as empty")
    a, b, c = bracket.entries
    ab, bc = a.times(b), b.times(c)
    z_ab, z_bc = db.is_zero(ab), db.is_zero(bc)
    if z_ab and z_bc:
        raise RelationError(f"{bracket}: both {ab} and {bc} vanish, so the bracket is defined and cannot be empty")
    if z_bc:
        return ForcingResult(bracket, "proved", (ab, bc), ab, f"{bc} = 0 by {z_bc.id} ({z_bc.provenance})")
    if z_ab:
        return ForcingResult(bracket, "proved", (ab, bc), bc, f"{ab} = 0 by {z_ab.id} ({z_ab.provenance})")
    return ForcingResult(bracket, "unresolved", (ab, bc), None, "the database proves neither product zero")


def shuffle(bracket: BracketRecord, side: str, factor=None, db: RelationDB | None = None) -> BracketRecord:
    """Juggling: a<b,c,d> = <a,b,c>d when a b = 0 (side "left"), and
    <a,b,c>d = a<b,c,d> when c d = 0 (side "right").

    ``factor`` is the outside factor; it defaults to the record's own.
    The annihilation hypothesis is checked against the database.
    """
    if len(bracket.entries) != 3:
        raise RelationError("shuffling is implemented for threefold brackets")
    if factor is None:
        if bracket.outer is None or bracket.outer_side != side:
            raise RelationError(f"{bracket} has no outside factor on the {side}")
        factor = bracket.outer
    else:
        factor = Word.parse(factor)
        if bracket.outer is not None:
            raise RelationError(f"{bracket} already has an outside factor")
    a, b, c = bracket.entries
    if side == "left":
        need = factor.times(a)
        new_entries, new_outer, new_side = [factor, a, b], c, "right"
    elif side == "right":
        need = c.times(factor)
        new_entries, new_outer, new_side = [b, c, factor], a, "left"
    else:
        raise RelationError(f"side must be 'left' or 'right', not {side!r}")
    if db is not None:
        z = db.is_zero(need)
        if z is None:
            raise RelationError(f"juggling needs {need} = 0, which the database does not record")
        why = f"{need} = 0 by {z.id}"
    else:
        why = f"{need} = 0 assumed"
    contains = None
    if bracket.contains is not None:
        contains = factor.times(bracket.contains) if side == "left" else bracket.contains.times(factor)
    prov = f"juggled from {bracket} using {why}"
    return BracketRecord(new_entries, False, contains, new_outer, new_side, prov, bracket.label)
