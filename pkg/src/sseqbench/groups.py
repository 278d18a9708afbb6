"""Finitely generated abelian groups with named generators.

A group is Z^n modulo a relation lattice.  Generator orders (0 for infinite
order) contribute the diagonal relations; extra relations are integer rows.
Elements are integer coefficient vectors over the generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import snf


class GroupError(ValueError):
    pass


@dataclass
class PresentedAbGroup:
    generators: list[tuple[str, int]]
    relations: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.generators)
        for name, order in self.generators:
            if order < 0:
                raise GroupError(f"generator {name} has negative order {order}")
        for r in self.relations:
            if len(r) != n:
                raise GroupError(f"relation {r} has length {len(r)}, expected {n}")
        self._names = {name: i for i, (name, _) in enumerate(self.generators)}
        if len(self._names) != n:
            raise GroupError("duplicate generator names")

    # construction helpers

    @classmethod
    def zero(cls) -> "PresentedAbGroup":
        return cls([])

    @classmethod
    def cyclic(cls, name: str, order: int) -> "PresentedAbGroup":
        return cls([(name, order)])

    @classmethod
    def from_dict(cls, data) -> "PresentedAbGroup":
        gens = [(g[0], int(g[1])) for g in data.get("generators", [])]
        return cls(gens, [list(map(int, r)) for r in data.get("relations", [])])

    def to_dict(self) -> dict:
        out = {"generators": [[n, o] for n, o in self.generators]}
        if self.relations:
            out["relations"] = [list(r) for r in self.relations]
        return out

    # basic data

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.generators]

    def index(self, name: str) -> int:
        try:
            return self._names[name]
        except KeyError:
            raise GroupError(f"no generator named {name!r}") from None

    def has(self, name: str) -> bool:
        return name in self._names

    def relation_lattice(self) -> list[list[int]]:
        n = self.ngens
        rows = []
        for i, (_, order) in enumerate(self.generators):
            if order:
                row = [0] * n
                row[i] = order
                rows.append(row)
        rows.extend(list(r) for r in self.relations if any(r))
        return rows

    def smith_form(self) -> snf.SmithForm:
        return snf.smith(self.relation_lattice(), self.ngens)

    def invariants(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, torsion invariant factors > 1 in divisibility order)."""
        rels = self.relation_lattice()
        if not rels:
            return self.ngens, ()
        f = self.smith_form()
        factors = f.invariant_factors()
        torsion = tuple(d for d in factors if d > 1)
        return self.ngens - len(factors), torsion

    def canonical(self) -> "PresentedAbGroup":
        """Invariant-factor presentation; canonical and idempotent."""
        free, torsion = self.invariants()
        gens = [(f"Z/{d}#{k}", d) for k, d in enumerate(torsion)]
        gens += [(f"Z#{k}", 0) for k in range(free)]
        return PresentedAbGroup(gens)

    def describe(self) -> str:
        free, torsion = self.invariants()
        parts = [f"Z/{d}" for d in torsion] + ["Z"] * free
        return " + ".join(parts) if parts else "0"

    def is_zero(self) -> bool:
        free, torsion = self.invariants()
        return free == 0 and not torsion

    def order(self) -> int:
        """Order of the group, 0 if infinite."""
        free, torsion = self.invariants()
        if free:
            return 0
        out = 1
        for d in torsion:
            out *= d
        return out

    def isomorphic(self, other: "PresentedAbGroup") -> bool:
        return self.invariants() == other.invariants()

    def is_elementary_2(self) -> bool:
        free, torsion = self.invariants()
        return free == 0 and all(d == 2 for d in torsion)

    # elements

    def vector(self, terms) -> list[int]:
        """Coefficient vector from {name: coefficient} or a list of names."""
        v = [0] * self.ngens
        if isinstance(terms, dict):
            for name, c in terms.items():
                v[self.index(name)] += int(c)
        else:
            for name in terms:
                v[self.index(name)] += 1
        return v

    def unit(self, name: str) -> list[int]:
        return self.vector({name: 1})

    def is_trivial_element(self, v: list[int]) -> bool:
        return snf.in_lattice(list(v), self.relation_lattice())

    def equal(self, v: list[int], w: list[int]) -> bool:
        return self.is_trivial_element([a - b for a, b in zip(v, w)])

    def in_subgroup(self, v: list[int], gens: list[list[int]]) -> bool:
        """Is v in the subgroup generated by ``gens`` (vectors over our generators)?"""
        return snf.in_lattice(list(v), list(gens) + self.relation_lattice())

    def coset_member(self, v: list[int], rep: list[int], gens: list[list[int]]) -> bool:
        return self.in_subgroup([a - b for a, b in zip(v, rep)], gens)

    def element_order(self, v: list[int]) -> int:
        """Order of the element v (0 when infinite)."""
        if self.is_trivial_element(v):
            return 1
        free, torsion = self.invariants()
        bound = 1
        for d in torsion:
            bound *= d
        k = 1
        while k <= bound:
            k += 1
            if self.is_trivial_element([k * x for x in v]):
                return k
        return 0

    def format(self, v: list[int]) -> str:
        terms = []
        for (name, _), c in zip(self.generators, v):
            if c == 1:
                terms.append(name)
            elif c:
                terms.append(f"{c}*{name}")
        return " + ".join(terms) if terms else "0"


@dataclass
class Hom:
    """Homomorphism given by an integer matrix: column j is the image of source generator j."""

    source: PresentedAbGroup
    target: PresentedAbGroup
    matrix: list[list[int]]

    def __post_init__(self):
        if len(self.matrix) != self.target.ngens or any(
            len(r) != self.source.ngens for r in self.matrix
        ):
            raise GroupError("matrix shape does not match source/target generators")

    @classmethod
    def from_terms(cls, source, target, images: dict) -> "Hom":
        """images: {source gen name: {target gen name: coefficient}}; missing gens map to 0."""
        m = [[0] * source.ngens for _ in range(target.ngens)]
        for sname, terms in images.items():
            j = source.index(sname)
            for tname, c in terms.items():
                m[target.index(tname)][j] += int(c)
        return cls(source, target, m)

    def apply(self, v: list[int]) -> list[int]:
        return snf.matvec(self.matrix, v) if self.matrix else []

    def images(self) -> list[list[int]]:
        return [self.apply(self.source.unit(n)) for n in self.source.names]

    def well_defined(self) -> bool:
        """Relations of the source map into the relation lattice of the target."""
        return all(self.target.is_trivial_element(self.apply(r)) for r in self.source.relation_lattice())

    def is_zero(self) -> bool:
        return all(self.target.is_trivial_element(img) for img in self.images())

    def compose(self, first: "Hom") -> "Hom":
        """self after first."""
        return Hom(first.source, self.target, snf.matmul(self.matrix, first.matrix) if self.matrix else [])


def parse_key(key: str) -> tuple[int, str]:
    """"2*Delta^6" -> (2, "Delta^6"); a bare name has coefficient 1."""
    key = key.strip()
    if "*" in key:
        c, name = key.split("*", 1)
        if c.strip().lstrip("-").isdigit():
            return int(c), name.strip()
    return 1, key


class LatticeMap:
    """A homomorphism given on a generating set of key vectors.

    Keys may be multiples of generators ("2*Delta^6"), which is how a
    differential defined only on a sublattice of the first page is written.
    Generators not touched by any key map to zero, as do source relations.
    ``apply`` raises GroupError outside the span of the keys.
    """

    def __init__(self, source: PresentedAbGroup, target: PresentedAbGroup, keys, images):
        self.source = source
        self.target = target
        n, m = source.ngens, target.ngens
        keys = [list(k) for k in keys]
        images = [list(w) for w in images]
        touched = {i for k in keys for i, x in enumerate(k) if x}
        for i in range(n):
            if i not in touched:
                keys.append([1 if j == i else 0 for j in range(n)])
                images.append([0] * m)
        for r in source.relation_lattice():
            keys.append(list(r))
            images.append([0] * m)
        self.keys = keys
        self.key_images = images
        self._cols = snf.transpose(keys, n) if keys else []

    @classmethod
    def from_terms(cls, source, target, images: dict) -> "LatticeMap":
        keys, imgs = [], []
        for key, terms in images.items():
            c, name = parse_key(key)
            v = [0] * source.ngens
            v[source.index(name)] = c
            w = [0] * target.ngens
            for tname, k in terms.items():
                w[target.index(tname)] += int(k)
            keys.append(v)
            imgs.append(w)
        return cls(source, target, keys, imgs)

    def apply(self, v: list[int]) -> list[int]:
        if self.source.ngens == 0:
            return [0] * self.target.ngens
        sol = snf.solve(self._cols, list(v), len(self.keys))
        if sol is None:
            raise GroupError(f"{self.source.format(v)} is outside the domain of the map")
        out = [0] * self.target.ngens
        for c, w in zip(sol, self.key_images):
            if c:
                for i, x in enumerate(w):
                    out[i] += c * x
        return out

    def well_defined(self) -> bool:
        """Every integer relation among the keys maps to a trivial element."""
        if not self.keys or self.source.ngens == 0:
            return True
        for k in snf.kernel_basis(self._cols, len(self.keys)):
            img = [0] * self.target.ngens
            for c, w in zip(k, self.key_images):
                for i, x in enumerate(w):
                    img[i] += c * x
            if not self.target.is_trivial_element(img):
                return False
        return True


# subquotients of Z^n, used for kernels, cokernels and page turning


def kernel_lattice(f: Hom) -> list[list[int]]:
    """Preimage in Z^n (n = source gens) of the target relation lattice under f.

    The result contains the source relation lattice when f is well defined.
    """
    n = f.source.ngens
    rels_t = f.target.relation_lattice()
    if n == 0:
        return []
    if f.target.ngens == 0:
        return snf.identity(n)
    # solve M x = R^T y : kernel of [M | -R^T]
    m = len(f.matrix)
    block = [list(f.matrix[i]) + [-r[i] for r in rels_t] for i in range(m)]
    ker = snf.kernel_basis(block, n + len(rels_t))
    return snf.lattice_basis([k[:n] for k in ker], n)


def subquotient(num: list[list[int]], den: list[list[int]], names: list[str]) -> tuple[PresentedAbGroup, list[list[int]]]:
    """The group span(num)/span(den) for lattices den inside num in Z^n.

    Returns the group presented on a basis of num, together with that basis
    (as vectors in Z^n) so that callers can name or transport generators.
    """
    n = len(names)
    basis = snf.lattice_basis(num, n)
    if not basis:
        return PresentedAbGroup([]), []
    bt = snf.transpose(basis)
    rels = []
    for d in den:
        c = snf.solve(bt, list(d))
        if c is None:
            raise GroupError("denominator is not contained in numerator")
        rels.append(c)
    gens = [(vector_name(b, names), 0) for b in basis]
    gens = _dedupe(gens)
    return PresentedAbGroup(gens, [r for r in rels if any(r)]), basis


def vector_name(v: list[int], names: list[str]) -> str:
    terms = []
    for name, c in zip(names, v):
        if c == 1:
            terms.append(name)
        elif c == -1:
            terms.append("-" + name)
        elif c:
            terms.append(f"{c}{name}")
    return "+".join(terms) if terms else "0"


def _dedupe(gens):
    seen: dict[str, int] = {}
    out = []
    for name, order in gens:
        k = seen.get(name, 0)
        seen[name] = k + 1
        out.append((name if k == 0 else f"{name}'{k}", order))
    return out


def simplify(group: PresentedAbGroup, basis: list[list[int]], names: list[str]) -> tuple[PresentedAbGroup, list[list[int]]]:
    """Drop generators that are trivial and turn diagonal relations into orders.

    Keeps generator names meaningful when the subquotient is already
    diagonal, which is the common case for charts.
    """
    n = group.ngens
    rels = [list(r) for r in group.relations if any(r)]
    orders = [o for _, o in group.generators]
    extra = []
    for r in rels:
        nz = [i for i, x in enumerate(r) if x]
        if len(nz) == 1:
            i = nz[0]
            orders[i] = abs(r[i]) if orders[i] == 0 else _gcd(orders[i], abs(r[i]))
        else:
            extra.append(r)
    keep = [i for i in range(n) if orders[i] != 1]
    # a generator of order 1 is zero, so its column can simply be dropped
    extra = [[r[i] for i in keep] for r in extra]
    gens = [(group.generators[i][0], orders[i]) for i in keep]
    return PresentedAbGroup(gens, [r for r in extra if any(r)]), [basis[i] for i in keep]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
