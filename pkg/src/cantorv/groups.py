"""Finite groups given by Cayley tables, with the builtin catalogue and subgroup
enumeration used by the bar complexes and the Segal checker."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .core import CantorError


class GroupError(CantorError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Elements are 0..order-1; ``table[a][b]`` is the product a*b."""

    name: str
    labels: tuple
    table: tuple

    def __post_init__(self):
        m = len(self.labels)
        if len(self.table) != m or any(len(row) != m for row in self.table):
            raise GroupError("Cayley table is not square")
        for row in self.table:
            if sorted(row) != list(range(m)):
                raise GroupError("Cayley table rows are not permutations")
        for col in zip(*self.table):
            if sorted(col) != list(range(m)):
                raise GroupError("Cayley table columns are not permutations")
        e = self.identity
        for a, b, c in itertools.product(range(m), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise GroupError(
                    f"not associative at ({self.labels[a]}, {self.labels[b]}, {self.labels[c]})")
        if any(self.table[e][a] != a for a in range(m)):
            raise GroupError("no two-sided identity")

    @property
    def order(self) -> int:
        return len(self.labels)

    @cached_property
    def identity(self) -> int:
        for e in range(len(self.labels)):
            if all(self.table[e][a] == a and self.table[a][e] == a for a in range(len(self.labels))):
                return e
        raise GroupError("no two-sided identity")

    @cached_property
    def inverses(self) -> tuple:
        e = self.identity
        return tuple(next(b for b in range(self.order) if self.table[a][b] == e)
                     for a in range(self.order))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def element(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise GroupError(f"{self.name} has no element {label!r}") from None

    def is_subgroup(self, elements: Iterable[int]) -> bool:
        s = set(elements)
        if self.identity not in s:
            return False
        return all(self.table[a][self.inverses[b]] in s for a in s for b in s)

    def closure(self, gens: Iterable[int]) -> frozenset:
        s = {self.identity}
        frontier = list(gens)
        while frontier:
            g = frontier.pop()
            if g in s:
                continue
            s.add(g)
            frontier.extend(self.table[g][h] for h in list(s))
            frontier.extend(self.table[h][g] for h in list(s))
        return frozenset(s)

    @cached_property
    def subgroups(self) -> tuple:
        """All subgroups, as joins of cyclic subgroups; sorted by (order, elements)."""
        cyclic = {self.closure([g]) for g in range(self.order)}
        found = set(cyclic)
        frontier = set(cyclic)
        while frontier:
            new = set()
            for h in frontier:
                for c in cyclic:
                    j = self.closure(h | c)
                    if j not in found:
                        new.add(j)
            found |= new
            frontier = new
        return tuple(sorted(found, key=lambda h: (len(h), sorted(h))))

    def element_order(self, g: int) -> int:
        return len(self.closure([g]))

    def subgroup_group(self, h: Iterable[int], name: str | None = None) -> "FiniteGroup":
        """A subgroup as a group in its own right (elements relabelled 0..|h|-1)."""
        els = sorted(h)
        if not self.is_subgroup(els):
            raise GroupError(f"{self.subgroup_label(els)} is not a subgroup of {self.name}")
        index = {x: i for i, x in enumerate(els)}
        table = tuple(tuple(index[self.table[a][b]] for b in els) for a in els)
        return FiniteGroup(name or f"{self.name}{self.subgroup_label(els)}",
                           tuple(self.labels[x] for x in els), table)

    def subgroup_label(self, h: Iterable[int]) -> str:
        return "{" + ",".join(self.labels[x] for x in sorted(h)) + "}"

    def __repr__(self):
        return f"FiniteGroup({self.name}, order {self.order})"


def _from_mul(name: str, elements: Sequence, mul, label=str) -> FiniteGroup:
    index = {x: i for i, x in enumerate(elements)}
    table = tuple(tuple(index[mul(a, b)] for b in elements) for a in elements)
    return FiniteGroup(name, tuple(label(x) for x in elements), table)


def cyclic(m: int) -> FiniteGroup:
    return _from_mul(f"Z{m}", list(range(m)), lambda a, b: (a + b) % m,
                     label=lambda a: "e" if a == 0 else f"t{a}" if m > 2 else "t")


def klein_four() -> FiniteGroup:
    els = [(0, 0), (1, 0), (0, 1), (1, 1)]
    names = {(0, 0): "e", (1, 0): "a", (0, 1): "b", (1, 1): "c"}
    return _from_mul("V4", els, lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2),
                     label=names.get)


def _perm_label(p):
    return "e" if p == tuple(range(len(p))) else "".join(str(i + 1) for i in p)


def symmetric3() -> FiniteGroup:
    els = sorted(itertools.permutations(range(3)))
    # (p*q)(i) = p(q(i))
    return _from_mul("S3", els, lambda p, q: tuple(p[q[i]] for i in range(3)), _perm_label)


def dihedral4() -> FiniteGroup:
    # symmetries of the square: r^i s^j, encoded as (i, j)
    els = [(i, j) for j in range(2) for i in range(4)]

    def mul(x, y):
        i, j = x
        k, l = y
        return ((i + (k if j == 0 else -k)) % 4, (j + l) % 2)

    def label(x):
        i, j = x
        if x == (0, 0):
            return "e"
        return ("r" + (str(i) if i > 1 else "") if i else "") + ("s" if j else "")

    return _from_mul("D4", els, mul, label)


def quaternion8() -> FiniteGroup:
    basis = ["1", "i", "j", "k"]
    prod = {
        ("1", x): (1, x) for x in basis
    }
    prod.update({(x, "1"): (1, x) for x in basis})
    prod.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    els = [(s, b) for s in (1, -1) for b in basis]

    def mul(x, y):
        sign, b = prod[(x[1], y[1])]
        return (x[0] * y[0] * sign, b)

    def label(x):
        if x == (1, "1"):
            return "e"
        return ("-" if x[0] < 0 else "") + x[1]

    return _from_mul("Q8", els, mul, label)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    els = [(a, b) for a in range(g.order) for b in range(h.order)]
    return _from_mul(f"{g.name}x{h.name}", els,
                     lambda x, y: (g.mul(x[0], y[0]), h.mul(x[1], y[1])),
                     lambda x: f"({g.labels[x[0]]},{h.labels[x[1]]})")


BUILTINS = {
    "Z2": lambda: cyclic(2),
    "Z3": lambda: cyclic(3),
    "Z4": lambda: cyclic(4),
    "V4": klein_four,
    "S3": symmetric3,
    "D4": dihedral4,
    "Q8": quaternion8,
}


def builtin(name: str) -> FiniteGroup:
    key = name.strip()
    if key in BUILTINS:
        return BUILTINS[key]()
    if key.startswith("Z") and key[1:].isdigit() and int(key[1:]) >= 1:
        return cyclic(int(key[1:]))
    raise GroupError(f"unknown builtin group {name!r} (known: {', '.join(BUILTINS)})")


def trivial_group() -> FiniteGroup:
    return FiniteGroup("1", ("e",), ((0,),))


def small_groups(max_order: int = 8) -> list:
    """One group from each isomorphism class of order <= max_order (max 8)."""
    if max_order > 8:
        raise GroupError("catalogue only covers orders up to 8")
    z2 = cyclic(2)
    out = [trivial_group()] + [cyclic(m) for m in range(2, max_order + 1)]
    if max_order >= 4:
        out.append(klein_four())
    if max_order >= 6:
        out.append(symmetric3())
    if max_order >= 8:
        out += [direct_product(cyclic(4), z2), direct_product(klein_four(), z2),
                dihedral4(), quaternion8()]
    return sorted(out, key=lambda g: (g.order, g.name))


def group_from_csv(text: str, name: str = "G") -> FiniteGroup:
    """Cayley table CSV.  First row: a corner cell then the column labels; each
    further row: a row label then the products as labels."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if len(rows) < 2:
        raise GroupError("CSV needs a header row and at least one table row")
    header = [c.strip() for c in rows[0][1:]]
    index = {lab: i for i, lab in enumerate(header)}
    if len(index) != len(header):
        raise GroupError("duplicate labels in CSV header")
    table = []
    for lineno, row in enumerate(rows[1:], start=2):
        cells = [c.strip() for c in row]
        if len(cells) != len(header) + 1:
            raise GroupError(f"CSV line {lineno}: expected {len(header) + 1} cells")
        if cells[0] != header[lineno - 2]:
            raise GroupError(f"CSV line {lineno}: row label {cells[0]!r} out of order")
        try:
            table.append(tuple(index[c] for c in cells[1:]))
        except KeyError as exc:
            raise GroupError(f"CSV line {lineno}: unknown label {exc.args[0]!r}") from None
    return FiniteGroup(name, tuple(header), tuple(table))


def group_to_csv(g: FiniteGroup) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["*", *g.labels])
    for a in range(g.order):
        w.writerow([g.labels[a], *(g.labels[g.mul(a, b)] for b in range(g.order))])
    return out.getvalue()
