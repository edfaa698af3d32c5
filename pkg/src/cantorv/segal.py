"""The Segal condition for a collection of subgroups of a finite group, and the
homology comparison between the union of the BS and BG.

A family (g_j, S_j) is satisfied by g when g^-1 g_j lies in some member
S'_j ⊇ S_j, i.e. when g lies in W(g_j, S_j) = ∪ g_j S' over members S' ⊇ S_j.
A family passes iff its W-sets have a common point, so only the intersection
of the W-sets matters.  Enumerating the distinct intersections reached by
families of growing size decides every size at once: once no new
intersection appears, larger families add nothing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .groups import FiniteGroup, GroupError
from .homology import (
    HomologyResult, Poset, bar_subcomplex, complex_homology, group_homology, nerve_complex,
)


@dataclass(frozen=True, eq=False)
class SubgroupCollection:
    group: FiniteGroup
    members: tuple

    def __init__(self, group: FiniteGroup, members: Iterable[Iterable[int]]):
        ms = []
        for H in members:
            H = frozenset(H)
            if not group.is_subgroup(H):
                raise GroupError(f"{group.subgroup_label(H)} is not a subgroup of {group.name}")
            if H not in ms:
                ms.append(H)
        if not ms:
            raise GroupError("empty subgroup collection")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "members", tuple(sorted(ms, key=lambda h: (len(h), sorted(h)))))

    def label(self, H) -> str:
        G = self.group
        if len(H) == G.order:
            return G.name
        gens = [g for g in sorted(H) if g != G.identity and G.closure([g]) == H]
        if gens:
            return f"<{G.labels[gens[0]]}>"
        return G.subgroup_label(H)

    def enlargements(self, H) -> list:
        """Members containing H, smallest first."""
        return [S for S in self.members if H <= S]

    def describe(self) -> str:
        return "{" + ", ".join(self.label(H) for H in self.members) + "}"


def named_collection(G: FiniteGroup, which: str) -> SubgroupCollection:
    """Collections by keyword: all, proper, trivial, whole, cyclic, maximal,
    order<k>, or explicit subgroups 'a|b;c' (generators per member)."""
    subs = G.subgroups
    e = frozenset([G.identity])
    whole = frozenset(range(G.order))
    proper = [H for H in subs if H != whole]
    if which == "all":
        members = subs
    elif which == "proper":
        members = proper
    elif which == "trivial":
        members = [e]
    elif which == "whole":
        members = [whole]
    elif which == "cyclic":
        members = [H for H in subs if any(G.closure([g]) == H for g in H)]
    elif which == "maximal":
        members = [H for H in proper if not any(H < K for K in proper)]
    elif which.startswith("order") and which[5:].isdigit():
        members = [H for H in subs if len(H) == int(which[5:])]
    else:
        members = []
        for part in which.split(";"):
            gens = [G.element(x.strip()) for x in part.split("|") if x.strip()]
            members.append(G.closure(gens))
    if not members:
        raise GroupError(f"collection {which!r} is empty for {G.name}")
    return SubgroupCollection(G, members)


@dataclass
class SegalVerdict:
    passed: bool
    bound: int
    certified_all_sizes: bool
    witness: tuple | None = None
    failing_size: int | None = None
    states: int = 0
    explored: list = field(default_factory=list)

    def to_json(self, C: SubgroupCollection) -> dict:
        G = C.group
        wit = None
        if self.witness is not None:
            wit = [[G.labels[g], C.label(H)] for g, H in self.witness]
        return {"segal": "pass" if self.passed else "fail", "bound": self.bound,
                "certified_all_sizes": self.certified_all_sizes, "witness": wit,
                "failing_size": self.failing_size, "states": self.states}


def w_set(C: SubgroupCollection, g: int, H) -> frozenset:
    G = C.group
    out = set()
    for S in C.enlargements(H):
        out.update(G.mul(g, s) for s in S)
    return frozenset(out)


def family_passes(C: SubgroupCollection, family) -> int | None:
    """A common translating element for the family, or None."""
    common = frozenset(range(C.group.order))
    for g, H in family:
        common &= w_set(C, g, H)
    return min(common) if common else None


def _pairs(C: SubgroupCollection) -> list:
    """(element, member) pairs, the identity enumerated last."""
    G = C.group
    els = [g for g in range(G.order) if g != G.identity] + [G.identity]
    return [(g, H) for g in els for H in C.members]


def _sorted_family(family) -> tuple:
    return tuple(sorted(family, key=lambda p: (p[0], len(p[1]), sorted(p[1]))))


def check_segal(C: SubgroupCollection, k: int | None = None) -> SegalVerdict:
    """Decide the Segal condition for every family size up to k (default |G|).
    Families of size <= 2 are enumerated explicitly in order; larger sizes are
    handled through the distinct intersections of W-sets.  If those stop
    changing, the verdict holds for all sizes."""
    G = C.group
    if k is None:
        k = G.order
    if k < 1:
        raise GroupError("family size bound must be >= 1")
    pairs = _pairs(C)
    wsets = [w_set(C, g, H) for g, H in pairs]
    for size in range(1, min(k, 2) + 1):
        for idx in itertools.combinations_with_replacement(range(len(pairs)), size):
            common = frozenset.intersection(*(wsets[i] for i in idx))
            if not common:
                return SegalVerdict(False, k, True, _sorted_family(pairs[i] for i in idx), size)
    # states: intersection -> representative family (indices)
    states = {}
    for i, w in enumerate(wsets):
        states.setdefault(w, (i,))
    size = 1
    explored = [len(states)]
    while size < k:
        new = dict(states)
        for state, rep in states.items():
            for i, w in enumerate(wsets):
                s = state & w
                if s not in new:
                    fam = tuple(sorted(rep + (i,)))
                    if not s:
                        return SegalVerdict(False, k, True,
                                            _sorted_family(pairs[j] for j in fam), len(fam),
                                            len(new), explored)
                    new[s] = fam
        size += 1
        explored.append(len(new))
        if len(new) == len(states):
            return SegalVerdict(True, k, True, states=len(new), explored=explored)
        states = new
    # bound reached while new intersections were still appearing
    closed = all((state & w) in states for state in states for w in wsets)
    return SegalVerdict(True, k, closed, states=len(states), explored=explored)


def verify_witness(C: SubgroupCollection, family) -> bool:
    """True iff the family really has no translating element."""
    return family_passes(C, family) is None


# -- homology comparison --------------------------------------------------------------------

@dataclass
class DecompositionReport:
    collection: SubgroupCollection
    segal: SegalVerdict
    union_homology: HomologyResult
    group_homology: HomologyResult
    nerve_homology: HomologyResult
    degree: int

    @property
    def agree(self) -> list:
        return [a == b for a, b in zip(self.union_homology.signature(),
                                       self.group_homology.signature())]

    @property
    def consistent(self) -> bool:
        """A certified pass must come with agreeing homology."""
        certified_pass = self.segal.passed and self.segal.certified_all_sizes
        return not certified_pass or all(self.agree)

    def to_json(self) -> dict:
        out = self.segal.to_json(self.collection)
        out.update({
            "group": self.collection.group.name,
            "collection": self.collection.describe(),
            "degree": self.degree,
            "homology": [[str(a), str(b)] for a, b in zip(self.union_homology.groups,
                                                          self.group_homology.groups)],
            "agree": self.agree,
            "nerve": [str(h) for h in self.nerve_homology.groups],
            "consistent": self.consistent,
        })
        return out


_GROUP_CACHE: dict = {}


def _full_homology(G: FiniteGroup, d: int) -> HomologyResult:
    key = (G.name, G.table, d)
    if key not in _GROUP_CACHE:
        _GROUP_CACHE[key] = group_homology(G, d)
    return _GROUP_CACHE[key]


def decomposition_check(C: SubgroupCollection, d: int = 3, k: int | None = None) -> DecompositionReport:
    G = C.group
    verdict = check_segal(C, k)
    whole = frozenset(range(G.order))
    if whole in C.members:
        union = _full_homology(G, d)
    else:
        union = complex_homology(bar_subcomplex(G, C.members, d))
    poset = Poset(list(range(len(C.members))),
                  {(i, j) for i, a in enumerate(C.members) for j, b in enumerate(C.members)
                   if a < b})
    nerve = complex_homology(nerve_complex(poset, d))
    return DecompositionReport(C, verdict, union, _full_homology(G, d), nerve, d)


def sweep_collections(G: FiniteGroup, exhaustive_limit: int = 6) -> list:
    """Collections used by the builtin sweep: every nonempty set of subgroups
    when there are at most ``exhaustive_limit`` subgroups, otherwise the named
    collections, every singleton and every singleton plus G."""
    subs = list(G.subgroups)
    if len(subs) <= exhaustive_limit:
        return [SubgroupCollection(G, c) for k in range(1, len(subs) + 1)
                for c in itertools.combinations(subs, k)]
    out = [named_collection(G, s) for s in
           ("all", "proper", "trivial", "whole", "cyclic", "maximal")]
    whole = frozenset(range(G.order))
    out += [SubgroupCollection(G, [H]) for H in subs]
    out += [SubgroupCollection(G, [H, whole]) for H in subs if H != whole]
    for size in sorted({len(H) for H in subs}):
        out.append(named_collection(G, f"order{size}"))
    return out
