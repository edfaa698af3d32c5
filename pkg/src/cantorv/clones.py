"""Clones of C_{n,r} and the constructions built from them.

A clone here is the subalgebra generated by the basis elements at a
prefix-free, incomplete set of addresses.  Such a subalgebra is the set of
elements whose normal-form leaves all lie in the union of the cones below
those addresses, so containment, intersection and disjointness reduce to
prefix arithmetic.  Two codes generate the same clone iff their collapses
(full sibling families merged into the parent) agree.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    Address, CantorError, PrefixCode, Signature, SignatureError, address_term,
    code_validate, collapse, complement_addresses, is_complete, leaves,
    longer_of_comparable,
)
from .thompson import (
    Tableau, TableauError, _lookup, _make, apply, compose, identity, inverse,
    permute_roots, reduce_tableau, stabilize,
)


class CloneError(CantorError):
    pass


@dataclass(frozen=True)
class Clone:
    sig: Signature
    addresses: tuple

    def __init__(self, sig: Signature, addresses: Iterable[Address]):
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "addresses", tuple(sorted(set(addresses))))
        rep = code_validate(PrefixCode(sig, self.addresses), "clone")
        if not rep.ok:
            raise CloneError(f"not a clone: {rep.reason} {rep.witness}")

    @classmethod
    def _trusted(cls, sig: Signature, addresses: tuple) -> "Clone":
        """Skip validation for codes derived from a valid clone."""
        c = object.__new__(cls)
        object.__setattr__(c, "sig", sig)
        object.__setattr__(c, "addresses", addresses)
        return c

    def __iter__(self):
        return iter(self.addresses)

    def __len__(self):
        return len(self.addresses)

    @property
    def code(self) -> PrefixCode:
        return PrefixCode(self.sig, self.addresses)

    def canonical(self) -> frozenset:
        """Generator set independent of the presentation."""
        return frozenset(collapse(self.addresses, self.sig.arity))

    def same_as(self, other: "Clone") -> bool:
        return self.sig == other.sig and self.canonical() == other.canonical()

    def __repr__(self):
        from .parsing import format_code_literal
        return format_code_literal(self.code)


def _same_sig(*clones):
    sigs = {c.sig for c in clones}
    if len(sigs) > 1:
        raise SignatureError("clones over different signatures")


def _covered(a: Address, table: set) -> bool:
    return any(p in table for p in a.prefixes())


def clone_contains(A: Clone, B: Clone) -> bool:
    """Is the clone generated by B inside the one generated by A?"""
    _same_sig(A, B)
    cov = collapse(A.addresses, A.sig.arity)
    return all(_covered(b, cov) for b in B)


def clone_intersect(A: Clone, B: Clone) -> Clone | None:
    """The intersection clone, or None when A and B are disjoint."""
    _same_sig(A, B)
    common = longer_of_comparable(A.addresses, B.addresses)
    return Clone(A.sig, common) if common else None


def clone_disjoint(A: Clone, B: Clone) -> bool:
    return clone_intersect(A, B) is None


def clone_split(A: Clone) -> tuple:
    return tuple(Clone(A.sig, (a.child(k) for a in A)) for k in range(A.sig.arity))


def clone_union(clones: Sequence[Clone]) -> list:
    """Address union of pairwise disjoint clones (may be complete)."""
    out = set()
    for c in clones:
        out.update(c)
    return sorted(out)


def _complement_within(root: Address, inside: Iterable[Address], n: int) -> list:
    """Minimal addresses below ``root`` covering cone(root) minus the cones of
    ``inside`` (addresses extending root)."""
    inside = set(inside)
    prefixes = set()
    for a in inside:
        prefixes.update(a.prefixes())
    out = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node in inside:
            continue
        if node in prefixes:
            stack.extend(node.child(k) for k in range(n - 1, -1, -1))
        else:
            out.append(node)
    return out


def cone_difference(A: Iterable[Address], B: Iterable[Address], n: int) -> list:
    """Addresses whose cones partition (cones of A) minus (cones of B)."""
    B = set(B)
    out = []
    for a in A:
        if _covered(a, B):
            continue
        below = [b for b in B if a.is_prefix_of(b)]
        out.extend(_complement_within(a, below, n) if below else [a])
    return sorted(out)


def disjointify(clones: Sequence[Clone]) -> list:
    """Pairwise disjoint refinements, processed in input order: on an overlap
    I between an earlier clone and a later one, the earlier keeps I·0 and the
    later gets I·1, ..., I·(n-1); the rest of each clone is untouched."""
    if not clones:
        raise CloneError("disjointify needs at least one clone")
    _same_sig(*clones)
    n = clones[0].sig.arity
    cur = list(clones)
    for j in range(1, len(cur)):
        for i in range(j):
            inter = clone_intersect(cur[i], cur[j])
            if inter is None:
                continue
            parts = clone_split(inter)
            cur[i] = Clone(cur[i].sig, cone_difference(cur[i], inter, n) + list(parts[0]))
            later = cone_difference(cur[j], inter, n)
            for p in parts[1:]:
                later.extend(p)
            cur[j] = Clone(cur[j].sig, later)
    return cur


def pairwise_disjoint(clones: Sequence[Clone]) -> bool:
    return all(clone_disjoint(a, b) for a, b in itertools.combinations(clones, 2))


def fixes_pointwise(v: Tableau, A: Clone) -> bool:
    """v fixes the generators of A, hence all of A."""
    if v.sig != A.sig:
        raise SignatureError("tableau and clone over different signatures")
    return all(apply(v, address_term(a)) == address_term(a) for a in A)


def image_code(v: Tableau, A: Clone) -> Clone:
    """Generators of v(A): the leaves of the images of A's generators."""
    out = []
    for a in A:
        out.extend(leaves(apply(v, address_term(a))))
    return Clone(A.sig, out)


def _pieces(v: Tableau, A: Clone) -> list:
    """Pairs (d, v(d)) with the d partitioning the cones of A, each mapped by v
    to a single address."""
    fwd = v.pairing
    out = []
    for a in A:
        try:
            d, w = _lookup(a, fwd)
            out.append((a, fwd[d].extend(w)))
        except TableauError:
            out.extend((d, e) for d, e in fwd.items() if a.is_prefix_of(d))
    return out


@dataclass
class SegalWitness:
    clones: list
    images: list
    g: Tableau
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def verify_segal_witness(family: Sequence[tuple], w: SegalWitness) -> dict:
    sig = w.g.sig
    gi = inverse(w.g)
    checks = {
        "contained": all(clone_contains(A, B) for (_, A), B in zip(family, w.clones)),
        "disjoint": pairwise_disjoint(w.clones),
        "images_disjoint": pairwise_disjoint(w.images),
        "images_match": all(image_code(v, B).same_as(im)
                            for (v, _), B, im in zip(family, w.clones, w.images)),
        "incomplete": not is_complete(sig, clone_union(w.clones)),
        "images_incomplete": not is_complete(sig, clone_union(w.images)),
    }
    checks["agrees"] = all(fixes_pointwise(compose(gi, v), B)
                           for (v, _), B in zip(family, w.clones))
    return checks


def segal_witness(family: Sequence[tuple]) -> SegalWitness:
    """For pairs (v_j, A_j): sub-clones A'_j of A_j and one g with g = v_j on
    every A'_j, with the A'_j pairwise disjoint, their images pairwise disjoint
    and neither union complete."""
    if not family:
        raise CloneError("empty family")
    vs = [v for v, _ in family]
    As = [A for _, A in family]
    sig = As[0].sig
    _same_sig(*As)
    if any(v.sig != sig for v in vs):
        raise SignatureError("family mixes signatures")
    n = sig.arity

    dom = disjointify(As)
    imgs = disjointify([image_code(v, A) for v, A in zip(vs, dom)])
    dom = [image_code(inverse(v), B) for v, B in zip(vs, imgs)]
    if is_complete(sig, clone_union(dom)) or is_complete(sig, clone_union(imgs)):
        dom[-1] = clone_split(dom[-1])[0]
    imgs = [image_code(v, A) for v, A in zip(vs, dom)]

    if all(v == vs[0] for v in vs):
        g = vs[0]
    else:
        pairs = []
        for v, A in zip(vs, dom):
            pairs.extend(_pieces(v, A))
        left = complement_addresses(sig, [d for d, _ in pairs])
        right = complement_addresses(sig, [e for _, e in pairs])
        if not left or not right:
            raise CloneError("internal: witness pieces cover everything")
        while len(left) != len(right):
            small = left if len(left) < len(right) else right
            small.sort()
            last = small.pop()
            small.extend(last.child(k) for k in range(n))
        pairs.extend(zip(sorted(left), sorted(right)))
        g = reduce_tableau(_make(sig, pairs))
    w = SegalWitness(dom, imgs, g)
    w.checks = verify_segal_witness(family, w)
    return w


# -- clone sequences ------------------------------------------------------------------------

def _zeros(addrs: Iterable[Address], k: int) -> tuple:
    return tuple(sorted(a.extend((0,) * k) for a in addrs))


@dataclass(frozen=True)
class CloneSeq:
    """A descending chain of clones; beyond the stored terms the chain
    continues by appending a 0 to every generator of the last term."""

    sig: Signature
    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise CloneError("clone sequence needs at least one term")
        clones = [Clone(self.sig, t) for t in self.terms]
        terms = tuple(c.addresses for c in clones)
        for k in range(1, len(clones)):
            if not clone_contains(clones[k - 1], clones[k]):
                raise CloneError(f"term {k + 1} is not contained in term {k}")
            if clones[k - 1].same_as(clones[k]):
                raise CloneError(f"term {k + 1} equals term {k}")
        object.__setattr__(self, "terms", terms)

    def __len__(self):
        return len(self.terms)

    def term(self, k: int) -> Clone:
        """The k-th clone, 1-based, continuing past the stored terms."""
        cache = self.__dict__.setdefault("_cache", {})
        if k not in cache:
            m = len(self.terms)
            words = self.terms[k - 1] if k <= m else _zeros(self.terms[-1], k - m)
            cache[k] = Clone._trusted(self.sig, words)
        return cache[k]

    def materialize(self, length: int) -> list:
        return [self.term(k) for k in range(1, length + 1)]

    def depth(self) -> int:
        return max(len(a.word) for a in self.terms[-1])

    def limit_points(self) -> dict:
        """Generators of the last stored term keyed by their limit point a·0^∞
        (trailing zeros stripped)."""
        out = {}
        for a in self.terms[-1]:
            w = a.word
            while w and w[-1] == 0:
                w = w[:-1]
            out.setdefault(Address(a.root, w), a)
        return out

    def is_strict(self) -> bool:
        return all(not self.term(k).same_as(self.term(k + 1)) for k in range(1, len(self.terms)))

    def __repr__(self):
        from .parsing import format_cloneseq
        return format_cloneseq(self)


def _stable_length(*seqs: CloneSeq) -> int:
    """Past this index every termwise comparison of the given sequences repeats."""
    return max(len(X) for X in seqs) + max(X.depth() for X in seqs) + 1


def seq_leq(X: CloneSeq, Y: CloneSeq) -> bool:
    """X_r ⊆ Y_r for every r."""
    L = _stable_length(X, Y)
    return all(clone_contains(Y.term(k), X.term(k)) for k in range(1, L + 1))


def seq_equal(X: CloneSeq, Y: CloneSeq) -> bool:
    return seq_leq(X, Y) and seq_leq(Y, X)


def seq_disjoint1(X: CloneSeq, Y: CloneSeq) -> bool:
    return clone_disjoint(X.term(1), Y.term(1))


def seq_sum(X: CloneSeq, Y: CloneSeq) -> CloneSeq | None:
    """Termwise union, defined when the terms are disjoint and their union is
    incomplete."""
    L = _stable_length(X, Y)
    terms = []
    for k in range(1, L + 1):
        a, b = X.term(k), Y.term(k)
        if not clone_disjoint(a, b):
            return None
        u = clone_union([a, b])
        if is_complete(X.sig, u):
            return None
        terms.append(tuple(u))
    return CloneSeq(X.sig, tuple(terms))


def seq_intersect(X: CloneSeq, Y: CloneSeq) -> CloneSeq | None:
    L = _stable_length(X, Y)
    terms = []
    for k in range(1, L + 1):
        c = clone_intersect(X.term(k), Y.term(k))
        if c is None:
            return None
        terms.append(c.addresses)
    return CloneSeq(X.sig, tuple(terms))


@dataclass
class SeqOps:
    leq: bool
    disjoint1: bool
    sum: CloneSeq | None
    intersectwise: CloneSeq | None


def seq_ops(X: CloneSeq, Y: CloneSeq) -> SeqOps:
    if X.sig != Y.sig:
        raise SignatureError("clone sequences over different signatures")
    return SeqOps(seq_leq(X, Y), seq_disjoint1(X, Y), seq_sum(X, Y), seq_intersect(X, Y))


@dataclass
class Membership:
    member: bool
    level: int | None
    bound: int
    per_level: list


def seq_membership(v: Tableau, X: CloneSeq) -> Membership:
    """Does v fix some term of X pointwise?  Fixing a term implies fixing every
    later one, and past ``bound`` the answer no longer changes, so checking
    levels 1..bound decides it."""
    if v.sig != X.sig:
        raise SignatureError("tableau and clone sequence over different signatures")
    dom_depth = max(len(d.word) for d in v.domain)
    bound = len(X) + dom_depth
    per_level = [fixes_pointwise(v, X.term(k)) for k in range(1, bound + 1)]
    level = next((k + 1 for k, ok in enumerate(per_level) if ok), None)
    return Membership(level is not None, level, bound, per_level)


# -- V(X) ≅ V_k ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SupportIso:
    """u in V_{n,k} acting on the k complement cones of A (root i on the i-th
    complement address), and as the identity on A."""

    clone: Clone
    complement: tuple

    @property
    def source(self) -> Signature:
        return Signature(self.clone.sig.arity, len(self.complement))

    def __call__(self, u: Tableau) -> Tableau:
        if u.sig != self.source:
            raise SignatureError(f"support_iso expects a tableau over {self.source}")
        C = self.complement
        pairs = [(a, a) for a in self.clone]
        pairs += [(C[d.root - 1].extend(d.word), C[e.root - 1].extend(e.word))
                  for d, e in zip(u.domain, u.range)]
        return reduce_tableau(_make(self.clone.sig, pairs))

    def inverse(self, g: Tableau) -> Tableau:
        """The preimage of an element of V(X_A)."""
        if not fixes_pointwise(g, self.clone):
            raise CloneError("element does not fix the clone pointwise")
        C = self.complement
        index = {c: i + 1 for i, c in enumerate(C)}
        fwd = g.pairing
        base = list(self.clone) + list(C)
        pieces = longer_of_comparable(g.domain, base)
        pairs = []
        for d in pieces:
            p, w = _lookup(d, fwd)
            e = fwd[p].extend(w)
            c = next((c for c in C if c.is_prefix_of(d)), None)
            if c is None:
                continue
            c2 = next((x for x in C if x.is_prefix_of(e)), None)
            if c2 is None:
                raise CloneError("internal: complement cone not preserved")
            pairs.append((Address(index[c], d.word[len(c.word):]),
                          Address(index[c2], e.word[len(c2.word):])))
        return reduce_tableau(_make(self.source, pairs))


def support_iso(A: Clone) -> SupportIso:
    return SupportIso(A, tuple(sorted(complement_addresses(A.sig, A))))


def stabilization_analog(outer: SupportIso, inner: SupportIso, u: Tableau) -> Tableau:
    """For clones A2 ⊆ A1 whose complements nest (C1 ⊆ C2), the map
    V_{k1} -> V_{k2} matching the inclusion V(X_{A1}) ⊆ V(X_{A2}): add an
    identity block and move root i onto the position of C1[i] inside C2."""
    C1, C2 = outer.complement, inner.complement
    if not set(C1) <= set(C2):
        raise CloneError("complements do not nest")
    rest = [c for c in C2 if c not in C1]
    order = list(C1) + rest
    perm = [C2.index(c) + 1 for c in order]
    return permute_roots(stabilize(u, len(C2) - len(C1)), perm)


def compatibility_square(A1: Clone, A2: Clone, u: Tableau) -> bool:
    """support_iso(A2)(stab(u)) == support_iso(A1)(u) for A2 ⊆ A1."""
    if not clone_contains(A1, A2):
        raise CloneError("the second clone must lie in the first")
    s1, s2 = support_iso(A1), support_iso(A2)
    return s2(stabilization_analog(s1, s2, u)) == s1(u)


# -- the poset Q = P ∪ P' -----------------------------------------------------------------

class HallObstruction(CloneError):
    """No choice of distinct limit points exists; ``members`` is a set of
    sequences with fewer limit points between them than members."""

    def __init__(self, members: list, points: set):
        self.members, self.points = members, points
        super().__init__(f"{len(members)} sequences share only {len(points)} limit points")


def _matching(P: Sequence[CloneSeq]) -> list:
    options = [sorted(X.limit_points()) for X in P]
    owner: dict = {}

    def augment(i, seen):
        for p in options[i]:
            if p in seen:
                continue
            seen.add(p)
            if p not in owner or augment(owner[p], seen):
                owner[p] = i
                return True
        return False

    for i in range(len(P)):
        seen: set = set()
        if not augment(i, seen):
            # the members reachable by alternating paths violate Hall's condition
            members = sorted({i} | {owner[p] for p in seen if p in owner})
            pts = set().union(*(set(options[j]) for j in members))
            if len(pts) >= len(members):
                raise CloneError("internal: matching failed without obstruction")
            raise HallObstruction([P[j] for j in members], pts)
    chosen = [None] * len(P)
    for p, i in owner.items():
        chosen[i] = P[i].limit_points()[p]
    return chosen


@dataclass
class PosetQ:
    elements: list
    primed: list
    in_P: list
    order: set
    retraction: list
    t: int

    def leq(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.order

    def to_poset(self):
        from .homology import Poset
        return Poset(list(range(len(self.elements))), set(self.order))


def build_Q(P: Sequence[CloneSeq]) -> PosetQ:
    """Minorants X' ≤ X (one per member, pairwise disjoint, jointly
    incomplete), all their nonempty sums P', and the map sending each element
    of Q = P ∪ P' to the largest element of P' below it."""
    if not P:
        raise CloneError("build_Q needs a nonempty set")
    sig = P[0].sig
    if any(X.sig != sig for X in P):
        raise SignatureError("sequences over different signatures")
    P = list(P)
    chosen = _matching(P)
    t = 0
    while True:
        gens = [a.extend((0,) * (t + 1)) for a in chosen]
        if all(not a.comparable(b) for a, b in itertools.combinations(gens, 2)) \
                and not is_complete(sig, gens):
            break
        t += 1
    subsets = [I for k in range(1, len(P) + 1) for I in itertools.combinations(range(len(P)), k)]
    sums = [CloneSeq(sig, (tuple(sorted(gens[i] for i in I)),)) for I in subsets]

    elements: list = []
    in_P: list = []
    for X in P:
        if not any(seq_equal(X, Y) for Y in elements):
            elements.append(X)
            in_P.append(True)
    primed_idx = []
    for S in sums:
        k = next((i for i, Y in enumerate(elements) if seq_equal(S, Y)), None)
        if k is None:
            elements.append(S)
            in_P.append(False)
            k = len(elements) - 1
        primed_idx.append(k)
    N = len(elements)
    order = {(i, j) for i in range(N) for j in range(N)
             if i != j and seq_leq(elements[i], elements[j])}
    retraction = []
    for y in range(N):
        below = [k for k in set(primed_idx) if k == y or (k, y) in order]
        tops = [k for k in below if all(b == k or (b, k) in order for b in below)]
        if len(tops) != 1:
            raise CloneError(f"no unique largest element of P' below element {y}")
        retraction.append(tops[0])
    return PosetQ(elements, sorted(set(primed_idx)), in_P, order, retraction, t)


@dataclass
class QReport:
    below_identity: bool
    monotone: bool
    identity_on_primed: bool
    idempotent: bool
    reduced_homology: list

    @property
    def ok(self) -> bool:
        return (self.below_identity and self.monotone and self.identity_on_primed
                and self.idempotent and all(g.is_zero() for g in self.reduced_homology))


def check_Q(Q: PosetQ, d: int = 3) -> QReport:
    from .homology import complex_homology, nerve_complex

    r = Q.retraction
    N = len(Q.elements)
    below = all(Q.leq(r[y], y) for y in range(N))
    mono = all(Q.leq(r[x], r[y]) for x in range(N) for y in range(N) if Q.leq(x, y))
    ident = all(r[k] == k for k in Q.primed)
    idem = all(r[r[y]] == r[y] for y in range(N))
    H = complex_homology(nerve_complex(Q.to_poset(), d)).reduced()
    return QReport(below, mono, ident, idem, H.groups)


# -- random inputs ---------------------------------------------------------------------------

def random_clone(rng: random.Random, sig: Signature, expansions: int = 3,
                 min_size: int = 1) -> Clone:
    """A proper subset, of at least ``min_size`` addresses, of a random
    complete code."""
    from .core import random_complete_code

    while True:
        code = random_complete_code(rng, sig, expansions + (1 if sig.rank == 1 else 0))
        if len(code) <= min_size:
            continue
        k = rng.randint(min_size, len(code) - 1)
        return Clone(sig, rng.sample(code, k))


def random_family(rng: random.Random, sig: Signature, size: int, complexity: int = 4) -> list:
    from .thompson import random_tableau
    return [(random_tableau(rng, sig, complexity), random_clone(rng, sig))
            for _ in range(size)]


def random_cloneseq(rng: random.Random, sig: Signature, min_points: int = 1,
                    length: int = 3) -> CloneSeq:
    """A strictly descending sequence whose last term has at least
    ``min_points`` distinct limit points."""
    n = sig.arity
    while True:
        first = random_clone(rng, sig, expansions=min_points + 2, min_size=min_points)
        terms = [first.addresses]
        for _ in range(length - 1):
            cur = list(terms[-1])
            j = rng.randrange(len(cur))
            a = cur.pop(j)
            kids = [a.child(k) for k in range(n)]
            keep = rng.sample(kids, rng.randint(1, n - 1))
            terms.append(tuple(sorted(cur + keep)))
        X = CloneSeq(sig, tuple(terms))
        if len(X.limit_points()) >= min_points:
            return X


__all__ = [
    "Clone", "CloneError", "CloneSeq", "clone_contains", "clone_intersect", "clone_split",
    "disjointify", "fixes_pointwise", "image_code", "segal_witness", "seq_ops",
    "seq_membership", "support_iso", "compatibility_square", "build_Q", "check_Q",
    "HallObstruction", "random_clone", "random_family", "random_cloneseq",
    "pairwise_disjoint", "verify_segal_witness", "cone_difference",
]
