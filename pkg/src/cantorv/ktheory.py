"""K₀ of the theories Cantor_n, rank-changing isomorphisms, the product algebra
C × C, and bounded probes of candidate product isomorphisms.

Every probe verdict says whether it is certified (by an invariant or an
explicit reduction) or only bounded (by the normal-form size bounds it
carries).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .core import (
    Address, Alpha, CantorError, Gen, Homomorphism, Mu, Signature, Term, address_term,
    apply_hom, compose_hom, complement_addresses, is_complete, is_inverse_pair, leaves,
    minimal_elements, reduce, substitute, term_size,
)


class KTheoryError(CantorError):
    pass


# -- rank changes ----------------------------------------------------------------------------

def expansion_iso(n: int, r: int) -> tuple:
    """(forward, backward) with forward: C_{n,r+n-1} -> C_{n,r} sending the last
    n generators to the n descents of g_r, and backward its inverse sending
    g_r to the merge of those generators.  Both composites are checked."""
    if r < 1:
        raise KTheoryError("expansion needs r >= 1")
    big, small = Signature(n, r + n - 1), Signature(n, r)
    fwd = tuple(Gen(i) for i in range(1, r)) + tuple(Alpha(k, Gen(r)) for k in range(1, n + 1))
    bwd = tuple(Gen(i) for i in range(1, r)) + (Mu(tuple(Gen(r + k) for k in range(n))),)
    forward = Homomorphism(big, small, fwd)
    backward = Homomorphism(small, big, bwd)
    if not is_inverse_pair(forward, backward):
        raise KTheoryError(f"expansion isomorphism for n={n}, r={r} fails its composites")
    return forward, backward


def rank_iso(n: int, r: int, s: int) -> tuple:
    """A verified isomorphism pair C_{n,r} -> C_{n,s} for r ≡ s (mod n-1)."""
    if r < 1 or s < 1:
        raise KTheoryError("ranks must be >= 1")
    if (r - s) % (n - 1):
        raise KTheoryError(f"C_{{{n},{r}}} and C_{{{n},{s}}} are not isomorphic")
    sig = Signature(n, r)
    f = Homomorphism.identity(sig)
    g = Homomorphism.identity(sig)
    cur = r
    while cur != s:
        if cur < s:
            fw, bw = expansion_iso(n, cur)  # fw: C_{cur+n-1} -> C_cur
            f, g = compose_hom(bw, f), compose_hom(g, fw)
            cur += n - 1
        else:
            fw, bw = expansion_iso(n, cur - n + 1)
            f, g = compose_hom(fw, f), compose_hom(g, bw)
            cur -= n - 1
    if not is_inverse_pair(f, g):
        raise KTheoryError("composite rank isomorphism fails verification")
    return f, g


def leaf_count(images: Iterable[Term]) -> int:
    return sum(len(leaves(reduce(t))) for t in images)


def separation_check(f: Homomorphism) -> bool:
    """For an isomorphism C_{n,r} -> C_{n,s}: the leaves of the generator images
    form a complete code of C_{n,s}, so their number is ≡ s, while each image
    tree contributes ≡ 1 leaf, so it is also ≡ r (mod n-1)."""
    n = f.source.arity
    addrs = [a for t in f.images for a in leaves(reduce(t))]
    per_tree = all((len(leaves(reduce(t))) - 1) % (n - 1) == 0 for t in f.images)
    complete = len(set(addrs)) == len(addrs) and is_complete(f.target, addrs)
    total = len(addrs)
    return per_tree and complete and (total - f.source.rank) % (n - 1) == 0 \
        and (total - f.target.rank) % (n - 1) == 0


@dataclass
class K0Ring:
    """Z/m with m = n - 1 (m = 1 is the trivial ring), generated by [C_{n,1}]."""

    n: int
    modulus: int
    relations: list = field(default_factory=list)
    separation: str = ""
    checks: dict = field(default_factory=dict)

    @property
    def elements(self) -> list:
        return list(range(self.modulus))

    def cls(self, rank: int) -> int:
        return rank % self.modulus

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.modulus

    @property
    def one(self) -> int:
        return 1 % self.modulus

    @property
    def name(self) -> str:
        return "0" if self.modulus == 1 else f"Z/{self.modulus}"

    @property
    def is_trivial(self) -> bool:
        return self.modulus == 1

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def tables(self) -> dict:
        els = self.elements
        return {"add": [[self.add(a, b) for b in els] for a in els],
                "mul": [[self.mul(a, b) for b in els] for a in els]}

    def to_json(self) -> dict:
        return {"n": self.n, "ring": self.name, "modulus": self.modulus,
                "trivial": self.is_trivial, "one_equals_zero": self.one == 0,
                "relations": self.relations, "separation": self.separation,
                "checks": self.checks, **self.tables()}


def k0(n: int, max_rank: int = 4) -> K0Ring:
    """K₀(Cantor_n) from the rank monoid: the relations [r] = [r+n-1] are
    certified by expansion isomorphisms, and the leaf-count invariant shows no
    further ranks are identified."""
    if n < 2:
        raise KTheoryError("arity must be >= 2")
    m = n - 1
    ring = K0Ring(n, m)
    rel_ok = True
    for r in range(1, max_rank + 1):
        fw, bw = expansion_iso(n, r)
        ring.relations.append({"relation": f"[{r + n - 1}] = [{r}]", "forward": repr(fw.images),
                               "backward": repr(bw.images)})
        rel_ok &= separation_check(fw)
    ring.separation = (f"an isomorphism C_{{{n},r}} -> C_{{{n},s}} sends the generators to trees "
                       f"with 1 mod {m} leaves each, forming a complete code of size s mod {m}; "
                       f"hence r ≡ s (mod {m})")
    # separation: the isomorphism between ranks r and s exists iff r ≡ s
    sep_ok = True
    for r in range(1, max_rank + 1):
        for s in range(1, max_rank + 1):
            if (r - s) % m == 0:
                f, _ = rank_iso(n, r, s)
                sep_ok &= separation_check(f)
    els = ring.elements
    axioms = all(
        ring.add(ring.add(a, b), c) == ring.add(a, ring.add(b, c))
        and ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
        and ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c))
        and ring.mul(ring.add(a, b), c) == ring.add(ring.mul(a, c), ring.mul(b, c))
        for a in els for b in els for c in els)
    unit = all(ring.mul(ring.one, a) == a for a in els)
    # [r]·[s] = [rs] does not depend on representatives
    well_defined = all(ring.cls(r * s) == ring.cls((r + m) * s) == ring.cls(r * (s + m))
                       for r in range(1, max_rank + 1) for s in range(1, max_rank + 1))
    ring.checks = {"relations": rel_ok, "separation": sep_ok, "ring_axioms": axioms,
                   "unit": unit, "product_well_defined": well_defined}
    return ring


# -- the product algebra ---------------------------------------------------------------------------

class ProductElement(NamedTuple):
    first: Term
    second: Term

    def __repr__(self):
        return f"({self.first!r}, {self.second!r})"


def product_mu(*elements: ProductElement) -> ProductElement:
    return ProductElement(Mu(tuple(p.first for p in elements)),
                          Mu(tuple(p.second for p in elements)))


def product_alpha(k: int, p: ProductElement) -> ProductElement:
    return ProductElement(Alpha(k, p.first), Alpha(k, p.second))


def product_reduce(p: ProductElement) -> ProductElement:
    return ProductElement(reduce(p.first), reduce(p.second))


@dataclass
class MedialWitness:
    a: Term
    a2: Term
    b: Term
    b2: Term
    lhs: Term
    rhs: Term

    @property
    def fails(self) -> bool:
        return self.lhs != self.rhs


def medial_witness() -> MedialWitness:
    """The merge X×X -> X is a bijection but not a homomorphism for the
    componentwise structure: m(m(a,a'), m(b,b')) and m(m(a,b), m(a',b')) have
    different normal forms for these elements."""
    g = Gen(1)
    a, a2, b, b2 = g, g, Alpha(1, g), Alpha(2, g)
    lhs = reduce(Mu((Mu((a, a2)), Mu((b, b2)))))
    rhs = reduce(Mu((Mu((a, b)), Mu((a2, b2)))))
    return MedialWitness(a, a2, b, b2, lhs, rhs)


# -- normal-form enumeration ---------------------------------------------------------------------

def normal_forms(n: int, max_size: int) -> list:
    """All normal forms of C_{n,1} with term_size <= max_size, by size."""
    by_size: dict = {}
    words = {1: [Gen(1)]}
    for s in range(2, max_size + 1):
        words[s] = [Alpha(k, w) for w in words[s - 1] for k in range(1, n + 1)]
    for s in range(1, max_size + 1):
        out = list(words[s])
        # merges: sizes of the n arguments sum to s - 1
        for sizes in _compositions(s - 1, n):
            if any(x not in by_size for x in sizes):
                continue
            for args in itertools.product(*(by_size[x] for x in sizes)):
                t = Mu(args)
                if reduce(t) == t:
                    out.append(t)
        by_size[s] = out
    return [t for s in range(1, max_size + 1) for t in by_size[s]]


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def nf_size(t: Term) -> int:
    return term_size(t)


# -- endomorphism probes ----------------------------------------------------------------------------

def _leaf_positions(t: Term) -> list:
    """(path of descent indices, leaf address) for each leaf of a normal form."""
    out = []

    def walk(s, path):
        if type(s) is Mu:
            for k, a in enumerate(s.args, start=1):
                walk(a, path + (k,))
        else:
            out.append((path, leaves(s)[0]))

    walk(t, ())
    return out


def image_clone(s: Term) -> list:
    """Minimal leaf addresses of s: the endomorphism x1 -> s has image the
    subalgebra generated by them."""
    return sorted(minimal_elements(leaves(reduce(s))))


def preimage_of_generator(s: Term, n: int) -> Term | None:
    """A term u with u[x1 -> s] = g1, when one exists."""
    s = reduce(s)
    mins = set(minimal_elements(leaves(s)))
    if not is_complete(Signature(n, 1), mins):
        return None
    first_path = {}
    for path, a in _leaf_positions(s):
        first_path.setdefault(a, path)

    def build(a: Address) -> Term:
        if a in mins:
            t: Term = Gen(1)
            for k in first_path[a]:
                t = Alpha(k, t)
            return t
        return Mu(tuple(build(a.child(k)) for k in range(n)))

    return build(Address(1, ()))


def endo(s: Term, u: Term) -> Term:
    return reduce(substitute(u, [s]))


def _is_prefix_free_distinct(addrs: list) -> bool:
    return len(set(addrs)) == len(addrs) and \
        all(not a.comparable(b) for a, b in itertools.combinations(addrs, 2))


@dataclass
class EndoReport:
    candidate: Term
    surjective: bool
    surjectivity_certificate: str
    preimage: Term | None
    injective: str  # "certified", "refuted", "inconclusive"
    collisions: list
    bound: int

    def to_json(self) -> dict:
        return {"candidate": repr(self.candidate), "surjective": self.surjective,
                "surjectivity_certificate": self.surjectivity_certificate,
                "preimage_of_g1": repr(self.preimage) if self.preimage is not None else None,
                "injective": self.injective,
                "collisions": [[repr(a), repr(b), repr(c)] for a, b, c in self.collisions],
                "bound": {"max_size": self.bound}}


def collapse_endo_probe(s: Term, n: int = 2, bound: int = 5, max_collisions: int = 5) -> EndoReport:
    """The endomorphism x1 -> s of C_{n,1}.  Surjectivity is decided exactly:
    the image is the clone generated by the leaves of s, so it contains g1 iff
    their minimal elements form a complete code.  Injectivity is certified
    when the leaves are distinct and pairwise incomparable (then the map is an
    isomorphism onto a clone); otherwise collisions are searched among normal
    forms of size <= bound."""
    s = reduce(s)
    sig = Signature(n, 1)
    mins = image_clone(s)
    pre = preimage_of_generator(s, n)
    if pre is not None:
        if endo(s, pre) != Gen(1):
            raise KTheoryError("internal: preimage does not reduce to g1")
        cert = f"{pre!r} maps to g1"
    else:
        missing = complement_addresses(sig, mins)
        cert = (f"image lies in the clone generated by {mins}; the cone of "
                f"{missing[0]!r} is never reached, so g1 has no preimage")
    leaf_addrs = leaves(s)
    collisions = []
    if _is_prefix_free_distinct(leaf_addrs):
        injective = "certified"
    else:
        seen: dict = {}
        for u in normal_forms(n, bound):
            im = endo(s, u)
            if im in seen:
                collisions.append((seen[im], u, im))
                if len(collisions) >= max_collisions:
                    break
            else:
                seen[im] = u
        injective = "refuted" if collisions else "inconclusive"
    return EndoReport(s, pre is not None, cert, pre, injective, collisions, bound)


# -- product isomorphism probe --------------------------------------------------------------------

@dataclass
class ProductProbe:
    candidate: tuple
    injective_to_depth: bool | None
    collision: tuple | None
    covered: int
    total: int
    missing_witness: ProductElement | None
    certificate: str
    verdict: str
    depth: int
    search_depth: int

    def to_json(self) -> dict:
        return {
            "candidate": [repr(self.candidate[0]), repr(self.candidate[1])],
            "injective_to_depth": self.injective_to_depth,
            "collision": [repr(x) for x in self.collision] if self.collision else None,
            "surjectivity": {"covered": self.covered, "total": self.total,
                             "missing_witness": repr(self.missing_witness)
                             if self.missing_witness is not None else None,
                             "certificate": self.certificate},
            "verdict": self.verdict,
            "bounds": {"depth": self.depth, "search_depth": self.search_depth},
        }


def product_iso_probe(s: Term, t: Term, depth: int = 4, search_depth: int | None = None,
                      n: int = 2) -> ProductProbe:
    """h: C_{n,1} -> C_{n,1} × C_{n,1}, x1 -> (s, t).  ``depth`` and
    ``search_depth`` bound normal forms by term size.  Injectivity is exact
    among normal forms of size <= depth; coverage counts pairs of size <=
    depth with a preimage of size <= search_depth."""
    s, t = reduce(s), reduce(t)
    if search_depth is None:
        search_depth = depth
    sig = Signature(n, 1)
    g = Gen(1)
    cert, missing = "", None
    # certified refutations of surjectivity
    for coord, term in ((0, s), (1, t)):
        mins = image_clone(term)
        if not is_complete(sig, mins):
            gap = complement_addresses(sig, mins)[0]
            cert = (f"coordinate {coord + 1} lies in the clone generated by {mins}; "
                    f"{gap!r} is outside it, so no element maps to (g1, g1)")
            missing = ProductElement(g, g)
            break
    if missing is None and s == t:
        cert = "both coordinates agree, so the image lies in the diagonal"
        missing = ProductElement(g, Alpha(1, g))

    forms = normal_forms(n, max(depth, search_depth))
    small = [u for u in forms if term_size(u) <= depth]
    images: dict = {}
    collision = None
    for u in forms:
        im = ProductElement(endo(s, u), endo(t, u))
        if im in images:
            if collision is None and term_size(u) <= depth:
                collision = (images[im], u, im)
        else:
            images[im] = u
    injective = collision is None
    pairs = [ProductElement(a, b) for a in small for b in small]
    covered = sum(1 for p in pairs if p in images)
    if missing is None:
        missing = next((p for p in pairs if p not in images), None)
        if missing is not None:
            cert = f"no preimage of size <= {search_depth}"
    if not injective:
        verdict = "refuted-injective"
    elif cert and not cert.startswith("no preimage"):
        verdict = "refuted-surjective"
    elif missing is not None:
        verdict = f"inconclusive({depth},{search_depth})"
    else:
        verdict = "verified-to-depth"
    return ProductProbe((s, t), injective, collision, covered, len(pairs), missing, cert,
                        verdict, depth, search_depth)


def candidate_pairs(rng: random.Random, count: int, n: int = 2, max_size: int = 5) -> list:
    """Seeded candidate generator pairs, biased towards coordinates that
    collapse (merges with repeated leaves) and therefore can be surjective."""
    g = Gen(1)
    pool = [Mu((g,) * n), Mu((g,) + tuple(Alpha(k, g) for k in range(2, n + 1)))]
    pool += [u for u in normal_forms(n, max_size) if type(u) is Mu]
    out = []
    for _ in range(count):
        out.append((rng.choice(pool), rng.choice(pool)))
    return out
