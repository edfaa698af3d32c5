"""Higman–Thompson groups V_{n,r} as reduced tableaux.

A tableau is a bijection between two complete prefix codes of the r-rooted
n-ary forest.  It is the automorphism of C_{n,r} sending the basis element
at a domain address d to the basis element at ``pairing(d)``.  Products use
the convention ``(u*v)(x) = u(v(x))``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    Address, Alpha, CantorError, Gen, Homomorphism, Mu, PrefixCode, Signature,
    SignatureError, Term, address_term, apply_hom, check_term, code_validate,
    expand_term, is_inverse_pair, leaves, term_address, longer_of_comparable, random_complete_code,
    reduce,
)


class TableauError(CantorError):
    pass


class _Audit:
    """Counts leaf-count congruence checks made by the Tableau constructor."""

    def __init__(self):
        self.checks = 0

    def reset(self):
        self.checks = 0


leaf_count_audit = _Audit()


@dataclass(frozen=True)
class Tableau:
    sig: Signature
    domain: tuple
    range: tuple

    def __post_init__(self):
        n, r = self.sig.arity, self.sig.rank
        if len(self.domain) != len(self.range):
            raise TableauError("domain and range have different sizes")
        leaf_count_audit.checks += 1
        if (len(self.domain) - r) % (n - 1):
            raise TableauError(
                f"{len(self.domain)} leaves is not congruent to r={r} mod {n - 1}")

    @property
    def pairing(self) -> dict:
        return dict(zip(self.domain, self.range))

    @property
    def carets(self) -> int:
        return (len(self.domain) - self.sig.rank) // (self.sig.arity - 1)

    def __mul__(self, other: "Tableau") -> "Tableau":
        return compose(self, other)

    def __invert__(self) -> "Tableau":
        return inverse(self)

    def is_identity(self) -> bool:
        return self.domain == self.range

    def __repr__(self):
        from .parsing import format_tableau
        return format_tableau(self)


def _make(sig: Signature, pairs: Iterable[tuple]) -> Tableau:
    pairs = sorted(pairs)
    return Tableau(sig, tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))


def make_tableau(sig: Signature, pairs: Iterable[tuple], check: bool = True) -> Tableau:
    """Build and reduce a tableau from (domain address, range address) pairs."""
    pairs = list(pairs)
    if check:
        dom = [p[0] for p in pairs]
        rng = [p[1] for p in pairs]
        if len(set(dom)) != len(dom) or len(set(rng)) != len(rng):
            raise TableauError("pairing is not a bijection")
        for side, addrs in (("domain", dom), ("range", rng)):
            rep = code_validate(PrefixCode(sig, addrs), "complete")
            if not rep.ok:
                raise TableauError(f"{side}: {rep.reason} {rep.witness}")
    return reduce_tableau(_make(sig, pairs))


def identity(sig: Signature) -> Tableau:
    roots = tuple(Address(i, ()) for i in range(1, sig.rank + 1))
    return Tableau(sig, roots, roots)


def reduce_tableau(u: Tableau) -> Tableau:
    """Cancel caret pairs until none remain; the result is canonical."""
    n = u.sig.arity
    pairing = dict(zip(u.domain, u.range))
    changed = True
    while changed:
        changed = False
        families: dict = {}
        for d in pairing:
            if d.word:
                families.setdefault(d.parent(), []).append(d)
        for parent, kids in families.items():
            if len(kids) != n:
                continue
            first = pairing[parent.child(0)]
            if not first.word or first.word[-1] != 0:
                continue
            target = first.parent()
            if all(pairing[parent.child(k)] == target.child(k) for k in range(1, n)):
                for k in range(n):
                    del pairing[parent.child(k)]
                pairing[parent] = target
                changed = True
    return _make(u.sig, pairing.items())


def is_reduced(u: Tableau) -> bool:
    return reduce_tableau(u) == u


def _check_same(u: Tableau, v: Tableau):
    if u.sig != v.sig:
        raise SignatureError(f"tableaux over {u.sig} and {v.sig}")


def _lookup(a: Address, table: dict) -> tuple:
    """(prefix in table, remaining word) for the unique prefix of ``a`` in table."""
    for i in range(len(a.word), -1, -1):
        p = Address(a.root, a.word[:i])
        if p in table:
            return p, a.word[i:]
    raise TableauError(f"{a!r} has no prefix in the code")


def expand_range(u: Tableau, code: Iterable[Address]) -> list:
    """Pairs of ``u`` with its range refined to a code that refines it."""
    inv = dict(zip(u.range, u.domain))
    out = []
    for c in code:
        e, w = _lookup(c, inv)
        out.append((inv[e].extend(w), c))
    return out


def expand_domain(u: Tableau, code: Iterable[Address]) -> list:
    fwd = dict(zip(u.domain, u.range))
    out = []
    for c in code:
        d, w = _lookup(c, fwd)
        out.append((c, fwd[d].extend(w)))
    return out


def compose(u: Tableau, v: Tableau) -> Tableau:
    """u∘v: refine v's range and u's domain to a common code, then transport."""
    _check_same(u, v)
    common = longer_of_comparable(v.range, u.domain)
    inner = dict((c, d) for d, c in expand_range(v, common))
    outer = dict(expand_domain(u, common))
    return reduce_tableau(_make(u.sig, ((inner[c], outer[c]) for c in common)))


def inverse(u: Tableau) -> Tableau:
    return _make(u.sig, zip(u.range, u.domain))


def commutator(a: Tableau, b: Tableau) -> Tableau:
    """[a, b] = a b a^-1 b^-1."""
    return compose(compose(a, b), compose(inverse(a), inverse(b)))


def power(u: Tableau, k: int) -> Tableau:
    result = identity(u.sig)
    base = u if k >= 0 else inverse(u)
    for _ in range(abs(k)):
        result = compose(result, base)
    return result


# -- action on terms -------------------------------------------------------------

def apply(u: Tableau, t: Term) -> Term:
    """Image of a term under the automorphism ``u``."""
    check_term(t, u.sig)
    n = u.sig.arity
    fwd = dict(zip(u.domain, u.range))

    def image(s: Term) -> Term:
        if type(s) is Mu:
            return Mu(tuple(image(a) for a in s.args))
        a = term_address(s)
        for i in range(len(a.word), -1, -1):
            p = Address(a.root, a.word[:i])
            if p in fwd:
                return address_term(fwd[p].extend(a.word[i:]))
        # shallower than the domain code: expand by the axiom and recurse
        return Mu(tuple(image(address_term(a.child(k))) for k in range(n)))

    return reduce(image(reduce(t)))


def tableau_from_images(sig: Signature, images: Sequence[Term]) -> Tableau:
    """The tableau of the endomorphism g_i -> images[i-1], which must be an
    automorphism (leaves of the image trees form a complete prefix code)."""
    if len(images) != sig.rank:
        raise SignatureError("one image per generator required")
    pairs = []

    def walk(t: Term, at: Address):
        if type(t) is Mu:
            for k, s in enumerate(t.args):
                walk(s, at.child(k))
        else:
            (a,) = leaves(t)
            pairs.append((at, a))

    for i, im in enumerate(images, start=1):
        check_term(im, sig)
        walk(reduce(im), Address(i, ()))
    try:
        return make_tableau(sig, pairs, check=True)
    except TableauError as exc:
        raise TableauError(f"images do not define an automorphism: {exc}") from None


def generator_images(u: Tableau) -> list:
    return [apply(u, Gen(i)) for i in range(1, u.sig.rank + 1)]


# -- sums, stabilization, swaps ---------------------------------------------------

def shift_roots(addresses: Iterable[Address], by: int) -> list:
    return [Address(a.root + by, a.word) for a in addresses]


def block_sum(u: Tableau, v: Tableau) -> Tableau:
    """u + v over (n, r+s): u on roots 1..r, v on roots r+1..r+s."""
    if u.sig.arity != v.sig.arity:
        raise SignatureError("block sum of different arities")
    r = u.sig.rank
    sig = Signature(u.sig.arity, r + v.sig.rank)
    pairs = list(zip(u.domain, u.range))
    pairs += zip(shift_roots(v.domain, r), shift_roots(v.range, r))
    return _make(sig, pairs)


def block_sums(*parts: Tableau) -> Tableau:
    out = parts[0]
    for p in parts[1:]:
        out = block_sum(out, p)
    return out


def stabilize(u: Tableau, s: int = 1) -> Tableau:
    return block_sum(u, identity(Signature(u.sig.arity, s)))


def restrict_roots(u: Tableau, roots: range) -> Tableau:
    """The block of ``u`` on a set of consecutive roots that it preserves."""
    lo = roots.start
    pairs = [(d, e) for d, e in zip(u.domain, u.range) if d.root in roots]
    if any(e.root not in roots for _, e in pairs):
        raise TableauError("tableau does not preserve the root block")
    sig = Signature(u.sig.arity, len(roots))
    return _make(sig, [(Address(d.root - lo + 1, d.word), Address(e.root - lo + 1, e.word))
                       for d, e in pairs])


def permute_roots(u: Tableau, perm: Sequence[int]) -> Tableau:
    """Conjugate by the root relabelling i -> perm[i-1]."""
    def move(a):
        return Address(perm[a.root - 1], a.word)
    return _make(u.sig, [(move(d), move(e)) for d, e in zip(u.domain, u.range)])


def block_permutation(n: int, r: int, perm: Sequence[int]) -> Tableau:
    """Moves block j (roots j*r+1..(j+1)*r) onto block perm[j]."""
    m = len(perm)
    pairs = []
    for j, pj in enumerate(perm):
        for i in range(1, r + 1):
            pairs.append((Address(j * r + i, ()), Address(pj * r + i, ())))
    return _make(Signature(n, m * r), pairs)


def swap(n: int, r: int) -> Tableau:
    """Block transposition of C_{n,r} + C_{n,r}."""
    if r < 1:
        raise TableauError("swap needs r >= 1")
    return block_permutation(n, r, (1, 0))


def retraction(r: int, n: int) -> Homomorphism:
    """A retraction C_{n,r+1} -> C_{n,r} of the inclusion (last generator to g_r)."""
    images = tuple(Gen(i) for i in range(1, r + 1)) + (Gen(r),)
    return Homomorphism(Signature(n, r + 1), Signature(n, r), images)


def retract_check(u: Tableau) -> bool:
    """Faithfulness of stabilization at ``u``: the retraction diagram commutes on
    generators, and u + id_1 is the identity only if u is."""
    r, n = u.sig.rank, u.sig.arity
    if r < 1:
        raise TableauError("retract_check needs r >= 1")
    stab = stabilize(u)
    rho = retraction(r, n)
    for i in range(1, r + 1):
        # sigma(g_i) = g_i; rho((u+id)(g_i)) must be u(g_i)
        if apply_hom(rho, apply(stab, Gen(i))) != apply(u, Gen(i)):
            return False
    return (not stab.is_identity()) or u.is_identity()


# -- Whitehead and perfectness -------------------------------------------------

@dataclass(frozen=True)
class WhiteheadWitness:
    a: Tableau
    b: Tableau
    target: Tableau
    holds: bool


def whitehead_witness(w: Tableau) -> WhiteheadWitness:
    """w + w^-1 = [w + id, swap]."""
    n, r = w.sig.arity, w.sig.rank
    a = stabilize(w, r)
    b = swap(n, r)
    target = block_sum(w, inverse(w))
    return WhiteheadWitness(a, b, target, commutator(a, b) == target)


@dataclass(frozen=True)
class PerfectnessReport:
    lhs: Tableau
    rhs: Tableau
    nested: Tableau
    equal: bool
    nested_equal: bool

    @property
    def ok(self) -> bool:
        return self.equal and self.nested_equal


def perfectness_identity(u: Tableau, v: Tableau) -> PerfectnessReport:
    """[u,v] + id_{2r} = [u + u^-1 + id_r, v + id_r + v^-1] in V_{n,3r}, and the
    same bracket rewritten as a commutator of two commutators."""
    _check_same(u, v)
    n, r = u.sig.arity, u.sig.rank
    idr = identity(Signature(n, r))
    lhs = stabilize(commutator(u, v), 2 * r)
    x = block_sums(u, inverse(u), idr)
    y = block_sums(v, idr, inverse(v))
    rhs = commutator(x, y)
    # x = [u + id + id, tau_12] and y = [v + id + id, tau_13]
    x_comm = commutator(block_sums(u, idr, idr), block_permutation(n, r, (1, 0, 2)))
    y_comm = commutator(block_sums(v, idr, idr), block_permutation(n, r, (2, 1, 0)))
    nested = commutator(x_comm, y_comm)
    return PerfectnessReport(lhs, rhs, nested, lhs == rhs,
                             nested == lhs and x_comm == x and y_comm == y)


# -- rank transport --------------------------------------------------------------

def rank_transport(u: Tableau, forward: Homomorphism, backward: Homomorphism) -> Tableau:
    """forward∘u∘backward, where forward: C_{n,r} -> C_{n,s} and backward is its
    inverse.  This is the conjugation isomorphism V_{n,r} -> V_{n,s}."""
    if forward.source != u.sig:
        raise SignatureError("isomorphism does not start at the tableau's algebra")
    if not is_inverse_pair(forward, backward):
        raise TableauError("isomorphism pair fails composite verification")
    images = [apply_hom(forward, apply(u, im)) for im in backward.images]
    return tableau_from_images(forward.target, images)


# -- random elements and enumeration ------------------------------------------------

def random_tableau(rng: random.Random, sig: Signature, complexity: int = 6) -> Tableau:
    dom = random_complete_code(rng, sig, complexity)
    rng_code = random_complete_code(rng, sig, complexity)
    rng.shuffle(rng_code)
    return reduce_tableau(_make(sig, zip(dom, rng_code)))


def complete_codes(sig: Signature, carets: int) -> list:
    """All complete codes obtained by exactly ``carets`` expansions."""
    level = {tuple(Address(i, ()) for i in range(1, sig.rank + 1))}
    for _ in range(carets):
        nxt = set()
        for code in level:
            for j, a in enumerate(code):
                new = code[:j] + tuple(a.child(k) for k in range(sig.arity)) + code[j + 1:]
                nxt.add(tuple(sorted(new)))
        level = nxt
    return sorted(level)


def all_tableaux(sig: Signature, max_carets: int) -> set:
    """Reduced forms of every tableau with at most ``max_carets`` carets."""
    out = set()
    for k in range(max_carets + 1):
        codes = complete_codes(sig, k)
        for dom in codes:
            for rng_code in codes:
                for perm in itertools.permutations(rng_code):
                    out.add(reduce_tableau(_make(sig, zip(dom, perm))))
    return out


def action_agrees(u: Tableau, v: Tableau, terms: Iterable[Term]) -> bool:
    return all(apply(u, t) == apply(v, t) for t in terms)


def all_terms(sig: Signature, depth: int) -> list:
    """Every term of depth <= depth.  Grows doubly exponentially; keep depth small."""
    level = [Gen(i) for i in range(1, sig.rank + 1)]
    seen = list(level)
    for _ in range(depth):
        new = [Alpha(k, t) for t in seen for k in range(1, sig.arity + 1)]
        new += [Mu(args) for args in itertools.product(seen, repeat=sig.arity)]
        seen = list(dict.fromkeys(seen + new))
    return seen


def address_probes(sig: Signature, depth: int) -> list:
    """Every descent word of length <= depth on every generator."""
    out = []
    level = [Address(i, ()) for i in range(1, sig.rank + 1)]
    for _ in range(depth + 1):
        out.extend(address_term(a) for a in level)
        level = [a.child(k) for a in level for k in range(sig.arity)]
    return out


__all__ = [
    "Tableau", "TableauError", "identity", "make_tableau", "reduce_tableau", "compose",
    "inverse", "commutator", "apply", "block_sum", "stabilize", "swap", "retract_check",
    "whitehead_witness", "perfectness_identity", "rank_transport", "random_tableau",
    "tableau_from_images", "block_permutation", "permute_roots", "leaf_count_audit",
    "expand_term",
]
