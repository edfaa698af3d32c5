"""Free Cantor algebras C_{n,r}: terms, rewriting, homomorphisms and prefix codes.

An element of C_{n,r} is written with three constructors: generators
``Gen(i)``, the n-ary merge ``Mu(t1, ..., tn)`` and the descents
``Alpha(k, t)`` (k = 1..n), which are the components of the inverse of the
merge.  Two rewrite rules orient the defining equations::

    Alpha(k, Mu(t1, ..., tn))           ->  tk
    Mu(Alpha(1, t), ..., Alpha(n, t))   ->  t

Normal forms are Mu-trees whose leaves are descent words applied to a
generator.  A descent word is stored as an :class:`Address`: the root index
plus the letters in the order the descents are applied, so ``Alpha(2,
Alpha(1, g1))`` is the address ``(1, (0, 1))``, printed ``01``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Union


class CantorError(ValueError):
    """Raised on malformed input or mismatched signatures."""


class SignatureError(CantorError):
    pass


@dataclass(frozen=True)
class Signature:
    arity: int
    rank: int

    def __post_init__(self):
        if self.arity < 2:
            raise SignatureError(f"arity must be >= 2, got {self.arity}")
        if self.rank < 0:
            raise SignatureError(f"rank must be >= 0, got {self.rank}")

    @property
    def n(self) -> int:
        return self.arity

    @property
    def r(self) -> int:
        return self.rank

    def __str__(self):
        return f"n={self.arity} r={self.rank}"


# Terms are NamedTuples so that equality and hashing run at C speed; the
# three shapes have different lengths/field types so they never compare equal.

class Gen(NamedTuple):
    index: int

    def __repr__(self):
        return f"g{self.index}"


class Mu(NamedTuple):
    args: tuple

    def __repr__(self):
        return "m(" + ",".join(map(repr, self.args)) + ")"


class Alpha(NamedTuple):
    k: int
    arg: object

    def __repr__(self):
        return f"a{self.k}({self.arg!r})"


Term = Union[Gen, Mu, Alpha]


def mu(*args: Term) -> Mu:
    return Mu(tuple(args))


def term_size(t: Term) -> int:
    if type(t) is Gen:
        return 1
    if type(t) is Alpha:
        return 1 + term_size(t.arg)
    return 1 + sum(term_size(a) for a in t.args)


def term_depth(t: Term) -> int:
    if type(t) is Gen:
        return 0
    if type(t) is Alpha:
        return 1 + term_depth(t.arg)
    return 1 + max(term_depth(a) for a in t.args)


def check_term(t: Term, sig: Signature) -> None:
    """Raise SignatureError unless ``t`` is well formed over ``sig``."""
    stack = [t]
    while stack:
        s = stack.pop()
        if type(s) is Gen:
            if not 1 <= s.index <= sig.rank:
                raise SignatureError(f"generator g{s.index} outside rank {sig.rank}")
        elif type(s) is Alpha:
            if not 1 <= s.k <= sig.arity:
                raise SignatureError(f"descent a{s.k} outside arity {sig.arity}")
            stack.append(s.arg)
        elif type(s) is Mu:
            if len(s.args) != sig.arity:
                raise SignatureError(f"merge of {len(s.args)} terms, arity is {sig.arity}")
            stack.extend(s.args)
        else:
            raise CantorError(f"not a term: {s!r}")


def infer_arity(t: Term) -> int | None:
    """Arity used by the merges in ``t`` (None if it has no merge)."""
    stack = [t]
    found = None
    while stack:
        s = stack.pop()
        if type(s) is Alpha:
            stack.append(s.arg)
        elif type(s) is Mu:
            if found is None:
                found = len(s.args)
            elif found != len(s.args):
                raise SignatureError("term mixes merges of different arity")
            stack.extend(s.args)
    return found


# -- rewriting ---------------------------------------------------------------

def reduce(t: Term) -> Term:
    """Innermost normal form.  Children are normalised first, so at most one
    root step is needed and its result is already normal."""
    tt = type(t)
    if tt is Gen:
        return t
    if tt is Alpha:
        s = reduce(t.arg)
        if type(s) is Mu:
            return s.args[t.k - 1]
        if s is t.arg:
            return t
        return Alpha(t.k, s)
    args = tuple(reduce(a) for a in t.args)
    first = args[0]
    if type(first) is Alpha and first.k == 1:
        base = first.arg
        for k, a in enumerate(args[1:], start=2):
            if type(a) is not Alpha or a.k != k or a.arg != base:
                break
        else:
            return base
    return Mu(args)


def _root_step(t: Term) -> Term | None:
    if type(t) is Alpha and type(t.arg) is Mu:
        return t.arg.args[t.k - 1]
    if type(t) is Mu:
        first = t.args[0]
        if type(first) is Alpha and first.k == 1:
            base = first.arg
            for k, a in enumerate(t.args[1:], start=2):
                if type(a) is not Alpha or a.k != k or a.arg != base:
                    return None
            return base
    return None


def _outermost_step(t: Term) -> Term | None:
    s = _root_step(t)
    if s is not None:
        return s
    if type(t) is Alpha:
        s = _outermost_step(t.arg)
        return None if s is None else Alpha(t.k, s)
    if type(t) is Mu:
        for i, a in enumerate(t.args):
            s = _outermost_step(a)
            if s is not None:
                return Mu(t.args[:i] + (s,) + t.args[i + 1:])
    return None


def reduce_outermost(t: Term) -> Term:
    """Leftmost-outermost strategy, one rewrite step at a time."""
    while True:
        s = _outermost_step(t)
        if s is None:
            return t
        t = s


def is_normal(t: Term) -> bool:
    if _root_step(t) is not None:
        return False
    if type(t) is Alpha:
        return is_normal(t.arg)
    if type(t) is Mu:
        return all(is_normal(a) for a in t.args)
    return True


def equal(s: Term, t: Term, sig: Signature | None = None) -> bool:
    if sig is not None:
        check_term(s, sig)
        check_term(t, sig)
    else:
        a, b = infer_arity(s), infer_arity(t)
        if a is not None and b is not None and a != b:
            raise SignatureError(f"terms use arities {a} and {b}")
    return reduce(s) == reduce(t)


def substitute(t: Term, images: Sequence[Term]) -> Term:
    tt = type(t)
    if tt is Gen:
        return images[t.index - 1]
    if tt is Alpha:
        return Alpha(t.k, substitute(t.arg, images))
    return Mu(tuple(substitute(a, images) for a in t.args))


# -- homomorphisms -------------------------------------------------------------

@dataclass(frozen=True)
class Homomorphism:
    """Morphism C_{source} -> C_{target} given by the images of the generators."""

    source: Signature
    target: Signature
    images: tuple

    def __post_init__(self):
        if self.source.arity != self.target.arity:
            raise SignatureError("homomorphism between different arities")
        if len(self.images) != self.source.rank:
            raise SignatureError(
                f"{len(self.images)} images for rank {self.source.rank}")
        for im in self.images:
            check_term(im, self.target)

    @classmethod
    def identity(cls, sig: Signature) -> "Homomorphism":
        return cls(sig, sig, tuple(Gen(i) for i in range(1, sig.rank + 1)))


def apply_hom(h: Homomorphism, t: Term) -> Term:
    check_term(t, h.source)
    return reduce(substitute(t, h.images))


def compose_hom(h: Homomorphism, g: Homomorphism) -> Homomorphism:
    """h after g."""
    if g.target != h.source:
        raise SignatureError("homomorphisms are not composable")
    return Homomorphism(g.source, h.target, tuple(apply_hom(h, im) for im in g.images))


def is_inverse_pair(f: Homomorphism, g: Homomorphism) -> bool:
    """True iff g∘f and f∘g fix every generator (after reduction)."""
    if f.target != g.source or g.target != f.source:
        return False
    for sig, first, second in ((f.source, f, g), (g.source, g, f)):
        for i in range(1, sig.rank + 1):
            if apply_hom(second, apply_hom(first, Gen(i))) != Gen(i):
                return False
    return True


# -- addresses and prefix codes --------------------------------------------------

class Address(NamedTuple):
    root: int
    word: tuple

    def child(self, letter: int) -> "Address":
        return Address(self.root, self.word + (letter,))

    def extend(self, word: tuple) -> "Address":
        return Address(self.root, self.word + tuple(word))

    def parent(self) -> "Address":
        return Address(self.root, self.word[:-1])

    def is_prefix_of(self, other: "Address") -> bool:
        return (self.root == other.root and len(self.word) <= len(other.word)
                and other.word[:len(self.word)] == self.word)

    def comparable(self, other: "Address") -> bool:
        return self.is_prefix_of(other) or other.is_prefix_of(self)

    def prefixes(self) -> Iterator["Address"]:
        for i in range(len(self.word) + 1):
            yield Address(self.root, self.word[:i])

    def __repr__(self):
        return f"{self.root}:{format_word(self.word)}"


def format_word(word: tuple) -> str:
    return "".join(map(str, word)) if word else "e"


def address_term(a: Address) -> Term:
    t: Term = Gen(a.root)
    for letter in a.word:
        t = Alpha(letter + 1, t)
    return t


def term_address(t: Term) -> Address | None:
    """Inverse of :func:`address_term`; None if ``t`` is not a descent word."""
    letters = []
    while type(t) is Alpha:
        letters.append(t.k - 1)
        t = t.arg
    if type(t) is not Gen:
        return None
    return Address(t.index, tuple(reversed(letters)))


def leaves(t: Term) -> list[Address]:
    """Leaf addresses of a normal form, left to right."""
    out = []
    stack = [t]
    while stack:
        s = stack.pop()
        if type(s) is Mu:
            stack.extend(reversed(s.args))
        else:
            a = term_address(s)
            if a is None:
                raise CantorError(f"not a normal form: {s!r}")
            out.append(a)
    return out


def expand_term(a: Address, n: int) -> Mu:
    """The merge of the n children of ``a`` (equal to ``a`` by the axioms)."""
    return Mu(tuple(address_term(a.child(k)) for k in range(n)))


@dataclass(frozen=True)
class PrefixCode:
    """A finite set of addresses over a signature.  Validity (prefix-freeness,
    completeness, properness) is checked by :func:`code_validate`, not on
    construction."""

    sig: Signature
    addresses: tuple

    def __init__(self, sig: Signature, addresses: Iterable[Address]):
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "addresses", tuple(sorted(set(addresses))))

    def __iter__(self):
        return iter(self.addresses)

    def __len__(self):
        return len(self.addresses)

    def __contains__(self, a):
        return a in self.addresses

    def __repr__(self):
        return format_code(self)


def format_address(a: Address, sig: Signature) -> str:
    w = format_word(a.word)
    return w if sig.rank == 1 else f"{a.root}:{w}"


def format_code(code: PrefixCode) -> str:
    return "{" + ", ".join(format_address(a, code.sig) for a in code) + "}"


@dataclass(frozen=True)
class CodeReport:
    ok: bool
    mode: str
    reason: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def find_prefix_pair(addresses: Iterable[Address]) -> tuple | None:
    """A pair (p, q) with p a proper prefix of q, or None if prefix-free."""
    addrs = sorted(set(addresses))
    present = set(addrs)
    for q in addrs:
        for i in range(len(q.word)):
            p = Address(q.root, q.word[:i])
            if p in present:
                return (p, q)
    return None


def _first_uncovered(sig: Signature, addresses: set) -> Address | None:
    prefixes = set()
    for a in addresses:
        prefixes.update(a.prefixes())
    stack = [Address(i, ()) for i in range(sig.rank, 0, -1)]
    while stack:
        node = stack.pop()
        if node in addresses:
            continue
        if node not in prefixes:
            return node
        stack.extend(node.child(k) for k in range(sig.arity - 1, -1, -1))
    return None


def _check_letters(code: PrefixCode) -> Address | None:
    for a in code:
        if not 1 <= a.root <= code.sig.rank or any(not 0 <= x < code.sig.arity for x in a.word):
            return a
    return None


def is_complete(sig: Signature, addresses: Iterable[Address]) -> bool:
    """Assumes a prefix-free set of valid addresses."""
    return _first_uncovered(sig, set(addresses)) is None


def code_validate(code: PrefixCode, mode: str = "complete") -> CodeReport:
    if mode not in ("complete", "clone"):
        raise CantorError(f"unknown mode {mode!r}")
    bad = _check_letters(code)
    if bad is not None:
        return CodeReport(False, mode, "address outside signature", (bad,))
    pair = find_prefix_pair(code)
    if pair is not None:
        return CodeReport(False, mode, "not prefix-free", pair)
    missing = _first_uncovered(code.sig, set(code))
    if mode == "complete":
        if missing is not None:
            return CodeReport(False, mode, "incomplete: uncovered address", (missing,))
        n, r = code.sig.arity, code.sig.rank
        assert (len(code) - r) % (n - 1) == 0
        return CodeReport(True, mode)
    if len(code) == 0:
        return CodeReport(False, mode, "empty clone code")
    if missing is None:
        return CodeReport(False, mode, "complete code is not a proper clone")
    return CodeReport(True, mode, witness=(missing,))


def _prefix_lookup(a: Address, table) -> Address | None:
    for i in range(len(a.word), -1, -1):
        p = Address(a.root, a.word[:i])
        if p in table:
            return p
    return None


def longer_of_comparable(P: Iterable[Address], Q: Iterable[Address]) -> set:
    """{longer of (p, q) : p in P, q in Q comparable}, for prefix-free P and Q."""
    P, Q = set(P), set(Q)
    out = {p for p in P if _prefix_lookup(p, Q) is not None}
    out.update(q for q in Q if _prefix_lookup(q, P) is not None)
    return out


def code_refine(P: PrefixCode, Q: PrefixCode) -> PrefixCode:
    """Coarsest common refinement of two complete codes."""
    if P.sig != Q.sig:
        raise SignatureError(f"codes over {P.sig} and {Q.sig}")
    return PrefixCode(P.sig, longer_of_comparable(P, Q))


def complement_addresses(sig: Signature, addresses: Iterable[Address]) -> list[Address]:
    """Minimal set B, disjoint from the given prefix-free set A, with A ∪ B
    complete.  Tree walk, roots and siblings in letter order."""
    addresses = set(addresses)
    prefixes = set()
    for a in addresses:
        prefixes.update(a.prefixes())
    out = []
    stack = [Address(i, ()) for i in range(sig.rank, 0, -1)]
    while stack:
        node = stack.pop()
        if node in addresses:
            continue
        if node in prefixes:
            stack.extend(node.child(k) for k in range(sig.arity - 1, -1, -1))
        else:
            out.append(node)
    return out


def code_complement(A: PrefixCode) -> PrefixCode:
    rep = code_validate(A, "clone")
    if not rep.ok:
        raise CantorError(f"no complement: {rep.reason} {rep.witness}")
    return PrefixCode(A.sig, complement_addresses(A.sig, A))


def collapse(addresses: Iterable[Address], n: int) -> set:
    """Merge full sibling families into their parent until none remain.  Two
    prefix-free sets generate the same subalgebra iff their collapses agree."""
    cur = set(addresses)
    changed = True
    while changed:
        changed = False
        parents = {}
        for a in cur:
            if a.word:
                parents.setdefault(a.parent(), []).append(a)
        for p, kids in parents.items():
            if len(kids) == n:
                cur.difference_update(kids)
                cur.add(p)
                changed = True
    return cur


def minimal_elements(addresses: Iterable[Address]) -> set:
    """Drop every address that extends another one in the set."""
    addrs = set(addresses)
    return {a for a in addrs
            if not any(Address(a.root, a.word[:i]) in addrs for i in range(len(a.word)))}


# -- random generation -----------------------------------------------------------

def random_term(rng: random.Random, sig: Signature, max_depth: int = 12,
                budget: int = 24, redex_bias: float = 0.3) -> Term:
    """Random term of depth <= max_depth with roughly ``budget`` nodes.  With
    probability ``redex_bias`` a node is built as a redex of one of the two
    rules, so both rules actually fire."""
    n, r = sig.arity, sig.rank
    if r < 1:
        raise CantorError("no terms over the empty algebra")
    state = [budget]

    def build(depth: int) -> Term:
        state[0] -= 1
        if depth >= max_depth or state[0] <= 0:
            return Gen(rng.randint(1, r))
        x = rng.random()
        if x < 0.2:
            return Gen(rng.randint(1, r))
        if x < 0.2 + redex_bias and depth + 2 <= max_depth:
            if rng.random() < 0.5:
                inner = Mu(tuple(build(depth + 2) for _ in range(n)))
                return Alpha(rng.randint(1, n), inner)
            base = build(depth + 2)
            return Mu(tuple(Alpha(k, base) for k in range(1, n + 1)))
        if rng.random() < 0.55:
            return Alpha(rng.randint(1, n), build(depth + 1))
        return Mu(tuple(build(depth + 1) for _ in range(n)))

    return build(0)


def random_complete_code(rng: random.Random, sig: Signature, expansions: int) -> list[Address]:
    """Expand uniformly random leaves of the trivial code ``expansions`` times."""
    code = [Address(i, ()) for i in range(1, sig.rank + 1)]
    for _ in range(expansions):
        j = rng.randrange(len(code))
        a = code.pop(j)
        code.extend(a.child(k) for k in range(sig.arity))
    return code
