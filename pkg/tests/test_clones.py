import random

import pytest
from hypothesis import given, strategies as st

from cantorv.clones import (
    Clone, CloneError, CloneSeq, HallObstruction, build_Q, check_Q, clone_contains,
    clone_disjoint, clone_intersect, clone_split, compatibility_square, disjointify,
    fixes_pointwise, pairwise_disjoint, random_clone, random_cloneseq, random_family,
    segal_witness, seq_equal, seq_leq, seq_membership, seq_ops, support_iso,
)
from cantorv.core import Signature
from cantorv.parsing import parse_cloneseq, parse_code
from cantorv.thompson import compose, identity, inverse, random_tableau
from conftest import tab, words

V21 = Signature(2, 1)
B = "{00->00, 01->01, 10->11, 11->10}"


def C(text, sig=None):
    c = parse_code(text, sig, "clone")
    return Clone(c.sig, c)


def S(text):
    return parse_cloneseq(text)


def test_contains_examples():
    assert clone_contains(C("{0}"), C("{00, 01}"))
    assert not clone_contains(C("{0}"), C("{1}"))
    assert clone_contains(C("{0, 10}"), C("{0, 10}"))


def test_intersect_examples():
    assert words(clone_intersect(C("{0}"), C("{00, 01}"))) == {"00", "01"}
    assert clone_intersect(C("{0}"), C("{1}")) is None
    assert words(clone_intersect(C("{0, 10}"), C("{00, 1}"))) == {"00", "10"}


def test_split_examples():
    assert [words(p) for p in clone_split(C("{0}"))] == [{"00"}, {"01"}]
    r2 = clone_split(C("n=2 r=2 {1:e}"))
    assert [sorted(map(repr, p)) for p in r2] == [["1:0"], ["1:1"]]
    n3 = clone_split(C("n=3 r=1 {0}"))
    assert [words(p) for p in n3] == [{"00"}, {"01"}, {"02"}]


def test_disjointify_examples():
    out = disjointify([C("{0}"), C("{1}")])
    assert [words(x) for x in out] == [{"0"}, {"1"}]
    out = disjointify([C("{0}"), C("{0}")])
    assert [words(x) for x in out] == [{"00"}, {"01"}]
    ins = [C("{0}"), C("{00, 1}")]
    out = disjointify(ins)
    assert pairwise_disjoint(out)
    assert all(clone_contains(a, b) for a, b in zip(ins, out))


def test_fixes_pointwise_examples(A):
    assert fixes_pointwise(identity(V21), C("{0}"))
    assert fixes_pointwise(tab(B), C("{0}"))
    assert not fixes_pointwise(A, C("{11}"))


def test_segal_witness_singleton(A):
    w = segal_witness([(A, C("{0}"))])
    assert w.ok and w.g == A


def test_segal_witness_pair():
    fam = [(tab(B), C("{0}")), (identity(V21), C("{0}"))]
    w = segal_witness(fam)
    assert w.ok
    for (v, _), X in zip(fam, w.clones):
        assert fixes_pointwise(compose(inverse(w.g), v), X)


def test_seq_ops_examples():
    X, Y = S("[{0} > {00}]"), S("[{1} > {10}]")
    ops = seq_ops(X, Y)
    # {0} and {1} are disjoint but together complete, so there is no sum
    assert ops.disjoint1 and ops.sum is None
    assert seq_leq(X, X)
    ops = seq_ops(S("[{00}]"), Y)
    assert ops.disjoint1 and ops.sum is not None
    assert words(ops.sum.term(1)) == {"00", "1"}
    inter = seq_ops(S("[{0}]"), S("[{00, 01}]")).intersectwise
    assert inter is not None and words(inter.term(1)) == {"00", "01"}


def test_continuation_rule():
    X = S("[{0}]")
    assert words(X.term(3)) == {"000"}
    assert seq_equal(X, S("[{0} > {00}]"))


def test_cloneseq_must_be_strict():
    with pytest.raises(CloneError):
        CloneSeq(V21, (tuple(C("{0}")), tuple(C("{0}"))))


def test_membership_examples(A):
    X = S("[{0} > {00}]")
    assert seq_membership(identity(V21), X).member
    m = seq_membership(tab(B), X)
    assert m.member and m.level == 1
    m = seq_membership(A, X)
    assert not m.member and not any(m.per_level)


def test_support_iso_example():
    s = support_iso(C("{0}"))
    assert len(s.complement) == 1
    root_swap = tab("{0->1, 1->0}")
    assert s(root_swap) == tab("{0->0, 10->11, 11->10}")
    assert s(identity(V21)).is_identity()


def test_compatibility_square_on_chain():
    u = tab("{0->1, 1->0}")
    assert compatibility_square(C("{0}"), C("{00}"), u)


def test_build_q_singleton():
    Q = build_Q([S("[{0}]")])
    assert len(Q.elements) == 2 and check_Q(Q).ok


def test_build_q_two_disjoint():
    X, Y = S("[{0} > {00}]"), S("[{1} > {10}]")
    Q = build_Q([X, Y])
    rep = check_Q(Q)
    assert rep.ok
    assert len(Q.elements) == 5
    primed = [Q.elements[i] for i in Q.primed]
    assert Q.elements[Q.retraction[0]] in primed and Q.elements[Q.retraction[1]] in primed


def test_hall_obstruction():
    with pytest.raises(HallObstruction):
        build_Q([S("[{0}]"), S("[{00}]")])


# -- properties -----------------------------------------------------------------------------

seeds = st.integers(0, 10**9)
sigs = st.sampled_from([Signature(2, 1), Signature(2, 2), Signature(3, 1)])


@given(sigs, seeds, st.integers(1, 5))
def test_disjointify_properties(sig, seed, k):
    rng = random.Random(seed)
    ins = [random_clone(rng, sig) for _ in range(k)]
    out = disjointify(ins)
    assert pairwise_disjoint(out)
    assert all(clone_contains(a, b) for a, b in zip(ins, out))
    assert all(a.same_as(b) for a, b in zip(disjointify(out), out))


@given(sigs, seeds)
def test_intersection_is_largest_common_subclone(sig, seed):
    rng = random.Random(seed)
    a, b = random_clone(rng, sig), random_clone(rng, sig)
    i = clone_intersect(a, b)
    if i is None:
        assert clone_disjoint(a, b)
    else:
        assert clone_contains(a, i) and clone_contains(b, i)


@given(sigs, seeds, st.integers(1, 4))
def test_segal_witness_postconditions(sig, seed, k):
    w = segal_witness(random_family(random.Random(seed), sig, k))
    assert w.ok, w.checks


@given(seeds)
def test_support_iso_properties(seed):
    rng = random.Random(seed)
    A = random_clone(rng, V21)
    s = support_iso(A)
    u, v = random_tableau(rng, s.source, 4), random_tableau(rng, s.source, 4)
    assert fixes_pointwise(s(u), A)
    assert s(compose(u, v)) == compose(s(u), s(v))
    assert s.inverse(s(u)) == u


@given(seeds)
def test_fixing_matches_containment(seed):
    # an element fixing a clone fixes every sub-clone
    rng = random.Random(seed)
    A = random_clone(rng, V21)
    g = support_iso(A)(random_tableau(rng, Signature(2, len(support_iso(A).complement)), 3))
    sub = Clone(V21, [a.child(0) for a in A])
    assert clone_contains(A, sub) and fixes_pointwise(g, sub)


@given(seeds, st.integers(1, 4))
def test_build_q_properties(seed, k):
    rng = random.Random(seed)
    P = [random_cloneseq(rng, V21, min_points=k) for _ in range(k)]
    assert check_Q(build_Q(P)).ok
