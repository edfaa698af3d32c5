import itertools
import random

import pytest
from hypothesis import given, strategies as st

from cantorv.core import Alpha, Gen, Homomorphism, Mu, Signature, is_inverse_pair, reduce, term_size
from cantorv.ktheory import (
    KTheoryError, ProductElement, candidate_pairs, collapse_endo_probe, endo, expansion_iso, k0,
    leaf_count, medial_witness, normal_forms, product_alpha, product_iso_probe, product_mu,
    product_reduce, rank_iso, separation_check,
)
from cantorv.parsing import parse_term
from test_core import terms

g1 = Gen(1)


# -- K0 ---------------------------------------------------------------------------------------

@pytest.mark.parametrize("n, name, modulus", [(2, "0", 1), (3, "Z/2", 2), (4, "Z/3", 3),
                                               (5, "Z/4", 4), (6, "Z/5", 5)])
def test_k0_values(n, name, modulus):
    R = k0(n)
    assert R.name == name and R.modulus == modulus
    assert R.ok and all(R.checks.values())


def test_k0_two_is_trivial():
    R = k0(2)
    assert R.is_trivial and R.one == 0 and R.elements == [0]


def test_k0_three_tables():
    t = k0(3).tables()
    assert t["add"] == [[0, 1], [1, 0]]
    assert t["mul"] == [[0, 0], [0, 1]]


def test_k0_classes_of_ranks():
    R = k0(4)
    assert [R.cls(r) for r in range(1, 8)] == [1, 2, 0, 1, 2, 0, 1]


@pytest.mark.parametrize("n, r", [(n, r) for n in range(2, 7) for r in range(1, 5)])
def test_expansion_iso_composites(n, r):
    fw, bw = expansion_iso(n, r)
    assert fw.source == Signature(n, r + n - 1) and fw.target == Signature(n, r)
    assert is_inverse_pair(fw, bw)
    assert separation_check(fw) and separation_check(bw)


def test_expansion_rejects_rank_zero():
    with pytest.raises(KTheoryError):
        expansion_iso(2, 0)


def test_rank_iso():
    f, g = rank_iso(3, 1, 5)
    assert f.target == Signature(3, 5) and is_inverse_pair(f, g)
    assert separation_check(f)
    with pytest.raises(KTheoryError, match="not isomorphic"):
        rank_iso(3, 1, 2)


def test_separation_rejects_non_isomorphism():
    # x1 -> (a1(x1)) is not onto C_{3,1}: its leaves are not a complete code
    f = Homomorphism(Signature(3, 1), Signature(3, 1), (Alpha(1, g1),))
    assert not separation_check(f)


def test_leaf_count():
    assert leaf_count([Mu((Alpha(1, g1), Alpha(2, g1))), g1]) == 1 + 1
    assert leaf_count([Mu((g1, g1))]) == 2


# -- products -------------------------------------------------------------------------------

pairs = st.tuples(terms(2, 1), terms(2, 1)).map(lambda p: ProductElement(*p))


@given(pairs)
def test_product_satisfies_axioms(p):
    merged = product_mu(product_alpha(1, p), product_alpha(2, p))
    assert product_reduce(merged) == product_reduce(p)


@given(pairs, pairs)
def test_product_descent_of_merge(p, q):
    assert product_reduce(product_alpha(1, product_mu(p, q))) == product_reduce(p)
    assert product_reduce(product_alpha(2, product_mu(p, q))) == product_reduce(q)


def test_medial_witness():
    w = medial_witness()
    assert w.fails
    assert (w.a, w.a2, w.b, w.b2) == (g1, g1, Alpha(1, g1), Alpha(2, g1))


def _brute_normal_forms(max_size):
    by_size = {1: [g1]}
    for s in range(2, max_size + 1):
        out = [Alpha(k, t) for k in (1, 2) for t in by_size[s - 1]]
        for left in range(1, s - 1):
            for a, b in itertools.product(by_size[left], by_size[s - 1 - left]):
                out.append(Mu((a, b)))
        by_size[s] = out
    every = [t for s in by_size for t in by_size[s]]
    return {t for t in every if reduce(t) == t}


def test_normal_form_enumeration():
    forms = normal_forms(2, 6)
    assert len(forms) == len(set(forms)) == 125
    assert set(forms) == _brute_normal_forms(6)
    assert all(term_size(t) <= 6 for t in forms)
    assert len(normal_forms(2, 8)) == 834


# -- endomorphism and product probes -------------------------------------------------------------

def test_collapse_endomorphism():
    rep = collapse_endo_probe(parse_term("m(g1,g1)"))
    assert rep.surjective and rep.preimage == Alpha(1, g1)
    assert endo(rep.candidate, rep.preimage) == g1
    assert rep.injective == "refuted"
    assert (Alpha(1, g1), Alpha(2, g1), g1) in rep.collisions
    for a, b, c in rep.collisions:
        assert a != b and endo(rep.candidate, a) == endo(rep.candidate, b) == c


def test_identity_endomorphism_is_certified():
    rep = collapse_endo_probe(g1)
    assert rep.surjective and rep.injective == "certified" and not rep.collisions


def test_descent_endomorphism_is_not_surjective():
    rep = collapse_endo_probe(Alpha(1, g1))
    assert not rep.surjective and rep.injective == "certified"


def test_descent_pair_is_refuted_surjective():
    p = product_iso_probe(parse_term("L(g1)"), parse_term("R(g1)"), depth=6)
    assert p.verdict == "refuted-surjective"
    assert p.missing_witness == ProductElement(g1, g1)
    assert p.injective_to_depth
    assert "outside" in p.certificate


def test_diagonal_is_refuted_surjective():
    p = product_iso_probe(parse_term("m(g1,g1)"), parse_term("m(g1,g1)"), depth=4)
    assert p.missing_witness == ProductElement(g1, Alpha(1, g1))
    assert p.verdict in ("refuted-injective", "refuted-surjective")


def test_bounded_search_is_inconclusive():
    # no certificate applies, so a missing pair only makes the verdict inconclusive
    p = product_iso_probe(parse_term("m(g1,g1)"), parse_term("m(g1,a1(g1))"), depth=5)
    assert p.verdict == "inconclusive(5,5)"
    assert p.injective_to_depth and p.collision is None
    assert p.missing_witness == ProductElement(g1, Alpha(2, g1))
    assert p.covered < p.total


def test_probe_json_keys():
    js = product_iso_probe(parse_term("L(g1)"), parse_term("R(g1)"), depth=4).to_json()
    assert set(js) == {"candidate", "injective_to_depth", "collision", "surjectivity",
                       "verdict", "bounds"}
    assert set(js["surjectivity"]) == {"covered", "total", "missing_witness", "certificate"}


def test_candidate_table_verdicts_are_sound():
    for s, t in candidate_pairs(random.Random(0), 8):
        p = product_iso_probe(s, t, depth=4)
        assert p.verdict.startswith(("refuted", "inconclusive", "verified"))
        if p.verdict == "refuted-injective":
            a, b, _ = p.collision
            assert (endo(s, a), endo(t, a)) == (endo(s, b), endo(t, b))
