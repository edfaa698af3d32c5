import itertools
import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as sympy_factors

from cantorv.groups import builtin, small_groups
from cantorv.homology import (
    ChainComplex, HomologyError, IntMatrix, Poset, bar_chains, bar_subcomplex, complex_homology,
    determinant, group_homology, invariant_factors, is_smith_form, nerve_complex,
    simplicial_complex, snf, verify_snf,
)

ORACLE = json.loads((Path(__file__).parent / "oracles" / "bar_homology.json").read_text())


def sig(H):
    return [str(g) for g in H.groups]


# -- Smith normal form ----------------------------------------------------------------------

def test_snf_diag_2_3():
    res = snf([[2, 0], [0, 3]])
    assert res.diagonal == [1, 6]
    assert verify_snf([[2, 0], [0, 3]], res)


def test_snf_zero_and_identity():
    assert snf([[0, 0], [0, 0]]).diagonal == [0, 0]
    assert snf([[1, 0], [0, 1]]).diagonal == [1, 1]


def test_snf_certificates_are_unimodular():
    M = [[4, 6, 2], [2, 8, 6], [0, 2, 4]]
    res = snf(M)
    assert abs(determinant(res.U)) == 1 and abs(determinant(res.V)) == 1
    assert verify_snf(M, res)


def test_verify_rejects_tampered_certificate():
    M = [[2, 4], [6, 8]]
    res = snf(M)
    res.U[0][0] += 1
    assert not verify_snf(M, res)


def test_is_smith_form():
    assert is_smith_form([[1, 0], [0, 2]])
    assert not is_smith_form([[2, 0], [0, 3]])
    assert not is_smith_form([[1, 1], [0, 2]])


matrices = st.integers(1, 7).flatmap(lambda r: st.integers(1, 7).flatmap(
    lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


@given(matrices)
def test_snf_matches_sympy(M):
    res = snf(M)
    assert verify_snf(M, res)
    theirs = [abs(int(x)) for x in sympy_factors(DomainMatrix(M, (len(M), len(M[0])), ZZ))]
    theirs = [x for x in theirs if x]
    assert [x for x in res.invariant_factors if x] == theirs


@given(matrices)
def test_sparse_route_agrees_with_dense(M):
    assert invariant_factors(IntMatrix.from_dense(M)) == [x for x in snf(M).diagonal if x]


# -- complexes --------------------------------------------------------------------------------

def test_circle_one_vertex():
    C = ChainComplex([1, 1], {1: IntMatrix.from_dense([[0]])}, 1)
    assert sig(complex_homology(C)) == ["Z", "Z"]


def test_two_sphere():
    C = simplicial_complex(itertools.combinations(range(4), 3), 2)
    assert sig(complex_homology(C)) == ["Z", "0", "Z"]


def test_zero_complex():
    C = ChainComplex([0, 0], {1: IntMatrix.zeros(0, 0)}, 1)
    assert sig(complex_homology(C)) == ["0", "0"]


def test_projective_plane_torsion():
    # a 6-vertex triangulation of RP^2
    faces = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
             (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    H = complex_homology(simplicial_complex(faces, 2))
    assert sig(H) == ["Z", "Z/2", "0"]


def test_bad_complex_rejected():
    d1 = IntMatrix.from_dense([[1]])
    d2 = IntMatrix.from_dense([[1]])
    with pytest.raises(HomologyError):
        complex_homology(ChainComplex([1, 1, 1], {1: d1, 2: d2}, 1))


def test_nerve_examples():
    chain = Poset([0, 1], {(0, 1)})
    assert complex_homology(nerve_complex(chain, 3)).reduced().vanishes()
    two = Poset([0, 1], set())
    assert sig(complex_homology(nerve_complex(two, 3)).reduced())[0] == "Z"
    subsets = [frozenset(s) for k in (1, 2) for s in itertools.combinations(range(3), k)]
    P = Poset.from_function(subsets, lambda a, b: a < b)
    assert sig(complex_homology(nerve_complex(P, 3)).reduced())[:3] == ["0", "Z", "0"]


def test_poset_validation():
    with pytest.raises(HomologyError, match="transitive"):
        Poset([0, 1, 2], {(0, 1), (1, 2)})
    with pytest.raises(HomologyError, match="antisymmetric"):
        Poset([0, 1], {(0, 1), (1, 0)})


# -- bar complexes ---------------------------------------------------------------------------

def test_bar_z2():
    G = builtin("Z2")
    assert sig(complex_homology(bar_subcomplex(G, [frozenset(range(2))], 3))) == \
        ["Z", "Z/2", "0", "Z/2"]


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4", "V4", "S3"])
def test_bar_homology_matches_oracle(name):
    H = group_homology(builtin(name), 3)
    want = [(g["betti"], tuple(g["torsion"])) for g in ORACLE[name]]
    assert list(H.signature()) == want


def test_d4_degree_three():
    assert sig(group_homology(builtin("D4"), 3))[3] == "Z/2 + Z/2 + Z/4"


def test_single_subgroup_z3_in_s3():
    G = builtin("S3")
    H = G.closure([G.element("231")])
    inside = complex_homology(bar_subcomplex(G, [H], 3))
    assert inside.signature() == group_homology(G.subgroup_group(H), 3).signature()
    assert sig(inside) == ["Z", "Z/3", "0", "Z/3"]


def test_trivial_collection_is_a_point():
    G = builtin("S3")
    H = complex_homology(bar_subcomplex(G, [frozenset([G.identity])], 3))
    assert sig(H) == ["Z", "0", "0", "0"]


def test_bar_subcomplex_rejects_non_subgroup():
    G = builtin("Z4")
    with pytest.raises(Exception):
        bar_subcomplex(G, [frozenset({0, 1})], 2)


@pytest.mark.parametrize("G", small_groups(6), ids=lambda g: g.name)
def test_enlarging_collection_adds_chains(G):
    subs = list(G.subgroups)
    for a, b in itertools.combinations(subs, 2):
        small = set(bar_chains(G, [a], 2))
        big = set(bar_chains(G, [a, b], 2))
        assert small <= big
