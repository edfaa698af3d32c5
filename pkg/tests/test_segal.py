import pytest

from cantorv.groups import BUILTINS, builtin, small_groups
from cantorv.segal import (
    SubgroupCollection, check_segal, decomposition_check, family_passes, named_collection,
    sweep_collections, verify_witness,
)


def labelled(C, verdict):
    return [[C.group.labels[g], C.label(H)] for g, H in verdict.witness]


@pytest.mark.parametrize("name", list(BUILTINS))
def test_collections_containing_g_pass(name):
    G = builtin(name)
    for which in ("whole", "all"):
        v = check_segal(named_collection(G, which))
        assert v.passed and v.certified_all_sizes


def test_z2_trivial_collection_fails():
    C = named_collection(builtin("Z2"), "trivial")
    v = check_segal(C)
    assert not v.passed
    assert labelled(C, v) == [["e", "{e}"], ["t", "{e}"]]
    assert verify_witness(C, v.witness)


def test_klein_order_two_fails_at_k2():
    C = named_collection(builtin("V4"), "order2")
    v = check_segal(C, 2)
    assert not v.passed and v.failing_size == 2
    assert labelled(C, v) == [["a", "<a>"], ["b", "<a>"]]
    assert verify_witness(C, v.witness)


def test_single_families_always_pass():
    # one pair (g, H) is translated by g itself
    for G in small_groups(6):
        for H in G.subgroups:
            C = SubgroupCollection(G, [H])
            assert check_segal(C, 1).passed


def test_s3_cyclic_three_report():
    G = builtin("S3")
    rep = decomposition_check(named_collection(G, "231"), 3)
    assert not rep.segal.passed
    assert verify_witness(rep.collection, rep.segal.witness)
    assert [str(h) for h in rep.union_homology.groups] == ["Z", "Z/3", "0", "Z/3"]
    assert rep.agree == [True, False, True, False]
    assert rep.consistent
    js = rep.to_json()
    assert js["segal"] == "fail" and js["witness"] is not None and js["nerve"][0] == "Z"


def test_whole_group_report_agrees():
    rep = decomposition_check(named_collection(builtin("Z4"), "whole"), 3)
    assert rep.segal.passed and all(rep.agree)


def test_non_subgroup_rejected():
    G = builtin("Z4")
    with pytest.raises(Exception):
        SubgroupCollection(G, [{0, 1}])


def test_family_passes_gives_translator():
    G = builtin("S3")
    C = named_collection(G, "all")
    fam = [(g, frozenset([G.identity])) for g in range(G.order)]
    g = family_passes(C, fam)
    assert g is not None


@pytest.mark.parametrize("name", list(BUILTINS))
def test_sweep_is_consistent(name):
    G = builtin(name)
    for C in sweep_collections(G):
        rep = decomposition_check(C, 2)
        assert rep.consistent
        if not rep.segal.passed:
            assert verify_witness(C, rep.segal.witness)
