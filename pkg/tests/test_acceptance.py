"""Acceptance criteria at full scale, seed 0.

Each test runs the matching suite with the ``full`` profile parameters and
prints one PASS/FAIL line.  The whole module takes a few minutes.
"""

import time

import pytest

from cantorv import suites

SEED = 0
_cache: dict = {}


def result(name):
    if name not in _cache:
        start = time.perf_counter()
        res = suites.run_suite(name, SEED, **suites.PROFILES["full"][name])
        _cache[name] = (res, time.perf_counter() - start)
    return _cache[name]


def report(capsys, number, ok, summary):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {summary}")


def counts(res, *names):
    return ", ".join(f"{n} {res.check(n).passed}/{res.check(n).total}" for n in names)


def test_criterion_1_rewriting(capsys):
    res, secs = result("rewriting")
    names = ("confluence", "merge_of_descents", "descent_of_merge")
    ok = res.ok and res.check("confluence").total == 10**5 and secs < 60
    report(capsys, 1, ok, f"{counts(res, *names)} in {secs:.1f} s")
    assert ok, res.to_json()


def test_criterion_2_group_arithmetic(capsys):
    res, _ = result("group")
    names = ("associativity", "identity", "inverse", "canonical_matches_action")
    # one block of triples and pairs per group, V_{2,1} and V_{3,2}
    ok = (res.ok and res.check("associativity").total == 2 * 10**4
          and res.check("canonical_matches_action").total == 2 * 100)
    report(capsys, 2, ok, counts(res, *names))
    assert ok, res.to_json()


def test_criterion_3_stabilization(capsys):
    res, _ = result("stabilization")
    ok = (res.ok and res.info["exhaustive_elements"] > 0
          and res.check("retract_random").total == 10**4)
    report(capsys, 3, ok, f"{counts(res, 'retract_exhaustive', 'retract_random')}"
                          f" ({res.info['exhaustive_elements']} elements with <= 3 carets)")
    assert ok, res.to_json()


def test_criterion_4_whitehead_perfectness(capsys):
    res, secs = result("whitehead")
    ok = (res.ok and res.check("whitehead").total == 1000
          and res.check("perfectness").total == 1000 and secs < 120)
    report(capsys, 4, ok, f"{counts(res, 'whitehead', 'perfectness')} in {secs:.1f} s")
    assert ok, res.to_json()


def test_criterion_5_k0(capsys):
    res, _ = result("k0")
    audited = {n: result(n)[0].audit for n in ("group", "stabilization", "whitehead")}
    ok = res.ok and all(audited.values())
    names = ("k0_value", "k0_2_trivial", "expansion_iso", "rank_transport")
    report(capsys, 5, ok, f"{counts(res, *names)}; leaf-count congruence held on "
                          f"{sum(audited.values())} tableau constructions")
    assert ok, res.to_json()


def test_criterion_6_product_probe(capsys):
    res, _ = result("product")
    names = ("descent_pair_refuted", "collapse_surjective", "collapse_not_injective")
    ok = res.ok
    report(capsys, 6, ok, counts(res, *names))
    assert ok, res.to_json()


def test_criterion_7_clones(capsys):
    res, _ = result("clones")
    names = ("disjointify_disjoint", "segal_witness_agrees", "support_homomorphism",
             "compatibility_square")
    ok = (res.ok and res.check("disjointify_disjoint").total == 1000
          and res.check("segal_witness_agrees").total == 1000)
    report(capsys, 7, ok, counts(res, *names))
    assert ok, res.to_json()


def test_criterion_8_poset(capsys):
    res, _ = result("poset")
    names = ("retraction_below_identity", "retraction_monotone",
             "retraction_identity_on_primed", "nerve_acyclic")
    ok = res.ok and res.check("nerve_acyclic").total == 100
    report(capsys, 8, ok, counts(res, *names))
    assert ok, res.to_json()


def test_criterion_9_homology(capsys):
    res, secs = result("homology")
    ok = (res.ok and res.check("snf_certified").total == 10**4
          and set(res.info["oracle_groups"]) >= {"Z2", "Z3", "Z4", "V4", "S3"}
          and secs < 300)
    report(capsys, 9, ok, f"{counts(res, 'snf_certified', 'bar_oracle', 'single_subgroup')}"
                          f" in {secs:.1f} s")
    assert ok, res.to_json()


def test_criterion_10_segal(capsys):
    res, _ = result("segal")
    names = ("v4_order2_witness", "z2_trivial_witness", "contains_g_passes",
             "witness_verifies", "consistent")
    ok = res.ok
    report(capsys, 10, ok, counts(res, *names))
    assert ok, res.to_json()
