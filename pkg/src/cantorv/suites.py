"""Seeded property suites, shared by ``cantorv selftest`` and the acceptance tests.

Each suite takes a seed and a parameter dict and returns a SuiteResult of
named checks, each with a pass count, a total and the first few failures.
The ``quick`` profile finishes in well under a minute; ``full`` runs the
acceptance-scale sample sizes.
"""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import clones as cl
from . import groups as gr
from . import homology as hm
from . import ktheory as kt
from . import segal as sg
from . import thompson as th
from .core import (
    Address, Alpha, Gen, Mu, Signature, _root_step, random_term, reduce, reduce_outermost,
)


@dataclass
class Check:
    name: str
    passed: int = 0
    total: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "total": self.total,
                "failures": self.failures}


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)
    seconds: float = 0.0
    audit: int = 0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        # timing is left out so that equal seeds give identical reports
        return {"suite": self.name, "ok": self.ok, "checks": [c.to_json() for c in self.checks],
                "info": self.info, "leaf_count_checks": self.audit}


class _Recorder:
    def __init__(self, name: str, max_failures: int = 3):
        self.result = SuiteResult(name)
        self._by_name: dict = {}
        self.max_failures = max_failures

    def __call__(self, name: str, cond: bool, detail=None) -> bool:
        c = self._by_name.get(name)
        if c is None:
            c = self._by_name[name] = Check(name)
            self.result.checks.append(c)
        c.total += 1
        if cond:
            c.passed += 1
        elif len(c.failures) < self.max_failures:
            c.failures.append(str(detail) if detail is not None else "")
        return cond


# -- 1. rewriting -----------------------------------------------------------------------------

def suite_rewriting(seed: int, terms: int = 2000, max_depth: int = 12) -> SuiteResult:
    rng = random.Random(seed)
    rec = _Recorder("rewriting")
    for i in range(terms):
        n = rng.choice((2, 3))
        sig = Signature(n, rng.randint(1, 2))
        t = random_term(rng, sig, max_depth=max_depth)
        rec("confluence", reduce(t) == reduce_outermost(t), t)
        x = random_term(rng, sig, max_depth=4, budget=6)
        merged = Mu(tuple(Alpha(k, x) for k in range(1, n + 1)))
        rec("merge_of_descents", _root_step(merged) == x and reduce(merged) == reduce(x), x)
        xs = tuple(random_term(rng, sig, max_depth=4, budget=6) for _ in range(n))
        k = rng.randint(1, n)
        desc = Alpha(k, Mu(xs))
        rec("descent_of_merge", _root_step(desc) == xs[k - 1] and reduce(desc) == reduce(xs[k - 1]),
            desc)
    return rec.result


# -- 2. group arithmetic --------------------------------------------------------------------

def _unreduced_copy(rng: random.Random, u: th.Tableau, extra: int) -> th.Tableau:
    """u written over a finer domain code, without reduction."""
    code = list(u.domain)
    for _ in range(extra):
        a = code.pop(rng.randrange(len(code)))
        code.extend(a.child(k) for k in range(u.sig.arity))
    return th._make(u.sig, th.expand_domain(u, code))


def suite_group(seed: int, triples: int = 200, pairs: int = 20, complexity: int = 6,
                probe_depth: int = 6) -> SuiteResult:
    rng = random.Random(seed)
    rec = _Recorder("group_arithmetic")
    for sig in (Signature(2, 1), Signature(3, 2)):
        e = th.identity(sig)
        for _ in range(triples):
            u, v, w = (th.random_tableau(rng, sig, complexity) for _ in range(3))
            rec("associativity", th.compose(th.compose(u, v), w) == th.compose(u, th.compose(v, w)),
                (u, v, w))
            rec("identity", th.compose(u, e) == u == th.compose(e, u), u)
            rec("inverse", th.compose(u, th.inverse(u)) == e == th.compose(th.inverse(u), u), u)
            rec("reduced", th.is_reduced(th.compose(u, v)), (u, v))
        probes = th.address_probes(sig, probe_depth)
        for i in range(pairs):
            u = th.random_tableau(rng, sig, complexity)
            if i % 2:
                v = th.random_tableau(rng, sig, complexity)
            else:
                v = th.reduce_tableau(_unreduced_copy(rng, u, rng.randint(1, 4)))
            terms = probes + [random_term(rng, sig, max_depth=probe_depth, budget=10)
                              for _ in range(10)]
            rec("canonical_matches_action", (u == v) == th.action_agrees(u, v, terms), (u, v))
            t = random_term(rng, sig, max_depth=probe_depth, budget=10)
            rec("action_is_homomorphic",
                th.apply(th.compose(u, v), t) == th.apply(u, th.apply(v, t)), (u, v, t))
    return rec.result


# -- 3. stabilization --------------------------------------------------------------------------

def suite_stabilization(seed: int, max_carets: int = 3, random_count: int = 200) -> SuiteResult:
    rng = random.Random(seed)
    rec = _Recorder("stabilization")
    everything = sorted(th.all_tableaux(Signature(2, 1), max_carets),
                        key=lambda u: (u.domain, u.range))
    rec.result.info["exhaustive_elements"] = len(everything)
    for u in everything:
        rec("retract_exhaustive", th.retract_check(u), u)
    sigs = [Signature(2, 1), Signature(2, 2), Signature(3, 1), Signature(3, 2)]
    for i in range(random_count):
        u = th.random_tableau(rng, sigs[i % len(sigs)], 6)
        rec("retract_random", th.retract_check(u), u)
    return rec.result


# -- 4. Whitehead and perfectness ------------------------------------------------------------------

def suite_whitehead(seed: int, count: int = 50, complexity: int = 6) -> SuiteResult:
    rng = random.Random(seed)
    rec = _Recorder("whitehead_perfectness")
    sigs = [Signature(2, 1), Signature(2, 2), Signature(3, 1)]
    for i in range(count):
        sig = sigs[i % len(sigs)]
        w = th.random_tableau(rng, sig, complexity)
        rec("whitehead", th.whitehead_witness(w).holds, w)
        u, v = th.random_tableau(rng, sig, complexity), th.random_tableau(rng, sig, complexity)
        rec("perfectness", th.perfectness_identity(u, v).ok, (u, v))
    return rec.result


# -- 5. K0 ---------------------------------------------------------------------------------------

def suite_k0(seed: int, max_n: int = 6, max_r: int = 4) -> SuiteResult:
    rec = _Recorder("k0")
    expected = {2: "0", 3: "Z/2", 4: "Z/3"}
    for n, name in expected.items():
        ring = kt.k0(n)
        rec("k0_value", ring.name == name and ring.ok, (n, ring.name, ring.checks))
    rec("k0_2_trivial", kt.k0(2).one == 0 and kt.k0(2).tables() == {"add": [[0]], "mul": [[0]]})
    for n in range(2, max_n + 1):
        for r in range(1, max_r + 1):
            try:
                fw, bw = kt.expansion_iso(n, r)
                ok = kt.separation_check(fw)
            except kt.KTheoryError as exc:
                ok, fw = False, exc
            rec("expansion_iso", ok, (n, r))
    rng = random.Random(seed)
    # rank transport keeps the leaf-count congruence of the target algebra
    for n in (2, 3, 4):
        for r in range(1, 3):
            u = th.random_tableau(rng, Signature(n, r), 4)
            fw, bw = kt.rank_iso(n, r, r + n - 1)
            v = th.rank_transport(u, fw, bw)
            rec("rank_transport", (len(v.domain) - v.sig.rank) % (n - 1) == 0
                and th.rank_transport(v, bw, fw) == u, (n, r))
    return rec.result


# -- 6. products and probes -------------------------------------------------------------------

def suite_product(seed: int, laws: int = 500, table: int = 8, depth: int = 6) -> SuiteResult:
    rng = random.Random(seed)
    rec = _Recorder("product_probe")
    g = Gen(1)
    sig = Signature(2, 1)
    pair = kt.product_iso_probe(Alpha(1, g), Alpha(2, g), depth)
    rec("descent_pair_refuted", pair.verdict == "refuted-surjective"
        and pair.missing_witness == kt.ProductElement(g, g)
        and "clone" in pair.certificate, pair.to_json())
    diag = kt.product_iso_probe(g, g, depth)
    rec("diagonal_refuted", diag.verdict == "refuted-surjective"
        and diag.missing_witness == kt.ProductElement(g, Alpha(1, g)), diag.to_json())
    col = kt.collapse_endo_probe(Mu((g, g)))
    rec("collapse_surjective", col.surjective and col.preimage == Alpha(1, g)
        and kt.endo(Mu((g, g)), Alpha(1, g)) == g, col.to_json())
    rec("collapse_not_injective", col.injective == "refuted"
        and (Alpha(1, g), Alpha(2, g), g) in col.collisions, col.to_json())
    ident = kt.collapse_endo_probe(g)
    rec("identity_bijective", ident.surjective and ident.injective == "certified")
    lam = kt.collapse_endo_probe(Alpha(1, g))
    rec("descent_not_surjective", not lam.surjective and lam.preimage is None)
    med = kt.medial_witness()
    rec("medial_fails", med.fails, med)
    for _ in range(laws):
        ps = [kt.ProductElement(random_term(rng, sig, 6, 8), random_term(rng, sig, 6, 8))
              for _ in range(2)]
        k = rng.randint(1, 2)
        rec("mu_then_descent", kt.product_reduce(kt.product_alpha(k, kt.product_mu(*ps)))
            == kt.product_reduce(ps[k - 1]), ps)
        p = ps[0]
        rec("descents_then_mu", kt.product_reduce(kt.product_mu(kt.product_alpha(1, p),
                                                                kt.product_alpha(2, p)))
            == kt.product_reduce(p), p)
    rows = []
    for s, t in kt.candidate_pairs(rng, table):
        probe = kt.product_iso_probe(s, t, depth)
        rows.append(probe.to_json())
        # a verdict never claims more than its evidence
        rec("probe_verdict_sound", probe.verdict != "verified-to-depth"
            or (probe.injective_to_depth and probe.covered == probe.total), probe.to_json())
    rec.result.info["candidate_table"] = [
        {"candidate": r["candidate"], "verdict": r["verdict"],
         "covered": r["surjectivity"]["covered"], "total": r["surjectivity"]["total"]}
        for r in rows]
    return rec.result


# -- 7. clones ---------------------------------------------------------------------------------

def suite_clones(seed: int, families: int = 50, witnesses: int = 50, samples: int = 20) -> SuiteResult:
    rng = random.Random(seed)
    rec = _Recorder("clones")
    sigs = [Signature(2, 1), Signature(2, 2), Signature(3, 1)]
    for i in range(families):
        sig = sigs[i % len(sigs)]
        As = [cl.random_clone(rng, sig) for _ in range(rng.randint(1, 5))]
        out = cl.disjointify(As)
        rec("disjointify_disjoint", cl.pairwise_disjoint(out), As)
        rec("disjointify_contained", all(cl.clone_contains(A, B) for A, B in zip(As, out)), As)
        rec("disjointify_idempotent",
            all(a.same_as(b) for a, b in zip(cl.disjointify(out), out)), As)
    for i in range(witnesses):
        sig = sigs[i % len(sigs)]
        fam = cl.random_family(rng, sig, rng.randint(1, 4))
        w = cl.segal_witness(fam)
        rec("segal_witness", w.ok, (fam, w.checks))
        rec("segal_witness_agrees", all(cl.fixes_pointwise(th.compose(th.inverse(w.g), v), B)
                                        for (v, _), B in zip(fam, w.clones)), fam)
    sig = Signature(2, 1)
    for _ in range(samples):
        A = cl.random_clone(rng, sig, expansions=3)
        S = cl.support_iso(A)
        u, v = th.random_tableau(rng, S.source, 4), th.random_tableau(rng, S.source, 4)
        gu = S(u)
        rec("support_fixes", cl.fixes_pointwise(gu, A), A)
        rec("support_homomorphism", S(th.compose(u, v)) == th.compose(gu, S(v)), (A, u, v))
        rec("support_inverse", S.inverse(gu) == u, (A, u))
        # a sub-clone along the chain: split one generator and keep its 0-child
        a = rng.choice(list(A))
        A2 = cl.Clone(sig, [x for x in A if x != a] + [a.child(0)])
        rec("compatibility_square", cl.compatibility_square(A, A2, u), (A, A2, u))
    return rec.result


# -- 8. the poset Q --------------------------------------------------------------------------------

def suite_poset(seed: int, count: int = 10, max_size: int = 5, degree: int = 3) -> SuiteResult:
    rng = random.Random(seed)
    rec = _Recorder("poset_q")
    sig = Signature(2, 1)
    sizes = []
    for _ in range(count):
        k = rng.randint(1, max_size)
        P = [cl.random_cloneseq(rng, sig, min_points=k) for _ in range(k)]
        Q = cl.build_Q(P)
        rep = cl.check_Q(Q, degree)
        sizes.append(len(Q.elements))
        rec("retraction_below_identity", rep.below_identity, P)
        rec("retraction_monotone", rep.monotone, P)
        rec("retraction_identity_on_primed", rep.identity_on_primed, P)
        rec("retraction_idempotent", rep.idempotent, P)
        rec("nerve_acyclic", all(h.is_zero() for h in rep.reduced_homology), P)
    rec.result.info["largest_Q"] = max(sizes) if sizes else 0
    return rec.result


# -- 9. homology ------------------------------------------------------------------------------

ORACLE_GROUPS = ("Z2", "Z3", "Z4", "V4", "S3")


def random_matrix(rng: random.Random, max_dim: int = 40) -> list:
    rows, cols = rng.randint(1, max_dim), rng.randint(1, max_dim)
    density = rng.uniform(0.05, 0.5)
    return [[rng.choice((-2, -1, 1, 2, 3)) if rng.random() < density else 0
             for _ in range(cols)] for _ in range(rows)]


def _oracle_table() -> dict:
    path = os.environ.get("CANTORV_BAR_ORACLE")
    if path is None:
        path = Path(__file__).resolve().parents[2] / "tests" / "oracles" / "bar_homology.json"
    return json.loads(Path(path).read_text())


def suite_homology(seed: int, matrices: int = 100, max_dim: int = 20, degree: int = 3,
                   subgroup_order: int = 6, oracle: dict | None = None) -> SuiteResult:
    rng = random.Random(seed)
    rec = _Recorder("homology")
    for _ in range(matrices):
        M = random_matrix(rng, max_dim)
        res = hm.snf(M)
        rec("snf_certified", hm.verify_snf(M, res), M)
    if oracle is None:
        try:
            oracle = _oracle_table()
        except OSError:
            oracle = {}
    rec.result.info["oracle_groups"] = sorted(oracle)
    for name in ORACLE_GROUPS:
        if name not in oracle:
            continue
        H = hm.group_homology(gr.builtin(name), degree)
        want = tuple((g["betti"], tuple(g["torsion"])) for g in oracle[name][:degree + 1])
        rec("bar_oracle", H.signature() == want, (name, str(H)))
    count = 0
    for G in gr.small_groups(subgroup_order):
        full = {}
        for H in G.subgroups:
            sub = G.subgroup_group(H)
            key = sub.table
            if key not in full:
                full[key] = hm.group_homology(sub, degree).signature()
            inside = hm.complex_homology(hm.bar_subcomplex(G, [H], degree)).signature()
            rec("single_subgroup", inside == full[key], (G.name, G.subgroup_label(H)))
            count += 1
    rec.result.info["subgroups_checked"] = count
    return rec.result


# -- 10. Segal checker ------------------------------------------------------------------------

def suite_segal(seed: int, groups: tuple = ("Z2", "Z3", "V4", "S3")) -> SuiteResult:
    rec = _Recorder("segal")
    V4 = gr.builtin("V4")
    v = sg.check_segal(sg.named_collection(V4, "order2"), 2)
    a, b = V4.element("a"), V4.element("b")
    rec("v4_order2_witness", not v.passed and v.witness == ((a, frozenset({0, a})),
                                                           (b, frozenset({0, a}))), v.witness)
    Z2 = gr.builtin("Z2")
    v = sg.check_segal(sg.named_collection(Z2, "trivial"))
    e, t = Z2.identity, Z2.element("t")
    rec("z2_trivial_witness", not v.passed and v.witness == ((e, frozenset({e})),
                                                            (t, frozenset({e}))), v.witness)
    S3 = gr.builtin("S3")
    rep = sg.decomposition_check(sg.named_collection(S3, "231"))
    rec("s3_cyclic3_consistent", not rep.segal.passed and not all(rep.agree) and rep.consistent,
        rep.to_json())
    inconsistent = 0
    for name in groups:
        G = gr.builtin(name)
        whole = frozenset(range(G.order))
        for C in sg.sweep_collections(G):
            rep = sg.decomposition_check(C)
            if whole in C.members:
                rec("contains_g_passes", rep.segal.passed and rep.segal.certified_all_sizes
                    and all(rep.agree), (name, C.describe()))
            if not rep.segal.passed:
                rec("witness_verifies", sg.verify_witness(C, rep.segal.witness),
                    (name, C.describe()))
            rec("consistent", rep.consistent, rep.to_json())
            inconsistent += not rep.consistent
    rec.result.info["inconsistent"] = inconsistent
    return rec.result


# -- profiles -------------------------------------------------------------------------------------

SUITES = {
    "rewriting": suite_rewriting,
    "group": suite_group,
    "stabilization": suite_stabilization,
    "whitehead": suite_whitehead,
    "k0": suite_k0,
    "product": suite_product,
    "clones": suite_clones,
    "poset": suite_poset,
    "homology": suite_homology,
    "segal": suite_segal,
}

PROFILES = {
    "quick": {
        "rewriting": {"terms": 2000},
        "group": {"triples": 100, "pairs": 20},
        "stabilization": {"max_carets": 2, "random_count": 200},
        "whitehead": {"count": 60},
        "k0": {},
        "product": {"laws": 500, "table": 6},
        "clones": {"families": 60, "witnesses": 60, "samples": 20},
        "poset": {"count": 8, "max_size": 3},
        "homology": {"matrices": 100, "max_dim": 20, "subgroup_order": 6},
        "segal": {"groups": ("Z2", "Z3", "V4", "S3")},
    },
    "full": {
        "rewriting": {"terms": 100_000},
        "group": {"triples": 10_000, "pairs": 100},
        "stabilization": {"max_carets": 3, "random_count": 10_000},
        "whitehead": {"count": 1000},
        "k0": {},
        "product": {"laws": 10_000, "table": 12},
        "clones": {"families": 1000, "witnesses": 1000, "samples": 200},
        "poset": {"count": 100, "max_size": 5},
        "homology": {"matrices": 10_000, "max_dim": 40, "subgroup_order": 8},
        "segal": {"groups": tuple(gr.BUILTINS)},
    },
}


def run_suite(name: str, seed: int, **params) -> SuiteResult:
    start = time.perf_counter()
    before = th.leaf_count_audit.checks
    res = SUITES[name](seed, **params)
    res.audit = th.leaf_count_audit.checks - before
    res.seconds = time.perf_counter() - start
    return res


def _run_job(job) -> SuiteResult:
    name, seed, params = job
    return run_suite(name, seed, **params)


def run_profile(profile: str = "quick", seed: int = 0, only: list | None = None,
                threads: int | None = None) -> list:
    """Run every suite of a profile; suite i uses seed + i.  With more than one
    worker the suites run in separate processes; results keep suite order."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    names = [n for n in SUITES if only is None or n in only]
    jobs = [(n, seed + i, PROFILES[profile][n]) for i, n in enumerate(SUITES) if n in names]
    if threads is None:
        threads = int(os.environ.get("JF_THREADS", "1") or 1)
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_run_job, jobs))
    return [_run_job(j) for j in jobs]
