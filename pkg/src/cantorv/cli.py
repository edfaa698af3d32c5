"""Command-line front end.

Exit codes: 0 verified or pass, 1 refuted or fail (a witness is printed),
2 inconclusive or bad input.  ``--format=json`` prints one JSON object with
the verdict, an echo of the inputs, certificates and bounds; wall-clock
timing appears only in text output so JSON reports are reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import clones as cl
from . import groups as gr
from . import homology as hm
from . import ktheory as kt
from . import segal as sg
from . import suites
from . import thompson as th
from .core import CantorError, Gen, Mu, Signature, infer_arity, reduce
from .parsing import (
    ParseError, format_code_literal, format_cloneseq, format_matrix, format_tableau,
    format_term, parse, parse_cloneseq, parse_code, parse_group, parse_matrix, parse_tableau,
    parse_term,
)

EXIT = {"pass": 0, "verified": 0, "ok": 0, "fail": 1, "refuted": 1, "inconclusive": 2}


@dataclass
class Report:
    verb: str
    verdict: str
    inputs: dict = field(default_factory=dict)
    result: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)
    bounds: dict | None = None
    seconds: float = 0.0

    @property
    def exit_code(self) -> int:
        return EXIT[self.verdict]

    def to_json(self) -> dict:
        out = {"verb": self.verb, "verdict": self.verdict, "inputs": self.inputs,
               "result": self.result}
        if self.bounds is not None:
            out["bounds"] = self.bounds
        return out


def _sig(args) -> Signature | None:
    if args.n is None and args.r is None:
        return None
    return Signature(args.n or 2, args.r or 1)


def _term_sig(args, *terms) -> Signature:
    sig = _sig(args)
    if sig is not None:
        return sig
    arity = next((a for a in map(infer_arity, terms) if a), 2)
    rank = max(_max_gen(t) for t in terms)
    return Signature(arity, rank)


def _max_gen(t) -> int:
    if type(t) is Gen:
        return t.index
    if type(t) is Mu:
        return max(_max_gen(a) for a in t.args)
    return _max_gen(t.arg)


def _text_or_file(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    p = Path(arg)
    if len(arg) < 4096 and p.is_file():
        return p.read_text()
    return arg


def _family_text(G, C, family) -> str:
    return "(" + ",".join(f"({G.labels[g]},{C.label(H)})" for g, H in family) + ")"


# -- verbs ----------------------------------------------------------------------------------

def cmd_parse(args) -> Report:
    value = parse(_text_or_file(args.text), args.kind, _sig(args))
    printers = {
        "term": format_term,
        "tableau": format_tableau,
        "code": lambda c: format_code_literal(c, header=True),
        "clone": lambda c: format_code_literal(c, header=True),
        "cloneseq": lambda x: format_cloneseq(x, header=True),
        "matrix": format_matrix,
        "group": lambda g: gr.group_to_csv(g).strip(),
        "address": repr,
    }
    text = printers[args.kind](value)
    return Report("parse", "ok", {"kind": args.kind, "text": args.text}, {"value": text}, [text])


def cmd_nf(args) -> Report:
    t = parse_term(args.term)
    sig = _term_sig(args, t)
    parse_term(args.term, sig)
    nf = format_term(reduce(t))
    return Report("nf", "ok", {"term": args.term}, {"normal_form": nf}, [nf])


def cmd_eq(args) -> Report:
    s, t = parse_term(args.left), parse_term(args.right)
    _term_sig(args, s, t)
    a, b = format_term(reduce(s)), format_term(reduce(t))
    same = a == b
    lines = [f"equal: {same}", f"  {a}", f"  {b}"]
    return Report("eq", "pass" if same else "fail", {"left": args.left, "right": args.right},
                  {"equal": same, "normal_forms": [a, b]}, lines)


def _tab(text: str, args):
    return parse_tableau(_text_or_file(text), _sig(args))


def cmd_mul(args) -> Report:
    u, v = _tab(args.u, args), _tab(args.v, args)
    w = format_tableau(th.compose(u, v))
    return Report("mul", "ok", {"u": args.u, "v": args.v}, {"product": w}, [w])


def cmd_inv(args) -> Report:
    w = format_tableau(th.inverse(_tab(args.u, args)))
    return Report("inv", "ok", {"u": args.u}, {"inverse": w}, [w])


def cmd_apply(args) -> Report:
    u = _tab(args.u, args)
    t = parse_term(args.term, u.sig)
    out = format_term(th.apply(u, t))
    return Report("apply", "ok", {"u": args.u, "term": args.term}, {"image": out}, [out])


def cmd_sum(args) -> Report:
    w = format_tableau(th.block_sum(_tab(args.u, args), _tab(args.v, args)))
    return Report("sum", "ok", {"u": args.u, "v": args.v}, {"sum": w}, [w])


def cmd_stab(args) -> Report:
    u = _tab(args.u, args)
    s = args.k or 1
    w = format_tableau(th.stabilize(u, s))
    ok = th.retract_check(u)
    return Report("stab", "pass" if ok else "fail", {"u": args.u, "k": s},
                  {"stabilized": w, "retract_check": ok}, [w, f"retract_check: {ok}"])


def cmd_swap(args) -> Report:
    w = format_tableau(th.swap(args.arity, args.rank))
    return Report("swap", "ok", {"n": args.arity, "r": args.rank}, {"swap": w}, [w])


def _random_inputs(args, count: int, pairs: bool):
    rng = random.Random(args.seed)
    sig = _sig(args) or Signature(2, 1)
    depth = args.depth or 6
    for _ in range(count):
        u = th.random_tableau(rng, sig, depth)
        yield (u, th.random_tableau(rng, sig, depth)) if pairs else u


def cmd_whitehead(args) -> Report:
    if args.w:
        inputs = [_tab(args.w, args)]
    else:
        inputs = list(_random_inputs(args, args.count or 100, False))
    failures = [format_tableau(w) for w in inputs if not th.whitehead_witness(w).holds]
    ok = not failures
    lines = [f"{len(inputs) - len(failures)}/{len(inputs)} exact identities w + w^-1 = [w + id, swap]"]
    lines += [f"  fails at {f}" for f in failures[:3]]
    return Report("whitehead", "pass" if ok else "fail",
                  {"w": args.w, "seed": args.seed, "count": len(inputs)},
                  {"holds": len(inputs) - len(failures), "total": len(inputs),
                   "failures": failures[:3]}, lines)


def cmd_perfect(args) -> Report:
    if args.u and args.v:
        inputs = [(_tab(args.u, args), _tab(args.v, args))]
    elif args.u or args.v:
        raise CantorError("perfect needs both u and v, or neither")
    else:
        inputs = list(_random_inputs(args, args.count or 100, True))
    failures = [(format_tableau(u), format_tableau(v)) for u, v in inputs
                if not th.perfectness_identity(u, v).ok]
    ok = not failures
    lines = [f"{len(inputs) - len(failures)}/{len(inputs)} exact identities "
             f"[u,v] + id = [u + u^-1 + id, v + id + v^-1]"]
    lines += [f"  fails at {u} ; {v}" for u, v in failures[:3]]
    return Report("perfect", "pass" if ok else "fail",
                  {"seed": args.seed, "count": len(inputs)},
                  {"holds": len(inputs) - len(failures), "total": len(inputs),
                   "failures": failures[:3]}, lines)


def _clone(text: str, args) -> cl.Clone:
    code = parse_code(text, _sig(args), "clone")
    return cl.Clone(code.sig, code)


def _clone_text(A) -> str:
    return format_code_literal(A.code)


def cmd_clone_intersect(args) -> Report:
    A, B = _clone(args.a, args), _clone(args.b, args)
    C = cl.clone_intersect(A, B)
    text = "disjoint" if C is None else _clone_text(C)
    return Report("clone-intersect", "ok", {"a": args.a, "b": args.b},
                  {"intersection": None if C is None else text}, [text])


def cmd_disjointify(args) -> Report:
    As = [_clone(a, args) for a in args.clones]
    out = cl.disjointify(As)
    ok = cl.pairwise_disjoint(out) and all(cl.clone_contains(A, B) for A, B in zip(As, out))
    texts = [_clone_text(B) for B in out]
    return Report("disjointify", "pass" if ok else "fail", {"clones": args.clones},
                  {"clones": texts, "postcondition": ok}, texts)


def _family_json(fam, w) -> dict:
    return {"family": [[format_tableau(v), _clone_text(A)] for v, A in fam],
            "clones": [_clone_text(A) for A in w.clones],
            "images": [_clone_text(A) for A in w.images],
            "g": format_tableau(w.g), "checks": w.checks}


def cmd_segal_witness(args) -> Report:
    if args.items:
        if len(args.items) % 2:
            raise CantorError("segal-witness takes tableau/clone pairs")
        fams = [[(_tab(args.items[i], args), _clone(args.items[i + 1], args))
                 for i in range(0, len(args.items), 2)]]
    else:
        rng = random.Random(args.seed)
        sig = _sig(args) or Signature(2, 1)
        fams = [cl.random_family(rng, sig, rng.randint(1, 4)) for _ in range(args.count or 100)]
    results = [(fam, cl.segal_witness(fam)) for fam in fams]
    bad = [r for r in results if not r[1].ok]
    if len(fams) == 1:
        fam, w = results[0]
        data = _family_json(fam, w)
        lines = [f"g = {data['g']}", "clones: " + " ".join(data["clones"]),
                 "images: " + " ".join(data["images"]),
                 "checks: " + ", ".join(f"{k}={v}" for k, v in w.checks.items())]
    else:
        data = {"holds": len(results) - len(bad), "total": len(results),
                "failures": [_family_json(f, w) for f, w in bad[:3]]}
        lines = [f"{data['holds']}/{data['total']} witnesses satisfy every postcondition"]
    return Report("segal-witness", "fail" if bad else "pass",
                  {"items": args.items, "seed": args.seed}, data, lines)


def cmd_seq_member(args) -> Report:
    u = _tab(args.u, args)
    X = parse_cloneseq(_text_or_file(args.seq), u.sig)
    m = cl.seq_membership(u, X)
    lines = [f"member: {m.member}" + (f" (fixes level {m.level})" if m.member else ""),
             "per level: " + " ".join("1" if x else "0" for x in m.per_level)]
    return Report("seq-member", "pass" if m.member else "fail", {"u": args.u, "seq": args.seq},
                  {"member": m.member, "level": m.level, "per_level": m.per_level},
                  lines, {"levels_checked": m.bound})


def cmd_support_iso(args) -> Report:
    A = _clone(args.clone, args)
    S = cl.support_iso(A)
    comp = [format_code_literal(type(A.code)(A.sig, [c])).strip("{}") for c in S.complement]
    data = {"clone": _clone_text(A), "k": len(S.complement), "complement": comp}
    lines = [f"V_{{{A.sig.arity},{len(S.complement)}}} -> V(X_A), roots onto {', '.join(comp)}"]
    verdict = "ok"
    if args.u:
        u = parse_tableau(_text_or_file(args.u), S.source)
        g = S(u)
        back = S.inverse(g) == u
        fixes = cl.fixes_pointwise(g, A)
        data.update({"image": format_tableau(g), "fixes_clone": fixes, "inverse_ok": back})
        lines += [format_tableau(g), f"fixes clone: {fixes}, inverse transport: {back}"]
        verdict = "pass" if fixes and back else "fail"
    return Report("support-iso", verdict, {"clone": args.clone, "u": args.u}, data, lines)


def cmd_build_q(args) -> Report:
    sig = _sig(args)
    P = [parse_cloneseq(_text_or_file(x), sig) for x in args.seqs]
    try:
        Q = cl.build_Q(P)
    except cl.HallObstruction as exc:
        text = [format_cloneseq(X) for X in exc.members]
        return Report("build-q", "fail", {"seqs": args.seqs},
                      {"obstruction": text, "limit_points": len(exc.points)},
                      [f"no disjoint minorants: {exc}"] + text)
    rep = cl.check_Q(Q, args.degree or 3)
    names = [format_cloneseq(X) + ("'" if not Q.in_P[i] else "") for i, X in enumerate(Q.elements)]
    data = {
        "elements": names,
        "order": sorted([i, j] for i, j in Q.order),
        "retraction": Q.retraction,
        "checks": {"below_identity": rep.below_identity, "monotone": rep.monotone,
                   "identity_on_primed": rep.identity_on_primed, "idempotent": rep.idempotent},
        "reduced_nerve_homology": [str(h) for h in rep.reduced_homology],
    }
    lines = [f"{i}: {x}  r -> {Q.retraction[i]}" for i, x in enumerate(names)]
    lines.append("checks: " + ", ".join(f"{k}={v}" for k, v in data["checks"].items()))
    lines.append("reduced nerve homology: " + ", ".join(data["reduced_nerve_homology"]))
    return Report("build-q", "pass" if rep.ok else "fail", {"seqs": args.seqs}, data, lines,
                  {"degree": args.degree or 3})


def _matrix(text: str) -> list:
    return parse_matrix(_text_or_file(text).replace(";", "\n"))


def cmd_snf(args) -> Report:
    M = _matrix(args.matrix)
    res = hm.snf(M)
    ok = hm.verify_snf(M, res)
    data = {"diagonal": res.diagonal, "invariant_factors": res.invariant_factors,
            "U": res.U, "V": res.V, "verified": ok}
    lines = ["D = diag(" + ", ".join(map(str, res.diagonal)) + ")",
             "U =", format_matrix(res.U), "V =", format_matrix(res.V),
             f"certificates verified: {ok}"]
    return Report("snf", "pass" if ok else "fail", {"matrix": M}, data, lines)


def _homology_lines(H) -> list:
    return [f"H{k} = {g}" for k, g in enumerate(H.groups)]


def cmd_homology(args) -> Report:
    G = parse_group(_text_or_file(args.group))
    d = args.degree if args.degree is not None else 3
    H = hm.group_homology(G, d)
    return Report("homology", "ok", {"group": G.name, "degree": d}, {"homology": H.to_json()},
                  _homology_lines(H), {"degree": d})


def cmd_bar(args) -> Report:
    G = parse_group(_text_or_file(args.group))
    C = sg.named_collection(G, args.subgroups or "whole")
    d = args.degree if args.degree is not None else 3
    H = hm.complex_homology(hm.bar_subcomplex(G, C.members, d))
    return Report("bar", "ok", {"group": G.name, "subgroups": C.describe(), "degree": d},
                  {"homology": H.to_json()}, _homology_lines(H), {"degree": d})


def _poset(text: str) -> hm.Poset:
    """'a<b<c, a<d, e': chains of strict relations; the order is their
    transitive closure."""
    elements, less = [], set()
    for item in text.replace(",", " ").split():
        chain = item.split("<")
        if any(not x for x in chain):
            raise CantorError(f"bad poset item {item!r}")
        for x in chain:
            if x not in elements:
                elements.append(x)
        less.update(zip(chain, chain[1:]))
    changed = True
    while changed:
        new = {(a, d) for a, b in less for c, d in less if b == c} - less
        changed = bool(new)
        less |= new
    return hm.Poset(elements, less)


def cmd_nerve(args) -> Report:
    P = _poset(_text_or_file(args.poset))
    d = args.degree if args.degree is not None else 3
    H = hm.complex_homology(hm.nerve_complex(P, d))
    R = H.reduced()
    return Report("nerve", "ok", {"poset": args.poset, "degree": d},
                  {"homology": H.to_json(), "reduced": R.to_json()},
                  _homology_lines(H) + ["reduced: " + ", ".join(str(g) for g in R.groups)],
                  {"degree": d})


def cmd_finite_segal(args) -> Report:
    G = parse_group(_text_or_file(args.group))
    C = sg.named_collection(G, args.subgroups or "all")
    d = args.degree if args.degree is not None else 3
    rep = sg.decomposition_check(C, d, args.k)
    v = rep.segal
    lines = [f"{G.name} {C.describe()}: segal {'pass' if v.passed else 'fail'} "
             f"(families up to size {v.bound}"
             + (", certified for all sizes)" if v.certified_all_sizes else ")")]
    if v.witness is not None:
        lines.append(f"witness family: {_family_text(G, C, v.witness)}")
    for k, (a, b) in enumerate(zip(rep.union_homology.groups, rep.group_homology.groups)):
        lines.append(f"H{k}: union {a}, BG {b}" + ("" if str(a) == str(b) else "  (differ)"))
    lines.append("nerve: " + ", ".join(str(h) for h in rep.nerve_homology.groups))
    data = rep.to_json()
    return Report("finite-segal", "pass" if v.passed else "fail",
                  {"group": G.name, "subgroups": args.subgroups or "all", "k": v.bound,
                   "degree": d}, data, lines,
                  {"family_size": v.bound, "certified_all_sizes": v.certified_all_sizes,
                   "degree": d})


def cmd_k0(args) -> Report:
    ring = kt.k0(args.arity)
    lines = [ring.name + (" (trivial ring, 1 = 0)" if ring.is_trivial else "")]
    lines += [f"  {r['relation']}: forward {r['forward']}" for r in ring.relations]
    lines.append(f"  separation: {ring.separation}")
    lines.append("  checks: " + ", ".join(f"{k}={v}" for k, v in ring.checks.items()))
    return Report("k0", "pass" if ring.ok else "fail", {"n": args.arity}, ring.to_json(), lines)


def cmd_expand_iso(args) -> Report:
    fw, bw = kt.expansion_iso(args.arity, args.rank)
    f = [format_term(t) for t in fw.images]
    b = [format_term(t) for t in bw.images]
    lines = [f"forward C_{{{args.arity},{args.rank + args.arity - 1}}} -> "
             f"C_{{{args.arity},{args.rank}}}: " + ", ".join(f"x{i + 1} -> {t}" for i, t in enumerate(f)),
             f"backward: " + ", ".join(f"x{i + 1} -> {t}" for i, t in enumerate(b)),
             "composites reduce to the identity on generators"]
    return Report("expand-iso", "pass", {"n": args.arity, "r": args.rank},
                  {"forward": f, "backward": b, "verified": True}, lines)


def cmd_product_probe(args) -> Report:
    if args.s is None:
        rng = random.Random(args.seed)
        depth = args.depth or 6
        rows = [kt.product_iso_probe(s, t, depth).to_json()
                for s, t in kt.candidate_pairs(rng, args.count or 12)]
        lines = [f"{'candidate':44} {'verdict':22} covered"]
        lines += [f"{'(' + ', '.join(r['candidate']) + ')':44} {r['verdict']:22} "
                  f"{r['surjectivity']['covered']}/{r['surjectivity']['total']}" for r in rows]
        verdict = "verified" if all(r["verdict"] == "verified-to-depth" for r in rows) \
            else "inconclusive" if any(r["verdict"].startswith("inconclusive") for r in rows) \
            else "refuted"
        return Report("product-probe", verdict, {"seed": args.seed, "count": len(rows)},
                      {"table": rows}, lines, {"depth": depth, "search_depth": depth})
    sig = Signature(2, 1)
    s, t = parse_term(args.s, sig), parse_term(args.t, sig)
    depth = args.depth or 4
    p = kt.product_iso_probe(s, t, depth, args.search_depth)
    data = p.to_json()
    lines = [f"verdict: {p.verdict}",
             f"injective on normal forms of size <= {depth}: {p.injective_to_depth}",
             f"coverage: {p.covered}/{p.total}"]
    if p.collision:
        lines.append("collision: " + ", ".join(map(repr, p.collision)))
    if p.missing_witness is not None:
        lines.append(f"missing pair: {p.missing_witness!r}")
    if p.certificate:
        lines.append(f"certificate: {p.certificate}")
    verdict = "verified" if p.verdict == "verified-to-depth" else \
        "inconclusive" if p.verdict.startswith("inconclusive") else "refuted"
    return Report("product-probe", verdict, {"s": args.s, "t": args.t}, data, lines,
                  data["bounds"])


def _inject_reduction_bug():
    """Mutation check: make tableau reduction a no-op, so products are no
    longer canonical."""
    th.reduce_tableau = lambda u: u


def cmd_selftest(args) -> Report:
    if args.inject_bug:
        _inject_reduction_bug()
    threads = int(os.environ.get("JF_THREADS", "1") or 1)
    if args.inject_bug:
        threads = 1  # the patch lives in this process
    profile = args.profile or "quick"
    seed = args.seed
    start = time.perf_counter()
    results = suites.run_profile(profile, seed, only=args.suite or None, threads=threads)
    elapsed = time.perf_counter() - start
    ok = all(r.ok for r in results)
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.name} ({r.seconds:.1f} s)")
        for c in r.checks:
            mark = "ok" if c.ok else "FAILED"
            lines.append(f"    {c.name}: {c.passed}/{c.total} {mark}")
            lines += [f"      e.g. {f[:200]}" for f in c.failures[:1]]
    audit = sum(r.audit for r in results)
    lines.append(f"leaf-count congruence checked on {audit} tableau constructions")
    lines.append(f"total {elapsed:.1f} s")
    return Report("selftest", "pass" if ok else "fail",
                  {"profile": profile, "seed": seed, "injected_bug": bool(args.inject_bug)},
                  {"suites": [r.to_json() for r in results], "leaf_count_checks": audit},
                  lines)


VERBS = {
    "parse": cmd_parse, "nf": cmd_nf, "eq": cmd_eq, "mul": cmd_mul, "inv": cmd_inv,
    "apply": cmd_apply, "sum": cmd_sum, "stab": cmd_stab, "swap": cmd_swap,
    "whitehead": cmd_whitehead, "perfect": cmd_perfect, "clone-intersect": cmd_clone_intersect,
    "disjointify": cmd_disjointify, "segal-witness": cmd_segal_witness,
    "seq-member": cmd_seq_member, "support-iso": cmd_support_iso, "build-q": cmd_build_q,
    "snf": cmd_snf, "homology": cmd_homology, "bar": cmd_bar, "nerve": cmd_nerve,
    "finite-segal": cmd_finite_segal, "k0": cmd_k0, "expand-iso": cmd_expand_iso,
    "product-probe": cmd_product_probe, "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--depth", type=int)
    common.add_argument("--count", type=int)
    common.add_argument("--degree", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--n", type=int, help="arity when a literal has no header")
    common.add_argument("--r", type=int, help="rank when a literal has no header")

    parser = argparse.ArgumentParser(prog="cantorv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = verb("parse", "parse and reprint a literal")
    p.add_argument("kind", choices=("term", "address", "code", "clone", "tableau", "cloneseq",
                                    "group", "matrix"))
    p.add_argument("text")
    verb("nf", "normal form of a term").add_argument("term")
    p = verb("eq", "compare two terms")
    p.add_argument("left")
    p.add_argument("right")
    for name, help_ in (("mul", "product u∘v of two tableaux"), ("sum", "block sum u + v")):
        p = verb(name, help_)
        p.add_argument("u")
        p.add_argument("v")
    verb("inv", "inverse of a tableau").add_argument("u")
    p = verb("apply", "image of a term")
    p.add_argument("u")
    p.add_argument("term")
    verb("stab", "stabilize by --k identity roots").add_argument("u")
    p = verb("swap", "block swap of C_{n,r} + C_{n,r}")
    p.add_argument("arity", type=int)
    p.add_argument("rank", type=int)
    verb("whitehead", "check w + w^-1 = [w + id, swap]").add_argument("w", nargs="?")
    p = verb("perfect", "check the perfectness identity")
    p.add_argument("u", nargs="?")
    p.add_argument("v", nargs="?")
    p = verb("clone-intersect", "intersection of two clones")
    p.add_argument("a")
    p.add_argument("b")
    verb("disjointify", "pairwise disjoint refinements").add_argument("clones", nargs="+")
    verb("segal-witness", "witness for tableau/clone pairs, or --count random families") \
        .add_argument("items", nargs="*")
    p = verb("seq-member", "membership of a tableau in V(X)")
    p.add_argument("u")
    p.add_argument("seq")
    p = verb("support-iso", "the isomorphism V_k -> V(X_A)")
    p.add_argument("clone")
    p.add_argument("u", nargs="?")
    verb("build-q", "the poset Q and its retraction").add_argument("seqs", nargs="+")
    verb("snf", "Smith normal form with certificates").add_argument("matrix")
    verb("homology", "H_*(BG) up to --degree").add_argument("group")
    p = verb("bar", "homology of the union subcomplex of BG")
    p.add_argument("group")
    p.add_argument("--subgroups")
    verb("nerve", "homology of the nerve of a poset 'a<b<c, a<d'").add_argument("poset")
    p = verb("finite-segal", "Segal condition and homology comparison")
    p.add_argument("group")
    p.add_argument("--subgroups")
    verb("k0", "K0 of Cantor_n").add_argument("arity", type=int)
    p = verb("expand-iso", "C_{n,r+n-1} ≅ C_{n,r}")
    p.add_argument("arity", type=int)
    p.add_argument("rank", type=int)
    p = verb("product-probe", "probe x1 -> (s, t), or a seeded candidate table")
    p.add_argument("s", nargs="?")
    p.add_argument("t", nargs="?")
    p.add_argument("--search-depth", type=int)
    p = verb("selftest", "run the seeded suites")
    p.add_argument("--profile", choices=tuple(suites.PROFILES))
    p.add_argument("--suite", action="append", choices=tuple(suites.SUITES))
    p.add_argument("--inject-bug", action="store_true", help=argparse.SUPPRESS)
    return parser


def run(argv: list | None = None) -> tuple:
    """(report or None, exit code, error message, output format)."""
    args = build_parser().parse_args(argv)
    if args.verb == "product-probe" and (args.s is None) != (args.t is None):
        return None, 2, "product-probe needs both s and t, or neither", args.format
    try:
        start = time.perf_counter()
        report = VERBS[args.verb](args)
        report.seconds = time.perf_counter() - start
    except ParseError as exc:
        return None, 2, f"parse error: {exc}", args.format
    except (CantorError, OSError) as exc:
        return None, 2, f"error: {exc}", args.format
    return report, report.exit_code, "", args.format


def main(argv: list | None = None) -> int:
    try:
        report, code, err, fmt = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    if report is None:
        if fmt == "json":
            print(json.dumps({"verdict": "error", "error": err}))
        print(err, file=sys.stderr)
        return code
    if fmt == "json":
        print(json.dumps(report.to_json(), indent=1, sort_keys=True))
    else:
        for line in report.lines:
            print(line)
        if report.bounds:
            print("bounds: " + ", ".join(f"{k}={v}" for k, v in report.bounds.items()))
        print(f"[{report.verdict}] {report.seconds:.2f} s")
    return code


if __name__ == "__main__":
    sys.exit(main())
