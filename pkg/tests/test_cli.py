import json
from pathlib import Path

import pytest

from cantorv import cli
from cantorv import thompson as th

GOLDEN = Path(__file__).parent / "golden" / "selftest_quick_seed0.json"
A = "{0->00, 10->01, 11->1}"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_k0_three(capsys):
    code, out, _ = run(capsys, "k0", "3")
    assert code == 0 and out.splitlines()[0] == "Z/2"
    assert "separation" in out


def test_whitehead_thousand(capsys):
    code, out, _ = run(capsys, "whitehead", "--seed", "7", "--count", "1000")
    assert code == 0 and out.startswith("1000/1000")


def test_finite_segal_klein(capsys):
    code, out, _ = run(capsys, "finite-segal", "V4", "--subgroups", "order2", "--k", "2")
    assert code == 1
    assert "witness family: ((a,<a>),(b,<a>))" in out


def test_finite_segal_json(capsys):
    code, out, _ = run(capsys, "finite-segal", "Z2", "--subgroups", "trivial", "--format=json")
    js = json.loads(out)
    assert code == 1 and js["result"]["witness"] == [["e", "{e}"], ["t", "{e}"]]


def test_parse_examples(capsys):
    code, out, _ = run(capsys, "parse", "term", "m(L(g1),R(g1))")
    assert code == 0
    code, out, _ = run(capsys, "parse", "tableau", "n=2 r=1 " + A)
    assert code == 0 and "n=2 r=1 {0->00, 10->01, 11->1}" in out
    code, out, err = run(capsys, "parse", "code", "{0,01}")
    assert code == 2 and "0 is a prefix of 01" in err + out


def test_arithmetic_verbs(capsys):
    code, out, _ = run(capsys, "nf", "m(L(g1),R(g1))")
    assert code == 0 and out.splitlines()[0] == "g1"
    code, out, _ = run(capsys, "inv", A)
    assert out.splitlines()[0] == "n=2 r=1 {00->0, 01->10, 1->11}"
    code, out, _ = run(capsys, "eq", "m(a1(g1),a2(g1))", "g1")
    assert code == 0
    code, out, _ = run(capsys, "eq", "a1(g1)", "a2(g1)")
    assert code == 1


def test_snf_verb(capsys):
    code, out, _ = run(capsys, "snf", "2 0;0 3")
    assert code == 0 and "diag(1, 6)" in out


def test_bar_verb(capsys):
    code, out, _ = run(capsys, "bar", "Z2", "--degree", "3")
    assert code == 0
    assert [l for l in out.splitlines() if l.startswith("H")] == \
        ["H0 = Z", "H1 = Z/2", "H2 = 0", "H3 = Z/2"]


def test_product_probe_verb(capsys):
    code, out, _ = run(capsys, "product-probe", "L(g1)", "R(g1)", "--depth", "6")
    assert code == 1 and "refuted-surjective" in out


def test_support_iso_verb(capsys):
    code, out, _ = run(capsys, "support-iso", "{0}", "{0->1, 1->0}")
    assert code == 0 and "{0->0, 10->11, 11->10}" in out


def test_input_errors_exit_two(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "mul", "{0->0}", A)[0] == 2
    assert run(capsys, "snf", "1 2;3")[0] == 2


def test_file_input(tmp_path, capsys):
    f = tmp_path / "m.txt"
    f.write_text("4 6\n2 8\n")
    code, out, _ = run(capsys, "snf", str(f))
    assert code == 0 and "diag(2, 10)" in out


def test_json_is_deterministic(capsys):
    outs = [run(capsys, "whitehead", "--seed", "3", "--count", "50", "--format", "json")[1]
            for _ in range(2)]
    assert outs[0] == outs[1]
    assert "seconds" not in json.loads(outs[0])


def test_selftest_quick_matches_golden(capsys):
    code, out, _ = run(capsys, "selftest", "--profile", "quick", "--seed", "0", "--format=json")
    assert code == 0
    assert out == GOLDEN.read_text()


def test_selftest_catches_reduction_bug(capsys, monkeypatch):
    # keep the real function so the patch is undone after the test
    monkeypatch.setattr(th, "reduce_tableau", th.reduce_tableau)
    code, out, _ = run(capsys, "selftest", "--suite", "group", "--inject-bug")
    assert code == 1
    assert "FAIL group_arithmetic" in out
    assert "canonical_matches_action" in out and "FAILED" in out


def test_reduction_restored_after_mutation(A):
    # runs after the mutation test; an unpatched reduction cancels A against its inverse
    assert th.compose(A, th.inverse(A)).is_identity()
