import itertools
import json

import pytest
from hypothesis import given

from conftest import additive_exprs
from lambdamachines import additive as A
from lambdamachines import core
from lambdamachines import harness as H
from lambdamachines.errors import UnsupportedStyle
from lambdamachines.machines import ADD_L, ADD_R, CEK, KRIVINE, KN
from lambdamachines.strategies import Strategy, normalize
from lambdamachines.terms import PRELUDE, App, Lam, Var, alpha_eq, church, is_closed, parse, size

SAMPLE = A.parse_additive("(1+2)+(4+8)")


# --- rendering ---


def test_refocus_rows():
    res = core.run(ADD_L, SAMPLE)
    lines = H.render_trace(ADD_L, res.trace, "refocus").splitlines()
    assert len(lines) == 14
    assert lines[0].split(": ", 1)[1].startswith("⟨(⌈1⌉ ⊕ ⌈2⌉) ⊕ (⌈4⌉ ⊕ ⌈8⌉)⟩∇")
    assert lines[6].split(": ", 1)[1].startswith("⟨⌈3⌉⟩Δ ⊕ (⌈4⌉ ⊕ ⌈8⌉)")
    assert lines[13].split(": ", 1)[1] == "⟨⌈15⌉⟩Δ"


@pytest.mark.parametrize("machine", [ADD_L, ADD_R])
@given(e=additive_exprs())
def test_refocus_strips_to_decoding(machine, e):
    res = core.run(machine, e)
    for k in res.trace.configs():
        assert A.unfocus(A.show_refocus(k)) == A.recompose(k)


def test_plain_rendering_lists_rules():
    res = core.run(KRIVINE, parse("K I Omega"))
    lines = H.render_trace(KRIVINE, res.trace, "plain").splitlines()
    assert len(lines) == res.stats.total + 1
    assert all("→(" in line for line in lines[:-1])


def test_refocus_needs_a_decoder():
    res = core.run(KN, parse(r"\x. x"))
    with pytest.raises(UnsupportedStyle):
        H.render_trace(KN, res.trace, "refocus")


def test_json_schema():
    res = core.run(ADD_L, A.Const(7))
    doc = json.loads(H.render_trace(ADD_L, res.trace, "json", source="7", stats=res.stats, result="7"))
    assert set(doc) == {"machine", "input", "steps", "stats", "result", "status"}
    assert len(doc["steps"]) == 1
    step = doc["steps"][0]
    assert isinstance(step["index"], int) and isinstance(step["rule"], str) and isinstance(step["config"], str)
    assert doc["stats"] == {"total": 1, "beta": 0, "perRule": {"↑": 1}}
    assert doc["status"] == "halted" and doc["machine"] == "add-l"


# --- generators ---


def test_generators_are_deterministic():
    for kind, bound in [("closed-random", 12), ("additive-random", 6), ("sn-corpus", 5)]:
        a = list(itertools.islice(H.gen_terms(kind, bound, 7), 50))
        b = list(itertools.islice(H.gen_terms(kind, bound, 7), 50))
        assert a == b


def test_closed_random_terms_are_closed():
    for t in itertools.islice(H.gen_terms("closed-random", 15, 1), 300):
        assert is_closed(t) and 2 <= size(t) <= 15


def test_additive_random_bound_one_gives_constants():
    assert all(isinstance(e, A.Const) for e in itertools.islice(H.gen_terms("additive-random", 1, 0), 50))


def test_additive_random_depth_bound():
    for e in itertools.islice(H.gen_terms("additive-random", 6, 0), 200):
        assert A.depth(e) < 6


def test_corpus_contents():
    corpus = H.sn_corpus()
    assert any(alpha_eq(t, App(church(2), church(2))) for t in corpus)
    assert not any(alpha_eq(t, PRELUDE["Omega"]) for t in corpus)
    # closed terms up to alpha, sizes 1..7
    small = H.all_closed_terms(7)
    assert len(small) == len({repr(t) for t in small})
    assert all(is_closed(t) for t in small)


def test_enumeration_counts_by_size():
    from functools import lru_cache

    # terms of `n` nodes with `k` indices in scope
    @lru_cache(None)
    def count(n, k):
        if n == 1:
            return k
        apps = sum(count(i, k) * count(n - 1 - i, k) for i in range(1, n - 1))
        return count(n - 1, k + 1) + apps

    assert [len(list(H.closed_nameless(n))) for n in range(1, 9)] == [count(n, 0) for n in range(1, 9)]


def test_gen_terms_rejects_bad_arguments():
    with pytest.raises(ValueError):
        H.gen_terms("nope", 3, 0)
    with pytest.raises(ValueError):
        H.gen_terms("closed-random", 0, 0)


# --- size explosion ---


def test_size_explosion_base_cases():
    y = Var("y")
    assert H.size_explosion(0) == App(Lam("x", Var("x")), y)
    assert normalize(Strategy.NO, H.size_explosion(0))[0] == y
    nf, steps = normalize(Strategy.NO, H.size_explosion(1))
    assert alpha_eq(nf, parse(r"\f. f y y")) and steps == 2


def test_size_explosion_grows():
    prev = None
    for n in range(1, 9):
        nf, steps = normalize(Strategy.NO, H.size_explosion(n), 100)
        assert steps == n + 1
        if prev is not None:
            assert size(nf) >= 2 * prev
        prev = size(nf)


def test_bench_report():
    report = H.bench("size-explosion", 6, ("kn", "mam"))
    assert [r.n for r in report.rows] == list(range(1, 7))
    for row in report.rows:
        assert all(s >= row.beta for s in row.steps.values())
    csv = report.to_csv().splitlines()
    assert csv[0].startswith("n,") and len(csv) == 7
    assert report.to_dict()["family"] == "size-explosion"


# --- comparison ---


def test_compare_krivine_on_K_I_Omega():
    report = H.compare(["krivine"], "cbn", [parse("K I Omega")])
    assert report.ok
    (v,) = report.verdicts
    assert v.status == "agree" and v.oracle_beta == v.machine_beta == 2


def test_compare_agrees_on_divergence():
    report = H.compare(["cek"], "lcbv", [PRELUDE["Omega"]], fuel=200, machine_fuel=2000)
    assert report.ok and report.verdicts[0].status == "diverge"


def test_compare_kn_on_corpus():
    assert H.compare(["kn"], "no", H.sn_corpus()).ok


def test_compare_flags_wrong_oracle():
    report = H.compare(["krivine"], "no", [parse(r"\x. (\y. y) x")])
    assert not report.ok and report.mismatches()
