import pytest
from hypothesis import given

from conftest import additive_exprs
from lambdamachines import additive as A
from lambdamachines import core
from lambdamachines.core import cons_list
from lambdamachines.errors import NoRedex, NormalForm, ParseError

C, P = A.Const, A.Plus
SAMPLE = P(P(C(1), C(2)), P(C(4), C(8)))


# --- independent oracles ---


def leaves(e):
    return [e.n] if isinstance(e, C) else leaves(e.left) + leaves(e.right)


def phi_oracle(e):
    # one ↑ per leaf, plus ↙ ↘ + per node; a tree with k nodes has k+1 leaves
    k = len(leaves(e)) - 1
    return 4 * k + 1


def l_step_oracle(e):
    if isinstance(e.left, C) and isinstance(e.right, C):
        return C(e.left.n + e.right.n)
    if not isinstance(e.left, C):
        return P(l_step_oracle(e.left), e.right)
    return P(e.left, l_step_oracle(e.right))


def r_step_oracle(e):
    if isinstance(e.left, C) and isinstance(e.right, C):
        return C(e.left.n + e.right.n)
    if not isinstance(e.right, C):
        return P(e.left, r_step_oracle(e.right))
    return P(r_step_oracle(e.left), e.right)


# --- syntax ---


def test_plus_is_a_constructor():
    assert P(C(2), C(2)) != C(4)


def test_depth():
    assert A.depth(P(C(2), C(2))) == 1
    assert A.depth(C(4)) == 0
    assert A.depth(P(P(C(1), C(2)), C(3))) == 2


def test_plug():
    assert A.plug(A.PlusL(A.HOLE, C(5)), P(C(3), C(4))) == P(P(C(3), C(4)), C(5))
    assert A.plug(A.HOLE, SAMPLE) == SAMPLE
    assert A.plug(A.PlusR(C(1), A.HOLE), C(2)) == P(C(1), C(2))


def test_contract_plus():
    assert A.contract_plus(P(C(2), C(2))) == C(4)
    assert A.contract_plus(P(C(0), C(0))) == C(0)
    with pytest.raises(NoRedex):
        A.contract_plus(P(P(C(3), C(4)), C(5)))


def test_parse_additive():
    assert A.parse_additive("(1+2)+(4+8)") == SAMPLE
    assert A.parse_additive(" 7 ") == C(7)
    for bad in ["1+2+3", "", "(1+2", "1+", "a"]:
        with pytest.raises(ParseError):
            A.parse_additive(bad)


@given(additive_exprs())
def test_show_parse_round_trip(e):
    assert A.parse_additive(A.show_ascii(e)) == e


# --- strategies ---


def test_strategy_examples():
    assert A.step_strategy(A.Order.L, SAMPLE) == P(C(3), P(C(4), C(8)))
    assert A.step_strategy(A.Order.R, SAMPLE) == P(P(C(1), C(2)), C(12))
    with pytest.raises(NormalForm):
        A.step_strategy(A.Order.L, C(7))


def test_any_order_reports_every_position():
    report = A.step_strategy(A.Order.ANY, SAMPLE)
    assert isinstance(report, A.AmbiguityReport)
    assert set(report.reducts) == {P(C(3), P(C(4), C(8))), P(P(C(1), C(2)), C(12))}
    assert len(report.positions) == 2


@given(additive_exprs())
def test_strategy_steps_match_reference(e):
    if isinstance(e, C):
        return
    assert A.step_strategy(A.Order.L, e) == l_step_oracle(e)
    assert A.step_strategy(A.Order.R, e) == r_step_oracle(e)
    ctx_l, _ = A.decompose(A.Order.L, e)
    ctx_r, _ = A.decompose(A.Order.R, e)
    assert A.is_l_context(ctx_l) and A.is_r_context(ctx_r)


@given(additive_exprs())
def test_exactly_one_l_and_r_decomposition(e):
    positions = A.redex_positions(e)
    assert sum(A.is_l_context(g) for g in positions) == (0 if isinstance(e, C) else 1)
    assert sum(A.is_r_context(g) for g in positions) == (0 if isinstance(e, C) else 1)


# --- machines ---


def test_fig_first_transition():
    k0 = A.load(SAMPLE)
    k1, rule = A.machine_step(A.Order.L, k0)
    assert rule == "↙"
    assert k1 == A.AddConfig(P(C(1), C(2)), cons_list([A.HolePlus(P(C(4), C(8)))]), A.Mode.DOWN)


def test_addition_transition_and_halt():
    rest = cons_list([A.HolePlus(P(C(4), C(8)))])
    k = A.AddConfig(C(2), core.Cons(A.NumPlus(1), rest), A.Mode.UP)
    assert A.machine_step(A.Order.L, k) == (A.AddConfig(C(3), rest, A.Mode.UP), "+")
    assert A.machine_step(A.Order.L, A.AddConfig(C(15), None, A.Mode.UP)) is None


def test_run_examples():
    n, trace, stats = A.run_machine(A.Order.L, SAMPLE)
    assert (n, stats.total, stats.beta) == (15, 13, 3)
    assert A.run_machine(A.Order.L, C(7))[2].total == 1
    assert A.run_machine(A.Order.L, C(7))[1].rules() == ["↑"]
    assert A.run_machine(A.Order.L, P(C(1), C(2)))[0] == 3
    assert A.run_machine(A.Order.L, P(C(1), C(2)))[2].total == 5


def test_r_machine_runs_mirrored():
    n, trace, stats = A.run_machine(A.Order.R, SAMPLE)
    assert (n, stats.total) == (15, 13)
    assert trace.rules()[:2] == ["↘", "↘"]


def test_decoding_examples():
    k = A.AddConfig(C(3), cons_list([A.HolePlus(P(C(4), C(8)))]), A.Mode.UP)
    assert A.recompose(k) == P(C(3), P(C(4), C(8)))
    assert A.recompose(A.load(SAMPLE)) == SAMPLE
    assert A.decode_stack(cons_list([A.HolePlus(P(C(4), C(8)))])) == A.PlusL(A.HOLE, P(C(4), C(8)))


def test_potential_examples():
    assert A.potential(SAMPLE) == 13
    assert A.potential(C(99)) == 1
    k = A.AddConfig(C(3), cons_list([A.HolePlus(P(C(4), C(8)))]), A.Mode.UP)
    assert A.potential(k) == 7


@given(additive_exprs())
def test_potential_matches_closed_form(e):
    assert A.potential(e) == phi_oracle(e)


@given(additive_exprs())
def test_step_properties_hold_on_every_transition(e):
    from lambdamachines.harness import additive_step_violations

    assert additive_step_violations("L", e) == []
    assert additive_step_violations("R", e) == []


@given(additive_exprs())
def test_all_normalizers_agree(e):
    total = sum(leaves(e))
    assert A.nbe_normalize(e) == C(total)
    assert A.run_machine(A.Order.L, e)[0] == total
    assert A.run_machine(A.Order.R, e)[0] == total
    assert A.reduce_to_normal(A.Order.L, e)[0] == C(total)


def test_nbe_examples():
    assert A.nbe_normalize(SAMPLE) == C(15)
    assert A.nbe_normalize(C(5)) == C(5)
    assert A.nbe_normalize(P(C(0), C(0))) == C(0)


def test_refocus_rendering_strips_to_the_expression():
    res = core.run(A.ADD_L, SAMPLE)
    for k in res.trace.configs():
        assert A.unfocus(A.show_refocus(k)) == A.recompose(k)
    assert A.show_refocus(res.trace.configs()[12]) == "⌈3⌉ ⊕ ⟨⌈12⌉⟩Δ"
