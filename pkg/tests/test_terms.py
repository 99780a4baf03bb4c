import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import closed_terms, open_terms
from lambdamachines.errors import OpenTermError, ParseError
from lambdamachines.terms import (
    PRELUDE,
    App,
    FreshSupply,
    Idx,
    Lam,
    NApp,
    NLam,
    Var,
    alpha_eq,
    bound_vars,
    church,
    free_vars,
    from_indices,
    from_levels,
    parse,
    parse_nameless,
    show,
    size,
    subst_avoiding,
    subst_naive,
    to_indices,
    to_levels,
)

x, y, z = Var("x"), Var("y"), Var("z")


# --- reference oracles, written without the library's nameless machinery ---


def alpha_oracle(t1, t2, left=None, right=None):
    """Bijective binder correspondence walk."""
    left, right = left or {}, right or {}
    match t1, t2:
        case Var(a), Var(b):
            if a in left or b in right:
                return left.get(a) == b and right.get(b) == a
            return a == b
        case App(f1, a1), App(f2, a2):
            return alpha_oracle(f1, f2, left, right) and alpha_oracle(a1, a2, left, right)
        case Lam(a, b1), Lam(b, b2):
            return alpha_oracle(b1, b2, {**left, a: b}, {**right, b: a})
    return False


_counter = itertools.count()


def rename_all(t, env=None):
    env = env or {}
    match t:
        case Var(a):
            return Var(env.get(a, a))
        case App(f, a):
            return App(rename_all(f, env), rename_all(a, env))
        case Lam(a, b):
            new = f"_r{next(_counter)}"
            return Lam(new, rename_all(b, {**env, a: new}))


def subst_oracle(t, name, s):
    return subst_naive(rename_all(t), name, s)


def perturb(t, suffix):
    """Rename every binder by appending ``suffix``; an alpha-equivalent term."""
    return rename_all(t) if suffix is None else _suffix(t, suffix, {})


def _suffix(t, sfx, env):
    match t:
        case Var(a):
            return Var(env.get(a, a))
        case App(f, a):
            return App(_suffix(f, sfx, env), _suffix(a, sfx, env))
        case Lam(a, b):
            return Lam(a + sfx, _suffix(b, sfx, {**env, a: a + sfx}))


# --- parsing and printing ---


def test_application_is_left_associative():
    assert parse("x y z") == App(App(x, y), z)


def test_self_application_body():
    assert parse(r"\x. x x") == Lam("x", App(x, x))


def test_multi_binder_sugar():
    assert parse(r"\x y. x") == Lam("x", Lam("y", x))


def test_lambda_symbol_and_maximal_body():
    assert parse("λx. x y z") == Lam("x", App(App(x, y), z))
    assert parse(r"(\x. x) y") == App(Lam("x", x), y)


def test_prelude_expansion():
    assert parse("K") == Lam("x", Lam("y", x))
    assert parse("I") == Lam("x", x)
    assert parse("Omega") == App(parse("omega"), parse("omega"))
    assert parse("Ω") == parse("Omega") and parse("ω") == parse("omega")
    assert parse("c3") == church(3)


def test_prelude_is_complete_and_closed():
    expected = {"I", "K", "S", "omega", "Omega", "pair"} | {f"c{i}" for i in range(10)}
    assert set(PRELUDE) == expected
    assert all(free_vars(t) == set() for t in PRELUDE.values())


def test_prelude_round_trips():
    for name, t in PRELUDE.items():
        assert parse(show(t)) == t, name


def test_prelude_disabled():
    assert parse("K", prelude=False) == Var("K")


@pytest.mark.parametrize("bad", ["", "(x", r"\. x", "x)", r"\x x", "x $ y"])
def test_parse_errors_carry_offsets(bad):
    with pytest.raises(ParseError) as info:
        parse(bad)
    assert 0 <= info.value.offset <= len(bad.encode())


def test_print_forms():
    assert show(Lam("x", App(x, x))) == r"\x. x x"
    assert show(to_indices(parse(r"\x. x (\y. x y)"))) == r"\. 0 (\. 1 0)"


def test_nameless_parse_round_trip():
    t = NLam(NApp(Idx(0), NLam(NApp(Idx(1), Idx(0)))))
    assert parse_nameless(show(t)) == t


@given(open_terms(20, free=("a", "b", "K")))
def test_parse_print_round_trip(t):
    assert parse(show(t), prelude=False) == t


# --- variables ---


def test_free_and_bound_variables():
    t = Lam("x", App(x, y))
    assert free_vars(t) == {"y"} and bound_vars(t) == {"x"}
    assert free_vars(PRELUDE["Omega"]) == set()
    assert bound_vars(PRELUDE["Omega"]) == {"x"}


def test_size_counts_nodes():
    assert size(parse(r"\x. x x")) == 4


# --- substitution ---


def test_naive_substitution_captures_on_K_y_S():
    k, s = PRELUDE["K"], PRELUDE["S"]
    # (λx.λy.x) y  →naive  λy.y ; then (λy.y) S →naive S
    first = subst_naive(k.body, k.binder, y)
    assert first == Lam("y", y)
    assert subst_naive(first.body, first.binder, s) == s


def test_capture_avoiding_substitution_on_K_y_S():
    k, s = PRELUDE["K"], PRELUDE["S"]
    first = subst_avoiding(k.body, k.binder, y, FreshSupply(used={"x", "y"}))
    assert first.binder != "y"
    assert subst_avoiding(first.body, first.binder, s) == y


def test_naive_trivial_clauses():
    t = parse(r"\a. a")
    assert subst_naive(x, "x", t) == t
    assert subst_naive(Lam("x", x), "x", y) == Lam("x", x)


def test_avoiding_renames_capturing_binder():
    out = subst_avoiding(Lam("y", App(x, y)), "x", y, FreshSupply())
    assert alpha_oracle(out, Lam("y0", App(y, Var("y0"))))
    assert subst_avoiding(z, "x", y) == z


@given(open_terms(10, ("a", "b")), st.sampled_from(["a", "b", "x"]), open_terms(6, ("a", "b", "x")))
def test_avoiding_substitution_matches_reference(t, name, s):
    got = subst_avoiding(t, name, s, FreshSupply(used={"a", "b", "x"}))
    assert alpha_oracle(got, subst_oracle(t, name, s))


def test_fresh_supply_skips_used_names():
    f = FreshSupply(used={"x0", "x2"})
    assert [f.fresh() for _ in range(3)] == ["x1", "x3", "x4"]
    assert f.fresh("y'") == "y5"


# --- alpha equivalence and de Bruijn forms ---


def test_alpha_examples():
    assert alpha_eq(parse(r"\x. x"), parse(r"\y. y"))
    assert not alpha_eq(parse(r"\x. x"), parse(r"\x. \y. x"))
    assert alpha_eq(parse(r"\x. x y"), parse(r"\z. z y"))
    assert not alpha_eq(parse(r"\x. x y"), parse(r"\x. x z"))


def test_de_bruijn_examples():
    t = parse(r"\x. x (\y. x y)")
    assert to_indices(t) == NLam(NApp(Idx(0), NLam(NApp(Idx(1), Idx(0)))))
    assert to_levels(t) == NLam(NApp(Idx(0), NLam(NApp(Idx(0), Idx(1)))))
    assert to_indices(parse(r"\x. x")) == to_levels(parse(r"\x. x")) == NLam(Idx(0))


def test_nameless_rejects_open_terms():
    with pytest.raises(OpenTermError) as info:
        to_indices(parse(r"\x. y x"))
    assert info.value.free_vars == {"y"} or set(info.value.free_vars) == {"y"}
    with pytest.raises(OpenTermError):
        to_levels(y)


@given(closed_terms(14))
def test_nameless_round_trips(t):
    assert alpha_oracle(from_indices(to_indices(t)), t)
    assert alpha_oracle(from_levels(to_levels(t)), t)


@given(closed_terms(10), closed_terms(10))
def test_nameless_equality_iff_alpha(t1, t2):
    expected = alpha_oracle(t1, t2)
    assert (to_indices(t1) == to_indices(t2)) == expected
    assert (to_levels(t1) == to_levels(t2)) == expected
    assert alpha_eq(t1, t2) == expected


@given(closed_terms(14))
def test_alpha_perturbation_is_invisible(t):
    p = perturb(t, "'")
    assert to_indices(p) == to_indices(t) and alpha_eq(p, t)


@given(open_terms(10))
def test_alpha_eq_on_open_terms_matches_oracle(t):
    assert alpha_eq(t, perturb(t, None))
    assert alpha_eq(t, Lam("a", t)) == alpha_oracle(t, Lam("a", t))
