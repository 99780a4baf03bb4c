import hypothesis.strategies as st
from hypothesis import settings

from lambdamachines import additive as A
from lambdamachines.terms import App, Lam, Var

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

NAMES = ("x", "y", "z", "w")


def _terms(scope, free, size):
    if size <= 1:
        names = tuple(scope) + tuple(free)
        if not names:
            return st.builds(Lam, st.sampled_from(NAMES[:1]), st.just(Var(NAMES[0])))
        return st.sampled_from(names).map(Var)
    sub = size - 1
    lam = st.sampled_from(NAMES).flatmap(
        lambda x: _terms(scope + (x,), free, sub).map(lambda b: Lam(x, b))
    )
    app = st.integers(1, max(1, sub - 1)).flatmap(
        lambda k: st.builds(App, _terms(scope, free, k), _terms(scope, free, max(1, sub - k)))
    )
    return st.one_of(_terms(scope, free, 1), lam, app)


def closed_terms(max_size=12):
    return st.integers(1, max_size).flatmap(lambda n: _terms((), (), n))


def open_terms(max_size=12, free=("a", "b")):
    return st.integers(1, max_size).flatmap(lambda n: _terms((), free, n))


def additive_exprs(max_height=6):
    leaf = st.integers(0, 20).map(A.Const)
    return st.recursive(leaf, lambda sub: st.builds(A.Plus, sub, sub), max_leaves=2 ** max_height)
