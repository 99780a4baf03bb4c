"""Closures, environments and read-back shared by the environment machines."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Union

from ..core import Cons, iter_list, list_length
from ..errors import StuckOpen
from ..terms import (
    App,
    Idx,
    Lam,
    NamelessTerm,
    NApp,
    NLam,
    Term,
    Var,
    free_vars,
    from_indices,
    show,
    to_indices,
)


@dataclass(frozen=True, slots=True)
class Clo:
    """Closure ``(t, E)`` over a de Bruijn index term."""

    term: NamelessTerm
    env: Optional[Cons]

    def __str__(self) -> str:
        return show_clo(self)


@dataclass(frozen=True, slots=True)
class AbsVar:
    """Abstract variable ``V(n)`` standing for the binder at level ``n``."""

    level: int

    def __str__(self) -> str:
        return f"V({self.level})"


Closure = Union[Clo, AbsVar]


def show_clo(c: Closure) -> str:
    if isinstance(c, AbsVar):
        return str(c)
    env = ", ".join(show_clo(d) for d in iter_list(c.env))
    return f"({show(c.term)}, [{env}])"


def nameless_input(source: Any) -> NamelessTerm:
    """Index term for a machine input; named terms must be closed."""
    if isinstance(source, (Idx, NApp, NLam)):
        return source
    return to_indices(source)


def lookup(env: Optional[Cons], n: int) -> Closure:
    for i, c in enumerate(iter_list(env)):
        if i == n:
            return c
    raise StuckOpen(f"index {n} escapes an environment of length {list_length(env)}")


def readback_clo(c: Clo) -> NamelessTerm:
    """Close ``c.term`` by substituting environment closures for its free indices.

    Environment closures of the weak machines are closed, so no shifting is
    needed when they are inserted under binders.
    """
    memo: dict[int, NamelessTerm] = {}

    def env_term(n: int) -> NamelessTerm:
        if n not in memo:
            d = lookup(c.env, n)
            if not isinstance(d, Clo):
                raise TypeError("abstract variable in a weak machine environment")
            memo[n] = readback_clo(d)
        return memo[n]

    def go(t: NamelessTerm, depth: int) -> NamelessTerm:
        match t:
            case Idx(n):
                return t if n < depth else env_term(n - depth)
            case NApp(f, a):
                return NApp(go(f, depth), go(a, depth))
            case NLam(b):
                return NLam(go(b, depth + 1))
        raise TypeError(t)

    return go(c.term, 0)


def readback_named(t: NamelessTerm) -> Term:
    return from_indices(t)


def close_named(t: Term, env: Optional[Cons], value_term) -> Term:
    """Replace free variables of ``t`` by the read-back of their bindings in ``env``.

    ``env`` is a cons list of ``(name, value)`` with the newest entry first;
    ``value_term`` reads a value back.  Values are closed, so plain replacement
    cannot capture.
    """
    bound = {}
    for x, v in iter_list(env):
        bound.setdefault(x, v)
    memo: dict[str, Term] = {}

    def go(u: Term, shadow: frozenset) -> Term:
        match u:
            case Var(x):
                if x in shadow or x not in bound:
                    return u
                if x not in memo:
                    memo[x] = value_term(bound[x])
                return memo[x]
            case App(f, a):
                return App(go(f, shadow), go(a, shadow))
            case Lam(x, b):
                return Lam(x, go(b, shadow | {x}))
        raise TypeError(u)

    if not free_vars(t) & bound.keys():
        return t
    return go(t, frozenset())
