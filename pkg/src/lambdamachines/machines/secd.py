"""Landin's SECD machine (pure part): right-to-left call by value.

    ⟨S, E, x :: C, D⟩                         → ⟨E(x) :: S, E, C, D⟩                  (2a)
    ⟨S, E, λx.t :: C, D⟩                      → ⟨(λx.t, E) :: S, E, C, D⟩             (2b)
    ⟨S, E, t₁ t₂ :: C, D⟩                     → ⟨S, E, t₂ :: t₁ :: ap :: C, D⟩        (2d)
    ⟨(λx.t, E') :: v :: S, E, ap :: C, D⟩     → ⟨[], (x, v) :: E', t :: [], (S, E, C) :: D⟩  (2c1)  β
    ⟨v :: _, _, [], (S, E, C) :: D⟩           → ⟨v :: S, E, C, D⟩                     (1)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..core import Cons, Machine, show_list
from ..terms import App, Lam, Term, Var, show
from .cek import Value, check_closed, env_lookup, readback_value, show_env, show_value


class _Ap:
    __slots__ = ()

    def __repr__(self) -> str:
        return "ap"


AP = _Ap()


@dataclass(frozen=True, slots=True)
class SECDConfig:
    stack: Optional[Cons]
    env: Optional[Cons]
    control: Optional[Cons]
    dump: Optional[Cons]

    def __str__(self) -> str:
        return show_config(self)


def _show_control(c) -> str:
    return "ap" if c is AP else show(c)


def _show_dump_entry(d) -> str:
    s, e, c = d
    return f"({show_list(s, show_value)}, {show_env(e)}, {show_list(c, _show_control)})"


def show_config(k: SECDConfig) -> str:
    return (
        f"⟨{show_list(k.stack, show_value)}, {show_env(k.env)}, "
        f"{show_list(k.control, _show_control)}, {show_list(k.dump, _show_dump_entry)}⟩"
    )


def load(t: Term) -> SECDConfig:
    return SECDConfig(None, None, Cons(check_closed(t), None), None)


def _var(k):
    match k:
        case SECDConfig(s, e, Cons(Var(x), c), d):
            return SECDConfig(Cons(env_lookup(e, x), s), e, c, d)


def _lam(k):
    match k:
        case SECDConfig(s, e, Cons(Lam() as lam, c), d):
            return SECDConfig(Cons(Value(lam, e), s), e, c, d)


def _app(k):
    match k:
        case SECDConfig(s, e, Cons(App(t1, t2), c), d):
            return SECDConfig(s, e, Cons(t2, Cons(t1, Cons(AP, c))), d)


def _beta(k):
    match k:
        case SECDConfig(Cons(Value(Lam(x, t), e1), Cons(v, s)), e, Cons(c0, c), d) if c0 is AP:
            return SECDConfig(None, Cons((x, v), e1), Cons(t, None), Cons((s, e, c), d))


def _ret(k):
    match k:
        case SECDConfig(Cons(v, _), _, None, Cons((s, e, c), d)):
            return SECDConfig(Cons(v, s), e, c, d)


def is_final(k: SECDConfig) -> bool:
    return (
        k.stack is not None
        and k.stack.tail is None
        and k.env is None
        and k.control is None
        and k.dump is None
    )


def unload(k: SECDConfig) -> Value:
    return k.stack.head


SECD = Machine(
    name="secd",
    rules=(("2a", _var), ("2b", _lam), ("2d", _app), ("2c1", _beta), ("1", _ret)),
    load=load,
    is_final=is_final,
    unload=unload,
    beta_rules=frozenset({"2c1"}),
    show=show_config,
    readback=readback_value,
)
