"""CEK machine: left-to-right call by value over named terms with environments.

    ⟨(x, E), S⟩∇           → ⟨E(x), S⟩Δ                 (1)
    ⟨(λx.t, E), S⟩∇        → ⟨(λx.t, E), S⟩Δ            (2)
    ⟨(t₁ t₂, E), S⟩∇       → ⟨(t₁, E), □(t₂, E) :: S⟩∇  (3)
    ⟨v, □(t₂, E) :: S⟩Δ    → ⟨(t₂, E), v□ :: S⟩∇        (4)
    ⟨v, (λx.t, E)□ :: S⟩Δ  → ⟨(t, (x, v) :: E), S⟩∇     (5)  β
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

from ..core import Cons, Machine, iter_list, show_list
from ..errors import InvariantViolation, OpenTermError, UnboundVariable
from ..terms import App, Lam, Term, Var, free_vars, show


@dataclass(frozen=True, slots=True)
class Value:
    """A closure ``(λx.t, E)``; ``E`` lists ``(name, Value)`` newest first."""

    lam: Lam
    env: Optional[Cons]

    def __str__(self) -> str:
        return show_value(self)


def show_env(env: Optional[Cons]) -> str:
    return "[" + ", ".join(f"({x}, {show_value(v)})" for x, v in iter_list(env)) + "]"


def show_value(v: Value) -> str:
    return f"({show(v.lam)}, {show_env(v.env)})"


def env_lookup(env: Optional[Cons], x: str) -> Value:
    for y, v in iter_list(env):
        if y == x:
            return v
    raise UnboundVariable(x)


def readback_value(v: Value) -> Term:
    from .common import close_named

    return close_named(v.lam, v.env, readback_value)


def check_closed(t: Term) -> Term:
    fv = free_vars(t)
    if fv:
        raise OpenTermError(fv)
    return t


@dataclass(frozen=True, slots=True)
class ArgF:
    """``□(t, E)``"""

    term: Term
    env: Optional[Cons]


@dataclass(frozen=True, slots=True)
class FunF:
    """``v□``"""

    value: Value


class Mode(str, Enum):
    DOWN = "∇"
    UP = "Δ"


@dataclass(frozen=True, slots=True)
class CEKConfig:
    mode: Mode
    # DOWN: (term, env) pair; UP: Value
    focus: Any
    stack: Optional[Cons]

    def __str__(self) -> str:
        return show_config(self)


def _show_frame(f) -> str:
    if isinstance(f, ArgF):
        return f"□({show(f.term)}, {show_env(f.env)})"
    return f"{show_value(f.value)}□"


def show_config(k: CEKConfig) -> str:
    if k.mode is Mode.DOWN:
        t, e = k.focus
        focus = f"({show(t)}, {show_env(e)})"
    else:
        focus = show_value(k.focus)
    return f"⟨{focus}, {show_list(k.stack, _show_frame)}⟩{k.mode.value}"


def load(t: Term) -> CEKConfig:
    return CEKConfig(Mode.DOWN, (check_closed(t), None), None)


def _var(k):
    if k.mode is Mode.DOWN and isinstance(k.focus[0], Var):
        return CEKConfig(Mode.UP, env_lookup(k.focus[1], k.focus[0].name), k.stack)


def _lam(k):
    if k.mode is Mode.DOWN and isinstance(k.focus[0], Lam):
        return CEKConfig(Mode.UP, Value(*k.focus), k.stack)


def _app(k):
    if k.mode is Mode.DOWN and isinstance(k.focus[0], App):
        (t, e) = k.focus
        return CEKConfig(Mode.DOWN, (t.fn, e), Cons(ArgF(t.arg, e), k.stack))


def _arg(k):
    match k:
        case CEKConfig(Mode.UP, v, Cons(ArgF(t, e), s)):
            return CEKConfig(Mode.DOWN, (t, e), Cons(FunF(v), s))


def _beta(k):
    match k:
        case CEKConfig(Mode.UP, v, Cons(FunF(Value(Lam(x, t), e)), s)):
            return CEKConfig(Mode.DOWN, (t, Cons((x, v), e)), s)


def is_final(k: CEKConfig) -> bool:
    return k.mode is Mode.UP and k.stack is None


def unload(k: CEKConfig) -> Value:
    return k.focus


def _stuck(k: CEKConfig) -> Exception:
    return InvariantViolation("cek: no rule applies", k)


CEK = Machine(
    name="cek",
    rules=(("1", _var), ("2", _lam), ("3", _app), ("4", _arg), ("5", _beta)),
    load=load,
    is_final=is_final,
    unload=unload,
    beta_rules=frozenset({"5"}),
    show=show_config,
    readback=readback_value,
    stuck=_stuck,
)
