"""Crégut's KN machine: strong call by name (normal order) on de Bruijn indices.

    ⟨(t₁ t₂, E), S, n⟩∇        → ⟨(t₁, E), □(t₂, E) :: S, n⟩∇           (1)
    ⟨(λt, E), □c :: S, n⟩∇     → ⟨(t, c :: E), S, n⟩∇                  (2)  β
    ⟨(λt, E), S, n⟩∇           → ⟨(t, V(n+1) :: E), λ□ :: S, n+1⟩∇     (3)  top of S is not □c
    ⟨(0, c :: E), S, n⟩∇       → ⟨c, S, n⟩∇                            (4)
    ⟨(n'+1, c :: E), S, n⟩∇    → ⟨(n', E), S, n⟩∇                      (5)
    ⟨V(n₀), S, n⟩∇             → ⟨n − n₀, S, n⟩Δ                       (6)
    ⟨t, □c :: S, n⟩Δ           → ⟨c, t□ :: S, n⟩∇                      (8)
    ⟨t, λ□ :: S, n⟩Δ           → ⟨λt, S, n − 1⟩Δ                       (9)
    ⟨t₂, t₁□ :: S, n⟩Δ         → ⟨t₁ t₂, S, n⟩Δ                        (10)

The counter ``n`` always equals the number of ``λ□`` frames on the stack.
Named inputs with free variables are closed over them (sorted by name) before
loading; the extra outer abstractions are stripped again on unload.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

from ..core import Cons, Machine, iter_list, show_list
from ..errors import InvariantViolation, StuckOpen
from ..terms import Idx, NamelessTerm, NApp, NLam, Term, close_over, free_vars, from_indices, show
from .common import AbsVar, Clo, nameless_input, show_clo


class Mode(str, Enum):
    DOWN = "∇"
    UP = "Δ"


@dataclass(frozen=True, slots=True)
class ArgF:
    """``□c``"""

    clo: Any


@dataclass(frozen=True, slots=True)
class NeuF:
    """``t□``"""

    term: NamelessTerm


@dataclass(frozen=True, slots=True)
class LamF:
    """``λ□``"""


LAM_FRAME = LamF()


def show_frame(f) -> str:
    match f:
        case ArgF(c):
            return "□" + show_clo(c)
        case NeuF(t):
            return f"({show(t)})□"
        case LamF():
            return "λ□"
    return str(f)


@dataclass(frozen=True, slots=True)
class KNConfig:
    mode: Mode
    # DOWN: a closure; UP: a nameless term
    focus: Any
    stack: Optional[Cons]
    depth: int
    free: tuple[str, ...] = ()

    def __str__(self) -> str:
        return show_config(self)


def show_config(k: KNConfig) -> str:
    focus = show_clo(k.focus) if k.mode is Mode.DOWN else show(k.focus)
    return f"⟨{focus}, {show_list(k.stack, show_frame)}, {k.depth}⟩{k.mode.value}"


def prepare(source) -> tuple[NamelessTerm, tuple[str, ...]]:
    """Closed index term for ``source`` and the free names it was closed over."""
    if isinstance(source, (Idx, NApp, NLam)):
        return source, ()
    free = tuple(sorted(free_vars(source)))
    return nameless_input(close_over(source, free)), free


def load(source) -> KNConfig:
    t, free = prepare(source)
    return KNConfig(Mode.DOWN, Clo(t, None), None, 0, free)


def _app(k):
    match k:
        case KNConfig(Mode.DOWN, Clo(NApp(f, a), e), s, n, fr):
            return KNConfig(Mode.DOWN, Clo(f, e), Cons(ArgF(Clo(a, e)), s), n, fr)


def _beta(k):
    match k:
        case KNConfig(Mode.DOWN, Clo(NLam(b), e), Cons(ArgF(c), s), n, fr):
            return KNConfig(Mode.DOWN, Clo(b, Cons(c, e)), s, n, fr)


def _under(k):
    match k:
        case KNConfig(Mode.DOWN, Clo(NLam(b), e), s, n, fr) if not (
            s is not None and isinstance(s.head, ArgF)
        ):
            return KNConfig(Mode.DOWN, Clo(b, Cons(AbsVar(n + 1), e)), Cons(LAM_FRAME, s), n + 1, fr)


def _zero(k):
    match k:
        case KNConfig(Mode.DOWN, Clo(Idx(0), Cons(c, _)), s, n, fr):
            return KNConfig(Mode.DOWN, c, s, n, fr)


def _succ(k):
    match k:
        case KNConfig(Mode.DOWN, Clo(Idx(i), Cons(_, e)), s, n, fr) if i > 0:
            return KNConfig(Mode.DOWN, Clo(Idx(i - 1), e), s, n, fr)


def _absvar(k):
    match k:
        case KNConfig(Mode.DOWN, AbsVar(n0), s, n, fr):
            return KNConfig(Mode.UP, Idx(n - n0), s, n, fr)


def _arg(k):
    match k:
        case KNConfig(Mode.UP, t, Cons(ArgF(c), s), n, fr):
            return KNConfig(Mode.DOWN, c, Cons(NeuF(t), s), n, fr)


def _lam(k):
    match k:
        case KNConfig(Mode.UP, t, Cons(LamF(), s), n, fr):
            return KNConfig(Mode.UP, NLam(t), s, n - 1, fr)


def _neu(k):
    match k:
        case KNConfig(Mode.UP, t2, Cons(NeuF(t1), s), n, fr):
            return KNConfig(Mode.UP, NApp(t1, t2), s, n, fr)


RULES = (
    ("1", _app),
    ("2", _beta),
    ("3", _under),
    ("4", _zero),
    ("5", _succ),
    ("6", _absvar),
    ("8", _arg),
    ("9", _lam),
    ("10", _neu),
)


def is_final(k: KNConfig) -> bool:
    return k.mode is Mode.UP and k.stack is None and k.depth == 0


def strip_binders(t: NamelessTerm, n: int) -> NamelessTerm:
    for _ in range(n):
        if not isinstance(t, NLam):
            raise InvariantViolation("closing abstraction lost during normalization")
        t = t.body
    return t


def unload(k: KNConfig) -> tuple[NamelessTerm, tuple[str, ...]]:
    """The normal form in indices, with dangling indices naming ``free``."""
    return strip_binders(k.focus, len(k.free)), k.free


def readback(out) -> Term:
    t, free = out
    return from_indices(t, free=tuple(reversed(free)))


def check(k: KNConfig) -> None:
    lams = sum(1 for f in iter_list(k.stack) if isinstance(f, LamF))
    if lams != k.depth:
        raise InvariantViolation(f"kn: counter {k.depth} but {lams} λ□ frames", k)


def _stuck(k: KNConfig) -> Exception:
    if k.mode is Mode.DOWN and isinstance(k.focus, Clo) and isinstance(k.focus.term, Idx):
        return StuckOpen(f"index {k.focus.term.n} has no binding in the environment")
    return InvariantViolation("kn: no rule applies", k)


KN = Machine(
    name="kn",
    rules=RULES,
    load=load,
    is_final=is_final,
    unload=unload,
    beta_rules=frozenset({"2"}),
    show=show_config,
    readback=readback,
    check=check,
    stuck=_stuck,
)
