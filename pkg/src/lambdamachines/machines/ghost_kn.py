"""KN with its stack shape made explicit (a ghost machine weakly bisimilar to KN).

Stacks follow the grammar

    α ::= □c :: α | [□] :: ν          (applicative)
    ν ::= [] | λ□ :: ν | a□ :: α      (non-applicative)

so ``λ□`` never lands directly on ``□c``.  Terms built on the way up are
normal ``n ::= λt | [a]`` or neutral ``a ::= m | a n``; ``[a]`` is the explicit
coercion of a neutral term into a normal one.  There are three modes:
``⟨c, α⟩∇``, ``⟨a, α⟩Δ`` and ``⟨n, ν⟩Δ'``.  Rule (3) re-pushes ``[□]`` above
the new ``λ□`` so that the stack stays applicative, and the run halts in mode
``Δ'``.

:func:`erase` forgets the coercions and the extra mode; under erasure every
rule maps to the KN rule of the same name except (8a), which becomes a
stutter step.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

from ..core import Cons, Machine, Trace, iter_list, show_list
from ..errors import InvariantViolation, StuckOpen
from ..terms import Idx, NamelessTerm, NApp, NLam, Term, show
from . import kn
from .common import AbsVar, Clo, show_clo
from .kn import ArgF, LAM_FRAME, LamF, NeuF


class Mode(str, Enum):
    DOWN = "∇"
    UP = "Δ"
    UP_NORMAL = "Δ'"


@dataclass(frozen=True, slots=True)
class Coerced:
    """``[a]``: a neutral term viewed as a normal one."""

    neutral: Any


@dataclass(frozen=True, slots=True)
class CoerceF:
    """``[□]``"""


COERCE_FRAME = CoerceF()


def show_term(t) -> str:
    match t:
        case Coerced(a):
            return f"[{show_term(a)}]"
        case NLam(b):
            return f"\\. {show_term(b)}"
        case NApp(f, a):
            fs = show_term(f)
            as_ = show_term(a)
            if isinstance(a, (NApp, NLam)):
                as_ = f"({as_})"
            return f"{fs} {as_}"
    return show(t)


def show_frame(f) -> str:
    match f:
        case CoerceF():
            return "[□]"
        case NeuF(a):
            return f"({show_term(a)})□"
    return kn.show_frame(f)


@dataclass(frozen=True, slots=True)
class GhostConfig:
    mode: Mode
    focus: Any
    stack: Optional[Cons]
    depth: int
    free: tuple[str, ...] = ()

    def __str__(self) -> str:
        return show_config(self)


def show_config(k: GhostConfig) -> str:
    focus = show_clo(k.focus) if k.mode is Mode.DOWN else show_term(k.focus)
    return f"⟨{focus}, {show_list(k.stack, show_frame)}, {k.depth}⟩{k.mode.value}"


def load(source) -> GhostConfig:
    t, free = kn.prepare(source)
    return GhostConfig(Mode.DOWN, Clo(t, None), Cons(COERCE_FRAME, None), 0, free)


D, U, U2 = Mode.DOWN, Mode.UP, Mode.UP_NORMAL


def _app(k):
    match k:
        case GhostConfig(Mode.DOWN, Clo(NApp(f, a), e), s, m, fr):
            return GhostConfig(D, Clo(f, e), Cons(ArgF(Clo(a, e)), s), m, fr)


def _beta(k):
    match k:
        case GhostConfig(Mode.DOWN, Clo(NLam(b), e), Cons(ArgF(c), s), m, fr):
            return GhostConfig(D, Clo(b, Cons(c, e)), s, m, fr)


def _under(k):
    match k:
        case GhostConfig(Mode.DOWN, Clo(NLam(b), e), Cons(CoerceF(), nu), m, fr):
            stack = Cons(COERCE_FRAME, Cons(LAM_FRAME, nu))
            return GhostConfig(D, Clo(b, Cons(AbsVar(m + 1), e)), stack, m + 1, fr)


def _zero(k):
    match k:
        case GhostConfig(Mode.DOWN, Clo(Idx(0), Cons(c, _)), s, m, fr):
            return GhostConfig(D, c, s, m, fr)


def _succ(k):
    match k:
        case GhostConfig(Mode.DOWN, Clo(Idx(i), Cons(_, e)), s, m, fr) if i > 0:
            return GhostConfig(D, Clo(Idx(i - 1), e), s, m, fr)


def _absvar(k):
    match k:
        case GhostConfig(Mode.DOWN, AbsVar(m0), s, m, fr):
            return GhostConfig(U, Idx(m - m0), s, m, fr)


def _arg(k):
    match k:
        case GhostConfig(Mode.UP, a, Cons(ArgF(c), s), m, fr):
            return GhostConfig(D, c, Cons(COERCE_FRAME, Cons(NeuF(a), s)), m, fr)


def _coerce(k):
    match k:
        case GhostConfig(Mode.UP, a, Cons(CoerceF(), nu), m, fr):
            return GhostConfig(U2, Coerced(a), nu, m, fr)


def _lam(k):
    match k:
        case GhostConfig(Mode.UP_NORMAL, n, Cons(LamF(), nu), m, fr):
            return GhostConfig(U2, NLam(n), nu, m - 1, fr)


def _neu(k):
    match k:
        case GhostConfig(Mode.UP_NORMAL, n, Cons(NeuF(a), s), m, fr):
            return GhostConfig(U, NApp(a, n), s, m, fr)


RULES = (
    ("1", _app),
    ("2", _beta),
    ("3", _under),
    ("4", _zero),
    ("5", _succ),
    ("6", _absvar),
    ("8", _arg),
    ("8a", _coerce),
    ("9", _lam),
    ("10", _neu),
)
STUTTER_RULES = frozenset({"8a"})


def is_final(k: GhostConfig) -> bool:
    return k.mode is Mode.UP_NORMAL and k.stack is None and k.depth == 0


def erase_term(t) -> NamelessTerm:
    match t:
        case Coerced(a):
            return erase_term(a)
        case NLam(b):
            return NLam(erase_term(b))
        case NApp(f, a):
            return NApp(erase_term(f), erase_term(a))
    return t


def erase(k: GhostConfig) -> kn.KNConfig:
    """The KN configuration a ghost configuration stands for."""
    frames = [f for f in iter_list(k.stack) if not isinstance(f, CoerceF)]
    stack = None
    for f in reversed(frames):
        if isinstance(f, NeuF):
            f = NeuF(erase_term(f.term))
        stack = Cons(f, stack)
    if k.mode is Mode.DOWN:
        return kn.KNConfig(kn.Mode.DOWN, k.focus, stack, k.depth, k.free)
    return kn.KNConfig(kn.Mode.UP, erase_term(k.focus), stack, k.depth, k.free)


def unload(k: GhostConfig):
    return kn.strip_binders(erase_term(k.focus), len(k.free)), k.free


# shape invariant


def is_neutral(t) -> bool:
    match t:
        case Idx():
            return True
        case NApp(f, a):
            return is_neutral(f) and is_normal(a)
    return False


def is_normal(t) -> bool:
    match t:
        case Coerced(a):
            return is_neutral(a)
        case NLam(b):
            return is_normal(b)
    return False


def stack_kind(stack: Optional[Cons]) -> Optional[str]:
    """``"alpha"`` or ``"nu"`` when ``stack`` is derivable from that nonterminal, else ``None``.

    The two languages are disjoint, so at most one answer exists.
    """
    frames = list(iter_list(stack))
    # parse right to left: the bottom of the stack is the end of the word
    kind = "nu"  # [] is a ν-stack
    for f in reversed(frames):
        match f:
            case ArgF():
                if kind != "alpha":
                    return None
            case CoerceF():
                if kind != "nu":
                    return None
                kind = "alpha"
                continue
            case LamF():
                if kind != "nu":
                    return None
            case NeuF(a):
                if kind != "alpha" or not is_neutral(a):
                    return None
                kind = "nu"
                continue
            case _:
                return None
    return kind


def check(k: GhostConfig) -> None:
    want = "nu" if k.mode is Mode.UP_NORMAL else "alpha"
    got = stack_kind(k.stack)
    if got != want:
        raise InvariantViolation(f"ghost-kn: stack is not a {want}-stack", k)
    if k.mode is Mode.UP and not is_neutral(k.focus):
        raise InvariantViolation("ghost-kn: Δ focus is not neutral", k)
    if k.mode is Mode.UP_NORMAL and not is_normal(k.focus):
        raise InvariantViolation("ghost-kn: Δ' focus is not normal", k)
    lams = sum(1 for f in iter_list(k.stack) if isinstance(f, LamF))
    if lams != k.depth:
        raise InvariantViolation(f"ghost-kn: counter {k.depth} but {lams} λ□ frames", k)


def _stuck(k: GhostConfig) -> Exception:
    if k.mode is Mode.DOWN and isinstance(k.focus, Clo) and isinstance(k.focus.term, Idx):
        return StuckOpen(f"index {k.focus.term.n} has no binding in the environment")
    return InvariantViolation("ghost-kn: no rule applies", k)


def erase_trace(trace: Trace) -> Trace:
    """Drop stutter steps and erase every configuration."""
    out = Trace(erase(trace.initial))
    for rule, k in trace.steps:
        if rule in STUTTER_RULES:
            continue
        out.steps.append((rule, erase(k)))
    return out


GHOST_KN = Machine(
    name="ghost-kn",
    rules=RULES,
    load=load,
    is_final=is_final,
    unload=unload,
    beta_rules=frozenset({"2"}),
    show=show_config,
    readback=kn.readback,
    check=check,
    stuck=_stuck,
)
