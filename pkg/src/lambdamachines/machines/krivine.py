"""Krivine machine: weak head reduction, call by name, on de Bruijn indices.

    ⟨(t₁ t₂, E), S⟩    → ⟨(t₁, E), □(t₂, E) :: S⟩   (1)
    ⟨(λt, E), □c :: S⟩ → ⟨(t, c :: E), S⟩          (2)  β
    ⟨(0, c :: E), S⟩   → ⟨c, S⟩                    (3)
    ⟨(n+1, c :: E), S⟩ → ⟨(n, E), S⟩               (4)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..core import Cons, Machine, show_list
from ..errors import StuckOpen
from ..terms import Idx, NApp, NLam
from .common import Clo, nameless_input, readback_clo, readback_named, show_clo


@dataclass(frozen=True, slots=True)
class Arg:
    """``□c``"""

    clo: Clo


@dataclass(frozen=True, slots=True)
class KrivineConfig:
    clo: Clo
    stack: Optional[Cons]

    def __str__(self) -> str:
        return show_config(self)


def show_config(k: KrivineConfig) -> str:
    return f"⟨{show_clo(k.clo)}, {show_list(k.stack, lambda f: '□' + show_clo(f.clo))}⟩"


def load(source) -> KrivineConfig:
    return KrivineConfig(Clo(nameless_input(source), None), None)


def _app(k):
    match k:
        case KrivineConfig(Clo(NApp(f, a), e), s):
            return KrivineConfig(Clo(f, e), Cons(Arg(Clo(a, e)), s))


def _beta(k):
    match k:
        case KrivineConfig(Clo(NLam(b), e), Cons(Arg(c), s)):
            return KrivineConfig(Clo(b, Cons(c, e)), s)


def _zero(k):
    match k:
        case KrivineConfig(Clo(Idx(0), Cons(c, _)), s):
            return KrivineConfig(c, s)


def _succ(k):
    match k:
        case KrivineConfig(Clo(Idx(n), Cons(_, e)), s) if n > 0:
            return KrivineConfig(Clo(Idx(n - 1), e), s)


def is_final(k: KrivineConfig) -> bool:
    return k.stack is None and isinstance(k.clo.term, NLam)


def unload(k: KrivineConfig) -> Clo:
    return k.clo


def _stuck(k: KrivineConfig) -> Exception:
    if isinstance(k.clo.term, Idx):
        return StuckOpen(f"index {k.clo.term.n} has no binding in the environment")
    return StuckOpen("weak head is a free variable")


KRIVINE = Machine(
    name="krivine",
    rules=(("1", _app), ("2", _beta), ("3", _zero), ("4", _succ)),
    load=load,
    is_final=is_final,
    unload=unload,
    beta_rules=frozenset({"2"}),
    show=show_config,
    readback=lambda c: readback_named(readback_clo(c)),
    stuck=_stuck,
)
