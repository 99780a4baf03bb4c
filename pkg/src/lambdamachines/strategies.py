"""Beta contraction and the strategy family cbn / lcbv / rcbv / no / full.

A decomposition is a pair ``(ctx, redex)`` where ``ctx`` is a tuple of frames
listed from the root down to the hole.  Every strategy is a restriction of the
general contexts ``C``; the restriction is checked by :func:`is_context`, a small
automaton over frame lists, one state per nonterminal of the grammar:

    Q ::= □ | Q t                       (call by name)
    E ::= □ | E t | (λx.t) E            (left-to-right call by value)
    F ::= □ | F (λx.t) | t F            (right-to-left call by value)
    N ::= N̄ | λx.N      N̄ ::= □ | N̄ t | a N     (normal order)

Call by value contracts with β restricted to abstraction arguments; the other
strategies use unrestricted β.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .errors import FuelExhausted, NoRedex
from .terms import App, FreshSupply, Lam, Term, Var, all_vars, alpha_eq, subst_avoiding


class Strategy(str, Enum):
    CBN = "cbn"
    LCBV = "lcbv"
    RCBV = "rcbv"
    NO = "no"
    FULL = "full"

    @property
    def by_value(self) -> bool:
        return self in (Strategy.LCBV, Strategy.RCBV)


DETERMINISTIC = (Strategy.CBN, Strategy.LCBV, Strategy.RCBV, Strategy.NO)


class NormalFormClass(str, Enum):
    WEAK_HEAD = "weak-head normal form"
    CBV_VALUE = "value"
    # an open call-by-value term whose evaluation is blocked by a free variable
    CBV_STUCK = "stuck on a free variable"
    BETA_ABS = "beta-normal abstraction"
    BETA_NEUTRAL = "beta-normal neutral term"
    REDUCIBLE = "reducible"


# frames


@dataclass(frozen=True, slots=True)
class AppL:
    """``□ t``: the hole is the function."""

    arg: Term


@dataclass(frozen=True, slots=True)
class AppR:
    """``t □``: the hole is the argument."""

    fn: Term


@dataclass(frozen=True, slots=True)
class Under:
    """``λx.□``"""

    binder: str


Frame = Union[AppL, AppR, Under]
Context = tuple[Frame, ...]


def plug(ctx: Context, t: Term) -> Term:
    for frame in reversed(ctx):
        match frame:
            case AppL(a):
                t = App(t, a)
            case AppR(f):
                t = App(f, t)
            case Under(x):
                t = Lam(x, t)
    return t


def show_context(ctx: Context) -> str:
    from .terms import show

    return show(plug(ctx, Var("□")))


# normal and neutral terms: n ::= λx.n | a,  a ::= a n | x


def is_neutral(t: Term) -> bool:
    while isinstance(t, App):
        if not is_normal(t.arg):
            return False
        t = t.fn
    return isinstance(t, Var)


def is_normal(t: Term) -> bool:
    while isinstance(t, Lam):
        t = t.body
    return is_neutral(t)


# contractions


def _fresh_for(t: Term, fresh: Optional[FreshSupply]) -> FreshSupply:
    return fresh if fresh is not None else FreshSupply(used=all_vars(t))


def contract_beta(t: Term, fresh: Optional[FreshSupply] = None) -> Term:
    match t:
        case App(Lam(x, b), a):
            return subst_avoiding(b, x, a, _fresh_for(t, fresh))
    raise NoRedex("not a beta-redex")


def contract_beta_lambda(t: Term, fresh: Optional[FreshSupply] = None) -> Term:
    match t:
        case App(Lam(x, b), Lam() as a):
            return subst_avoiding(b, x, a, _fresh_for(t, fresh))
    raise NoRedex("not a beta-redex with an abstraction argument")


def contract(s: Strategy, t: Term, fresh: Optional[FreshSupply] = None) -> Term:
    return (contract_beta_lambda if Strategy(s).by_value else contract_beta)(t, fresh)


# decomposition


def _leftmost_outermost(t: Term) -> Optional[tuple[Context, Term]]:
    frames: list[Frame] = []
    # explicit stack of (subterm, frames-depth) for backtracking into arguments
    todo: list[tuple[Term, int, Optional[Frame]]] = [(t, 0, None)]
    while todo:
        u, d, fr = todo.pop()
        del frames[d:]
        if fr is not None:
            frames.append(fr)
        match u:
            case App(Lam(), _):
                return tuple(frames), u
            case App(f, a):
                todo.append((a, len(frames), AppR(f)))
                todo.append((f, len(frames), AppL(a)))
            case Lam(x, b):
                todo.append((b, len(frames), Under(x)))
    return None


def decompose(s: Strategy, t: Term) -> Union[tuple[Context, Term], NormalFormClass]:
    """The unique ``s``-decomposition of ``t``, or the class of normal form it is.

    For ``full`` the leftmost-outermost decomposition is returned; see
    :func:`decompose_all` for the others.
    """
    s = Strategy(s)
    if s in (Strategy.NO, Strategy.FULL):
        found = _leftmost_outermost(t)
        if found is not None:
            return found
        return NormalFormClass.BETA_ABS if isinstance(t, Lam) else NormalFormClass.BETA_NEUTRAL
    frames: list[Frame] = []
    u = t
    while isinstance(u, App):
        f, a = u.fn, u.arg
        if s is Strategy.CBN:
            if isinstance(f, Lam):
                return tuple(frames), u
            frames.append(AppL(a))
            u = f
        elif s is Strategy.LCBV:
            if not isinstance(f, Lam):
                frames.append(AppL(a))
                u = f
            elif isinstance(a, Lam):
                return tuple(frames), u
            else:
                frames.append(AppR(f))
                u = a
        else:
            if not isinstance(a, Lam):
                frames.append(AppR(f))
                u = a
            elif isinstance(f, Lam):
                return tuple(frames), u
            else:
                frames.append(AppL(a))
                u = f
    if s is Strategy.CBN:
        return NormalFormClass.WEAK_HEAD
    if isinstance(t, Lam):
        return NormalFormClass.CBV_VALUE
    return NormalFormClass.CBV_STUCK


def decompose_all(t: Term) -> list[tuple[Context, Term]]:
    """Every beta-redex position under general contexts, in leftmost-outermost order."""
    out: list[tuple[Context, Term]] = []
    todo: list[tuple[Term, Context]] = [(t, ())]
    while todo:
        u, ctx = todo.pop()
        match u:
            case App(f, a):
                if isinstance(f, Lam):
                    out.append((ctx, u))
                todo.append((a, ctx + (AppR(f),)))
                todo.append((f, ctx + (AppL(a),)))
            case Lam(x, b):
                todo.append((b, ctx + (Under(x),)))
    return out


def is_context(s: Union[Strategy, str], ctx: Context) -> bool:
    """Whether the frame list ``ctx`` is derivable in the grammar of ``s``.

    ``s`` may also be ``"C"`` for the unrestricted grammar.  ``full`` uses ``C``.
    """
    if s in ("C", Strategy.FULL, "full"):
        return True
    s = Strategy(s)
    if s is Strategy.CBN:
        return all(isinstance(f, AppL) for f in ctx)
    if s is Strategy.LCBV:
        return all(
            isinstance(f, AppL) or (isinstance(f, AppR) and isinstance(f.fn, Lam)) for f in ctx
        )
    if s is Strategy.RCBV:
        return all(
            isinstance(f, AppR) or (isinstance(f, AppL) and isinstance(f.arg, Lam)) for f in ctx
        )
    bar = False  # False: in N, True: in N̄
    for f in ctx:
        match f:
            case Under():
                if bar:
                    return False
            case AppL():
                bar = True
            case AppR(fn):
                if not is_neutral(fn):
                    return False
                bar = False
    return True


def legal_decompositions(s: Strategy, t: Term) -> list[tuple[Context, Term]]:
    """Redex positions of ``t`` allowed by the grammar and contraction of ``s``."""
    s = Strategy(s)
    return [
        (ctx, r)
        for ctx, r in decompose_all(t)
        if is_context(s, ctx) and (not s.by_value or isinstance(r.arg, Lam))
    ]


# stepping


def step(s: Strategy, t: Term, fresh: Optional[FreshSupply] = None) -> Union[Term, NormalFormClass]:
    s = Strategy(s)
    d = decompose(s, t)
    if isinstance(d, NormalFormClass):
        return d
    ctx, redex = d
    return plug(ctx, contract(s, redex, _fresh_for(t, fresh)))


def normalize(s: Strategy, t: Term, fuel: int = 10_000) -> tuple[Term, int]:
    """Iterate :func:`step` to an ``s``-normal form; returns it with the step count."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    fresh = FreshSupply(used=all_vars(t))
    n = 0
    while True:
        nxt = step(s, t, fresh)
        if isinstance(nxt, NormalFormClass):
            return t, n
        if n >= fuel:
            raise FuelExhausted(fuel, last=t, steps=n)
        t = nxt
        n += 1


def reduction_sequence(s: Strategy, t: Term, fuel: int = 10_000) -> list[Term]:
    """``[t, t1, ..., nf]``; raises :class:`FuelExhausted` after ``fuel`` steps."""
    fresh = FreshSupply(used=all_vars(t))
    seq = [t]
    while True:
        nxt = step(s, seq[-1], fresh)
        if isinstance(nxt, NormalFormClass):
            return seq
        if len(seq) > fuel:
            raise FuelExhausted(fuel, last=seq[-1], steps=len(seq) - 1)
        seq.append(nxt)


def classify_nf(s: Strategy, t: Term) -> NormalFormClass:
    d = decompose(s, t)
    return d if isinstance(d, NormalFormClass) else NormalFormClass.REDUCIBLE


def convertible(t1: Term, t2: Term, fuel: int = 10_000) -> bool:
    """Beta-convertibility, decided by comparing normal-order normal forms."""
    n1, _ = normalize(Strategy.NO, t1, fuel)
    n2, _ = normalize(Strategy.NO, t2, fuel)
    return alpha_eq(n1, n2)


def one_step_reducts(t: Term) -> list[Term]:
    """All full-beta one-step reducts of ``t``."""
    fresh = FreshSupply(used=all_vars(t))
    return [plug(ctx, contract_beta(r, fresh)) for ctx, r in decompose_all(t)]


def church_rosser_check(t: Term, fuel: int = 10_000) -> bool:
    """Every pair of one-step reducts of ``t`` has a common reduct.

    The normal-order normal form serves as the common reduct, so ``t`` must be
    weakly normalizing within ``fuel``.
    """
    nfs = [normalize(Strategy.NO, r, fuel)[0] for r in one_step_reducts(t)]
    return all(alpha_eq(nfs[0], other) for other in nfs[1:])
