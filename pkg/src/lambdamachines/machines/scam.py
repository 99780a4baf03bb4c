"""The strong crumbling abstract machine (SCAM): strong call by value on crumbles.

A crumble ``E[⋆]`` is a chain of explicit substitutions ``[x ← b]`` around the
result variable ``⋆``; bites are ``x``, ``x y`` or ``λx.t``.  Here a crumble is
a cons list of ``(name, bite)`` pairs, outermost binding first; the final ``⋆``
is implicit and its own binding ``[⋆ ← b]`` is always the innermost one.

    ⟨t[x←y z], S⟩∇        → ⟨E[t[x←b]][w:=z], S⟩∇              (β_v)  (*), S(z) abstraction
    ⟨t[x←y z], S⟩∇        → ⟨E[t[x←b]], □[w←z] :: S⟩∇          (β_i)  (*), S(z) not abstraction
    ⟨t[x←y], S⟩∇          → ⟨t[x:=y], S⟩∇                      (ren)  x ≠ ⋆
    ⟨t[x←b], S⟩∇          → ⟨t, □[x←b] :: S⟩∇                  (sea₁) otherwise
    ⟨⋆, S⟩∇               → ⟨⋆, S⟩Δ                            (sea₂)
    ⟨t, □[x←b] :: S⟩Δ     → ⟨t[x←b], S⟩Δ                       (sea₃) b not an abstraction
    ⟨t, □[x←λy.t'] :: S⟩Δ → ⟨t, S⟩Δ                            (gc)   x ∉ FV(t)
    ⟨t, □[x←λy.t'] :: S⟩Δ → ⟨t', t[x←λy.□] :: S⟩∇              (sea₅) x ∈ FV(t)
    ⟨t', t[x←λy.□] :: S⟩Δ → ⟨t[x←λy.t'], S⟩Δ                   (sea₄)

(*) means that ``y`` is bound on the stack to an abstraction whose fresh copy is
``λw.E[⋆[⋆←b]]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from ..core import Cons, Machine, cons_list, iter_list, show_list
from ..errors import MalformedCrumble
from ..terms import App, FreshSupply, Lam, Term, Var, all_vars, alpha_rename

STAR = "⋆"


@dataclass(frozen=True, slots=True)
class BVar:
    name: str


@dataclass(frozen=True, slots=True)
class BApp:
    fn: str
    arg: str


@dataclass(frozen=True, slots=True)
class BLam:
    param: str
    body: Optional[Cons]


Bite = Union[BVar, BApp, BLam]
Crumble = Optional[Cons]  # of (name, Bite), outermost first


# crumbling


def crumble(t: Term, fresh: Optional[FreshSupply] = None) -> Crumble:
    """Translate ``t`` into a crumble, renaming every binder apart first.

    An application ``t₁ t₂`` binds its argument before its function, so the
    machine's outermost-first traversal evaluates arguments first.
    """
    if fresh is None:
        fresh = FreshSupply(used=set(all_vars(t)) | {STAR})
    t = alpha_rename(t, fresh)
    return _crumble(t, fresh)


def _crumble(t: Term, fresh: FreshSupply) -> Crumble:
    binds: list[tuple[str, Bite]] = []
    b = _bite(t, binds, fresh)
    binds.append((STAR, b))
    return cons_list(binds)


def _bite(t: Term, binds: list, fresh: FreshSupply) -> Bite:
    match t:
        case Var(x):
            return BVar(x)
        case Lam(x, body):
            return BLam(x, _crumble(body, fresh))
        case App(f, a):
            va = _name(a, binds, fresh)
            vf = _name(f, binds, fresh)
            return BApp(vf, va)
    raise TypeError(t)


def _name(t: Term, binds: list, fresh: FreshSupply) -> str:
    if isinstance(t, Var):
        return t.name
    b = _bite(t, binds, fresh)
    z = fresh.fresh("v")
    binds.append((z, b))
    return z


def readback(c: Crumble, env: Optional[dict] = None) -> Term:
    """Inline every binding into its uses and return the term bound to ``⋆``."""
    local = dict(env or {})
    for x, b in iter_list(c):
        local[x] = _bite_term(b, local)
    if STAR not in local:
        raise MalformedCrumble("crumble has no ⋆ binding")
    return local[STAR]


def _bite_term(b: Bite, env: dict) -> Term:
    match b:
        case BVar(x):
            return env.get(x, Var(x))
        case BApp(f, a):
            return App(env.get(f, Var(f)), env.get(a, Var(a)))
        case BLam(p, body):
            inner = dict(env)
            inner.pop(p, None)
            return Lam(p, readback(body, inner))
    raise MalformedCrumble(f"not a bite: {b!r}")


def bite_free_vars(b: Bite) -> set[str]:
    match b:
        case BVar(x):
            return {x}
        case BApp(f, a):
            return {f, a}
        case BLam(p, body):
            return crumble_free_vars(body) - {p}
    raise MalformedCrumble(f"not a bite: {b!r}")


def crumble_free_vars(c: Crumble) -> set[str]:
    """Free variables, counting the trailing ``⋆`` as free when unbound."""
    fv = {STAR}
    for x, b in reversed(list(iter_list(c))):
        fv.discard(x)
        fv |= bite_free_vars(b)
    return fv


def rename_crumble(c: Crumble, x: str, y: str) -> Crumble:
    """``c[x := y]`` for a variable ``y``; names are distinct so nothing is captured."""
    out = []
    for z, b in iter_list(c):
        out.append((z, _rename_bite(b, x, y)))
    return cons_list(out)


def _rename_bite(b: Bite, x: str, y: str) -> Bite:
    match b:
        case BVar(z):
            return BVar(y) if z == x else b
        case BApp(f, a):
            return BApp(y if f == x else f, y if a == x else a)
        case BLam(p, body):
            return BLam(p, rename_crumble(body, x, y))
    raise MalformedCrumble(f"not a bite: {b!r}")


def rename_apart(b: BLam, fresh: FreshSupply) -> BLam:
    """Fresh copy of an abstraction bite: parameter and all inner names renamed."""

    def crum(c: Crumble, env: dict) -> Crumble:
        env = dict(env)
        out = []
        for z, bite in iter_list(c):
            nb = bite_(bite, env)
            if z != STAR:
                env[z] = fresh.fresh(z)
            out.append((env.get(z, z), nb))
        return cons_list(out)

    def bite_(bite: Bite, env: dict) -> Bite:
        match bite:
            case BVar(z):
                return BVar(env.get(z, z))
            case BApp(f, a):
                return BApp(env.get(f, f), env.get(a, a))
            case BLam(p, body):
                q = fresh.fresh(p)
                return BLam(q, crum(body, {**env, p: q}))
        raise MalformedCrumble(f"not a bite: {bite!r}")

    return bite_(b, {})


def show_bite(b: Bite) -> str:
    match b:
        case BVar(x):
            return x
        case BApp(f, a):
            return f"{f} {a}"
        case BLam(p, body):
            return f"\\{p}.{show_crumble(body)}"
    return repr(b)


def show_crumble(c: Crumble) -> str:
    subs = "".join(f"[{x}←{show_bite(b)}]" for x, b in reversed(list(iter_list(c))))
    return STAR + subs


# machine


class Mode(str, Enum):
    DOWN = "∇"
    UP = "Δ"


@dataclass(frozen=True, slots=True)
class ESFrame:
    """``□[x←b]``"""

    name: str
    bite: Bite


@dataclass(frozen=True, slots=True)
class LamBodyFrame:
    """``t[x←λy.□]``"""

    outer: Crumble
    name: str
    param: str


@dataclass(frozen=True, slots=True)
class SCAMConfig:
    mode: Mode
    crumble: Crumble
    stack: Optional[Cons]
    fresh: FreshSupply = field(compare=False, repr=False, default=None)

    def __str__(self) -> str:
        return show_config(self)


def _show_frame(f) -> str:
    if isinstance(f, ESFrame):
        return f"□[{f.name}←{show_bite(f.bite)}]"
    return f"{show_crumble(f.outer)}[{f.name}←\\{f.param}.□]"


def show_config(k: SCAMConfig) -> str:
    return f"⟨{show_crumble(k.crumble)}, {show_list(k.stack, _show_frame)}⟩{k.mode.value}"


def load(source) -> SCAMConfig:
    if isinstance(source, Cons) or source is None:
        names = {x for x, _ in iter_list(source)}
        fresh = FreshSupply(used=names | {STAR})
        return SCAMConfig(Mode.DOWN, source, None, fresh)
    fresh = FreshSupply(used=set(all_vars(source)) | {STAR})
    return SCAMConfig(Mode.DOWN, crumble(source, fresh), None, fresh)


def stack_lookup(stack: Optional[Cons], y: str) -> Optional[Bite]:
    """``S(y)``: the bite bound to ``y`` by the nearest enclosing frame, if any."""
    for f in iter_list(stack):
        if isinstance(f, ESFrame) and f.name == y:
            return f.bite
        if isinstance(f, LamBodyFrame) and f.param == y:
            return None
    return None


def _split_body(lam: BLam) -> tuple[list, Bite]:
    binds = list(iter_list(lam.body))
    if not binds or binds[-1][0] != STAR:
        raise MalformedCrumble("abstraction body does not end in its ⋆ binding")
    return binds[:-1], binds[-1][1]


def _redex(k: SCAMConfig):
    if k.mode is not Mode.DOWN or k.crumble is None:
        return None
    x, b = k.crumble.head
    if not isinstance(b, BApp):
        return None
    fn = stack_lookup(k.stack, b.fn)
    if not isinstance(fn, BLam):
        return None
    return x, b, fn


def _beta(k: SCAMConfig, by_value: bool):
    found = _redex(k)
    if found is None:
        return None
    x, b, fn = found
    arg_is_abs = isinstance(stack_lookup(k.stack, b.arg), BLam)
    if arg_is_abs != by_value:
        return None
    copy = rename_apart(fn, k.fresh)
    env, result = _split_body(copy)
    c = k.crumble.tail
    c = Cons((x, result), c)
    for bind in reversed(env):
        c = Cons(bind, c)
    if by_value:
        return SCAMConfig(Mode.DOWN, rename_crumble(c, copy.param, b.arg), k.stack, k.fresh)
    frame = ESFrame(copy.param, BVar(b.arg))
    return SCAMConfig(Mode.DOWN, c, Cons(frame, k.stack), k.fresh)


def _beta_v(k):
    return _beta(k, True)


def _beta_i(k):
    return _beta(k, False)


def _ren(k):
    match k:
        case SCAMConfig(Mode.DOWN, Cons((x, BVar(y)), t)) if x != STAR:
            return SCAMConfig(Mode.DOWN, rename_crumble(t, x, y), k.stack, k.fresh)


def _sea1(k):
    if k.mode is not Mode.DOWN or k.crumble is None:
        return None
    x, b = k.crumble.head
    if _redex(k) is not None or (isinstance(b, BVar) and x != STAR):
        return None
    return SCAMConfig(Mode.DOWN, k.crumble.tail, Cons(ESFrame(x, b), k.stack), k.fresh)


def _sea2(k):
    if k.mode is Mode.DOWN and k.crumble is None:
        return SCAMConfig(Mode.UP, None, k.stack, k.fresh)


def _sea3(k):
    match k:
        case SCAMConfig(Mode.UP, t, Cons(ESFrame(x, b), s)) if not isinstance(b, BLam):
            return SCAMConfig(Mode.UP, Cons((x, b), t), s, k.fresh)


def _gc(k):
    match k:
        case SCAMConfig(Mode.UP, t, Cons(ESFrame(x, BLam()), s)) if x not in crumble_free_vars(t):
            return SCAMConfig(Mode.UP, t, s, k.fresh)


def _sea5(k):
    match k:
        case SCAMConfig(Mode.UP, t, Cons(ESFrame(x, BLam(y, body)), s)) if x in crumble_free_vars(t):
            return SCAMConfig(Mode.DOWN, body, Cons(LamBodyFrame(t, x, y), s), k.fresh)


def _sea4(k):
    match k:
        case SCAMConfig(Mode.UP, t1, Cons(LamBodyFrame(t, x, y), s)):
            return SCAMConfig(Mode.UP, Cons((x, BLam(y, t1)), t), s, k.fresh)


RULES = (
    ("β_v", _beta_v),
    ("β_i", _beta_i),
    ("ren", _ren),
    ("sea₁", _sea1),
    ("sea₂", _sea2),
    ("sea₃", _sea3),
    ("gc", _gc),
    ("sea₅", _sea5),
    ("sea₄", _sea4),
)


def is_final(k: SCAMConfig) -> bool:
    return k.mode is Mode.UP and k.stack is None


def unload(k: SCAMConfig) -> Crumble:
    return k.crumble


def check(k: SCAMConfig) -> None:
    """Every crumble on the way up still ends in its ⋆ binding."""
    if k.mode is Mode.UP and k.stack is None:
        last = None
        for x, _ in iter_list(k.crumble):
            last = x
        if last != STAR:
            raise MalformedCrumble("final crumble lost its ⋆ binding")


SCAM = Machine(
    name="scam",
    rules=RULES,
    load=load,
    is_final=is_final,
    unload=unload,
    beta_rules=frozenset({"β_v", "β_i"}),
    show=show_config,
    readback=readback,
    check=check,
)
