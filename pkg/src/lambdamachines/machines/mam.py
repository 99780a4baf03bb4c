"""Accattoli's Useful MAM: strong call by name with useful sharing in a global store.

    ⟨t₁ t₂, S, D, σ⟩∇          → ⟨t₁, □t₂ :: S, D, σ⟩∇                 (∇c₁)
    ⟨λx₁.t, □x₂ :: S, D, σ⟩∇   → ⟨t[x₁ := x₂], S, D, σ⟩∇               (m₁)   β
    ⟨λx.t₁, □t₂ :: S, D, σ⟩∇   → ⟨t₁, S, D, (x, (t₂, l)) :: σ⟩∇        (m₂)   β, t₂ not a variable
    ⟨λx.t, [], D, σ⟩∇          → ⟨t, [], λx.□ :: D, σ⟩∇                (∇c₂)
    ⟨x, S, D, σ⟩∇              → ⟨tᵅ, S, D, σ⟩∇     σ(x) = (t, red)     (e_red)
    ⟨x, □t₂ :: S, D, σ⟩∇       → ⟨tᵅ, □t₂ :: S, D, σ⟩∇  σ(x) = (t, abs) (e_abs)
    ⟨x, S, D, σ⟩∇              → ⟨x, S, D, σ⟩Δ      otherwise           (∇c₃)
    ⟨t₁, □t₂ :: S, D, σ⟩Δ      → ⟨t₂, [], (t₁□)S :: D, σ⟩∇             (Δc₆)
    ⟨t, [], λx.□ :: D, σ⟩Δ     → ⟨λx.t, [], D, σ⟩Δ                     (Δc₄)
    ⟨t₂, [], (t₁□)S :: D, σ⟩Δ  → ⟨t₁ t₂, S, D, σ⟩Δ                     (Δc₅)

All binders are kept pairwise distinct: the input is renamed apart on load and
every copy taken out of the store is renamed with fresh names.  The final
configuration unloads to the pair ``(t, σ)``; :func:`unfold` expands the store.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..core import Cons, Machine, cons_list, iter_list, show_list
from ..errors import InvariantViolation
from ..terms import App, FreshSupply, Lam, Term, Var, all_vars, alpha_rename, show, subst_naive


class Label(str, Enum):
    ABS = "abs"
    NEU = "neu"
    RED = "red"


class Store:
    """Persistent append-only store with O(1) lookup.

    Versions share one entry list; a version sees the first ``size`` entries.
    Extending an old version copies, so earlier configurations stay valid.
    """

    __slots__ = ("_entries", "_index", "size")

    def __init__(self, entries=None, index=None, size: int = 0):
        self._entries: list[tuple[str, Term, Label]] = entries if entries is not None else []
        self._index: dict[str, int] = index if index is not None else {}
        self.size = size

    def get(self, x: str) -> Optional[tuple[Term, Label]]:
        i = self._index.get(x)
        if i is None or i >= self.size:
            return None
        _, t, l = self._entries[i]
        return t, l

    def extend(self, x: str, t: Term, l: Label) -> "Store":
        entries, index = self._entries, self._index
        if len(entries) != self.size:
            entries = entries[: self.size]
            index = {y: i for i, (y, _, _) in enumerate(entries)}
        entries.append((x, t, l))
        index[x] = self.size
        return Store(entries, index, self.size + 1)

    def entries(self) -> list[tuple[str, Term, Label]]:
        """Newest entry first, matching ``(x, (t, l)) :: σ``."""
        return list(reversed(self._entries[: self.size]))

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return isinstance(other, Store) and self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash(self.size)

    def __repr__(self) -> str:
        return f"Store({self.entries()!r})"


EMPTY_STORE = Store()


def mam_label(t: Term, store: Store) -> Label:
    """Classify ``t`` relative to the store.

    A variable has its stored label, or ``neu`` when unbound.  An abstraction is
    ``red`` if its body is, else ``abs``.  An application is ``red`` when its
    head is ``abs`` or ``red`` or its argument is ``red``, else ``neu``.
    """
    # iterative post-order so deep terms do not exhaust the Python stack
    out: list[Label] = []
    todo: list[tuple[Term, bool]] = [(t, False)]
    while todo:
        u, done = todo.pop()
        match u:
            case Var(x):
                hit = store.get(x)
                out.append(hit[1] if hit else Label.NEU)
            case Lam(_, b):
                if done:
                    out.append(Label.RED if out.pop() is Label.RED else Label.ABS)
                else:
                    todo += [(u, True), (b, False)]
            case App(f, a):
                if done:
                    la, lf = out.pop(), out.pop()
                    red = lf in (Label.ABS, Label.RED) or la is Label.RED
                    out.append(Label.RED if red else Label.NEU)
                else:
                    todo += [(u, True), (a, False), (f, False)]
    return out[0]


class Mode(str, Enum):
    DOWN = "∇"
    UP = "Δ"


@dataclass(frozen=True, slots=True)
class DLam:
    """``λx.□``"""

    binder: str


@dataclass(frozen=True, slots=True)
class DApp:
    """``(t □)S``"""

    fn: Term
    stack: Optional[Cons]


@dataclass(frozen=True, slots=True)
class MAMConfig:
    mode: Mode
    focus: Term
    stack: Optional[Cons]
    dump: Optional[Cons]
    store: Store
    fresh: FreshSupply = field(compare=False, repr=False, default=None)

    def __str__(self) -> str:
        return show_config(self)


def _show_dump_frame(f) -> str:
    if isinstance(f, DLam):
        return f"\\{f.binder}.□"
    return f"({show(f.fn)} □){show_list(f.stack, _show_arg)}"


def _show_arg(t: Term) -> str:
    return f"□({show(t)})"


def show_store(store: Store) -> str:
    return show_list(cons_list(store.entries()), lambda e: f"({e[0]}, ({show(e[1])}, {e[2].value}))")


def show_config(k: MAMConfig) -> str:
    return (
        f"⟨{show(k.focus)}, {show_list(k.stack, _show_arg)}, "
        f"{show_list(k.dump, _show_dump_frame)}, {show_store(k.store)}⟩{k.mode.value}"
    )


def load(t: Term) -> MAMConfig:
    fresh = FreshSupply(used=set(all_vars(t)))
    return MAMConfig(Mode.DOWN, alpha_rename(t, fresh), None, None, EMPTY_STORE, fresh)


def _with(k: MAMConfig, mode=None, focus=None, stack=..., dump=..., store=None) -> MAMConfig:
    return MAMConfig(
        k.mode if mode is None else mode,
        k.focus if focus is None else focus,
        k.stack if stack is ... else stack,
        k.dump if dump is ... else dump,
        k.store if store is None else store,
        k.fresh,
    )


def _c1(k):
    if k.mode is Mode.DOWN and isinstance(k.focus, App):
        return _with(k, focus=k.focus.fn, stack=Cons(k.focus.arg, k.stack))


def _m1(k):
    match k:
        case MAMConfig(Mode.DOWN, Lam(x1, t), Cons(Var(x2), s)):
            return _with(k, focus=subst_naive(t, x1, Var(x2)), stack=s)


def _m2(k):
    match k:
        case MAMConfig(Mode.DOWN, Lam(x, t1), Cons(t2, s), _, store) if not isinstance(t2, Var):
            return _with(k, focus=t1, stack=s, store=store.extend(x, t2, mam_label(t2, store)))


def _c2(k):
    match k:
        case MAMConfig(Mode.DOWN, Lam(x, t), None, d):
            return _with(k, focus=t, dump=Cons(DLam(x), d))


def _stored(k) -> Optional[tuple[Term, Label]]:
    if k.mode is Mode.DOWN and isinstance(k.focus, Var):
        return k.store.get(k.focus.name)
    return None


def _e_red(k):
    hit = _stored(k)
    if hit is not None and hit[1] is Label.RED:
        return _with(k, focus=alpha_rename(hit[0], k.fresh))


def _e_abs(k):
    hit = _stored(k)
    if hit is not None and hit[1] is Label.ABS and k.stack is not None:
        return _with(k, focus=alpha_rename(hit[0], k.fresh))


def _c3(k):
    if k.mode is not Mode.DOWN or not isinstance(k.focus, Var):
        return None
    hit = k.store.get(k.focus.name)
    if hit is not None and (hit[1] is Label.RED or (hit[1] is Label.ABS and k.stack is not None)):
        return None
    return _with(k, mode=Mode.UP)


def _d6(k):
    match k:
        case MAMConfig(Mode.UP, t1, Cons(t2, s), d):
            return _with(k, mode=Mode.DOWN, focus=t2, stack=None, dump=Cons(DApp(t1, s), d))


def _d4(k):
    match k:
        case MAMConfig(Mode.UP, t, None, Cons(DLam(x), d)):
            return _with(k, focus=Lam(x, t), dump=d)


def _d5(k):
    match k:
        case MAMConfig(Mode.UP, t2, None, Cons(DApp(t1, s), d)):
            return _with(k, focus=App(t1, t2), stack=s, dump=d)


RULES = (
    ("∇c₁", _c1),
    ("m₁", _m1),
    ("m₂", _m2),
    ("∇c₂", _c2),
    ("e_red", _e_red),
    ("e_abs", _e_abs),
    ("∇c₃", _c3),
    ("Δc₆", _d6),
    ("Δc₄", _d4),
    ("Δc₅", _d5),
)


def is_final(k: MAMConfig) -> bool:
    return k.mode is Mode.UP and k.stack is None and k.dump is None


def unload(k: MAMConfig) -> tuple[Term, Store]:
    return k.focus, k.store


def unfold(t: Term, store: Store) -> Term:
    """Substitute store entries into ``t`` until no stored variable remains.

    Binders are pairwise distinct, so plain replacement cannot capture.
    """
    memo: dict[str, Term] = {}

    def entry(x: str) -> Optional[Term]:
        if x not in memo:
            hit = store.get(x)
            if hit is None:
                return None
            memo[x] = go(hit[0])
        return memo[x]

    def go(u: Term) -> Term:
        match u:
            case Var(x):
                r = entry(x)
                return u if r is None else r
            case App(f, a):
                return App(go(f), go(a))
            case Lam(x, b):
                return Lam(x, go(b))
        raise TypeError(u)

    return go(t)


def readback(out: tuple[Term, Store]) -> Term:
    return unfold(*out)


def _binders(t: Term, out: list[str]) -> None:
    todo = [t]
    while todo:
        u = todo.pop()
        match u:
            case App(f, a):
                todo += (f, a)
            case Lam(x, b):
                out.append(x)
                todo.append(b)


def check(k: MAMConfig) -> None:
    """Every binder and store name in the configuration occurs once."""
    names: list[str] = []
    _binders(k.focus, names)
    for t in iter_list(k.stack):
        _binders(t, names)
    for f in iter_list(k.dump):
        if isinstance(f, DLam):
            names.append(f.binder)
        else:
            _binders(f.fn, names)
            for t in iter_list(f.stack):
                _binders(t, names)
    for x, t, _ in k.store.entries():
        names.append(x)
        _binders(t, names)
    if len(names) != len(set(names)):
        dup = sorted({x for x in names if names.count(x) > 1})
        raise InvariantViolation(f"mam: names bound more than once: {', '.join(dup)}", k)


MAM = Machine(
    name="mam",
    rules=RULES,
    load=load,
    is_final=is_final,
    unload=unload,
    beta_rules=frozenset({"m₁", "m₂"}),
    show=show_config,
    readback=readback,
    check=check,
)
