"""Named and nameless lambda terms.

Named terms (:class:`Var`, :class:`App`, :class:`Lam`) are compared structurally;
``==`` never identifies alpha-variants, use :func:`alpha_eq` for that.  Nameless
terms (:class:`Idx`, :class:`NApp`, :class:`NLam`) carry no tag saying whether
their numbers are de Bruijn indices or levels: :func:`to_indices` produces
indices, :func:`to_levels` produces levels, and every machine documents which
one it consumes.

Concrete syntax::

    term ::= ('\\' | 'λ') ident+ '.' term  |  atom+ [lambda]
    atom ::= ident | '(' term ')'

Application is left-associative, abstraction bodies extend as far right as
possible.  An identifier that is not bound by an enclosing abstraction and names
a prelude entry (``I K S omega Omega pair c0 .. c9``, also ``ω`` and ``Ω``)
expands to that entry's term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import OpenTermError, ParseError


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class Lam:
    binder: str
    body: "Term"

    def __str__(self) -> str:
        return show(self)


Term = Union[Var, App, Lam]


@dataclass(frozen=True, slots=True)
class Idx:
    n: int

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class NApp:
    fn: "NamelessTerm"
    arg: "NamelessTerm"

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class NLam:
    body: "NamelessTerm"

    def __str__(self) -> str:
        return show(self)


NamelessTerm = Union[Idx, NApp, NLam]


# ---------------------------------------------------------------------------
# variables and substitution


def free_vars(t: Term) -> set[str]:
    match t:
        case Var(x):
            return {x}
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Lam(x, b):
            return free_vars(b) - {x}
    raise TypeError(t)


def bound_vars(t: Term) -> set[str]:
    match t:
        case Var(_):
            return set()
        case App(f, a):
            return bound_vars(f) | bound_vars(a)
        case Lam(x, b):
            return bound_vars(b) | {x}
    raise TypeError(t)


def all_vars(t: Term) -> set[str]:
    out: set[str] = set()
    todo = [t]
    while todo:
        match todo.pop():
            case Var(x):
                out.add(x)
            case App(f, a):
                todo += (f, a)
            case Lam(x, b):
                out.add(x)
                todo.append(b)
    return out


def is_closed(t: Term) -> bool:
    return not free_vars(t)


def size(t: Union[Term, NamelessTerm]) -> int:
    """Number of syntax-tree nodes."""
    n = 0
    todo = [t]
    while todo:
        u = todo.pop()
        n += 1
        match u:
            case App(f, a) | NApp(f, a):
                todo += (f, a)
            case Lam(_, b) | NLam(b):
                todo.append(b)
    return n


_STEM = re.compile(r"^(.*?)[0-9']*$")


@dataclass
class FreshSupply:
    """Deterministic source of fresh identifiers ``<stem><counter>``.

    Names recorded in ``used`` (and any ``avoid`` set passed to :meth:`fresh`)
    are skipped.  One supply belongs to one run.
    """

    base: str = "x"
    counter: int = 0
    used: set[str] = field(default_factory=set)

    def reserve(self, names: Iterable[str]) -> None:
        self.used.update(names)

    def fresh(self, hint: str | None = None, avoid: Iterable[str] = ()) -> str:
        stem = _STEM.match(hint or self.base).group(1) or self.base
        avoid = set(avoid)
        while True:
            name = f"{stem}{self.counter}"
            self.counter += 1
            if name not in self.used and name not in avoid:
                self.used.add(name)
                return name


def subst_naive(t: Term, x: str, s: Term) -> Term:
    """Capture-agnostic substitution ``t[x := s]``; may capture free variables of s."""
    match t:
        case Var(y):
            return s if y == x else t
        case App(f, a):
            return App(subst_naive(f, x, s), subst_naive(a, x, s))
        case Lam(y, b):
            if y == x:
                return t
            return Lam(y, subst_naive(b, x, s))
    raise TypeError(t)


def subst_avoiding(t: Term, x: str, s: Term, fresh: FreshSupply | None = None) -> Term:
    """Capture-avoiding substitution ``t[x := s]``.

    A binder of ``t`` that occurs free in ``s`` is renamed with a name drawn from
    ``fresh`` before the substitution descends under it.
    """
    if fresh is None:
        fresh = FreshSupply(used=all_vars(t) | all_vars(s))
    return _subst(t, x, s, free_vars(s), fresh)


def _subst(t: Term, x: str, s: Term, fv_s: set[str], fresh: FreshSupply) -> Term:
    match t:
        case Var(y):
            return s if y == x else t
        case App(f, a):
            return App(_subst(f, x, s, fv_s, fresh), _subst(a, x, s, fv_s, fresh))
        case Lam(y, b):
            if y == x:
                return t
            if y in fv_s:
                z = fresh.fresh(y, avoid=fv_s | all_vars(b) | {x})
                b = _subst(b, y, Var(z), {z}, fresh)
                y = z
            return Lam(y, _subst(b, x, s, fv_s, fresh))
    raise TypeError(t)


def alpha_rename(t: Term, fresh: FreshSupply) -> Term:
    """Copy of ``t`` with every binder replaced by a fresh name."""

    def go(u: Term, env: dict[str, str]) -> Term:
        match u:
            case Var(y):
                return Var(env.get(y, y))
            case App(f, a):
                return App(go(f, env), go(a, env))
            case Lam(y, b):
                z = fresh.fresh(y)
                return Lam(z, go(b, {**env, y: z}))
        raise TypeError(u)

    return go(t, {})


# ---------------------------------------------------------------------------
# nameless representations


def _nameless(t: Term, levels: bool) -> NamelessTerm:
    fv = free_vars(t)
    if fv:
        raise OpenTermError(fv)
    scope: dict[str, int] = {}

    def go(u: Term, depth: int) -> NamelessTerm:
        match u:
            case Var(x):
                lvl = scope[x]
                return Idx(lvl if levels else depth - 1 - lvl)
            case App(f, a):
                return NApp(go(f, depth), go(a, depth))
            case Lam(x, b):
                saved = scope.get(x)
                scope[x] = depth
                body = go(b, depth + 1)
                if saved is None:
                    del scope[x]
                else:
                    scope[x] = saved
                return NLam(body)
        raise TypeError(u)

    return go(t, 0)


def to_indices(t: Term) -> NamelessTerm:
    """De Bruijn indices: a variable counts the binders between it and its own."""
    return _nameless(t, levels=False)


def to_levels(t: Term) -> NamelessTerm:
    """De Bruijn levels: a variable counts the binders above its own binder."""
    return _nameless(t, levels=True)


def _named(t: NamelessTerm, levels: bool, base: str, free: Sequence[str] = ()) -> Term:
    # free[0] is the innermost free variable (index depth, level len(free)-1)
    free = list(free)
    taken = set(free)
    outer = len(free)

    def binder(k: int) -> str:
        name = f"{base}{k}"
        while name in taken:
            name += "'"
        return name

    def var(lvl: int, depth: int, n: int) -> Term:
        if 0 <= lvl < outer:
            return Var(free[outer - 1 - lvl])
        if outer <= lvl < depth:
            return Var(binder(lvl - outer))
        raise OpenTermError({str(n)})

    def go(u: NamelessTerm, depth: int) -> Term:
        match u:
            case Idx(n):
                return var(n if levels else depth - 1 - n, depth, n)
            case NApp(f, a):
                return App(go(f, depth), go(a, depth))
            case NLam(b):
                return Lam(binder(depth - outer), go(b, depth + 1))
        raise TypeError(u)

    return go(t, outer)


def from_indices(t: NamelessTerm, base: str = "x", free: Sequence[str] = ()) -> Term:
    """Named term for an index term; the binder at depth k is named ``<base>k``.

    ``free`` names the dangling indices, innermost first: index ``depth + i``
    becomes ``free[i]``.  Binder names are primed until they avoid ``free``.
    """
    return _named(t, levels=False, base=base, free=free)


def from_levels(t: NamelessTerm, base: str = "x") -> Term:
    return _named(t, levels=True, base=base)


def close_over(t: Term, names: Iterable[str]) -> Term:
    for x in reversed(list(names)):
        t = Lam(x, t)
    return t


def alpha_eq(t1: Term, t2: Term) -> bool:
    """Alpha-equivalence; free variables are compared by name.

    Both terms are closed over the union of their free variables in sorted order
    and their de Bruijn index translations are compared.
    """
    fv = sorted(free_vars(t1) | free_vars(t2))
    return to_indices(close_over(t1, fv)) == to_indices(close_over(t2, fv))


# ---------------------------------------------------------------------------
# printing


def show(t: Union[Term, NamelessTerm]) -> str:
    match t:
        case Var(x):
            return x
        case Idx(n):
            return str(n)
        case Lam(x, b):
            return f"\\{x}. {show(b)}"
        case NLam(b):
            return f"\\. {show(b)}"
        case App(f, a) | NApp(f, a):
            left = show(f)
            if isinstance(f, (Lam, NLam)):
                left = f"({left})"
            right = show(a)
            if isinstance(a, (App, NApp, Lam, NLam)):
                right = f"({right})"
            return f"{left} {right}"
    raise TypeError(t)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<lam>\\|λ)
      | (?P<dot>\.)
      | (?P<lp>\()
      | (?P<rp>\))
      | (?P<num>[0-9]+)
      | (?P<ident>[a-zA-Z][a-zA-Z0-9'_]*|ω|Ω)
    """,
    re.VERBOSE,
)

_ALIASES = {"ω": "omega", "Ω": "Omega"}


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", len(src[:pos].encode()))
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), len(src[:pos].encode())))
        pos = m.end()
    out.append(("eof", "", len(src.encode())))
    return out


class _Parser:
    def __init__(self, src: str, nameless: bool, prelude: bool):
        self.toks = _tokenize(src)
        self.i = 0
        self.nameless = nameless
        self.prelude = prelude
        self.scope: list[str] = []

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        if tok[0] != kind:
            what = tok[1] or "end of input"
            raise ParseError(f"expected {kind}, found {what!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        t = self.term()
        self.take("eof")
        return t

    def term(self):
        if self.peek()[0] == "lam":
            return self.abstraction()
        t = self.atom()
        while True:
            kind = self.peek()[0]
            if kind == "lam":
                t = self._app(t, self.abstraction())
                return t
            if kind not in ("ident", "num", "lp"):
                return t
            t = self._app(t, self.atom())

    def _app(self, f, a):
        return NApp(f, a) if self.nameless else App(f, a)

    def abstraction(self):
        self.take("lam")
        if self.nameless:
            self.take("dot")
            return NLam(self.term())
        binders = [self.take("ident")[1]]
        while self.peek()[0] == "ident":
            binders.append(self.take("ident")[1])
        self.take("dot")
        self.scope.extend(binders)
        body = self.term()
        del self.scope[len(self.scope) - len(binders):]
        for x in reversed(binders):
            body = Lam(x, body)
        return body

    def atom(self):
        kind, text, off = self.peek()
        if kind == "lp":
            self.i += 1
            t = self.term()
            self.take("rp")
            return t
        if self.nameless:
            return Idx(int(self.take("num")[1]))
        self.take("ident")
        name = _ALIASES.get(text, text)
        if self.prelude and name not in self.scope and name in PRELUDE:
            return PRELUDE[name]
        if text in _ALIASES:
            raise ParseError(f"{text!r} is not a variable name", off)
        return Var(name)


def parse(src: str, prelude: bool = True) -> Term:
    """Parse a named lambda term; see the module docstring for the syntax."""
    return _Parser(src, nameless=False, prelude=prelude).parse()


def parse_nameless(src: str) -> NamelessTerm:
    r"""Parse nameless syntax such as ``\. 0 (\. 1 0)``."""
    return _Parser(src, nameless=True, prelude=False).parse()


# ---------------------------------------------------------------------------
# prelude


def church(n: int) -> Term:
    body: Term = Var("x")
    for _ in range(n):
        body = App(Var("f"), body)
    return Lam("f", Lam("x", body))


def _build_prelude() -> dict[str, Term]:
    p = lambda s: parse(s, prelude=False)  # noqa: E731
    omega = p(r"\x. x x")
    table = {
        "I": p(r"\x. x"),
        "K": p(r"\x y. x"),
        "S": p(r"\x y z. x z (y z)"),
        "omega": omega,
        "Omega": App(omega, omega),
        "pair": p(r"\x y f. f x y"),
    }
    for n in range(10):
        table[f"c{n}"] = church(n)
    return table


PRELUDE: dict[str, Term] = {}
PRELUDE.update(_build_prelude())
