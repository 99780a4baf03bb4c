"""Additive expressions: a toy calculus with constants and a sum constructor.

``Plus`` is a syntax constructor, not arithmetic: ``Plus(Const(2), Const(2))`` and
``Const(4)`` are different expressions that merely convert to each other.  The
module covers contexts and plugging, contraction, the left-to-right and
right-to-left strategies, the two abstract machines with their decodings, the
potential function that counts machine steps exactly, and a
normalization-by-evaluation normalizer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from . import core
from .core import Cons, Machine, iter_list
from .errors import NoRedex, NormalForm, ParseError


@dataclass(frozen=True, slots=True)
class Const:
    n: int

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class Plus:
    left: "Expr"
    right: "Expr"
    # potential of this node, filled in on first demand
    _phi: int = field(default=-1, init=False, compare=False, repr=False)

    def __str__(self) -> str:
        return show(self)


Expr = Union[Const, Plus]


# contexts: exactly one hole by construction


@dataclass(frozen=True, slots=True)
class Hole:
    pass


@dataclass(frozen=True, slots=True)
class PlusL:
    """``G ⊕ e``: the hole is in the left operand."""

    ctx: "Context"
    right: Expr


@dataclass(frozen=True, slots=True)
class PlusR:
    """``e ⊕ G``: the hole is in the right operand."""

    left: Expr
    ctx: "Context"


Context = Union[Hole, PlusL, PlusR]
HOLE = Hole()


def depth(e: Expr) -> int:
    match e:
        case Const(_):
            return 0
        case Plus(l, r):
            return 1 + max(depth(l), depth(r))
    raise TypeError(e)


def plug(ctx: Context, e: Expr) -> Expr:
    match ctx:
        case Hole():
            return e
        case PlusL(g, r):
            return Plus(plug(g, e), r)
        case PlusR(l, g):
            return Plus(l, plug(g, e))
    raise TypeError(ctx)


def compose(outer: Context, inner: Context) -> Context:
    """The context ``outer[inner]``."""
    match outer:
        case Hole():
            return inner
        case PlusL(g, r):
            return PlusL(compose(g, inner), r)
        case PlusR(l, g):
            return PlusR(l, compose(g, inner))
    raise TypeError(outer)


def contract_plus(e: Expr) -> Const:
    match e:
        case Plus(Const(n1), Const(n2)):
            return Const(n1 + n2)
    raise NoRedex(f"{show(e)} is not a sum of two constants")


def evaluate(e: Expr) -> int:
    """The natural number an expression denotes."""
    match e:
        case Const(n):
            return n
        case Plus(l, r):
            return evaluate(l) + evaluate(r)
    raise TypeError(e)


def nbe_normalize(e: Expr) -> Const:
    """Normalize by evaluating to a number and reifying it as a constant."""
    return Const(evaluate(e))


# ---------------------------------------------------------------------------
# reduction strategies


class Order(str, Enum):
    L = "L"
    R = "R"
    ANY = "any"


@dataclass(frozen=True)
class AmbiguityReport:
    """One chosen step (the leftmost redex) plus every redex position."""

    result: Expr
    positions: tuple[Context, ...]
    reducts: tuple[Expr, ...]


def redex_positions(e: Expr) -> list[Context]:
    """Contexts of every ``⌈n⌉ ⊕ ⌈m⌉`` subexpression, left to right."""
    match e:
        case Const(_):
            return []
        case Plus(Const(_), Const(_)):
            return [HOLE]
        case Plus(l, r):
            return [PlusL(g, r) for g in redex_positions(l)] + [
                PlusR(l, g) for g in redex_positions(r)
            ]
    raise TypeError(e)


def decompose(order: Order, e: Expr) -> tuple[Context, Expr]:
    """Split ``e`` into an ``order``-context and the redex it selects."""
    order = Order(order)
    if isinstance(e, Const):
        raise NormalForm(f"{show(e)} is a normal form")
    frames = []
    while True:
        match e:
            case Plus(Const(_), Const(_)):
                break
            case Plus(l, r) if order is Order.L:
                if isinstance(l, Const):
                    frames.append(lambda g, l=l: PlusR(l, g))
                    e = r
                else:
                    frames.append(lambda g, r=r: PlusL(g, r))
                    e = l
            case Plus(l, r):
                if isinstance(r, Const):
                    frames.append(lambda g, r=r: PlusL(g, r))
                    e = l
                else:
                    frames.append(lambda g, l=l: PlusR(l, g))
                    e = r
    ctx: Context = HOLE
    for wrap in reversed(frames):
        ctx = wrap(ctx)
    return ctx, e


def step_strategy(order: Order, e: Expr) -> Union[Expr, AmbiguityReport]:
    """One reduction step under ``order``.

    For ``L`` and ``R`` returns the reduct.  For ``any`` returns an
    :class:`AmbiguityReport`.  Raises :class:`NormalForm` on a constant.
    """
    order = Order(order)
    if order is Order.ANY:
        positions = redex_positions(e)
        if not positions:
            raise NormalForm(f"{show(e)} is a normal form")
        reducts = tuple(plug(g, contract_plus(focus_of(g, e))) for g in positions)
        return AmbiguityReport(reducts[0], tuple(positions), reducts)
    ctx, redex = decompose(order, e)
    return plug(ctx, contract_plus(redex))


def focus_of(ctx: Context, e: Expr) -> Expr:
    """The subexpression of ``e`` sitting in the hole of ``ctx``."""
    match ctx, e:
        case Hole(), _:
            return e
        case PlusL(g, _), Plus(l, _):
            return focus_of(g, l)
        case PlusR(_, g), Plus(_, r):
            return focus_of(g, r)
    raise ValueError("context does not match expression")


def is_l_context(ctx: Context) -> bool:
    """Membership in ``L ::= □ | L ⊕ e | ⌈n⌉ ⊕ L``."""
    while not isinstance(ctx, Hole):
        match ctx:
            case PlusL(g, _):
                ctx = g
            case PlusR(Const(_), g):
                ctx = g
            case _:
                return False
    return True


def is_r_context(ctx: Context) -> bool:
    """Membership in ``R ::= □ | R ⊕ ⌈n⌉ | e ⊕ R``."""
    while not isinstance(ctx, Hole):
        match ctx:
            case PlusL(g, Const(_)):
                ctx = g
            case PlusR(_, g):
                ctx = g
            case _:
                return False
    return True


def reduce_to_normal(order: Order, e: Expr) -> tuple[Const, int]:
    n = 0
    while not isinstance(e, Const):
        e = step_strategy(order, e)
        n += 1
    return e, n


# ---------------------------------------------------------------------------
# abstract machines


class Mode(str, Enum):
    DOWN = "∇"
    UP = "Δ"


# Frames of the left-to-right machine ...
@dataclass(frozen=True, slots=True)
class HolePlus:
    """``□ ⊕ e``"""

    expr: Expr


@dataclass(frozen=True, slots=True)
class NumPlus:
    """``⌈n⌉ ⊕ □``"""

    n: int


# ... and of the right-to-left machine.
@dataclass(frozen=True, slots=True)
class PlusHole:
    """``e ⊕ □``"""

    expr: Expr


@dataclass(frozen=True, slots=True)
class HoleNum:
    """``□ ⊕ ⌈n⌉``"""

    n: int


Frame = Union[HolePlus, NumPlus, PlusHole, HoleNum]


@dataclass(frozen=True, slots=True)
class AddConfig:
    focus: Expr
    stack: Optional[Cons]
    mode: Mode

    def __str__(self) -> str:
        return show_config(self)


DOWN, UP = Mode.DOWN, Mode.UP


def load(e: Expr) -> AddConfig:
    return AddConfig(e, None, DOWN)


def unload(k: AddConfig) -> int:
    match k:
        case AddConfig(Const(n), None, Mode.UP):
            return n
    raise ValueError(f"not a final configuration: {k}")


def is_final(k: AddConfig) -> bool:
    return k.mode is UP and k.stack is None


# Rules test fields directly rather than with class patterns: these run on
# every step of the large randomized suites.


def _l_descend(k):
    e = k.focus
    if k.mode is DOWN and type(e) is Plus:
        return AddConfig(e.left, Cons(HolePlus(e.right), k.stack), DOWN)


def _turn(k):
    if k.mode is DOWN and type(k.focus) is Const:
        return AddConfig(k.focus, k.stack, UP)


def _l_switch(k):
    s = k.stack
    if k.mode is UP and s is not None and type(s.head) is HolePlus:
        return AddConfig(s.head.expr, Cons(NumPlus(k.focus.n), s.tail), DOWN)


def _l_add(k):
    s = k.stack
    if k.mode is UP and s is not None and type(s.head) is NumPlus:
        return AddConfig(Const(s.head.n + k.focus.n), s.tail, UP)


def _r_descend(k):
    e = k.focus
    if k.mode is DOWN and type(e) is Plus:
        return AddConfig(e.right, Cons(PlusHole(e.left), k.stack), DOWN)


def _r_switch(k):
    s = k.stack
    if k.mode is UP and s is not None and type(s.head) is PlusHole:
        return AddConfig(s.head.expr, Cons(HoleNum(k.focus.n), s.tail), DOWN)


def _r_add(k):
    s = k.stack
    if k.mode is UP and s is not None and type(s.head) is HoleNum:
        return AddConfig(Const(k.focus.n + s.head.n), s.tail, UP)


L_RULES = (("↙", _l_descend), ("↑", _turn), ("↘", _l_switch), ("+", _l_add))
R_RULES = (("↘", _r_descend), ("↑", _turn), ("↙", _r_switch), ("+", _r_add))
OVERHEAD_RULES = frozenset({"↙", "↑", "↘"})


def _frame_context(frame: Frame, inner: Context) -> Context:
    match frame:
        case HolePlus(e):
            return PlusL(inner, e)
        case NumPlus(n):
            return PlusR(Const(n), inner)
        case PlusHole(e):
            return PlusR(e, inner)
        case HoleNum(n):
            return PlusL(inner, Const(n))
    raise TypeError(frame)


def decode_stack(stack: Optional[Cons]) -> Context:
    """Stack to context: the top frame is innermost."""
    ctx: Context = HOLE
    for frame in iter_list(stack):
        ctx = _frame_context(frame, ctx)
    return ctx


def decode(k: AddConfig) -> tuple[Expr, Context]:
    """Configuration to its (focus, context) decomposition."""
    return k.focus, decode_stack(k.stack)


def recompose(k: AddConfig) -> Expr:
    e = k.focus
    for frame in iter_list(k.stack):
        t = type(frame)
        if t is HolePlus:
            e = Plus(e, frame.expr)
        elif t is NumPlus:
            e = Plus(Const(frame.n), e)
        elif t is PlusHole:
            e = Plus(frame.expr, e)
        else:
            e = Plus(e, Const(frame.n))
    return e


def _expr_potential(e: Expr) -> int:
    if type(e) is Const:
        return 1
    if e._phi < 0:
        object.__setattr__(e, "_phi", 3 + _expr_potential(e.left) + _expr_potential(e.right))
    return e._phi


def potential(x: Union[Expr, Optional[Cons], AddConfig]) -> int:
    """Number of transitions left before the machine halts.

    Defined on expressions, stacks and configurations of either machine; the
    right-to-left clauses mirror the left-to-right ones.  Expression
    potentials are cached on the nodes, so a configuration costs its stack
    length.
    """
    t = type(x)
    if t is Const or t is Plus:
        return _expr_potential(x)
    if t is AddConfig:
        rest = potential(x.stack)
        return rest + _expr_potential(x.focus) if x.mode is Mode.DOWN else rest
    if x is not None and t is not Cons:
        raise TypeError(x)
    total = 0
    for frame in iter_list(x):
        f = type(frame)
        if f is HolePlus or f is PlusHole:
            total += 2 + _expr_potential(frame.expr)
        else:
            total += 1
    return total


def machine_for(order: Order) -> Machine:
    order = Order(order)
    if order is Order.ANY:
        raise ValueError("only L and R have abstract machines")
    return ADD_L if order is Order.L else ADD_R


def machine_step(order: Order, k: AddConfig) -> Optional[tuple[AddConfig, str]]:
    """One transition ``(k', rule)``, or ``None`` when ``k`` is final."""
    return core.step(machine_for(order), k)


def run_machine(order: Order, e: Expr, fuel: int = 1_000_000) -> tuple[int, core.Trace, core.RunStats]:
    res = core.run(machine_for(order), e, fuel)
    return res.output, res.trace, res.stats


# ---------------------------------------------------------------------------
# printing and concrete syntax


def show(e: Expr, paren: bool = False) -> str:
    match e:
        case Const(n):
            return f"⌈{n}⌉"
        case Plus(l, r):
            s = f"{show(l, True)} ⊕ {show(r, True)}"
            return f"({s})" if paren else s
    raise TypeError(e)


def show_ascii(e: Expr, paren: bool = False) -> str:
    match e:
        case Const(n):
            return str(n)
        case Plus(l, r):
            s = f"{show_ascii(l, True)}+{show_ascii(r, True)}"
            return f"({s})" if paren else s
    raise TypeError(e)


def _show_frame(f: Frame) -> str:
    match f:
        case HolePlus(e):
            return f"(□ ⊕ {show(e, True)})"
        case NumPlus(n):
            return f"(⌈{n}⌉ ⊕ □)"
        case PlusHole(e):
            return f"({show(e, True)} ⊕ □)"
        case HoleNum(n):
            return f"(□ ⊕ ⌈{n}⌉)"
    raise TypeError(f)


def show_config(k: AddConfig) -> str:
    return f"⟨{show(k.focus)}, {core.show_list(k.stack, _show_frame)}⟩{k.mode.value}"


def show_refocus(k: AddConfig) -> str:
    """The recomposed expression with the focus bracketed and tagged by mode.

    The brackets group like parentheses, so ``(⌈1⌉ ⊕ ⌈2⌉) ⊕ e`` focused on its
    left operand renders as ``⟨⌈1⌉ ⊕ ⌈2⌉⟩∇ ⊕ e``.  :func:`unfocus` turns a
    rendering back into an ordinary expression.
    """
    focus, ctx = decode(k)

    def go(g: Context, paren: bool) -> str:
        match g:
            case Hole():
                return f"⟨{show(focus)}⟩{k.mode.value}"
            case PlusL(inner, r):
                s = f"{go(inner, True)} ⊕ {show(r, True)}"
            case PlusR(l, inner):
                s = f"{show(l, True)} ⊕ {go(inner, True)}"
        return f"({s})" if paren else s

    return go(ctx, False)


_FOCUS_END = re.compile("⟩[∇Δ]")


def unfocus(rendered: str) -> Expr:
    """Parse a refocusing rendering back into the expression it depicts."""
    plain = _FOCUS_END.sub(")", rendered.replace("⟨", "("))
    plain = plain.replace("⌈", "").replace("⌉", "").replace("⊕", "+")
    return parse_additive(plain)


_ADD_TOKEN = re.compile(r"\s*(?:(?P<num>[0-9]+)|(?P<op>[+()]))")


def parse_additive(src: str) -> Expr:
    """Parse ``(1+2)+(4+8)``.  ``+`` does not associate: ``1+2+3`` is rejected."""
    toks = []
    pos = 0
    while pos < len(src):
        m = _ADD_TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            if src[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {src[pos]!r}", len(src[:pos].encode()))
        toks.append((m.group("num") or m.group("op"), len(src[: m.start(m.lastgroup)].encode())))
        pos = m.end()
    toks.append(("", len(src.encode())))
    i = 0

    def operand() -> Expr:
        nonlocal i
        tok, off = toks[i]
        if tok.isdigit():
            i += 1
            return Const(int(tok))
        if tok == "(":
            i += 1
            e = expr()
            if toks[i][0] != ")":
                raise ParseError("expected ')'", toks[i][1])
            i += 1
            return e
        raise ParseError(f"expected a number or '(', found {tok or 'end of input'!r}", off)

    def expr() -> Expr:
        nonlocal i
        left = operand()
        if toks[i][0] == "+":
            i += 1
            right = operand()
            if toks[i][0] == "+":
                raise ParseError("'+' is not associative; add parentheses", toks[i][1])
            return Plus(left, right)
        return left

    e = expr()
    if toks[i][0] != "":
        raise ParseError(f"unexpected {toks[i][0]!r}", toks[i][1])
    return e


ADD_L = Machine(
    name="add-l",
    rules=L_RULES,
    load=load,
    is_final=is_final,
    unload=unload,
    beta_rules=frozenset({"+"}),
    show=show_config,
    decode=decode,
)

ADD_R = Machine(
    name="add-r",
    rules=R_RULES,
    load=load,
    is_final=is_final,
    unload=unload,
    beta_rules=frozenset({"+"}),
    show=show_config,
    decode=decode,
)
