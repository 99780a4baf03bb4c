"""Generic transition-system plumbing shared by every abstract machine.

A machine is a list of labelled partial transition functions.  Each rule takes a
configuration and returns the successor, or ``None`` when its left-hand side does
not match.  :func:`step` fires the unique applicable rule; with ``audit=True`` it
evaluates *all* rules and raises :class:`InvariantViolation` if more than one
matches, which is how the determinism of every machine is checked at run time.

Stacks, environments, dumps and so on are persistent cons lists (:class:`Cons`,
``None`` for the empty list), so configurations are immutable values and a full
trace shares almost all of its structure.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Optional

from .errors import FuelExhausted, InvariantViolation


@dataclass(frozen=True, slots=True)
class Cons:
    head: Any
    tail: Optional["Cons"]

    def __iter__(self) -> Iterator[Any]:
        return iter_list(self)


def cons_list(items: Iterable[Any]) -> Optional[Cons]:
    """Build a cons list whose head is the first item."""
    out = None
    for item in reversed(list(items)):
        out = Cons(item, out)
    return out


def iter_list(xs: Optional[Cons]) -> Iterator[Any]:
    while xs is not None:
        yield xs.head
        xs = xs.tail


def list_length(xs: Optional[Cons]) -> int:
    n = 0
    while xs is not None:
        n += 1
        xs = xs.tail
    return n


def show_list(xs: Optional[Cons], show_item: Callable[[Any], str] = str) -> str:
    """Render a cons list as ``a :: b :: []``."""
    return " :: ".join([show_item(x) for x in iter_list(xs)] + ["[]"])


Rule = tuple[str, Callable[[Any], Any]]


@dataclass
class RunStats:
    total: int = 0
    beta: int = 0
    per_rule: Counter = field(default_factory=Counter)
    fuel: Optional[int] = None

    def record(self, rule: str, is_beta: bool) -> None:
        self.total += 1
        self.per_rule[rule] += 1
        if is_beta:
            self.beta += 1

    def as_dict(self) -> dict:
        return {"total": self.total, "beta": self.beta, "perRule": dict(self.per_rule)}


@dataclass
class Trace:
    """Initial configuration followed by ``(rule, configuration-after)`` pairs."""

    initial: Any
    steps: list[tuple[str, Any]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def configs(self) -> list[Any]:
        return [self.initial] + [k for _, k in self.steps]

    def transitions(self) -> Iterator[tuple[Any, str, Any]]:
        """Yield ``(before, rule, after)`` for every transition."""
        before = self.initial
        for rule, after in self.steps:
            yield before, rule, after
            before = after

    def rules(self) -> list[str]:
        return [r for r, _ in self.steps]


@dataclass(frozen=True)
class Machine:
    name: str
    rules: tuple[Rule, ...]
    load: Callable[[Any], Any]
    is_final: Callable[[Any], bool]
    unload: Callable[[Any], Any]
    beta_rules: frozenset = frozenset()
    show: Callable[[Any], str] = str
    # maps the unloaded output to a named lambda Term (or int for additive machines)
    readback: Optional[Callable[[Any], Any]] = None
    # raises on a per-configuration invariant violation
    check: Optional[Callable[[Any], None]] = None
    # builds the exception for a non-final configuration with no applicable rule
    stuck: Optional[Callable[[Any], Exception]] = None
    # configuration -> (focus, context) decomposition, when one is defined
    decode: Optional[Callable[[Any], Any]] = None


@dataclass
class RunResult:
    machine: str
    output: Any
    value: Any
    final: Any
    trace: Optional[Trace]
    stats: RunStats


def step(machine: Machine, config: Any, audit: bool = True) -> Optional[tuple[Any, str]]:
    """Fire one transition; ``None`` means the configuration is final."""
    found: Optional[tuple[Any, str]] = None
    for label, rule in machine.rules:
        nxt = rule(config)
        if nxt is None:
            continue
        if not audit:
            return nxt, label
        if found is not None:
            raise InvariantViolation(
                f"{machine.name}: rules ({found[1]}) and ({label}) both apply", config
            )
        found = (nxt, label)
    if found is not None:
        return found
    if machine.is_final(config):
        return None
    if machine.stuck is not None:
        raise machine.stuck(config)
    raise InvariantViolation(f"{machine.name}: no rule applies to a non-final configuration", config)


def _stats(machine: Machine, per_rule: Counter, total: int, fuel: int) -> RunStats:
    beta = sum(n for rule, n in per_rule.items() if rule in machine.beta_rules)
    return RunStats(total, beta, per_rule, fuel)


def run(
    machine: Machine,
    source: Any,
    fuel: int = 10_000,
    *,
    trace: bool = True,
    audit: bool = True,
    check: bool = False,
) -> RunResult:
    """Load ``source``, iterate :func:`step` until a final configuration, unload.

    ``fuel`` bounds the number of transitions.  Raises :class:`FuelExhausted`
    carrying the last configuration, the partial trace and the statistics.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    config = machine.load(source)
    tr = Trace(config) if trace else None
    steps = tr.steps if tr is not None else None
    checker = machine.check if check else None
    if checker is not None:
        checker(config)
    rules = machine.rules
    per_rule: Counter = Counter()
    total = 0
    # the body of step(), inlined for speed
    while True:
        found = None
        for label, rule in rules:
            nxt = rule(config)
            if nxt is None:
                continue
            if found is not None:
                raise InvariantViolation(
                    f"{machine.name}: rules ({found[1]}) and ({label}) both apply", config
                )
            found = (nxt, label)
            if not audit:
                break
        if found is None:
            if machine.is_final(config):
                break
            if machine.stuck is not None:
                raise machine.stuck(config)
            raise InvariantViolation(
                f"{machine.name}: no rule applies to a non-final configuration", config
            )
        if total >= fuel:
            raise FuelExhausted(
                fuel, last=config, trace=tr, stats=_stats(machine, per_rule, total, fuel)
            )
        config, label = found
        total += 1
        per_rule[label] += 1
        if steps is not None:
            steps.append((label, config))
        if checker is not None:
            checker(config)
    stats = _stats(machine, per_rule, total, fuel)
    output = machine.unload(config)
    value = machine.readback(output) if machine.readback is not None else output
    return RunResult(machine.name, output, value, config, tr, stats)
