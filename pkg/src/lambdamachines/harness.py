"""Running, rendering, generating inputs, benchmarking and cross-checking machines."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Iterator, Optional, Sequence

import numpy as np

from . import additive as A
from . import core
from .core import Machine, Trace
from .errors import FuelExhausted, LambdaMachinesError, UnsupportedStyle
from .machines import LOCKSTEP, STRATEGY, ghost_kn, kn
from .machines import get as get_machine
from .strategies import Strategy, convertible, normalize
from .terms import (
    PRELUDE,
    App,
    Idx,
    Lam,
    NApp,
    NLam,
    Term,
    Var,
    alpha_eq,
    from_indices,
    parse,
    show,
    size,
)

# ---------------------------------------------------------------------------
# trace rendering


class RenderStyle(str, Enum):
    PLAIN = "plain"
    REFOCUS = "refocus"
    JSON = "json"


def render_value(machine: Machine, value: Any) -> str:
    return str(value) if isinstance(value, int) else show(value)


def render_trace(
    machine: Machine,
    trace: Trace,
    style: RenderStyle | str = RenderStyle.PLAIN,
    *,
    source: str = "",
    stats: Optional[core.RunStats] = None,
    result: Optional[str] = None,
    status: str = "halted",
) -> str:
    """Render a trace.

    ``plain`` prints raw configurations, one per line, each followed by the rule
    that fires next.  ``refocus`` prints the recomposed expression with the
    focus bracketed; it needs a machine with a decoder.  ``json`` follows the
    schema ``{machine, input, steps[{index, rule, config}], stats, result, status}``
    where step ``i`` holds the configuration after the ``i``-th transition.
    """
    style = RenderStyle(style)
    if style is RenderStyle.JSON:
        return json.dumps(
            trace_document(machine, trace, source=source, stats=stats, result=result, status=status),
            ensure_ascii=False,
            indent=2,
        )
    if style is RenderStyle.REFOCUS:
        if machine.decode is None:
            raise UnsupportedStyle(f"machine {machine.name} has no decoder for refocusing notation")
        show_config = A.show_refocus
    else:
        show_config = machine.show
    configs = trace.configs()
    rules = trace.rules()
    width = len(str(len(configs) - 1))
    lines = []
    for i, k in enumerate(configs):
        arrow = f"  →({rules[i]})" if i < len(rules) else ""
        lines.append(f"{i:>{width}}: {show_config(k)}{arrow}")
    return "\n".join(lines)


def trace_document(
    machine: Machine,
    trace: Optional[Trace],
    *,
    source: str = "",
    stats: Optional[core.RunStats] = None,
    result: Optional[str] = None,
    status: str = "halted",
) -> dict:
    steps = []
    if trace is not None:
        steps = [
            {"index": i, "rule": rule, "config": machine.show(k)}
            for i, (rule, k) in enumerate(trace.steps, start=1)
        ]
    return {
        "machine": machine.name,
        "input": source,
        "steps": steps,
        "stats": (stats or core.RunStats()).as_dict(),
        "result": result,
        "status": status,
    }


# ---------------------------------------------------------------------------
# generators

_NAMES = ("x", "y", "z", "w")


def random_closed_term(rng: random.Random, n: int, scope: tuple[str, ...] = ()) -> Term:
    """A random term of exactly ``n`` nodes whose free variables lie in ``scope``.

    Needs ``n >= 2`` when ``scope`` is empty.  Binder names are drawn from a small
    pool so shadowing occurs regularly.
    """
    if n == 1:
        return Var(rng.choice(scope))
    if not scope or n == 2 or rng.random() < 0.4:
        x = rng.choice(_NAMES)
        return Lam(x, random_closed_term(rng, n - 1, scope + (x,)))
    k = rng.randint(1, n - 2)
    if not scope:
        k = max(k, 2)
    return App(random_closed_term(rng, k, scope), random_closed_term(rng, n - 1 - k, scope))


def random_additive(rng: random.Random, height: int, leaf: float = 0.3) -> A.Expr:
    """A random expression of depth below ``height``."""
    if height <= 1 or rng.random() < leaf:
        return A.Const(rng.randint(0, 9))
    return A.Plus(random_additive(rng, height - 1, leaf), random_additive(rng, height - 1, leaf))


def closed_nameless(n: int, depth: int = 0) -> Iterator:
    """Every index term of exactly ``n`` nodes closed under ``depth`` binders."""
    if n == 1:
        for i in range(depth):
            yield Idx(i)
        return
    yield from (NLam(b) for b in closed_nameless(n - 1, depth + 1))
    for k in range(1, n - 1):
        for f in closed_nameless(k, depth):
            for a in closed_nameless(n - 1 - k, depth):
                yield NApp(f, a)


def all_closed_terms(max_size: int) -> list[Term]:
    """All closed terms up to alpha of size at most ``max_size``."""
    return [from_indices(t) for n in range(1, max_size + 1) for t in closed_nameless(n)]


CHURCH_OPS = {
    "plus": parse(r"\m n f x. m f (n f x)"),
    "mult": parse(r"\m n f. m (n f)"),
    "succ": parse(r"\n f x. f (n f x)"),
}


def church_corpus(limit: int = 4) -> list[Term]:
    c = [PRELUDE[f"c{i}"] for i in range(limit + 1)]
    out = [App(m, n) for m in c for n in c]
    out += [App(App(CHURCH_OPS["plus"], m), n) for m in c for n in c]
    out += [App(App(CHURCH_OPS["mult"], m), n) for m in c for n in c]
    out += [App(CHURCH_OPS["succ"], n) for n in c]
    return out


def sn_corpus(max_size: int = 7) -> list[Term]:
    """The strongly normalizing test corpus.

    All closed terms up to ``max_size`` nodes (the smallest diverging closed
    term, Ω, has nine), Church numeral arithmetic through c4, and every prelude
    entry except Ω.
    """
    prelude = [t for name, t in PRELUDE.items() if name != "Omega"]
    return all_closed_terms(max_size) + church_corpus() + prelude


def gen_terms(kind: str, size_bound: int, seed: int = 0) -> Iterator:
    """Deterministic input stream.

    ``closed-random``: closed terms of 2 to ``size_bound`` nodes, unbounded stream.
    ``additive-random``: expressions of depth below ``size_bound``, unbounded stream.
    ``sn-corpus``: the finite corpus of :func:`sn_corpus` with closed terms up
    to ``size_bound`` nodes.
    """
    if size_bound < 1:
        raise ValueError("size bound must be at least 1")
    rng = random.Random(seed)
    if kind == "closed-random":
        if size_bound < 2:
            raise ValueError("closed terms need at least two nodes")
        return (random_closed_term(rng, rng.randint(2, size_bound)) for _ in itertools.count())
    if kind == "additive-random":
        return (random_additive(rng, size_bound) for _ in itertools.count())
    if kind == "sn-corpus":
        return iter(sn_corpus(size_bound))
    raise ValueError(f"unknown generator {kind!r}")


# ---------------------------------------------------------------------------
# size explosion


def size_explosion(n: int) -> Term:
    """``s_n y`` with ``s_0 = I`` and ``s_{k+1} = λx. s_k (λf. f x x)``.

    Normal order takes ``n + 1`` beta steps and the normal form roughly doubles
    in size with each increment of ``n``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    s: Term = Lam("x", Var("x"))
    for k in range(n):
        x, f = f"x{k}", f"f{k}"
        s = Lam(x, App(s, Lam(f, App(App(Var(f), Var(x)), Var(x)))))
    return App(s, Var("y"))


@dataclass
class BenchRow:
    n: int
    beta: int
    nf_size: int
    steps: dict[str, int]
    machine_beta: dict[str, int]


@dataclass
class BenchReport:
    family: str
    machines: tuple[str, ...]
    rows: list[BenchRow] = field(default_factory=list)

    def series(self, machine: str) -> np.ndarray:
        return np.array([r.steps[machine] for r in self.rows], dtype=float)

    def ratios(self, machine: str) -> np.ndarray:
        """``steps(n+1) / steps(n)`` for consecutive rows."""
        s = self.series(machine)
        return s[1:] / s[:-1]

    def differences(self, machine: str) -> np.ndarray:
        return np.diff(self.series(machine))

    def growth_exponent(self, machine: str) -> float:
        """Least-squares slope of log steps against log (n + 1)."""
        ns = np.array([r.n for r in self.rows], dtype=float)
        return float(np.polyfit(np.log(ns + 1), np.log(self.series(machine)), 1)[0])

    def cubic_envelope(self, machine: str, anchor: int = 3) -> tuple[float, bool]:
        """The constant ``c = steps(anchor) / (anchor+1)^3`` and whether every
        row with ``n >= anchor`` satisfies ``steps(n) <= c (n+1)^3``."""
        by_n = {r.n: r.steps[machine] for r in self.rows}
        c = by_n[anchor] / (anchor + 1) ** 3
        ok = all(s <= c * (n + 1) ** 3 for n, s in by_n.items() if n >= anchor)
        return c, ok

    def to_csv(self) -> str:
        head = ["n", "beta", "nf_size"] + [f"{m}_steps" for m in self.machines]
        head += [f"{m}_beta" for m in self.machines]
        lines = [",".join(head)]
        for r in self.rows:
            cells = [r.n, r.beta, r.nf_size] + [r.steps[m] for m in self.machines]
            cells += [r.machine_beta[m] for m in self.machines]
            lines.append(",".join(str(c) for c in cells))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "rows": [r.__dict__ for r in self.rows],
            "diagnostics": {
                m: {
                    "ratios": [round(x, 4) for x in self.ratios(m).tolist()],
                    "differences": self.differences(m).tolist(),
                    "loglogSlope": round(self.growth_exponent(m), 4),
                }
                for m in self.machines
            },
        }


FAMILIES = {"size-explosion": size_explosion}


def bench(
    family: str = "size-explosion",
    n_max: int = 10,
    machines: Sequence[str] = ("kn", "mam"),
    n_min: int = 1,
    fuel: int = 10_000_000,
) -> BenchReport:
    """Step counts of each machine on members ``n_min..n_max`` of a term family."""
    make = FAMILIES[family]
    report = BenchReport(family, tuple(machines))
    for n in range(n_min, n_max + 1):
        t = make(n)
        nf, beta = normalize(Strategy.NO, t, fuel)
        steps, mbeta = {}, {}
        for m in machines:
            res = core.run(get_machine(m), t, fuel, trace=False)
            steps[m] = res.stats.total
            mbeta[m] = res.stats.beta
        report.rows.append(BenchRow(n, beta, size(nf), steps, mbeta))
    return report


# ---------------------------------------------------------------------------
# cross-machine comparison


@dataclass
class Verdict:
    machine: str
    input: str
    status: str  # agree | mismatch | diverge | error
    detail: str = ""
    oracle_beta: Optional[int] = None
    machine_beta: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.status in ("agree", "diverge")


@dataclass
class CompareReport:
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def mismatches(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.ok]

    def summary(self) -> str:
        counts: dict[str, int] = {}
        for v in self.verdicts:
            counts[v.status] = counts.get(v.status, 0) + 1
        parts = ", ".join(f"{k}: {n}" for k, n in sorted(counts.items()))
        return f"{len(self.verdicts)} checks ({parts})"


def compare(
    machines: Iterable[str],
    oracle: Optional[Strategy | str] = None,
    inputs: Iterable[Term] = (),
    fuel: int = 10_000,
    machine_fuel: int = 1_000_000,
) -> CompareReport:
    """Run every machine on every input and check it against a strategy oracle.

    ``oracle`` defaults to each machine's own strategy.  Results must be alpha
    equal to the oracle's normal form (SCAM: beta-convertible to the normal-order
    one).  Lockstep machines must also fire exactly as many beta rules as the
    oracle takes steps.  Divergence on both sides counts as agreement.
    """
    inputs = list(inputs)
    report = CompareReport()
    for name in machines:
        m = get_machine(name)
        strat = Strategy(oracle) if oracle is not None else STRATEGY[name]
        for t in inputs:
            report.verdicts.append(_compare_one(m, strat, t, fuel, machine_fuel))
    return report


def _compare_one(m: Machine, strat: Strategy, t: Term, fuel: int, machine_fuel: int) -> Verdict:
    src = show(t)
    try:
        nf, beta = normalize(strat, t, fuel)
    except FuelExhausted:
        nf, beta = None, None
    try:
        res = core.run(m, t, machine_fuel, trace=False)
    except FuelExhausted:
        if nf is None:
            return Verdict(m.name, src, "diverge", "both exhausted their fuel")
        return Verdict(m.name, src, "mismatch", "machine ran out of fuel", beta)
    except LambdaMachinesError as exc:
        return Verdict(m.name, src, "error", str(exc))
    if nf is None:
        return Verdict(m.name, src, "mismatch", "oracle ran out of fuel", None, res.stats.beta)
    if m.name == "scam":
        same = convertible(res.value, nf, fuel)
    else:
        same = alpha_eq(res.value, nf)
    if not same:
        return Verdict(
            m.name, src, "mismatch", f"result {show(res.value)} vs {show(nf)}", beta, res.stats.beta
        )
    if m.name in LOCKSTEP and res.stats.beta != beta:
        return Verdict(
            m.name, src, "mismatch", f"beta {res.stats.beta} vs {beta}", beta, res.stats.beta
        )
    return Verdict(m.name, src, "agree", f"beta {res.stats.beta}={beta}", beta, res.stats.beta)


# ---------------------------------------------------------------------------
# audits


def additive_step_violations(order: A.Order | str, e: A.Expr) -> list[str]:
    """Check the step properties on every transition of a run.

    Overhead transitions keep the decoded expression, ``+`` performs exactly one
    strategy step, and every transition lowers the potential by one.
    """
    order = A.Order(order)
    res = core.run(A.machine_for(order), e, 10 * A.potential(e) + 10)
    bad = []
    for i, (before, rule, after) in enumerate(res.trace.transitions(), start=1):
        e0, e1 = A.recompose(before), A.recompose(after)
        if rule in A.OVERHEAD_RULES and e0 != e1:
            bad.append(f"step {i} ({rule}) changed {A.show(e0)} to {A.show(e1)}")
        if rule == "+" and A.step_strategy(order, e0) != e1:
            bad.append(f"step {i} (+) is not a strategy step from {A.show(e0)}")
        if A.potential(before) != 1 + A.potential(after):
            bad.append(f"step {i} ({rule}) potential {A.potential(before)} -> {A.potential(after)}")
    if res.stats.total != A.potential(e):
        bad.append(f"{res.stats.total} steps but potential {A.potential(e)}")
    return bad


def ghost_bisimulation_violations(t: Any, fuel: int = 1_000_000) -> list[str]:
    """Erase a ghost KN run and compare it with the KN run step by step."""
    ghost = core.run(ghost_kn.GHOST_KN, t, fuel, check=True)
    plain = core.run(kn.KN, t, fuel, check=True)
    erased = ghost_kn.erase_trace(ghost.trace)
    bad = []
    if erased.initial != plain.trace.initial:
        bad.append("initial configurations differ")
    if erased.rules() != plain.trace.rules():
        bad.append(f"rule sequences differ: {erased.rules()} vs {plain.trace.rules()}")
    else:
        for i, ((_, g), (_, k)) in enumerate(zip(erased.steps, plain.trace.steps), start=1):
            if g != k:
                bad.append(f"configuration {i} differs after erasure")
                break
    for rule, k in ghost.trace.steps:
        if ghost_kn.stack_kind(k.stack) is None:
            bad.append(f"stack after ({rule}) is outside the applicative/non-applicative grammar")
    return bad
