"""Registry of every abstract machine, keyed by its command-line name."""

from __future__ import annotations

from typing import Any, Optional

from .. import core
from ..additive import ADD_L, ADD_R
from ..core import Machine, RunResult
from ..strategies import Strategy
from .cek import CEK
from .ghost_kn import GHOST_KN
from .kn import KN
from .krivine import KRIVINE
from .mam import MAM
from .scam import SCAM
from .secd import SECD

MACHINES: dict[str, Machine] = {
    m.name: m for m in (ADD_L, ADD_R, KRIVINE, CEK, SECD, KN, GHOST_KN, MAM, SCAM)
}

ADDITIVE = frozenset({"add-l", "add-r"})
LAMBDA = tuple(name for name in MACHINES if name not in ADDITIVE)

# the oracle strategy each lambda machine is checked against; SCAM reduces
# strongly under call by value, which has no oracle here, so its result is
# checked against the normal-order normal form up to convertibility
STRATEGY: dict[str, Strategy] = {
    "krivine": Strategy.CBN,
    "cek": Strategy.LCBV,
    "secd": Strategy.RCBV,
    "kn": Strategy.NO,
    "ghost-kn": Strategy.NO,
    "mam": Strategy.NO,
    "scam": Strategy.NO,
}

# machines whose beta firings match their strategy's reduction length one for one
LOCKSTEP = ("krivine", "cek", "secd", "kn", "ghost-kn", "mam")


def get(name: str) -> Machine:
    try:
        return MACHINES[name]
    except KeyError:
        raise ValueError(f"unknown machine {name!r}; choose from {', '.join(MACHINES)}") from None


def run(
    machine: str | Machine,
    source: Any,
    fuel: int = 10_000,
    *,
    trace: bool = True,
    audit: bool = True,
    check: bool = False,
) -> RunResult:
    m = get(machine) if isinstance(machine, str) else machine
    return core.run(m, source, fuel, trace=trace, audit=audit, check=check)


__all__ = [
    "ADDITIVE",
    "CEK",
    "GHOST_KN",
    "KN",
    "KRIVINE",
    "LAMBDA",
    "LOCKSTEP",
    "MACHINES",
    "MAM",
    "SCAM",
    "SECD",
    "STRATEGY",
    "get",
    "run",
]
