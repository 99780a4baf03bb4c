"""Reduction semantics, strategies and abstract machines for the lambda calculus.

The package is organised as

* :mod:`~lambdamachines.terms`: named and de Bruijn terms, substitution, parser.
* :mod:`~lambdamachines.additive`: additive expressions, their two machines,
  decoding, the step-counting potential and a normalizer by evaluation.
* :mod:`~lambdamachines.strategies`: cbn, lcbv, rcbv, normal order, full beta.
* :mod:`~lambdamachines.machines`: Krivine, CEK, SECD, KN, ghost KN, Useful MAM
  and SCAM as rule-labelled transition systems.
* :mod:`~lambdamachines.harness`: trace rendering, generators, benchmarks.
"""

from .core import Machine, RunResult, RunStats, Trace, run, step
from .errors import (
    FuelExhausted,
    InvariantViolation,
    LambdaMachinesError,
    NoRedex,
    NormalForm,
    OpenTermError,
    ParseError,
    StuckOpen,
    UnboundVariable,
    UnsupportedStyle,
)
from .terms import PRELUDE, App, Lam, Var, alpha_eq, parse, show

__version__ = "0.1.0"

__all__ = [
    "PRELUDE",
    "App",
    "FuelExhausted",
    "InvariantViolation",
    "Lam",
    "LambdaMachinesError",
    "Machine",
    "NoRedex",
    "NormalForm",
    "OpenTermError",
    "ParseError",
    "RunResult",
    "RunStats",
    "StuckOpen",
    "Trace",
    "UnboundVariable",
    "UnsupportedStyle",
    "Var",
    "alpha_eq",
    "parse",
    "run",
    "show",
    "step",
]
