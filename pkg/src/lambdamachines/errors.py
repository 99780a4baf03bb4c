"""Exception types shared across the package."""

from __future__ import annotations


class LambdaMachinesError(Exception):
    """Base class for every error raised by this package."""


class ParseError(LambdaMachinesError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class OpenTermError(LambdaMachinesError):
    """A closed term was required but free variables were found."""

    def __init__(self, free_vars):
        self.free_vars = sorted(free_vars)
        super().__init__("term has free variables: " + ", ".join(self.free_vars))


class NoRedex(LambdaMachinesError):
    """The contraction does not apply to the given expression."""


class NormalForm(LambdaMachinesError):
    """Raised when stepping an expression that is already a normal form."""


class FuelExhausted(LambdaMachinesError):
    """The step budget ran out before a final configuration/term was reached.

    ``last`` holds the last configuration (or term) for inspection; ``trace`` and
    ``stats`` are filled in by the machine runner.
    """

    def __init__(self, fuel: int, last=None, steps: int | None = None, trace=None, stats=None):
        super().__init__(f"fuel exhausted after {fuel} steps")
        self.fuel = fuel
        self.last = last
        self.steps = fuel if steps is None else steps
        self.trace = trace
        self.stats = stats


class StuckOpen(LambdaMachinesError):
    """A de Bruijn lookup ran past the environment (the input was open)."""


class UnboundVariable(LambdaMachinesError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable {name!r}")
        self.name = name


class MalformedCrumble(LambdaMachinesError):
    pass


class InvariantViolation(LambdaMachinesError):
    """A machine reached a configuration that breaks one of its invariants.

    Always a bug; ``config`` is the offending configuration.
    """

    def __init__(self, message: str, config=None):
        super().__init__(message)
        self.config = config


class UnsupportedStyle(LambdaMachinesError):
    pass
