"""Exception types shared across the package."""


class UsageError(ValueError):
    """Invalid arguments or inputs supplied by the caller."""


class ParseError(UsageError):
    """An input file could not be parsed or failed validation."""


class NumericalFailure(RuntimeError):
    """A computation left its guaranteed numerical envelope.

    Raised for non-convergence, iteration-cap overruns, and outputs that
    fail their own re-verification. Never represents a mathematical
    finding about the input.
    """


class PropositionViolation(NumericalFailure):
    """Both the witness and the certificate search came up empty.

    Mathematically impossible (exactly one side of the alternative holds
    for every subspace), so this always indicates numerical breakdown in
    the approximate backend. The exact backend never raises it.
    """
