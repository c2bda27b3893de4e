"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class LeadselError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(LeadselError, ValueError):
    """Malformed graph input or a structural precondition that does not hold."""


class GuardError(LeadselError, ValueError):
    """A combinatorial size guard was exceeded."""


class InvariantViolation(LeadselError, RuntimeError):
    """A protocol or harness invariant was broken."""


class NumericalError(LeadselError, ArithmeticError):
    """A factorization failed or an integration diverged."""
