"""
Error types raised by frobtrace.

Every error names the hypothesis it violates so the CLI can print a useful
diagnostic before exiting with the usage-error code.
"""


class FrobTraceError(ValueError):
    """Base error; `hypothesis` is a short human-readable statement of the violated precondition."""

    def __init__(self, message: str, hypothesis: str = ""):
        super().__init__(message)
        self.hypothesis = hypothesis or message


# Field construction and arithmetic

class NotPrime(FrobTraceError):
    pass


class TooLarge(FrobTraceError):
    pass


class NoIrreducible(FrobTraceError):
    pass


class NotPrimitive(FrobTraceError):
    pass


class ContextMismatch(FrobTraceError):
    pass


class DivisionByZero(FrobTraceError, ZeroDivisionError):
    pass


class LogOfZero(FrobTraceError):
    pass


# Identity checks

class ZeroArgument(FrobTraceError):
    pass


class BadModulus(FrobTraceError):
    pass


class BadArgument(FrobTraceError):
    pass


# Trace formulas

class BadFieldCongruence(FrobTraceError):
    pass


class SingularCurve(FrobTraceError):
    pass


class JInvariantExcluded(FrobTraceError):
    pass


class JInvariantZero(JInvariantExcluded):
    pass


class JInvariant1728(JInvariantExcluded):
    pass


class RoundingFailure(FrobTraceError):
    pass


class NotAPerfectSquare(FrobTraceError):
    pass


class HasseBoundViolation(FrobTraceError):
    pass


# Configuration

class ConfigError(FrobTraceError):
    pass
