"""
Exception hierarchy for zetabounds.

Every error carries the name of the module that raised it so the CLI can
report it as ``<module>.<ErrorName>``.
"""

from typing import Optional


class ZetaBoundsError(Exception):
    """Base class for every error raised by the library."""

    module = "core"

    def __init__(self, message: str, module: Optional[str] = None):
        super().__init__(message)
        if module is not None:
            self.module = module

    @property
    def qualified_name(self) -> str:
        return f"{self.module}.{type(self).__name__}"


class DomainError(ZetaBoundsError, ValueError):
    """An input lies outside the region where a formula or lemma applies."""


# core

class SignatureMismatch(ZetaBoundsError, ValueError):
    module = "core"


class NegativeDiscriminant(ZetaBoundsError, ValueError):
    module = "core"


class ParseError(ZetaBoundsError, ValueError):
    module = "core"

    def __init__(self, message: str, line: Optional[int] = None, module: Optional[str] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, module)
        self.line = line


# specfun

class PoleError(ZetaBoundsError, ZeroDivisionError):
    module = "specfun"


class PrecisionError(ZetaBoundsError, ArithmeticError):
    module = "specfun"


# measures

class NoSolution(ZetaBoundsError):
    module = "measures"


class MultipleSolutions(ZetaBoundsError):
    module = "measures"


class DegenerateDenominator(ZetaBoundsError, ZeroDivisionError):
    module = "measures"


class MalformedMeasure(ZetaBoundsError, ValueError):
    module = "measures"


# riemann

class UnsupportedField(ZetaBoundsError):
    module = "riemann"


class InsufficientTable(ZetaBoundsError):
    module = "riemann"


class RangeError(ZetaBoundsError, ValueError):
    module = "riemann"


# zerodata

class OrderError(ZetaBoundsError, ValueError):
    module = "zerodata"

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MetaError(ZetaBoundsError, ValueError):
    module = "zerodata"


class CoverageError(ZetaBoundsError):
    module = "zerodata"
