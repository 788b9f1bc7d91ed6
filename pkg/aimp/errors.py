"""
Exception hierarchy and non-fatal diagnostics shared by every pipeline stage.
"""
from typing import Optional, Sequence, Tuple

from pydantic import BaseModel


class Diagnostic(BaseModel):
    """A recorded, non-fatal problem (unbound address, unresolved pronoun, ...)."""

    stage: str
    code: str
    message: str
    fragment: Optional[str] = None


class AimpError(Exception):
    """Base class for all compiler errors."""


class ConfigError(AimpError):
    pass


class TypeCheckError(AimpError):
    def __init__(self, location: Sequence[str], expected: str, found: str):
        self.location: Tuple[str, ...] = tuple(location)
        self.expected = expected
        self.found = found
        where = ".".join(self.location) or "<root>"
        super().__init__(f"type error at {where}: expected {expected}, found {found}")


class EvalError(AimpError):
    pass


class ParseError(AimpError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"{line}:{column}: {message}")


class FormatError(AimpError):
    def __init__(self, line: Optional[int], message: str):
        self.line = line
        self.message = message
        super().__init__(message if line is None else f"line {line}: {message}")


class UnsupportedSentence(AimpError):
    """The built-in parser has no rule for this sentence shape."""

    def __init__(self, span: Sequence[str], message: str):
        self.span: Tuple[str, ...] = tuple(span)
        self.message = message
        super().__init__(f"{message}: {' '.join(self.span)!r}")


class NoVerbFound(AimpError):
    pass


class MissingArgument(AimpError):
    def __init__(self, role: str, verb: str):
        self.role = role
        self.verb = verb
        super().__init__(f"verb {verb!r} has no {role.lower()}-like dependent")


class InvalidSignature(AimpError):
    pass


class UnknownVerb(AimpError):
    pass


class DimensionMismatch(AimpError):
    pass


class ZeroVector(AimpError):
    pass


class InconsistentInputs(AimpError):
    pass


class CompileError(AimpError):
    """A stage failed while compiling one fragment; the partial trace rides along."""

    def __init__(self, message: str, fragment: Optional[str] = None, trace=None):
        self.message = message
        self.fragment = fragment
        self.trace = trace
        if fragment:
            super().__init__(f"{message} (in fragment {fragment!r})")
        else:
            super().__init__(message)
