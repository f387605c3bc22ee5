"""Exception hierarchy.

Domain errors (``DomainError`` subclasses) are the ones the CLI maps to exit
code 1; everything else is a bug or a usage error.
"""


class DomainError(Exception):
    """Base class for errors caused by the input data rather than the code."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class TensorError(DomainError, ValueError):
    pass


class SpaceMismatch(TensorError):
    pass


class FlagMismatch(TensorError):
    pass


class ShapeMismatch(TensorError):
    pass


class LayoutError(DomainError, ValueError):
    pass


class EmptySenseList(DomainError, ValueError):
    pass


class NegativeProbability(DomainError, ValueError):
    pass


class NotNormalized(DomainError, ValueError):
    pass


class NonSymmetric(DomainError, ValueError):
    pass


class ZeroTrace(DomainError, ValueError):
    pass


class NotPSD(DomainError, ValueError):
    pass


class PregroupSyntaxError(DomainError, ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class NotReducible(DomainError):
    pass


class AssignmentGap(DomainError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ParseError(DomainError, ValueError):
    pass


class ValidationError(DomainError, ValueError):
    def __init__(self, findings):
        self.findings = list(findings)
        super().__init__("; ".join(str(f) for f in self.findings))
