"""
Error hierarchy shared by the algebra, knot and service layers.

Every error carries the process exit code the CLI reports for it.
"""
from typing import Optional


class DomainError(ValueError):
    """Invalid input or a request the mathematics does not allow"""

    exit_code = 1


class BraidParseError(DomainError):
    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (token {position})"
        super().__init__(message)


class InvalidBraidError(DomainError):
    pass


class PoleError(DomainError):
    def __init__(self, detail: str = ""):
        message = "pole at specialization"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class UndefinedDegreeError(DomainError):
    def __init__(self, detail: str = ""):
        message = "undefined degree"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class RingMismatchError(DomainError):
    pass


class LinkNotKnotError(DomainError):
    def __init__(self, components: Optional[int] = None):
        self.components = components
        if components is None:
            message = "link, not knot"
        else:
            message = f"link, not knot: closure has {components} components"
        super().__init__(message)


class TableIngestionError(DomainError):
    def __init__(self, line: int, gate: str, detail: str):
        self.line = line
        self.gate = gate
        super().__init__(f"line {line}: gate '{gate}' failed: {detail}")


class UnknownSuiteError(DomainError):
    pass


class ResourceCapExceeded(RuntimeError):
    """Refusal to compute past a configured limit; never a partial answer"""

    exit_code = 3


class InternalConsistencyError(RuntimeError):
    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(f"internal consistency: {detail}")


class VerificationFailed(RuntimeError):
    exit_code = 2
