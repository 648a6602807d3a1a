"""Exception hierarchy shared by all pipeline stages.

Exit-code mapping used by the CLI: FormatError -> 2, NumericalError -> 3,
ContractViolation (and subclasses) -> 4.
"""


class QvlError(Exception):
    """Base class for all toolkit errors."""


class FormatError(QvlError):
    """Malformed or truncated file (bad magic, version, sizes)."""


class NumericalError(QvlError):
    """NaN/Inf blow-up or other numerical failure; carries context."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ContractViolation(QvlError):
    """Caller violated a documented precondition."""


class DomainError(ContractViolation):
    """Position outside the valid sampling domain."""


class SingularNodeError(QvlError):
    """Phase requested where the field value is exactly zero."""


class DegenerateDirectionError(QvlError):
    """Pseudo-vorticity magnitude below threshold; no usable tangent."""


class StageError(QvlError):
    """Pipeline failure with stage attribution."""

    def __init__(self, stage, entity, cause):
        super().__init__(f"stage '{stage}' failed on {entity}: {cause}")
        self.stage = stage
        self.entity = entity
        self.cause = cause
