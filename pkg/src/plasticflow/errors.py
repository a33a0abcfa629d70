"""Exception hierarchy shared by all plasticflow modules."""

from __future__ import annotations


class PlasticFlowError(Exception):
    """Base class for all library errors."""


class DomainError(PlasticFlowError):
    """A point (or an FD stencil around it) fell outside a field's domain."""


class ParamError(PlasticFlowError):
    """A solution-family parameter bundle violates its constraints."""


class MissingGradients(PlasticFlowError):
    """Analytic residual scheme requested but the field has no gradients."""


class ParseError(PlasticFlowError):
    """Expression text could not be parsed."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at offset {offset}"
        if expected:
            detail += " (expected " + ", ".join(expected) + ")"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class EvalError(PlasticFlowError):
    """Expression evaluation hit a real-arithmetic domain violation."""


class UnsupportedNode(PlasticFlowError):
    """Symbolic differentiation does not cover this node (dn); use FD."""


class SingularityError(PlasticFlowError):
    """Adaptive quadrature exceeded its recursion depth."""


class NoBracketError(PlasticFlowError):
    """Root finder was given endpoints that do not bracket a sign change."""


class NoRootError(PlasticFlowError):
    """No sign change found in the scanned branch window."""


class BranchJumpError(PlasticFlowError):
    """Branch continuation stepped further than the allowed angle."""


class EmptyDomainError(PlasticFlowError):
    """Rejection sampling found no in-domain point in the trial budget."""


class ScenarioError(PlasticFlowError):
    """Scenario file is malformed or violates the schema."""
