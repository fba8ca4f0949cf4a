"""Exception hierarchy.

Two branches matter for the CLI exit-code contract: ConfigError maps to
exit 2 (bad input / inadmissible configuration), NumericError maps to
exit 3 (computation broke down at runtime).
"""


class CanalError(Exception):
    """Base class for all package errors."""


class ConfigError(CanalError):
    """Invalid user input or inadmissible configuration (CLI exit 2)."""


class ExprSyntaxError(ConfigError):
    """Expression text failed to parse; carries the byte offset."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownFunctionError(ConfigError):
    """Function name not in the supported set."""


class UnknownExampleError(ConfigError):
    """Builtin example name not recognized."""


class NonUnitSpeedError(ConfigError):
    """Curve violates the |<b',b'>| = 1 requirement."""


class OutOfDomainError(ConfigError):
    """Parameter value (or its FD stencil) left the declared domain."""


class InadmissibleConfigError(ConfigError):
    """Family/curve/radius combination that cannot define a hypersurface."""


class VariantViolatedError(ConfigError):
    """r'(s)^2 - lambda*eps1 has the wrong sign for the declared variant."""


class NumericError(CanalError):
    """Numeric breakdown during evaluation (CLI exit 3)."""


class DomainError(NumericError):
    """Expression evaluation outside a function's domain (log<=0, sqrt<0, /0)."""


class NullVectorError(NumericError):
    """normalize() called on a null vector."""


class FrameDegenerateError(NumericError):
    """A curvature (k1 or k2) vanished; the moving frame does not exist."""


class NullResidualError(NumericError):
    """A Gram-Schmidt residual is null; no non-null frame of this kind."""


class DegenerateNodeError(NumericError):
    """Grid node where the induced metric degenerates (|A| < 1e-6)."""


class RankDeficientError(NumericError):
    """Surface partials are linearly dependent; no normal direction."""


class SingularMetricError(NumericError):
    """det g too small to invert the first fundamental form."""


class ComplexEigenvaluesError(NumericError):
    """Numeric shape operator returned a complex pair beyond tolerance."""


class PoleAtNodeError(NumericError):
    """Tubular curvature denominator 1 + r*k1*f vanished (focal point)."""


class NullConditionViolatedError(NumericError):
    """Null-cone coefficients failed sum(eps_i a_i^2) = 0."""


class DomainExitError(NumericError):
    """Minimal-radius integration hit a turning point (radicand -> 0)."""

    def __init__(self, message, turning_s):
        super().__init__(message)
        self.turning_s = turning_s


class EmptySliceError(ConfigError):
    """Export requested on an empty grid slice."""
