"""Exception types shared across the package."""

from __future__ import annotations


class FejerQuadError(Exception):
    """Base class for every error raised by this package."""


class ExpressionSyntaxError(FejerQuadError):
    """Malformed expression source text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownIdentifierError(FejerQuadError):
    """Identifier that is neither the variable `x` nor a known function."""

    def __init__(self, name: str, position: int):
        super().__init__(f"unknown identifier '{name}' (at position {position})")
        self.name = name
        self.position = position


class DomainError(FejerQuadError):
    """Evaluation left the real domain (log of nonpositive, sqrt of negative, ...)."""

    def __init__(self, source: str, value: float, reason: str):
        super().__init__(f"{reason} in '{source}' at value {value!r}")
        self.source = source
        self.value = value
        self.reason = reason


class IntegrationDepthError(FejerQuadError):
    """Adaptive integration ran out of subdivision depth."""

    def __init__(self, lo: float, hi: float, local_error: float):
        super().__init__(
            f"subdivision depth exhausted on [{lo!r}, {hi!r}] "
            f"(local error estimate {local_error:.3e})"
        )
        self.lo = lo
        self.hi = hi
        self.local_error = local_error


class KernelValidationError(FejerQuadError):
    """Kernel fails the nonnegativity / not-identically-zero requirements."""


class NonIntegrableKernelError(FejerQuadError):
    """Kernel whose cumulative integral diverges (power exponent <= -1)."""


class SymmetryViolationError(FejerQuadError):
    """Weight declared or required symmetric about the midpoint but is not."""


class NonnegativityError(FejerQuadError):
    """Function required nonnegative takes negative values on the check grid."""


class ConjugateExponentError(FejerQuadError):
    """Exponent pair (p, q) with p > 1 and 1/p + 1/q = 1 expected."""


class NonDensityError(FejerQuadError):
    """Weight does not integrate to one within the density tolerance."""


class ParameterError(FejerQuadError, ValueError):
    """Scalar parameter outside its admissible range."""


class PartitionSpanError(FejerQuadError):
    """Partition endpoints do not match the problem interval."""
