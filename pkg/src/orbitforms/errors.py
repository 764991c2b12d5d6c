"""Exception hierarchy shared across the package."""


class EngineError(Exception):
    """Base class for all orbitforms errors."""


class DimensionMismatch(EngineError):
    """Operands act on different numbers of orbit variables."""


class DomainError(EngineError):
    """Invalid value: zero denominator, singular point, bad parameter."""


class UnsupportedOrder(EngineError):
    """Operation restricted to differential operators of order <= 2."""


class UnsupportedModel(EngineError):
    """Requested operation has no meaning for this model family."""


class FlagViolation(EngineError):
    """An operator failed to preserve a flag space.

    Carries a reproducible witness: the input basis monomial and one
    offending monomial of the image lying outside the space.
    """

    def __init__(self, message, input_monomial, output_monomial):
        super().__init__(message)
        self.input_monomial = input_monomial
        self.output_monomial = output_monomial


class FormulaMismatch(EngineError):
    """A closed-form eigenvalue failed an exact root check.

    Carries the offending quantum multi-index.
    """

    def __init__(self, message, quantum_index=None):
        super().__init__(message)
        self.quantum_index = quantum_index


class InconsistencyError(EngineError):
    """Internal cross-check failed (empty kernel, numeric/exact mismatch)."""
