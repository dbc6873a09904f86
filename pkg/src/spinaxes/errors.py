"""Exception types shared across the package."""


class DomainError(ValueError):
    """Invalid quantum numbers, ranks, or parameter ranges."""


class ValidationError(ValueError):
    """Input data violates a structural invariant (hermiticity, trace, conjugation symmetry)."""


class DecompositionError(RuntimeError):
    """Numerical inconsistency while extracting axes or scale factors."""


class StateFileError(ValueError):
    """Unparseable or inconsistent state file.

    Carries the 1-based line number of the offending line when one is known.
    """

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
