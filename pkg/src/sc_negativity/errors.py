"""Exception hierarchy shared by every module."""


class ScNegativityError(Exception):
    """Base class for all library errors."""


class ValidationFailed(ScNegativityError):
    """An input or intermediate result violates a state invariant."""


class DimensionMismatch(ValidationFailed):
    pass


class NotHermitian(ValidationFailed):
    pass


class TraceNotOne(ValidationFailed):
    pass


class NotPositive(ValidationFailed):
    def __init__(self, min_eigenvalue: float, tol: float):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            f"matrix is not positive semidefinite: minimum eigenvalue "
            f"{min_eigenvalue:.6g} < -{tol:.1g}"
        )


class NotUnitary(ValidationFailed):
    pass


class BadWeights(ValidationFailed):
    pass


class MixedDimensions(ValidationFailed):
    pass


class DegenerateSpectrum(ValidationFailed):
    pass


class DisjointnessViolated(ValidationFailed):
    def __init__(self, conflicts):
        self.conflicts = list(conflicts)
        shown = ", ".join(
            f"({m},{n}) in maps {a} and {b}" for a, b, m, n in self.conflicts[:10]
        )
        super().__init__(f"λ-maps share product-basis pairs: {shown}")


class NoConvergence(ScNegativityError):
    pass


class NumericalInconsistency(ScNegativityError):
    """Two routes to the same quantity disagree beyond tolerance."""


class ParseError(ScNegativityError):
    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
