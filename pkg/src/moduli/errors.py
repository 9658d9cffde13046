"""Exception types shared across the package."""


class ModuliError(Exception):
    pass


class ConductorMismatch(ModuliError):
    pass


class DivisionByZero(ModuliError, ZeroDivisionError):
    pass


class NotDivisible(ModuliError):
    pass


class NotReal(ModuliError):
    pass


class ZeroRadicand(ModuliError):
    pass


class SingularMatrix(ModuliError):
    pass


class DegenerateTriple(ModuliError):
    pass


class ZeroMap(ModuliError):
    pass


class FactoredFormRequired(ModuliError):
    pass


class RootsNotInField(ModuliError):
    """A required polynomial factor does not split over the working field."""

    def __init__(self, factor, message=None):
        self.factor = factor
        super().__init__(message or f"factor does not split in-field: {factor}")


class WeightMismatch(ModuliError):
    pass


class UnsupportedConfiguration(ModuliError):
    pass


class NotAGroup(ModuliError):
    pass


class UnclassifiedOrder(ModuliError):
    pass


class InfiniteAutomorphismGroup(ModuliError):
    pass


class DescentVerificationFailed(ModuliError):
    def __init__(self, coefficient, message=None):
        self.coefficient = coefficient
        super().__init__(message or f"descended coefficient not fixed: {coefficient}")


class DegenerateMu(ModuliError):
    pass


class DegenerateExponents(ModuliError):
    pass


class SupportSizeMismatch(ModuliError):
    pass


class PreconditionViolated(ModuliError):
    def __init__(self, clause, message=None):
        self.clause = clause
        super().__init__(message or f"precondition violated: {clause}")


class ParseError(ModuliError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = f" at line {line}, col {col}" if line is not None else ""
        super().__init__(f"{message}{where}")


class InvariantViolation(ModuliError):
    pass
