"""Exception hierarchy.

Every error carries an ``exit_code`` class used by the command-line front
end: 3 for geometric degeneracy, 4 for invalid input/domain, 5 for failed
formula validation.
"""


class IsophoteError(Exception):
    exit_code = 3


class SingularSpeed(IsophoteError):
    pass


class VanishingCurvature(IsophoteError):
    pass


class NotUnitSpeed(IsophoteError):
    exit_code = 4


class SingularPoint(IsophoteError):
    pass


class DegenerateNormalData(IsophoteError):
    pass


class NoConsistentAxis(IsophoteError):
    pass


class NotCertifiedIsophote(IsophoteError):
    pass


class NotAHelix(IsophoteError):
    pass


class TooFewSamples(IsophoteError):
    exit_code = 4


class RadiusSlopeTooLarge(IsophoteError):
    exit_code = 4


class DomainViolation(IsophoteError):
    exit_code = 4


class FormulaInconsistent(IsophoteError):
    exit_code = 5

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class SceneError(IsophoteError):
    exit_code = 2


class ParseError(SceneError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(loc + message)
        self.line = line
        self.column = column
        self.message = message


class UnknownCatalogId(SceneError):
    pass


class ParameterOutOfRange(SceneError):
    pass
