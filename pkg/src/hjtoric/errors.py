"""Exception hierarchy.

Every error carries the process exit code the CLI uses for it:
2 for bad input, 3 for a violated construction hypothesis, 4 for a
mathematical failure.
"""


class HJToricError(Exception):
    exit_code = 4


# -- input errors (exit 2) ---------------------------------------------------

class UsageError(HJToricError, ValueError):
    exit_code = 2


class InvalidFraction(UsageError):
    pass


class InvalidWeights(UsageError):
    pass


class MissingSymbol(UsageError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"no value assigned to symbol {self.name!r}"


class ParseError(UsageError):
    pass


class BadLocus(UsageError):
    pass


class UnknownLabel(UsageError):
    pass


class DimensionMismatch(UsageError):
    pass


class UnknownExample(UsageError):
    pass


# -- hypotheses of the constructions (exit 3) ---------------------------------

class HypothesisViolation(HJToricError):
    exit_code = 3

    def __init__(self, which, message=""):
        super().__init__(f"{which}: {message}" if message else which)
        self.which = which


class UnsupportedDegree(HJToricError):
    exit_code = 3

    def __init__(self, genus, degree, message=""):
        super().__init__(message or f"degree {degree} is not realizable in genus {genus}")
        self.genus = genus
        self.degree = degree


class Degenerate(HJToricError):
    exit_code = 3


# -- mathematical failures (exit 4) -------------------------------------------

class SingularMatrix(HJToricError, ZeroDivisionError):
    pass


class DegenerateCone(HJToricError):
    pass


class NotSmooth(HJToricError):
    pass


class NotComplete(HJToricError):
    pass


class NotMinusOne(HJToricError):
    pass


class LastCurve(HJToricError):
    pass
