"""Exception hierarchy shared by all modules."""


class LipfreeError(ValueError):
    """Base class for every structured error raised by the package."""


class ParseError(LipfreeError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class MetricError(LipfreeError):
    """Input matrix is not a metric."""


class NotSquare(MetricError):
    pass


class NotSymmetric(MetricError):
    def __init__(self, i, j):
        self.indices = (i, j)
        super().__init__(f"d[{i}][{j}] != d[{j}][{i}]")


class NonzeroDiagonal(MetricError):
    def __init__(self, i):
        self.indices = (i,)
        super().__init__(f"d[{i}][{i}] != 0")


class NegativeOrZeroOffDiagonal(MetricError):
    def __init__(self, i, j):
        self.indices = (i, j)
        super().__init__(f"d[{i}][{j}] <= 0 for distinct points")


class TriangleViolation(MetricError):
    def __init__(self, i, j, k):
        self.indices = (i, j, k)
        super().__init__(f"d[{i}][{j}] > d[{i}][{k}] + d[{k}][{j}]")


class TooFewPoints(LipfreeError):
    pass


class NotZeroHyperbolic(LipfreeError):
    def __init__(self, quadruple):
        self.quadruple = tuple(quadruple)
        super().__init__(f"four-point condition fails on {self.quadruple}")


class NotOnePointed(LipfreeError):
    """Extension domain does not contain the base point."""


class NormExceedsOne(LipfreeError):
    pass


class NoMissingBranchPoint(LipfreeError):
    pass


class SeparationZero(LipfreeError):
    """Some point lies on a geodesic between two others."""
