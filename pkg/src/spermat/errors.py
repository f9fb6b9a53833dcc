"""Exception hierarchy. Every index carried by an error is 1-based."""

from __future__ import annotations


class SpermatError(ValueError):
    """Base class for all library errors."""


class _Located:
    """Mixin for violations tied to one row, column, or block."""

    where = "index"

    def __init__(self, index, detail: str = ""):
        self.index = index
        if isinstance(index, tuple):
            loc = "(" + ",".join(str(i) for i in index) + ")"
        else:
            loc = str(index)
        msg = f"{type(self).__name__} at {self.where} {loc}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ParseError(SpermatError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message += f" (line {line}" + (f", position {column})" if column is not None else ")")
        super().__init__(message)


class DimensionNotSquareOfSquare(SpermatError):
    pass


class SizeMismatch(SpermatError):
    pass


class InvalidBinaryMatrix(SpermatError):
    pass


class InvalidPermutation(SpermatError):
    pass


class SPermutationViolation(_Located, SpermatError):
    pass


class RowViolation(SPermutationViolation):
    where = "row"


class ColumnViolation(SPermutationViolation):
    where = "column"


class BlockViolation(SPermutationViolation):
    where = "block"


class InvalidPiMatrix(SpermatError):
    pass


class RowFirstComponentNotPermutation(_Located, InvalidPiMatrix):
    where = "row"


class ColumnSecondComponentNotPermutation(_Located, InvalidPiMatrix):
    where = "column"


class InvalidSudoku(SpermatError):
    pass


class FamilySizeWrong(SpermatError):
    pass


class FamilyNotPairwiseDisjoint(SpermatError):
    def __init__(self, first: int, second: int):
        self.pair = (first, second)
        super().__init__(f"family members {first} and {second} are not disjoint")


class CellUncovered(SpermatError):
    pass


class InfeasibleSize(SpermatError):
    pass


class IncompleteTable(SpermatError):
    pass


class UndefinedForN1(SpermatError):
    def __init__(self, what: str = "p(n)"):
        super().__init__(f"{what} is undefined for n=1: there is no second matrix to compare with")


class ConsistencyError(RuntimeError):
    """An arithmetic identity that must always hold was violated."""
