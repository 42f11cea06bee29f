"""Exception hierarchy shared by every module."""
from __future__ import annotations


class Perm2Error(Exception):
    """Base class for all library errors."""


class UnboundVariable(Perm2Error):
    pass


class ArityMismatch(Perm2Error):
    pass


class TypeMismatch(Perm2Error):
    def __init__(self, expected, found, where: str = ""):
        self.expected = expected
        self.found = found
        msg = f"expected {expected}, found {found}"
        if where:
            msg += f" in {where}"
        super().__init__(msg)


class UnknownConstant(Perm2Error):
    pass


class UnknownSort(Perm2Error):
    pass


class UnknownRule(Perm2Error):
    pass


class UnknownItem(Perm2Error):
    pass


class UnknownEquation(Perm2Error):
    pass


class IllTyped(Perm2Error):
    pass


class MiddleMismatch(Perm2Error):
    def __init__(self, expected, found):
        self.expected = expected
        self.found = found
        super().__init__(f"middle term mismatch: expected {expected}, found {found}")


class DuplicateVariable(Perm2Error):
    pass


class NonPatternLhs(Perm2Error):
    pass


class InvalidStep(Perm2Error):
    pass


class ParseError(Perm2Error):
    pass
