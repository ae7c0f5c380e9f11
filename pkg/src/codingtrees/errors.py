"""Exception types shared across the package."""


class CodingTreeError(Exception):
    """Base class for every error raised by this package."""


class ExprSyntaxError(CodingTreeError):
    def __init__(self, position: int, expected: str, text: str = ""):
        self.position = position
        self.expected = expected
        self.text = text
        super().__init__(f"at position {position}: expected {expected}")


class SyntaxShapeError(CodingTreeError):
    """Well-formed tokens combined in a way the order algebra does not license."""


class ArityError(CodingTreeError):
    pass


class LevelMisalignment(CodingTreeError):
    pass


class IsomorphicLeftChildren(CodingTreeError):
    pass


class NotLowerIsomorphic(CodingTreeError):
    pass


class InvalidTree(CodingTreeError):
    pass


class InvalidInput(CodingTreeError):
    pass


class NotAParent(CodingTreeError):
    pass


class LevelOutOfRange(CodingTreeError):
    pass


class DecodeError(CodingTreeError):
    pass


class InvalidPoint(CodingTreeError):
    pass


class EmptyInterval(CodingTreeError):
    pass


class InfiniteInterval(CodingTreeError):
    pass


class NotIsomorphic(CodingTreeError):
    pass


class LabelMismatch(CodingTreeError):
    pass


class NotStrictlyBelow(CodingTreeError):
    pass


class NotInGamma(CodingTreeError):
    pass


class SignatureMismatch(CodingTreeError):
    pass
