"""Exception hierarchy shared by all modules."""


class JointFoldError(Exception):
    """Base class for every error raised by the package."""


class FormatError(JointFoldError):
    pass


class MissingSpecies(FormatError):
    pass


class UnmatchedSpecies(JointFoldError):
    pass


class BoundsError(JointFoldError, IndexError):
    pass


class ConstraintError(JointFoldError):
    pass


class NotationError(JointFoldError):
    pass


class InvalidStructure(JointFoldError):
    pass


class ParamsError(JointFoldError):
    pass


class TooLarge(JointFoldError):
    pass


class NumericsError(JointFoldError, ArithmeticError):
    pass


class IoError(JointFoldError, OSError):
    pass
