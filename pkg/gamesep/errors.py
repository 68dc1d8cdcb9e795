"""Exception hierarchy shared by the library and the command line."""


class GameSepError(Exception):
    """Base class for every error raised by gamesep."""

    exit_code = 3


class FormatError(GameSepError):
    exit_code = 2


class InvalidStructureError(GameSepError):
    exit_code = 2


class NodeCountMismatchError(InvalidStructureError):
    pass


class SizeGuardError(GameSepError):
    exit_code = 4


class NotSeparableError(GameSepError):
    pass


class NotPotentialError(GameSepError):
    pass


class MarkovPropertyError(GameSepError):
    pass


class LinearSolveError(GameSepError):
    pass


class InvariantViolationError(GameSepError):
    pass
