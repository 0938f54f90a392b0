"""Exception types raised across the package."""


class PursuitError(ValueError):
    """Base class for invalid-input errors."""


class TooFewWaypoints(PursuitError):
    pass


class DuplicateConsecutivePoints(PursuitError):
    def __init__(self, index: int):
        super().__init__(f"waypoints {index} and its successor coincide")
        self.index = index


class LookaheadExceedsTrack(PursuitError):
    pass


class DegenerateGoal(PursuitError):
    pass


class NonpositiveLookahead(PursuitError):
    pass


class NonpositiveWheelbase(PursuitError):
    pass


class NonpositiveTimestep(PursuitError):
    pass


class ScheduleSizeMismatch(PursuitError):
    pass


class IndexOutOfRange(PursuitError, IndexError):
    pass


class BetaOutOfRange(PursuitError):
    pass


class NoCompletingBaseline(PursuitError):
    pass


class InvalidDimensions(PursuitError):
    pass


class ParseError(PursuitError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
