"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all engine errors."""


class LoadError(EngineError):
    """A resource file failed to parse or validate.

    Carries the 1-based line number when the failure is tied to a line.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownTokenError(EngineError):
    """A token has no lexicon entry and the policy is `reject`."""

    def __init__(self, surface, index):
        self.surface = surface
        self.index = index
        super().__init__(f"unknown token {surface} at {index}")


class NoParseError(EngineError):
    """The forest has no root: the grammar licenses no complete parse."""

    def __init__(self, message="no-parse"):
        super().__init__(message)


class UnsatisfiableError(EngineError):
    """No interpretation satisfies the supplied constraints."""

    def __init__(self, message="constraints unsatisfiable"):
        super().__init__(message)


class OracleCapError(EngineError):
    """The exhaustive oracle refused to enumerate past its cap."""

    def __init__(self, message="oracle cap exceeded"):
        super().__init__(message)
