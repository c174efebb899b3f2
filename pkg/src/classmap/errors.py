"""Exception hierarchy. The CLI maps ClassmapError to exit code 1."""


class ClassmapError(Exception):
    """Base class for all domain errors raised by this package."""


class InputError(ClassmapError):
    """A precondition on the inputs is violated (bad form, point off curve, ...)."""


class VerticalLineError(InputError):
    """The line through the given points is vertical; the triple contains infinity."""


class ToleranceError(ClassmapError):
    """A requested tolerance is unreachable; carries the best estimate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class IndependenceError(ClassmapError):
    """The regulator interval contains 0: linear independence not certified."""


class FactorizationError(ClassmapError):
    """A required integer factorization is unavailable within the budget."""
