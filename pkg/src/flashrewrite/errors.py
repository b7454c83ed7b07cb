"""Exception types shared across the package."""


class FlashRewriteError(Exception):
    pass


class OverLevel(FlashRewriteError, ValueError):
    """A raise would push a cell past level q-1."""


class DimensionMismatch(FlashRewriteError, ValueError):
    pass


class NotAnEdge(FlashRewriteError, ValueError):
    """The requested transition is not an edge of the data graph."""


class LabelOutOfRange(FlashRewriteError, ValueError):
    pass


class GraphTooLarge(FlashRewriteError, ValueError):
    pass


class Exhausted(FlashRewriteError):
    """The code cannot realize the requested rewrite from the current state.

    Raised by ``update``; the harness treats it as the end of a run.
    """


class Unreachable(Exhausted):
    """No state above the current one decodes to the requested value."""


class SaturatedCell(FlashRewriteError, ValueError):
    pass


class NoFeasibleB(FlashRewriteError, ValueError):
    pass


class InfeasibleLayout(FlashRewriteError, ValueError):
    pass


class CorruptState(FlashRewriteError, ValueError):
    pass


class StateSpaceTooLarge(FlashRewriteError):
    pass


class SpecError(FlashRewriteError, ValueError):
    """A CLI spec string could not be parsed."""
