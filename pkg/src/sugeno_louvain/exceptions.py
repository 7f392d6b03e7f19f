"""Exception hierarchy for the package."""


class SugenoLouvainError(Exception):
    """Base class for every error raised by this package."""


class ZeroArea(SugenoLouvainError, ValueError):
    """Raised when defuzzifying a point-shaped trapezoid (a == b == c == d)."""


class NonPositiveDensity(SugenoLouvainError, ValueError):
    pass


class RootNotFound(SugenoLouvainError, RuntimeError):
    pass


class GroundSetTooLarge(SugenoLouvainError, ValueError):
    """Exact Shapley values requested on more players than the enumeration cap."""


class DimensionMismatch(SugenoLouvainError, ValueError):
    pass


class GammaOutOfRange(SugenoLouvainError, ValueError):
    pass


class EmptyGraph(SugenoLouvainError, ValueError):
    pass


class NodeSetMismatch(SugenoLouvainError, ValueError):
    pass


class UnknownModel(SugenoLouvainError, ValueError):
    pass


class ParseError(SugenoLouvainError, ValueError):
    """Malformed input file. ``lineno`` is 1-based when known."""

    def __init__(self, message, path=None, lineno=None):
        self.path = path
        self.lineno = lineno
        where = ""
        if path is not None:
            where = f"{path}"
            if lineno is not None:
                where += f":{lineno}"
            where += ": "
        super().__init__(where + message)


class ConfigError(SugenoLouvainError, ValueError):
    pass
