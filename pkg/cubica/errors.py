from typing import Optional


class CubicaError(Exception):
    """Base class for every error raised by cubica"""


class DimensionError(CubicaError, ValueError):
    """Arity or dimension mismatch"""


class IndexRangeError(CubicaError, IndexError):
    """Face or symmetry index out of range"""


class ContextMismatchError(CubicaError, ValueError):
    """Weil elements from different contexts were combined"""


class AffineViolationError(CubicaError, ValueError):
    """Affine coefficients do not sum to 1"""


class NeighbourError(CubicaError, ValueError):
    """Vertices of a simplex are not pairwise neighbours"""


class ShellAdjacencyError(CubicaError, RuntimeError):
    """Faces of a shell do not match up"""


class CompositionError(CubicaError, ValueError):
    """Cells or letters are not composable"""


class UnsupportedTargetError(CubicaError, TypeError):
    """Operation needs a different target groupoid"""


class UnsupportedFoldingError(CubicaError, TypeError):
    """No folding is implemented for this kind of shell"""


class ParseError(CubicaError, ValueError):
    """Input file could not be parsed"""

    def __init__(self, path: str, location: str, message: str, source: Optional[Exception] = None):
        self.path = path
        self.location = location
        self.message = message
        self.source = source
        super().__init__(f"{path}:{location}: {message}")
