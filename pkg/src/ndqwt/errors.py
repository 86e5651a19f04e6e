"""Exception types raised across the package."""


class NDQWTError(Exception):
    """Base class for all package errors."""


class ZeroQuaternion(NDQWTError, ValueError):
    """Phases were requested for a quaternion of zero modulus."""


class DimensionMismatch(NDQWTError, ValueError):
    pass


class InvalidLevels(NDQWTError, ValueError):
    pass


class InvalidShift(NDQWTError, ValueError):
    pass


class DegenerateLevel(NDQWTError, ValueError):
    """A detail level carries (numerically) zero energy, so its log is undefined."""

    def __init__(self, level, energy=0.0):
        self.level = level
        self.energy = energy
        super().__init__(f"detail level {level} has zero energy ({energy:.3g}); "
                         "log-spectrum undefined")


class InsufficientPoints(NDQWTError, ValueError):
    pass


class EmbeddingFailure(NDQWTError, RuntimeError):
    """Circulant embedding produced a negative eigenvalue."""


class SizeTooLarge(NDQWTError, ValueError):
    pass


class ParseError(NDQWTError, ValueError):
    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class UnsupportedFormat(NDQWTError, ValueError):
    pass
