class HPDegreesError(Exception):
    pass


class ParseError(HPDegreesError, ValueError):
    """Malformed integer or rational text."""


class NotLocalError(HPDegreesError, ValueError):
    """Value does not lie in Z_(p) for a prime that matters."""


class LevelMismatchError(HPDegreesError, ValueError):
    pass


class UnsoundModulusError(HPDegreesError, ValueError):
    """Modulus not divisible by every p^{modulus_val(m, p)} it must resolve."""


class NonIntegralError(HPDegreesError, ValueError):
    pass


class ScanGuardExceeded(HPDegreesError):
    def __init__(self, classes: int, guard: int):
        self.classes = classes
        self.guard = guard
        super().__init__(f"scan of {classes} residue classes exceeds guard {guard}")


class FormulaMismatch(HPDegreesError, AssertionError):
    """Two independent routes disagree. Always a bug, never an input error."""
