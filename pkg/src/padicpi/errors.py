"""Exception types shared across modules."""


class NotInL2Error(ValueError):
    """``D^alpha h + h = delta`` has no square-integrable solution (alpha <= 1/2)."""

    def __init__(self, alpha: float):
        super().__init__(f"no L2 solution for alpha <= 1/2 (alpha={alpha})")
        self.alpha = alpha


class DiagonalDivergenceError(ArithmeticError):
    """Green function value at its own anchor requested with alpha <= 1."""


class UnboundedTailError(ValueError):
    """Spectral multiplier applied to a tail that reaches N -> -oo."""


class RangeError(ValueError):
    """Boundary condition cannot be met: target outside the range of B."""


class SingularEtaError(ValueError):
    """The matrix of eta on the defect space is not invertible."""
