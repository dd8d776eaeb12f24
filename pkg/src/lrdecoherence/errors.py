"""Exception types raised by the simulator."""

import math


class NonCompactAlgebraError(ValueError):
    """Structure constants with m*n <= 0 (non-compact algebra unsupported)."""


class CoordinateSingularityError(ArithmeticError):
    """The (a, b) chart hit the cot(a) pole of the auxiliary equations."""

    def __init__(self, t, a, b, sin_floor):
        self.t = float(t)
        self.a = float(a)
        self.b = float(b)
        self.sin_floor = sin_floor
        super().__init__(
            f"coordinate singularity at t={self.t:.17g}: |sin a|={abs(math.sin(self.a)):.3e}"
            f" < sin_floor={sin_floor:g} (a={self.a:.17g}, b={self.b:.17g})"
        )


class StepSizeError(RuntimeError):
    """Step-halving check on the auxiliary integration exceeded its tolerance."""


class DegenerateBranchError(ValueError):
    """Branch Hamiltonian with vanishing su(2) part: theta is undefined."""


class GridMismatchError(ValueError):
    """Two series that must share a time grid do not."""


class ScenarioError(ValueError):
    """Invalid scenario configuration; ``key`` names the offending entry."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
