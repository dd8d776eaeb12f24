"""Time-dependent Hamiltonian coefficients omega(t), theta(t), phi(t)."""

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.interpolate import CubicSpline

from .algebra import Representation


class ScalarFunction:
    """A real function of time with an exact (or interpolant-exact) derivative.

    Subclasses implement ``value`` and ``derivative``; both accept scalars or
    arrays.
    """

    kind = "abstract"

    def value(self, t):
        raise NotImplementedError

    def derivative(self, t):
        raise NotImplementedError

    def __call__(self, t):
        return self.value(t)

    @property
    def is_constant(self) -> bool:
        return False


@dataclass(frozen=True)
class Constant(ScalarFunction):
    c: float
    kind = "constant"

    def value(self, t):
        return self.c + 0.0 * np.asarray(t, dtype=float)

    def derivative(self, t):
        return 0.0 * np.asarray(t, dtype=float)

    @property
    def is_constant(self) -> bool:
        return True


@dataclass(frozen=True)
class Linear(ScalarFunction):
    """c0 + c1 t"""

    c0: float
    c1: float
    kind = "linear"

    def value(self, t):
        return self.c0 + self.c1 * np.asarray(t, dtype=float)

    def derivative(self, t):
        return self.c1 + 0.0 * np.asarray(t, dtype=float)

    @property
    def is_constant(self) -> bool:
        return self.c1 == 0


@dataclass(frozen=True)
class Sinusoid(ScalarFunction):
    """c0 + c1 sin(c2 t + c3)"""

    c0: float
    c1: float
    c2: float
    c3: float = 0.0
    kind = "sinusoid"

    def value(self, t):
        return self.c0 + self.c1 * np.sin(self.c2 * np.asarray(t, dtype=float) + self.c3)

    def derivative(self, t):
        return self.c1 * self.c2 * np.cos(self.c2 * np.asarray(t, dtype=float) + self.c3)

    @property
    def is_constant(self) -> bool:
        return self.c1 == 0 or self.c2 == 0


@dataclass(frozen=True)
class Winding(ScalarFunction):
    """c1 t, an azimuth that winds at constant rate."""

    c1: float
    kind = "winding"

    def value(self, t):
        return self.c1 * np.asarray(t, dtype=float)

    def derivative(self, t):
        return self.c1 + 0.0 * np.asarray(t, dtype=float)

    @property
    def is_constant(self) -> bool:
        return self.c1 == 0


class Sampled(ScalarFunction):
    """Cubic-spline interpolant through (times, values)."""

    kind = "sampled"

    def __init__(self, times, values):
        self.times = np.asarray(times, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.times.ndim != 1 or self.times.shape != self.values.shape or self.times.size < 2:
            raise ValueError("sampled function needs matching 1-d times/values with >= 2 points")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("sampled times must be strictly increasing")
        self._spline = CubicSpline(self.times, self.values)
        self._dspline = self._spline.derivative()

    def value(self, t):
        return self._spline(np.asarray(t, dtype=float))

    def derivative(self, t):
        return self._dspline(np.asarray(t, dtype=float))

    def __repr__(self):
        return f"Sampled(n={self.times.size}, t=[{self.times[0]:g}, {self.times[-1]:g}])"


class Derived(ScalarFunction):
    """Wraps caller-supplied value/derivative callables (used for mapped protocols)."""

    kind = "derived"

    def __init__(self, value: Callable, derivative: Callable, constant: bool = False):
        self._value = value
        self._derivative = derivative
        self._constant = constant

    def value(self, t):
        return self._value(t)

    def derivative(self, t):
        return self._derivative(t)

    @property
    def is_constant(self) -> bool:
        return self._constant


class ProtocolValues(NamedTuple):
    omega: float
    theta: float
    phi: float
    dtheta_dt: float
    dphi_dt: float


def _as_function(f) -> ScalarFunction:
    if isinstance(f, ScalarFunction):
        return f
    return Constant(float(f))


@dataclass(frozen=True)
class Protocol:
    """Coefficient triple of H(t) on the window [0, T].

    Plain numbers passed for ``omega``, ``theta`` or ``phi`` are promoted to
    :class:`Constant`.
    """

    omega: ScalarFunction
    theta: ScalarFunction
    phi: ScalarFunction
    T: float
    label: str = "0"

    def __post_init__(self):
        object.__setattr__(self, "omega", _as_function(self.omega))
        object.__setattr__(self, "theta", _as_function(self.theta))
        object.__setattr__(self, "phi", _as_function(self.phi))
        if not self.T > 0:
            raise ValueError(f"time window T must be positive, got {self.T!r}")

    @property
    def is_constant(self) -> bool:
        return self.omega.is_constant and self.theta.is_constant and self.phi.is_constant

    def check_time(self, t):
        t = np.asarray(t, dtype=float)
        slack = 1e-12 * self.T
        if np.any(t < -slack) or np.any(t > self.T + slack):
            raise ValueError(f"t outside protocol window [0, {self.T:g}]")
        return t

    def max_omega(self, samples=1001) -> float:
        grid = np.linspace(0.0, self.T, samples)
        return float(np.max(np.abs(self.omega.value(grid))))


def evaluate(p: Protocol, t) -> ProtocolValues:
    """Coefficients and the theta/phi rates at ``t`` (scalar or array)."""
    t = p.check_time(t)
    return ProtocolValues(
        p.omega.value(t),
        p.theta.value(t),
        p.phi.value(t),
        p.theta.derivative(t),
        p.phi.derivative(t),
    )


def hamiltonian_from_values(rep: Representation, omega, theta, phi):
    half = 0.5 * np.sin(theta)
    h = omega * (
        half * np.exp(-1j * phi) * rep.A_plus
        + half * np.exp(1j * phi) * rep.A_minus
        + np.cos(theta) * rep.A_z
    )
    return h


def hamiltonian_matrix(p: Protocol, rep: Representation, t):
    """H(t) = omega [ (1/2) sin(theta) e^{-i phi} A+ + h.c. + cos(theta) A_z ]."""
    v = evaluate(p, t)
    return hamiltonian_from_values(rep, float(v.omega), float(v.theta), float(v.phi))
