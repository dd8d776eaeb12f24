"""
Auxiliary equations for the invariant parameters a(t), b(t).

Splitting the complex auxiliary equation into real and imaginary parts gives

    da/dt = -s omega sin(theta) sin(b - phi)
    db/dt = m omega cos(theta) - s omega cot(a) sin(theta) cos(b - phi)

with s = sqrt(mn/2). The second line has a pole at sin(a) = 0 where the
(a, b) chart degenerates; integration stops there instead of regularising.
"""

from dataclasses import dataclass, field
import math
from typing import NamedTuple

import numpy as np

from .algebra import SU2, AlgebraSpec
from .errors import CoordinateSingularityError, StepSizeError
from .protocol import Protocol, evaluate

SIN_FLOOR = 1e-6


class AuxiliaryState(NamedTuple):
    a: float
    b: float


@dataclass(frozen=True)
class AuxiliarySolution:
    """(a, b) sampled on a uniform grid over [0, T].

    ``db_dt`` is the azimuthal rate used by the geometric phase: the
    auxiliary right-hand side for integrated/stationary solutions, the
    protocol's d(phi)/dt for adiabatic ones.
    """

    times: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    db_dt: np.ndarray = field(repr=False)
    mode: str
    protocol_label: str
    spec: AlgebraSpec = SU2
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def step(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def T(self) -> float:
        return float(self.times[-1])

    def state(self, k) -> AuxiliaryState:
        return AuxiliaryState(float(self.a[k]), float(self.b[k]))


def time_grid(T, step):
    """Uniform grid on [0, T] whose spacing is the largest value <= ``step`` dividing T."""
    if not step > 0:
        raise ValueError(f"step must be positive, got {step!r}")
    n = max(1, math.ceil(T / step - 1e-9))
    return np.linspace(0.0, T, n + 1)


def default_step(p: Protocol) -> float:
    return min(1e-2, 1.0 / (50.0 * max(p.max_omega(), 1e-300)))


def auxiliary_rhs(s: AuxiliaryState, values, spec: AlgebraSpec = SU2, sin_floor=SIN_FLOOR, t=float("nan")):
    """(da/dt, db/dt) at state ``s`` for coefficients ``values = (omega, theta, phi)``."""
    a, b = s
    omega, theta, phi = values[0], values[1], values[2]
    scale = spec.scale
    # the imaginary-part rate and the separately stated real equation share this coefficient
    assert math.isclose(spec.n * spec.y / 2.0, scale, rel_tol=1e-14)
    sin_a = math.sin(a)
    if abs(sin_a) < sin_floor:
        raise CoordinateSingularityError(t, a, b, sin_floor)
    d = b - phi
    st = math.sin(theta)
    da = -scale * omega * st * math.sin(d)
    db = spec.m * omega * math.cos(theta) - scale * omega * (math.cos(a) / sin_a) * st * math.cos(d)
    return da, db


def complex_form_residual(s: AuxiliaryState, rates, values, spec: AlgebraSpec = SU2) -> complex:
    """Left-hand side of the complex auxiliary equation; zero for consistent rates.

    y e^{-ib}(a' cos a - i b' sin a) - i m omega [e^{-i phi} cos a sin theta - y e^{-ib} sin a cos theta]
    """
    a, b = s
    da, db = rates
    omega, theta, phi = values[0], values[1], values[2]
    y = spec.y
    eb = complex(math.cos(b), -math.sin(b))
    ep = complex(math.cos(phi), -math.sin(phi))
    return (
        y * eb * (da * math.cos(a) - 1j * db * math.sin(a))
        - 1j * spec.m * omega * (ep * math.cos(a) * math.sin(theta) - y * eb * math.sin(a) * math.cos(theta))
    )


def _rk4(times, a0, b0, vals_at, vals_mid, spec, sin_floor):
    n = times.size
    a = np.empty(n)
    b = np.empty(n)
    a[0], b[0] = a0, b0
    om, th, ph = vals_at
    omm, thm, phm = vals_mid
    for k in range(n - 1):
        h = times[k + 1] - times[k]
        t = times[k]
        y0 = (a[k], b[k])
        v0 = (om[k], th[k], ph[k])
        vm = (omm[k], thm[k], phm[k])
        v1 = (om[k + 1], th[k + 1], ph[k + 1])
        k1 = auxiliary_rhs(y0, v0, spec, sin_floor, t)
        k2 = auxiliary_rhs((y0[0] + 0.5 * h * k1[0], y0[1] + 0.5 * h * k1[1]), vm, spec, sin_floor, t + 0.5 * h)
        k3 = auxiliary_rhs((y0[0] + 0.5 * h * k2[0], y0[1] + 0.5 * h * k2[1]), vm, spec, sin_floor, t + 0.5 * h)
        k4 = auxiliary_rhs((y0[0] + h * k3[0], y0[1] + h * k3[1]), v1, spec, sin_floor, t + h)
        a[k + 1] = y0[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        b[k + 1] = y0[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        s0, s1 = math.sin(a[k]), math.sin(a[k + 1])
        if abs(s1) < sin_floor:
            raise CoordinateSingularityError(times[k + 1], a[k + 1], b[k + 1], sin_floor)
        if s0 * s1 < 0:
            # stepped across a pole without landing near it
            frac = s0 / (s0 - s1)
            raise CoordinateSingularityError(t + frac * h, a[k] + frac * (a[k + 1] - a[k]), b[k + 1], sin_floor)
    return a, b


def _integrate(p, init, times, spec, sin_floor):
    v = evaluate(p, times)
    mid = times[:-1] + 0.5 * np.diff(times)
    vm = evaluate(p, mid)
    a, b = _rk4(times, init.a, init.b, (v.omega, v.theta, v.phi), (vm.omega, vm.theta, vm.phi), spec, sin_floor)
    return a, b, v


def default_initial_state(p: Protocol) -> AuxiliaryState:
    """(theta(0), phi(0)): the t=0 invariant is aligned with H(0) in the su(2) case."""
    v = evaluate(p, 0.0)
    return AuxiliaryState(float(v.theta), float(v.phi))


def solve_auxiliary(
    p: Protocol,
    init: AuxiliaryState | None = None,
    T: float | None = None,
    step: float | None = None,
    spec: AlgebraSpec = SU2,
    sin_floor: float = SIN_FLOOR,
    halving_tol: float | None = None,
) -> AuxiliarySolution:
    """Fixed-step classical RK4 integration of the auxiliary equations.

    Parameters
    ----------
    p : Protocol
    init : AuxiliaryState, optional
        Defaults to ``(theta(0), phi(0))``; the choice is recorded in
        ``metadata["init_convention"]``.
    T, step : float, optional
        Window length (default ``p.T``) and step (default
        ``min(1e-2, 1/(50 max|omega|))``).
    halving_tol : float, optional
        If given, the run is repeated at half the step and the largest
        difference in (a, b) on the shared grid must not exceed this.

    Raises
    ------
    CoordinateSingularityError
        If |sin a| drops below ``sin_floor``.
    StepSizeError
        If the halving check fails.
    """
    T = p.T if T is None else T
    step = default_step(p) if step is None else step
    convention = "user"
    if init is None:
        init = default_initial_state(p)
        convention = "default (theta(0), phi(0))"
    init = AuxiliaryState(float(init.a), float(init.b))
    if abs(math.sin(init.a)) < sin_floor:
        raise CoordinateSingularityError(0.0, init.a, init.b, sin_floor)
    times = time_grid(T, step)
    a, b, v = _integrate(p, init, times, spec, sin_floor)
    db = np.array(
        [auxiliary_rhs((a[k], b[k]), (v.omega[k], v.theta[k], v.phi[k]), spec, sin_floor, times[k])[1] for k in range(times.size)]
    )
    meta = {"init_convention": convention, "init": (init.a, init.b)}
    if halving_tol is not None:
        fine = np.linspace(0.0, T, 2 * (times.size - 1) + 1)
        af, bf, _ = _integrate(p, init, fine, spec, sin_floor)
        diff = max(np.max(np.abs(af[::2] - a)), np.max(np.abs(bf[::2] - b)))
        meta["halving_difference"] = float(diff)
        if diff > halving_tol:
            raise StepSizeError(
                f"step-halving difference {diff:.3e} exceeds tolerance {halving_tol:g} at step {times[1]:g}"
            )
    return AuxiliarySolution(times, a, b, db, "integrated", str(p.label), spec, meta)


def adiabatic_solution(p: Protocol, T=None, step=None, spec: AlgebraSpec = SU2) -> AuxiliarySolution:
    """The locked solution a = theta, b = phi.

    This is the large-omega limit of the auxiliary equations when n = 2m
    (the su(2) normalisation); for other (m, n) it is returned as stated but
    is not that limit.
    """
    T = p.T if T is None else T
    step = default_step(p) if step is None else step
    times = time_grid(T, step)
    v = evaluate(p, times)
    return AuxiliarySolution(
        times,
        np.array(v.theta, dtype=float),
        np.array(v.phi, dtype=float),
        np.array(v.dphi_dt, dtype=float),
        "adiabatic",
        str(p.label),
        spec,
        {"init_convention": "locked to (theta, phi)"},
    )


def stationary_point(values, spec: AlgebraSpec = SU2) -> AuxiliaryState:
    """Fixed point of the auxiliary equations for frozen coefficients.

    b = phi and tan(a) = s sin(theta) / (m cos(theta)); for su(2) this is
    a = theta.
    """
    theta, phi = values[1], values[2]
    a = math.atan2(spec.scale * math.sin(theta), spec.m * math.cos(theta))
    return AuxiliaryState(a, float(phi))


def stationary_solution(p: Protocol, T=None, step=None, spec: AlgebraSpec = SU2, sin_floor=SIN_FLOOR) -> AuxiliarySolution:
    """Constant (a, b) at the fixed point of a constant protocol."""
    if not p.is_constant:
        raise ValueError("stationary solution requires a constant protocol")
    T = p.T if T is None else T
    step = default_step(p) if step is None else step
    times = time_grid(T, step)
    v = evaluate(p, 0.0)
    s = stationary_point(v, spec)
    if abs(math.sin(s.a)) < sin_floor:
        raise CoordinateSingularityError(0.0, s.a, s.b, sin_floor)
    rate = auxiliary_rhs(s, v, spec, sin_floor, 0.0)[1]
    n = times.size
    return AuxiliarySolution(
        times, np.full(n, s.a), np.full(n, s.b), np.full(n, rate), "stationary", str(p.label), spec,
        {"init_convention": "stationary point"},
    )


def ode_residual(sol: AuxiliarySolution, p: Protocol, sin_floor=SIN_FLOOR) -> float:
    """Max centred-difference mismatch of (a, b) against the right-hand side at interior points."""
    t = sol.times
    h = t[2:] - t[:-2]
    da_fd = (sol.a[2:] - sol.a[:-2]) / h
    db_fd = (sol.b[2:] - sol.b[:-2]) / h
    v = evaluate(p, t[1:-1])
    worst = 0.0
    for k in range(t.size - 2):
        da, db = auxiliary_rhs((sol.a[k + 1], sol.b[k + 1]), (v.omega[k], v.theta[k], v.phi[k]), sol.spec, sin_floor, t[k + 1])
        worst = max(worst, abs(da - da_fd[k]), abs(db - db_fd[k]))
    return worst
