"""
Invariant I(t), the unitary V(t) that maps it to A, and the phases of the
exact particular solutions

    |Psi(t)> = exp(-i varphi(t)) V(t) |lambda>,   varphi = varphi_d + varphi_g.

Time derivatives of I and V are taken by centred finite differences on the
solution grid so the residual checks stay independent of the construction.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.integrate import cumulative_simpson

from .algebra import AlgebraSpec, Representation, commutator, expm_skew
from .auxiliary import AuxiliarySolution, AuxiliaryState
from .oracle import Trajectory
from .protocol import Protocol, evaluate, hamiltonian_from_values


def displacement_parameter(s: AuxiliaryState, spec: AlgebraSpec) -> complex:
    """beta = -(a/2) x exp(-i b)."""
    a, b = s
    return -0.5 * a * spec.x * complex(math.cos(b), -math.sin(b))


def build_invariant(rep: Representation, s: AuxiliaryState) -> np.ndarray:
    """I = y [(1/2) sin a e^{-ib} A+ + (1/2) sin a e^{ib} A-] + cos a A_z."""
    a, b = s
    c = 0.5 * rep.spec.y * math.sin(a)
    return (
        c * complex(math.cos(b), -math.sin(b)) * rep.A_plus
        + c * complex(math.cos(b), math.sin(b)) * rep.A_minus
        + math.cos(a) * rep.A_z
    )


def build_displacement(rep: Representation, s: AuxiliaryState) -> np.ndarray:
    """V = exp(beta A+ - beta* A-)."""
    beta = displacement_parameter(s, rep.spec)
    return expm_skew(beta * rep.A_plus - beta.conjugate() * rep.A_minus)


def invariant_residual(rep: Representation, p: Protocol, sol: AuxiliarySolution) -> float:
    """max_k || dI/dt + (1/i)[I, H] ||_max over interior grid points.

    dI/dt uses the second-order centred difference, so for a valid
    solution the result decays as step**2.
    """
    t = sol.times
    v = evaluate(p, t)
    inv = [build_invariant(rep, sol.state(k)) for k in range(t.size)]
    worst = 0.0
    for k in range(1, t.size - 1):
        d_inv = (inv[k + 1] - inv[k - 1]) / (t[k + 1] - t[k - 1])
        h = hamiltonian_from_values(rep, v.omega[k], v.theta[k], v.phi[k])
        r = d_inv - 1j * commutator(inv[k], h)
        worst = max(worst, float(np.max(np.abs(r))))
    return worst


def transformed_hamiltonian_coefficient(values, s: AuxiliaryState, db_dt: float, spec: AlgebraSpec) -> float:
    """h(t) with H_V = h(t) A:

    omega [cos a cos theta + (s/m) sin a sin theta cos(b - phi)] + (b'/m)(1 - cos a)
    """
    return dynamical_rate(values, s, spec) + geometric_rate(s, db_dt, spec)


def dynamical_rate(values, s: AuxiliaryState, spec: AlgebraSpec):
    omega, theta, phi = values[0], values[1], values[2]
    a, b = s
    return omega * (
        np.cos(a) * np.cos(theta) + spec.scale / spec.m * np.sin(a) * np.sin(theta) * np.cos(b - phi)
    )


def geometric_rate(s: AuxiliaryState, db_dt, spec: AlgebraSpec):
    return db_dt / spec.m * (1.0 - np.cos(s[0]))


def transformed_hamiltonian_matrix(rep: Representation, p: Protocol, sol: AuxiliarySolution, k: int) -> np.ndarray:
    """Full H_V = V^dag H V - V^dag i dV/dt at interior grid index ``k``."""
    if not 0 < k < sol.times.size - 1:
        raise IndexError("transformed Hamiltonian needs an interior grid index")
    t = sol.times
    v_prev = build_displacement(rep, sol.state(k - 1))
    v_here = build_displacement(rep, sol.state(k))
    v_next = build_displacement(rep, sol.state(k + 1))
    dv = (v_next - v_prev) / (t[k + 1] - t[k - 1])
    vals = evaluate(p, t[k])
    h = hamiltonian_from_values(rep, float(vals.omega), float(vals.theta), float(vals.phi))
    vd = v_here.conj().T
    return vd @ h @ v_here - 1j * (vd @ dv)


@dataclass(frozen=True)
class PhaseDecomposition:
    """Cumulative dynamical and geometric phases for eigenvalue ``lam``.

    The state carries ``exp(-i phi_total)``.
    """

    lam: float
    times: np.ndarray = field(repr=False)
    phi_d: np.ndarray = field(repr=False)
    phi_g: np.ndarray = field(repr=False)

    @property
    def phi_total(self) -> np.ndarray:
        return self.phi_d + self.phi_g


def _cumulative(y, x):
    if x.size < 3:
        return np.concatenate([[0.0], np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))])
    return cumulative_simpson(y, x=x, initial=0.0)


def _check_lambda(lam, spec: AlgebraSpec, rep: Representation | None):
    if rep is not None:
        rep.index_of(lam)
        return
    two_mu = 2.0 * lam / spec.m
    if abs(two_mu - round(two_mu)) > 1e-9:
        raise ValueError(f"lambda={lam!r} is not m times a half-integer weight")


def phases(sol: AuxiliarySolution, p: Protocol, lam: float, rep: Representation | None = None) -> PhaseDecomposition:
    """Composite-Simpson phases along ``sol``.

    varphi_d = lam int omega [cos a cos theta + (s/m) sin a sin theta cos(b - phi)] dt
    varphi_g = lam int (b'/m)(1 - cos a) dt
    """
    spec = sol.spec
    _check_lambda(lam, spec, rep)
    v = evaluate(p, sol.times)
    s = (sol.a, sol.b)
    d_rate = lam * dynamical_rate(v, s, spec)
    g_rate = lam * geometric_rate(s, sol.db_dt, spec)
    return PhaseDecomposition(lam, sol.times, _cumulative(d_rate, sol.times), _cumulative(g_rate, sol.times))


def solid_angle_phase(a: float, lam: float, m: float) -> float:
    """(lam/m) 2 pi (1 - cos a): geometric phase of one closed azimuthal loop."""
    return lam / m * 2.0 * math.pi * (1.0 - math.cos(a))


def lr_state(rep: Representation, sol: AuxiliarySolution, lam: float, k: int, ph: PhaseDecomposition | None = None):
    """exp(-i varphi(t_k)) V(t_k) |lam>."""
    if ph is None:
        raise ValueError("lr_state needs the PhaseDecomposition of the solution")
    return np.exp(-1j * ph.phi_total[k]) * (build_displacement(rep, sol.state(k)) @ rep.basis_vector(lam))


def lr_trajectory(rep: Representation, sol: AuxiliarySolution, p: Protocol, lam: float, ph: PhaseDecomposition | None = None) -> Trajectory:
    """The exact particular solution sampled on the whole grid."""
    if ph is None:
        ph = phases(sol, p, lam, rep)
    ket = rep.basis_vector(lam)
    states = np.array([build_displacement(rep, sol.state(k)) @ ket for k in range(sol.times.size)])
    states *= np.exp(-1j * ph.phi_total)[:, None]
    return Trajectory(sol.times, states, sol.protocol_label, f"LR lambda={lam:g}")
