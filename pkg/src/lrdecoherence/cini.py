"""
Generalised Cini measurement model: an M-level system coupled to a
two-mode boson detector.

Inside the sector with fixed level k and boson number N = (n1 + n2)/2 the
Hamiltonian is

    H_{n,k} = E_k + n(w1 + w2) + g_k J+ + g_k* J- + (w1 - w2) J3,

an su(2) Hamiltonian of spin j = n plus a c-number. Each level therefore
maps onto a :class:`~lrdecoherence.protocol.Protocol` with m = 1, n = 2.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .algebra import SU2, build_representation, spin_matrices
from .auxiliary import adiabatic_solution, solve_auxiliary, stationary_solution
from .decoherence import DecoherenceSeries, decoherence_matrix_element
from .errors import DegenerateBranchError
from .oracle import Trajectory
from .protocol import Constant, Derived, Protocol, ScalarFunction, _as_function

DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class CiniLevel:
    """Level energy E_k(t) and complex coupling g_k(t) = re + i im."""

    energy: ScalarFunction
    coupling_re: ScalarFunction
    coupling_im: ScalarFunction = Constant(0.0)

    def __post_init__(self):
        for name in ("energy", "coupling_re", "coupling_im"):
            object.__setattr__(self, name, _as_function(getattr(self, name)))

    @classmethod
    def constant(cls, energy: float, coupling: complex):
        g = complex(coupling)
        return cls(Constant(float(energy)), Constant(g.real), Constant(g.imag))

    @property
    def is_constant(self) -> bool:
        return self.energy.is_constant and self.coupling_re.is_constant and self.coupling_im.is_constant


@dataclass(frozen=True)
class CiniModel:
    levels: tuple
    omega1: ScalarFunction
    omega2: ScalarFunction
    n1: int
    n2: int

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "omega1", _as_function(self.omega1))
        object.__setattr__(self, "omega2", _as_function(self.omega2))
        if int(self.n1) != self.n1 or int(self.n2) != self.n2 or self.n1 < 0 or self.n2 < 0:
            raise ValueError("boson occupations n1, n2 must be non-negative integers")
        if self.n1 + self.n2 < 1:
            raise ValueError("sector needs n1 + n2 >= 1")
        if not self.levels:
            raise ValueError("model needs at least one level")

    @property
    def j(self) -> float:
        """Detector spin label, equal to the N eigenvalue n."""
        return 0.5 * (self.n1 + self.n2)

    @property
    def dim(self) -> int:
        return self.n1 + self.n2 + 1


@dataclass(frozen=True)
class BranchHamiltonian:
    """H_{n,k}(t) split into a c-number offset and its su(2) coefficients."""

    k: int
    j: float
    offset: ScalarFunction
    coupling_re: ScalarFunction
    coupling_im: ScalarFunction
    detuning: ScalarFunction
    constant: bool = False

    def coefficients(self, t):
        """(offset, g, w1 - w2) at ``t``."""
        g = self.coupling_re.value(t) + 1j * self.coupling_im.value(t)
        return self.offset.value(t), g, self.detuning.value(t)

    def matrix(self, t, include_offset=True) -> np.ndarray:
        jp, jm, j3 = spin_matrices(self.j)
        off, g, det = self.coefficients(t)
        g = complex(g)
        h = g * jp + g.conjugate() * jm + float(det) * j3
        if include_offset:
            h = h + float(off) * np.eye(jp.shape[0])
        return h


def reduce_to_sector(model: CiniModel, k: int) -> BranchHamiltonian:
    """Restrict the model to level ``k`` and the model's boson sector."""
    if not 0 <= k < len(model.levels):
        raise IndexError(f"level {k} out of range for a {len(model.levels)}-level model")
    lev = model.levels[k]
    n = model.j
    w1, w2 = model.omega1, model.omega2
    offset = Derived(
        lambda t: lev.energy.value(t) + n * (w1.value(t) + w2.value(t)),
        lambda t: lev.energy.derivative(t) + n * (w1.derivative(t) + w2.derivative(t)),
        lev.energy.is_constant and w1.is_constant and w2.is_constant,
    )
    detuning = Derived(
        lambda t: w1.value(t) - w2.value(t),
        lambda t: w1.derivative(t) - w2.derivative(t),
        w1.is_constant and w2.is_constant,
    )
    return BranchHamiltonian(
        k, n, offset, lev.coupling_re, lev.coupling_im, detuning,
        lev.is_constant and w1.is_constant and w2.is_constant,
    )


def protocol_values(g: complex, detuning: float):
    """(omega, theta, phi) with (omega/2) sin(theta) e^{-i phi} = g, omega cos(theta) = detuning."""
    omega = math.hypot(detuning, 2.0 * abs(g))
    if omega <= DEGENERATE_TOL:
        raise DegenerateBranchError("branch has g = 0 and w1 = w2: theta is undefined")
    theta = math.atan2(2.0 * abs(g), detuning)
    phi = -math.atan2(g.imag, g.real) if abs(g) > 0 else 0.0
    return omega, theta, phi


def branch_protocol(bh: BranchHamiltonian, T: float, allow_degenerate: bool = False):
    """Map a branch onto (Protocol, offset) with A+- = J+-, A = J3.

    Returns the protocol and the c-number offset E_k + n(w1 + w2) as a
    :class:`ScalarFunction`; it contributes only exp(-i int offset dt).

    With ``allow_degenerate`` a vanishing su(2) part yields omega = 0,
    theta = 0 and ``protocol.label`` ending in ``:degenerate``.
    """
    label = str(bh.k)
    if bh.constant:
        _, g, det = bh.coefficients(0.0)
        try:
            omega, theta, phi = protocol_values(complex(g), float(det))
        except DegenerateBranchError:
            if not allow_degenerate:
                raise
            return Protocol(0.0, 0.0, 0.0, T, label + ":degenerate"), bh.offset
        return Protocol(omega, theta, phi, T, label), bh.offset

    grid = np.linspace(0.0, T, 2001)
    _, g_s, det_s = bh.coefficients(grid)
    if np.min(np.hypot(det_s, 2.0 * np.abs(g_s))) <= DEGENERATE_TOL:
        raise DegenerateBranchError(f"branch {bh.k} becomes degenerate inside [0, {T:g}]")

    re, im, det = bh.coupling_re, bh.coupling_im, bh.detuning

    def mod_g(t):
        return np.hypot(re.value(t), im.value(t))

    def dmod_g(t):
        r, i = re.value(t), im.value(t)
        mg = np.asarray(np.hypot(r, i))
        return np.divide(r * re.derivative(t) + i * im.derivative(t), mg, out=np.zeros_like(mg), where=mg > 0)

    def omega(t):
        return np.hypot(det.value(t), 2.0 * mod_g(t))

    def domega(t):
        return (det.value(t) * det.derivative(t) + 4.0 * mod_g(t) * dmod_g(t)) / omega(t)

    def theta(t):
        return np.arctan2(2.0 * mod_g(t), det.value(t))

    def dtheta(t):
        d, mg = det.value(t), mod_g(t)
        return (2.0 * d * dmod_g(t) - 2.0 * mg * det.derivative(t)) / (d * d + 4.0 * mg * mg)

    def phi(t):
        return -np.arctan2(im.value(t), re.value(t))

    def dphi(t):
        r, i = re.value(t), im.value(t)
        mg2 = np.asarray(r * r + i * i)
        return np.divide(-(r * im.derivative(t) - i * re.derivative(t)), mg2, out=np.zeros_like(mg2), where=mg2 > 0)

    p = Protocol(Derived(omega, domega), Derived(theta, dtheta), Derived(phi, dphi), T, label)
    return p, bh.offset


def level_pair_decoherence(model: CiniModel, k: int, l: int, T: float, step: float, mode: str = "adiabatic") -> DecoherenceSeries:
    """Matrix-element F_kl(t) for the |j, j> detector."""
    if k == l:
        raise ValueError("level_pair_decoherence needs two distinct levels")
    rep = build_representation(SU2, model.j)
    sols = []
    for lev in (k, l):
        p, _ = branch_protocol(reduce_to_sector(model, lev), T)
        if mode == "adiabatic":
            sols.append(adiabatic_solution(p, T, step))
        elif mode == "integrated":
            sols.append(solve_auxiliary(p, None, T, step))
        elif mode == "stationary":
            sols.append(stationary_solution(p, T, step))
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return decoherence_matrix_element(rep, sols[0], sols[1], rep.highest_weight)


def apply_offset_phase(traj: Trajectory, offset: ScalarFunction) -> Trajectory:
    """Multiply by exp(-i int_0^t offset dt') (trapezoid on the trajectory grid)."""
    vals = np.asarray(offset.value(traj.times), dtype=float) + 0.0 * traj.times
    integral = np.concatenate([[0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(traj.times))])
    return Trajectory(traj.times, traj.states * np.exp(-1j * integral)[:, None], traj.label, traj.initial)


@dataclass(frozen=True)
class CompositeSeries:
    """|Psi(t)> = sum_k c_k |Psi_k(t)> |Phi_k> and the system's reduced density matrix.

    ``states`` uses detector-major ordering: index = d * M + k.
    """

    times: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)
    reduced: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)

    def coherence(self, k: int, l: int) -> np.ndarray:
        return self.reduced[:, k, l]


def composite_state(model: CiniModel, coefficients, trajectories) -> CompositeSeries:
    """Assemble the joint state of one boson sector and trace out the detector.

    Checks that |rho_kl| = |c_k||c_l| |<Psi_l|Psi_k>| at every time.
    """
    c = np.asarray(coefficients, dtype=complex)
    m_levels = len(model.levels)
    if c.shape != (m_levels,):
        raise ValueError(f"need {m_levels} coefficients, got shape {c.shape}")
    if abs(np.vdot(c, c).real - 1.0) > 1e-12:
        raise ValueError("coefficients must be normalised: sum |c_k|^2 = 1")
    trajectories = list(trajectories)
    if len(trajectories) != m_levels:
        raise ValueError("need one trajectory per level")
    times = trajectories[0].times
    for tr in trajectories[1:]:
        if tr.times.shape != times.shape or not np.allclose(tr.times, times, rtol=0, atol=1e-12):
            raise ValueError("branch trajectories must share a grid")
    # psi[t, d, k] = c_k <d|Psi_k(t)>
    psi = np.stack([c[k] * trajectories[k].states for k in range(m_levels)], axis=2)
    states = psi.reshape(times.size, -1)
    reduced = np.einsum("tdk,tdl->tkl", psi, psi.conj())
    overlaps = np.einsum("ktd,ltd->tkl", np.array([tr.states for tr in trajectories]).conj(), np.array([tr.states for tr in trajectories]))
    # overlaps[t, k, l] = <Psi_k|Psi_l>
    expected = np.abs(c)[None, :, None] * np.abs(c)[None, None, :] * np.abs(overlaps)
    if np.max(np.abs(np.abs(reduced) - expected)) > 1e-10:
        raise AssertionError("reduced coherence does not match |c_k||c_l||<Psi_l|Psi_k>|")
    return CompositeSeries(times, states, reduced, c)
