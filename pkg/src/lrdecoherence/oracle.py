"""Brute-force propagation of i d|psi>/dt = H(t)|psi> with the midpoint exponential rule."""

from dataclasses import dataclass, field

import numpy as np

from .algebra import Representation, expm_skew
from .auxiliary import time_grid
from .errors import GridMismatchError
from .protocol import Protocol, evaluate, hamiltonian_from_values


@dataclass(frozen=True)
class Trajectory:
    """States (one row per grid point) of a single branch."""

    times: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)
    label: str = "0"
    initial: str = ""

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)


def propagate(rep: Representation, p: Protocol, psi0, T=None, step=1e-3) -> Trajectory:
    """psi(t+h) = exp(-i h H(t + h/2)) psi(t) on a uniform grid.

    Each step is exactly unitary; the scheme is second order in ``h``.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-12:
        raise ValueError("initial state must be normalised to 1e-12")
    T = p.T if T is None else T
    times = time_grid(T, step)
    mid = times[:-1] + 0.5 * np.diff(times)
    v = evaluate(p, mid)
    states = np.empty((times.size, rep.dim), dtype=complex)
    states[0] = psi0
    u_const = None
    for k in range(times.size - 1):
        h = times[k + 1] - times[k]
        if p.is_constant:
            if u_const is None:
                u_const = expm_skew(-1j * h * hamiltonian_from_values(rep, v.omega[0], v.theta[0], v.phi[0]))
            u = u_const
        else:
            u = expm_skew(-1j * h * hamiltonian_from_values(rep, v.omega[k], v.theta[k], v.phi[k]))
        states[k + 1] = u @ states[k]
    return Trajectory(times, states, str(p.label), "psi0")


def schrodinger_residual(traj: Trajectory, rep: Representation, p: Protocol) -> float:
    """max_k || i (psi_{k+1} - psi_{k-1}) / (2h) - H(t_k) psi_k || over interior points."""
    t = traj.times
    h = np.diff(t)
    if h.size and np.ptp(h) > 1e-9 * h.max():
        raise ValueError("schrodinger_residual needs a uniform grid")
    v = evaluate(p, t)
    worst = 0.0
    for k in range(1, t.size - 1):
        lhs = 1j * (traj.states[k + 1] - traj.states[k - 1]) / (t[k + 1] - t[k - 1])
        ham = hamiltonian_from_values(rep, v.omega[k], v.theta[k], v.phi[k])
        worst = max(worst, float(np.linalg.norm(lhs - ham @ traj.states[k])))
    return worst


def check_same_grid(t1, t2, what="series"):
    if t1.shape != t2.shape or not np.allclose(t1, t2, rtol=0, atol=1e-12 * max(1.0, float(np.max(np.abs(t1))))):
        raise GridMismatchError(f"{what} do not share a time grid")


def overlap_series(traj_i: Trajectory, traj_j: Trajectory) -> np.ndarray:
    """<psi_i(t)|psi_j(t)> at every grid point."""
    check_same_grid(traj_i.times, traj_j.times, "trajectories")
    return np.einsum("kd,kd->k", traj_i.states.conj(), traj_j.states)
