"""
Decoherence factor F_ij(t) = <lambda| V_i^dag(t) V_j(t) |lambda>.

Routes
------
matrix-element
    Direct evaluation with the two displacement unitaries (ground truth).
closed-form
    exp[(n lambda/2)(beta_i beta_j* - beta_i* beta_j)]
    <lambda| exp[(beta_j - beta_i)A+ - (beta_j* - beta_i*)A-] |lambda>,
    exact only when beta_i and beta_j share a phase; otherwise its gap to
    the matrix-element route is measured, not assumed away.
adiabatic-formula
    [cos((theta_i - theta_j)/2)]^{2j} for the |j, j> detector.
oracle-overlap
    Brute-force trajectories, phase-corrected.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .algebra import Representation, as_half_integer, expm_skew
from .auxiliary import AuxiliarySolution
from .invariant import PhaseDecomposition, build_displacement, displacement_parameter
from .oracle import Trajectory, check_same_grid, overlap_series

ROUTES = ("matrix-element", "closed-form", "adiabatic-formula", "oracle-overlap")


@dataclass(frozen=True)
class DecoherenceSeries:
    times: np.ndarray = field(repr=False)
    F: np.ndarray = field(repr=False)
    route: str
    branch_pair: tuple
    lam: float
    detector: tuple = ()

    @property
    def abs_F(self) -> np.ndarray:
        return np.abs(self.F)


def _detector(rep: Representation, lam: float):
    return (float(rep.j), lam / rep.spec.m)


def decoherence_matrix_element(rep: Representation, sol_i: AuxiliarySolution, sol_j: AuxiliarySolution, lam: float) -> DecoherenceSeries:
    """F(t) = <lam| V_i^dag(t) V_j(t) |lam> on the shared grid."""
    check_same_grid(sol_i.times, sol_j.times, "auxiliary solutions")
    ket = rep.basis_vector(lam)
    F = np.empty(sol_i.times.size, dtype=complex)
    for k in range(sol_i.times.size):
        vi = build_displacement(rep, sol_i.state(k)) @ ket
        vj = build_displacement(rep, sol_j.state(k)) @ ket
        F[k] = np.vdot(vi, vj)
    return DecoherenceSeries(sol_i.times, F, "matrix-element", (sol_i.protocol_label, sol_j.protocol_label), lam, _detector(rep, lam))


def decoherence_closed_form(beta_i: complex, beta_j: complex, lam: float, rep: Representation) -> complex:
    """The printed closed form, evaluated verbatim."""
    n = rep.spec.n
    pre = np.exp(0.5 * n * lam * (beta_i * np.conj(beta_j) - np.conj(beta_i) * beta_j))
    d = beta_j - beta_i
    ket = rep.basis_vector(lam)
    u = expm_skew(d * rep.A_plus - np.conj(d) * rep.A_minus)
    return complex(pre * np.vdot(ket, u @ ket))


def decoherence_closed_form_series(rep: Representation, sol_i: AuxiliarySolution, sol_j: AuxiliarySolution, lam: float) -> DecoherenceSeries:
    check_same_grid(sol_i.times, sol_j.times, "auxiliary solutions")
    spec = rep.spec
    F = np.array([
        decoherence_closed_form(
            displacement_parameter(sol_i.state(k), spec), displacement_parameter(sol_j.state(k), spec), lam, rep
        )
        for k in range(sol_i.times.size)
    ])
    return DecoherenceSeries(sol_i.times, F, "closed-form", (sol_i.protocol_label, sol_j.protocol_label), lam, _detector(rep, lam))


def closed_form_discrepancy(exact: DecoherenceSeries, closed: DecoherenceSeries) -> np.ndarray:
    """|F_closed - F_exact| pointwise."""
    check_same_grid(exact.times, closed.times, "decoherence series")
    return np.abs(closed.F - exact.F)


def adiabatic_cini_factor(theta_i, theta_j, j_spin) -> float:
    """[cos((theta_i - theta_j)/2)]^{2j}."""
    two_j = int(2 * as_half_integer(j_spin))
    return float(np.cos(0.5 * (np.asarray(theta_i) - np.asarray(theta_j))) ** two_j)


def adiabatic_formula_series(times, theta_i, theta_j, j_spin, pair=("i", "j"), m=1.0) -> DecoherenceSeries:
    """Formula route sampled on a grid (theta's may be arrays)."""
    times = np.asarray(times, dtype=float)
    two_j = int(2 * as_half_integer(j_spin))
    F = np.cos(0.5 * (np.asarray(theta_i) - np.asarray(theta_j))) ** two_j + 0j * times
    return DecoherenceSeries(times, F, "adiabatic-formula", tuple(pair), m * float(j_spin), (float(j_spin), float(j_spin)))


@dataclass(frozen=True)
class ClassicalLimitScan:
    """|F| against detector spin j; ``excluded`` flags delta/2 = n pi."""

    delta: float
    j: np.ndarray
    abs_F: np.ndarray
    excluded: bool = False

    def rows(self):
        return list(zip(self.j.tolist(), self.abs_F.tolist()))


def is_excluded_angle(delta, tol=1e-9) -> bool:
    half = 0.5 * delta / math.pi
    return abs(half - round(half)) <= tol


def classical_limit_scan(delta: float, j_list) -> ClassicalLimitScan:
    """|F(j)| = |cos(delta/2)|^{2j} for each j in ``j_list``.

    Decays geometrically with ratio cos^2(delta/2) per unit j unless
    delta/2 is a multiple of pi, where |F| stays 1 and the result is
    flagged with a warning.
    """
    js = np.array([float(as_half_integer(j)) for j in j_list])
    values = np.array([abs(adiabatic_cini_factor(delta, 0.0, j)) for j in js])
    excluded = is_excluded_angle(delta)
    if excluded:
        warnings.warn(f"delta={delta!r}: delta/2 is a multiple of pi, |F| does not decay", RuntimeWarning, stacklevel=2)
    return ClassicalLimitScan(float(delta), js, values, excluded)


def oracle_overlap_series(traj_i: Trajectory, traj_j: Trajectory, phases_i: PhaseDecomposition, phases_j: PhaseDecomposition, pair=("i", "j")) -> DecoherenceSeries:
    """<Psi_i|Psi_j> e^{-i(phi_i - phi_j)}: the oracle's estimate of F."""
    ov = overlap_series(traj_i, traj_j)
    check_same_grid(traj_i.times, phases_i.times, "trajectory and phases")
    check_same_grid(traj_j.times, phases_j.times, "trajectory and phases")
    F = ov * np.exp(-1j * (phases_i.phi_total - phases_j.phi_total))
    return DecoherenceSeries(traj_i.times, F, "oracle-overlap", tuple(pair), phases_i.lam)


def detector_overlap_vs_factor(traj_i: Trajectory, traj_j: Trajectory, phases_i: PhaseDecomposition, phases_j: PhaseDecomposition, F: DecoherenceSeries) -> float:
    """max_t | <Psi_i|Psi_j> - e^{i(phi_i - phi_j)} F_ij |."""
    ov = overlap_series(traj_i, traj_j)
    for other, what in ((phases_i.times, "phases_i"), (phases_j.times, "phases_j"), (F.times, "F")):
        check_same_grid(traj_i.times, other, f"trajectory and {what}")
    predicted = np.exp(1j * (phases_i.phi_total - phases_j.phi_total)) * F.F
    return float(np.max(np.abs(ov - predicted)))
