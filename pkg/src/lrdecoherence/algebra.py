"""
Finite-dimensional representations of the (m, n) Lie algebra

    [A+, A-] = n A,   [A, A+] = m A+,   [A, A-] = -m A-

realised by rescaling spin-j angular-momentum matrices, plus the dense
exponential of anti-Hermitian generators used by every propagation step.

Basis convention
----------------
Rows/columns are ordered by descending weight mu = j, j-1, ..., -j, so index
``k`` carries the A_z eigenvalue ``m * (j - k)``. Index 0 is the highest-weight
state |j, j>.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from .errors import NonCompactAlgebraError

J_MAX_DEFAULT = 100
ANTI_HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class AlgebraSpec:
    """Structure constants (m, n) of the compact algebra."""

    m: float
    n: float

    def __post_init__(self):
        if not (math.isfinite(self.m) and math.isfinite(self.n)):
            raise ValueError("structure constants must be finite")
        if self.m * self.n <= 0:
            raise NonCompactAlgebraError(
                f"non-compact algebra unsupported: m*n = {self.m * self.n:g} <= 0"
            )

    @property
    def scale(self) -> float:
        """sqrt(m n / 2), the factor relating A+- to J+-."""
        return math.sqrt(self.m * self.n / 2.0)

    @property
    def y(self) -> float:
        """Invariant constant that makes V^dag I V = A."""
        return self.m / self.scale

    @property
    def x(self) -> float:
        """Displacement constant in beta = -(a/2) x exp(-i b)."""
        return 1.0 / self.scale


SU2 = AlgebraSpec(1.0, 2.0)


def as_half_integer(j) -> Fraction:
    """Return ``j`` as an exact Fraction, rejecting anything off the half-integer lattice."""
    try:
        two_j = 2 * Fraction(j).limit_denominator(1000)
    except (TypeError, ValueError):
        raise ValueError(f"j must be a positive half-integer, got {j!r}") from None
    if two_j.denominator != 1 or abs(float(two_j) - 2 * float(j)) > 1e-12:
        raise ValueError(f"j must be a positive half-integer, got {j!r}")
    if two_j < 1:
        raise ValueError(f"j must be a positive half-integer, got {j!r}")
    return two_j / 2


def spin_matrices(j):
    """Standard (J+, J-, J3) for spin ``j`` in the descending-weight basis."""
    j = float(as_half_integer(j))
    mu = np.arange(j, -j - 1, -1)
    # <mu+1|J+|mu> = sqrt(j(j+1) - mu(mu+1)) on the superdiagonal
    lower = mu[1:]
    plus = np.diag(np.sqrt(j * (j + 1) - lower * (lower + 1)), k=1).astype(complex)
    return plus, plus.conj().T.copy(), np.diag(mu).astype(complex)


@dataclass(frozen=True)
class Representation:
    """Concrete (2j+1)-dimensional matrices for A+, A-, A_z.

    Attributes
    ----------
    spec : AlgebraSpec
    j : Fraction
        Spin label.
    A_plus, A_minus, A_z : ndarray, shape (dim, dim)
        Dense complex matrices; A_z is diagonal.
    weights : ndarray
        The mu values, descending from j to -j.
    """

    spec: AlgebraSpec
    j: Fraction
    A_plus: np.ndarray = field(repr=False)
    A_minus: np.ndarray = field(repr=False)
    A_z: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.A_z.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        """A_z eigenvalues m*mu in basis order."""
        return self.spec.m * self.weights

    def index_of(self, lam: float, tol: float = 1e-9) -> int:
        """Basis index of the A_z eigenvalue ``lam``."""
        hits = np.flatnonzero(np.abs(self.eigenvalues - lam) <= tol * max(1.0, abs(lam)))
        if hits.size == 0:
            raise ValueError(f"lambda={lam!r} is not in the spectrum {self.eigenvalues.tolist()}")
        return int(hits[0])

    def basis_vector(self, lam: float) -> np.ndarray:
        """Unit A_z eigenvector |lambda>."""
        v = np.zeros(self.dim, dtype=complex)
        v[self.index_of(lam)] = 1.0
        return v

    @property
    def highest_weight(self) -> float:
        """Eigenvalue m*j of the |j, j> state."""
        return self.spec.m * float(self.j)


def build_representation(spec: AlgebraSpec, j, j_max=J_MAX_DEFAULT) -> Representation:
    """Rescaled spin-j realisation: A_z = m J3, A+- = sqrt(mn/2) J+-."""
    j = as_half_integer(j)
    if j > j_max:
        raise ValueError(f"j={j} exceeds j_max={j_max}")
    plus, minus, j3 = spin_matrices(j)
    s = spec.scale
    weights = np.arange(float(j), -float(j) - 1, -1)
    return Representation(spec, j, s * plus, s * minus, spec.m * j3, weights)


def commutator(a, b):
    return a @ b - b @ a


def commutator_residual(rep: Representation, relative: bool = False) -> float:
    """Largest entry violating any of the three defining commutation relations.

    With ``relative=True`` the result is divided by the largest entry of the
    right-hand sides (n A_z, m A+-), which grows like j; roundoff in the
    sqrt matrix elements scales the same way.
    """
    m, n = rep.spec.m, rep.spec.n
    ap, am, az = rep.A_plus, rep.A_minus, rep.A_z
    checks = (
        commutator(ap, am) - n * az,
        commutator(az, ap) - m * ap,
        commutator(az, am) + m * am,
    )
    worst = float(max(np.max(np.abs(c)) for c in checks))
    if relative:
        scale = max(np.max(np.abs(n * az)), np.max(np.abs(m * ap)), 1.0)
        worst /= scale
    return worst


def expm_skew(generator, tol=ANTI_HERMITIAN_TOL):
    """Exponential of an anti-Hermitian matrix, unitary to machine precision.

    Diagonalises the Hermitian matrix ``K = -i G`` with ``eigh`` so that
    ``exp(G) = Q diag(exp(i e)) Q^dag``; the result is unitary up to the
    orthonormality of ``Q``.

    Parameters
    ----------
    generator : array_like, shape (d, d)
        Anti-Hermitian within ``tol`` (max-entry norm of ``G + G^dag``).

    Returns
    -------
    ndarray, shape (d, d)
    """
    g = np.asarray(generator, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"generator must be square, got shape {g.shape}")
    defect = np.max(np.abs(g + g.conj().T)) if g.size else 0.0
    if defect > tol:
        raise ValueError(f"generator is not anti-Hermitian (defect {defect:.3e} > {tol:g})")
    k = -1j * g
    k = 0.5 * (k + k.conj().T)
    evals, evecs = np.linalg.eigh(k)
    return (evecs * np.exp(1j * evals)) @ evecs.conj().T
