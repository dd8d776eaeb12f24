import warnings

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from conftest import wigner_d
from lrdecoherence.algebra import SU2, AlgebraSpec, build_representation
from lrdecoherence.auxiliary import AuxiliarySolution, solve_auxiliary
from lrdecoherence.decoherence import (
    adiabatic_cini_factor,
    classical_limit_scan,
    closed_form_discrepancy,
    decoherence_closed_form,
    decoherence_closed_form_series,
    decoherence_matrix_element,
    detector_overlap_vs_factor,
    is_excluded_angle,
    oracle_overlap_series,
)
from lrdecoherence.errors import GridMismatchError
from lrdecoherence.invariant import build_displacement, displacement_parameter, phases
from lrdecoherence.oracle import propagate
from lrdecoherence.protocol import Protocol, Sinusoid, Winding


def constant_sol(a, b, times=np.linspace(0.0, 1.0, 5), spec=SU2, label="x"):
    n = times.size
    return AuxiliarySolution(times, np.full(n, a), np.full(n, b), np.zeros(n), "stationary", label, spec)


def test_identical_branches():
    rep = build_representation(SU2, 2)
    sol = constant_sol(0.7, 0.3)
    np.testing.assert_allclose(decoherence_matrix_element(rep, sol, sol, 2.0).F, 1.0, atol=1e-12)


@pytest.mark.parametrize("j", [0.5, 1, 2.5, 7, 25])
def test_cini_formula_b_zero(j):
    rep = build_representation(SU2, j)
    F = decoherence_matrix_element(rep, constant_sol(1.1, 0.0), constant_sol(0.3, 0.0), float(j)).F
    np.testing.assert_allclose(F, np.cos(0.4) ** (2 * j), atol=1e-10)


def test_spin_one_quarter_turn_against_expm():
    rep = build_representation(SU2, 1)
    F = decoherence_matrix_element(rep, constant_sol(np.pi / 2, 0.0), constant_sol(0.0, 0.0), 1.0).F
    jy = (rep.A_plus - rep.A_minus) / 2j
    ref = scipy.linalg.expm(1j * (np.pi / 2) * jy)[0, 0]
    np.testing.assert_allclose(F, 0.5, atol=1e-14)
    assert ref.real == pytest.approx(0.5, abs=1e-14)


@given(st.integers(1, 10).map(lambda k: k / 2), st.data(), st.floats(0.05, 3.0), st.floats(0.05, 3.0))
def test_general_weight_against_wigner(j, data, ai, aj):
    mu = data.draw(st.sampled_from(list(np.arange(j, -j - 1, -1))))
    rep = build_representation(SU2, j)
    F = decoherence_matrix_element(rep, constant_sol(ai, 0.0), constant_sol(aj, 0.0), float(mu)).F
    np.testing.assert_allclose(F, wigner_d(j, mu, mu, aj - ai), atol=1e-10)


@given(
    st.sampled_from([SU2, AlgebraSpec(2.0, 4.0), AlgebraSpec(0.5, 3.0)]),
    st.integers(1, 8).map(lambda k: k / 2),
    st.floats(0.05, 3.0), st.floats(0, 6.28), st.floats(0.05, 3.0), st.floats(0, 6.28),
)
def test_bound_and_hermitian_symmetry(spec, j, ai, bi, aj, bj):
    rep = build_representation(spec, j)
    lam = rep.highest_weight
    si, sj = constant_sol(ai, bi, spec=spec), constant_sol(aj, bj, spec=spec)
    fij = decoherence_matrix_element(rep, si, sj, lam).F
    fji = decoherence_matrix_element(rep, sj, si, lam).F
    assert np.max(np.abs(fij)) <= 1 + 1e-10
    assert np.max(np.abs(fij - fji.conj())) <= 1e-12


def test_grid_mismatch():
    rep = build_representation(SU2, 1)
    with pytest.raises(GridMismatchError):
        decoherence_matrix_element(rep, constant_sol(1, 0), constant_sol(1, 0, times=np.linspace(0, 2, 5)), 1.0)


def test_closed_form_equal_betas():
    rep = build_representation(SU2, 1.5)
    assert decoherence_closed_form(0.3 - 0.2j, 0.3 - 0.2j, 1.5, rep) == pytest.approx(1.0, abs=1e-15)


@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.integers(1, 10).map(lambda k: k / 2), st.floats(0, 6.28))
def test_closed_form_exact_for_shared_phase(ai, aj, j, b):
    rep = build_representation(SU2, j)
    si, sj = constant_sol(ai, b), constant_sol(aj, b)
    exact = decoherence_matrix_element(rep, si, sj, float(j))
    closed = decoherence_closed_form_series(rep, si, sj, float(j))
    assert np.max(closed_form_discrepancy(exact, closed)) <= 1e-12


def test_closed_form_real_betas_direct():
    rep = build_representation(SU2, 2)
    for a_i, a_j in ((0.2, 1.3), (2.5, 0.1), (-0.4, 0.9)):
        bi = displacement_parameter((a_i, 0.0), SU2)
        bj = displacement_parameter((a_j, 0.0), SU2)
        vi = build_displacement(rep, (a_i, 0.0))
        vj = build_displacement(rep, (a_j, 0.0))
        exact = (vi.conj().T @ vj)[0, 0]
        assert abs(decoherence_closed_form(bi, bj, 2.0, rep) - exact) <= 1e-12


def test_closed_form_discrepancy_reported():
    rep = build_representation(SU2, 1)
    si, sj = constant_sol(1.0, 0.0), constant_sol(1.2, 1.5)
    gap = closed_form_discrepancy(
        decoherence_matrix_element(rep, si, sj, 1.0), decoherence_closed_form_series(rep, si, sj, 1.0)
    )
    assert np.all(np.isfinite(gap))
    assert np.max(gap) > 1e-6


def test_adiabatic_factor_examples():
    assert adiabatic_cini_factor(0.4, 0.4, 3) == 1.0
    assert adiabatic_cini_factor(np.pi / 2, 0.0, 0.5) == pytest.approx(0.70710678, abs=1e-8)
    f25 = adiabatic_cini_factor(np.pi / 3, 0.0, 25)
    assert f25 == pytest.approx(0.75**25, rel=1e-12)
    assert f25 == pytest.approx(7.5e-4, rel=0.01)


def test_adiabatic_factor_against_51_dim_exponential():
    rep = build_representation(SU2, 25)
    jy = (rep.A_plus - rep.A_minus) / 2j
    ref = scipy.linalg.expm(1j * (np.pi / 3) * jy)[0, 0].real
    assert adiabatic_cini_factor(np.pi / 3, 0.0, 25) == pytest.approx(ref, rel=1e-10)


def test_classical_limit_scan_values():
    scan = classical_limit_scan(np.pi / 3, [0.5, 5, 25])
    np.testing.assert_allclose(scan.abs_F, [np.cos(np.pi / 6), 0.75**5, 0.75**25], rtol=1e-13)
    for j, v in scan.rows():
        assert v == pytest.approx(abs(wigner_d(j, j, j, np.pi / 3)), rel=1e-10)
    assert not scan.excluded


def test_classical_limit_monotone_geometric():
    js = np.arange(1, 51) / 2
    scan = classical_limit_scan(1.0, js)
    assert np.all(np.diff(scan.abs_F) < 0)
    np.testing.assert_allclose(scan.abs_F[2:] / scan.abs_F[:-2], np.cos(0.5) ** 2, rtol=1e-12)


def test_classical_limit_excluded_and_orthogonal():
    with pytest.warns(RuntimeWarning, match="multiple of pi"):
        scan = classical_limit_scan(2 * np.pi, [0.5, 1, 5])
    assert scan.excluded
    np.testing.assert_allclose(scan.abs_F, 1.0, atol=1e-15)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        zero = classical_limit_scan(np.pi, [0.5, 1, 3])
    assert np.max(zero.abs_F) <= 1e-15
    assert is_excluded_angle(4 * np.pi) and not is_excluded_angle(np.pi)


def _pair(rep, pi, pj, step=1e-3):
    lam = rep.highest_weight
    si, sj = solve_auxiliary(pi, step=step), solve_auxiliary(pj, step=step)
    phi_i, phi_j = phases(si, pi, lam, rep), phases(sj, pj, lam, rep)
    ti = propagate(rep, pi, build_displacement(rep, si.state(0)) @ rep.basis_vector(lam), step=step)
    tj = propagate(rep, pj, build_displacement(rep, sj.state(0)) @ rep.basis_vector(lam), step=step)
    return si, sj, phi_i, phi_j, ti, tj


def test_overlap_vs_factor_same_branch():
    rep = build_representation(SU2, 1)
    p = Protocol(1.0, 0.7, 0.0, 2.0)
    si, _, phi_i, _, ti, _ = _pair(rep, p, p)
    F = decoherence_matrix_element(rep, si, si, 1.0)
    assert detector_overlap_vs_factor(ti, ti, phi_i, phi_i, F) <= 1e-12


def test_overlap_vs_factor_constant_pair():
    rep = build_representation(SU2, 1)
    pi, pj = Protocol(1.0, 0.7, 0.0, 5.0, "i"), Protocol(1.2, 1.3, 0.4, 5.0, "j")
    si, sj, phi_i, phi_j, ti, tj = _pair(rep, pi, pj)
    F = decoherence_matrix_element(rep, si, sj, 1.0)
    assert detector_overlap_vs_factor(ti, tj, phi_i, phi_j, F) <= 1e-8


def test_overlap_vs_factor_time_dependent_pair():
    rep = build_representation(SU2, 1)
    pi = Protocol(1.0, Sinusoid(0.8, 0.1, 0.3), 0.0, 5.0, "i")
    pj = Protocol(Sinusoid(1.0, 0.2, 0.25), Sinusoid(1.2, 0.1, 0.2), Winding(0.15), 5.0, "j")
    si, sj, phi_i, phi_j, ti, tj = _pair(rep, pi, pj)
    F = decoherence_matrix_element(rep, si, sj, 1.0)
    assert detector_overlap_vs_factor(ti, tj, phi_i, phi_j, F) <= 1e-5
    est = oracle_overlap_series(ti, tj, phi_i, phi_j, ("i", "j"))
    assert np.max(np.abs(est.F - F.F)) <= 1e-5
    assert est.route == "oracle-overlap"
