import numpy as np

from lrdecoherence import export
from lrdecoherence.algebra import SU2, build_representation
from lrdecoherence.auxiliary import solve_auxiliary
from lrdecoherence.decoherence import DecoherenceSeries, classical_limit_scan
from lrdecoherence.invariant import phases
from lrdecoherence.oracle import propagate
from lrdecoherence.protocol import Protocol, Sinusoid


def test_headers_and_round_trip(tmp_path):
    p = Protocol(1.0, Sinusoid(0.8, 0.1, 0.3), 0.0, 1.0)
    sol = solve_auxiliary(p, step=0.1)
    ph = phases(sol, p, 0.5)
    export.write_aux_csv(tmp_path / "aux.csv", sol)
    export.write_phases_csv(tmp_path / "phases.csv", ph)
    header, data = export.read_numeric_csv(tmp_path / "aux.csv")
    assert header == ["t", "a", "b"]
    # 17 significant digits round-trip exactly
    np.testing.assert_array_equal(data[:, 1], sol.a)
    header, data = export.read_numeric_csv(tmp_path / "phases.csv")
    assert header == ["t", "phi_d", "phi_g", "phi_total"]
    np.testing.assert_array_equal(data[:, 3], ph.phi_d + ph.phi_g)


def test_decoherence_and_scan(tmp_path):
    t = np.linspace(0, 1, 3)
    s1 = DecoherenceSeries(t, np.array([1, 0.5 + 0.25j, 0.1j]), "matrix-element", ("a", "b"), 1.0)
    s2 = DecoherenceSeries(t, np.ones(3, dtype=complex), "closed-form", ("a", "b"), 1.0)
    export.write_decoherence_csv(tmp_path / "d.csv", [s1, s2])
    header, rows = export.read_csv(tmp_path / "d.csv")
    assert header == ["t", "re_F", "im_F", "abs_F", "route"]
    assert [r[4] for r in rows] == ["matrix-element"] * 3 + ["closed-form"] * 3
    assert rows[1][1:4] == ["0.5", "0.25", "%.17g" % abs(0.5 + 0.25j)]
    export.write_scan_csv(tmp_path / "scan.csv", classical_limit_scan(np.pi / 3, [0.5, 1]))
    header, data = export.read_numeric_csv(tmp_path / "scan.csv")
    assert header == ["j", "abs_F"]
    assert data[1, 1] == np.cos(np.pi / 6) ** 2


def test_trajectory_csv(tmp_path):
    rep = build_representation(SU2, 0.5)
    traj = propagate(rep, Protocol(1.0, 0.5, 0.0, 0.1), [1.0, 0.0], step=0.05)
    export.write_trajectory_csv(tmp_path / "tr.csv", traj)
    header, data = export.read_numeric_csv(tmp_path / "tr.csv")
    assert header == ["t", "re_0", "im_0", "re_1", "im_1"]
    np.testing.assert_array_equal(data[:, 1] + 1j * data[:, 2], traj.states[:, 0])


def test_fmt():
    assert export.fmt(0.1) == "0.10000000000000001"
    assert export.fmt(1) == "1"
