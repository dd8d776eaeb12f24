"""CSV writers with fixed headers and 17-significant-digit floats."""

import csv
import os

import numpy as np

AUX_HEADER = ("t", "a", "b")
PHASES_HEADER = ("t", "phi_d", "phi_g", "phi_total")
DECOHERENCE_HEADER = ("t", "re_F", "im_F", "abs_F", "route")
SCAN_HEADER = ("j", "abs_F")


def fmt(x) -> str:
    return "%.17g" % float(x)


def _write(path, header, rows):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_aux_csv(path, sol):
    _write(path, AUX_HEADER, ((fmt(t), fmt(a), fmt(b)) for t, a, b in zip(sol.times, sol.a, sol.b)))


def write_phases_csv(path, ph):
    rows = (
        (fmt(t), fmt(d), fmt(g), fmt(d + g))
        for t, d, g in zip(ph.times, ph.phi_d, ph.phi_g)
    )
    _write(path, PHASES_HEADER, rows)


def write_decoherence_csv(path, series_list):
    """One block of rows per series, in the order given."""
    def rows():
        for s in series_list:
            for t, f in zip(s.times, s.F):
                yield fmt(t), fmt(f.real), fmt(f.imag), fmt(abs(f)), s.route

    _write(path, DECOHERENCE_HEADER, rows())


def write_scan_csv(path, scan):
    _write(path, SCAN_HEADER, ((fmt(j), fmt(v)) for j, v in zip(scan.j, scan.abs_F)))


def write_trajectory_csv(path, traj):
    dim = traj.states.shape[1]
    header = ["t"] + [f"{part}_{k}" for k in range(dim) for part in ("re", "im")]

    def rows():
        for t, psi in zip(traj.times, traj.states):
            yield [fmt(t)] + [fmt(v) for c in psi for v in (c.real, c.imag)]

    _write(path, header, rows())


def read_csv(path):
    """(header, rows-of-strings); small helper for tests and demos."""
    with open(path, newline="") as f:
        r = list(csv.reader(f))
    return r[0], r[1:]


def read_numeric_csv(path):
    header, rows = read_csv(path)
    numeric = [i for i, h in enumerate(header) if h != "route"]
    return header, np.array([[float(row[i]) for i in numeric] for row in rows])
