"""Shared fixtures and independent reference implementations."""

from math import factorial

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def taylor_expm(g, terms=80):
    """Truncated power series with scaling and squaring; slow but independent of eigh."""
    g = np.asarray(g, dtype=complex)
    norm = np.max(np.sum(np.abs(g), axis=1)) if g.size else 0.0
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0.5 else 0
    x = g / 2.0**squarings
    out = np.eye(g.shape[0], dtype=complex)
    term = np.eye(g.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ x / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def wigner_d(j, mp, m, beta):
    """Wigner small-d element d^j_{m'm}(beta) for exp(-i beta J_y), from the factorial sum."""
    jm = [int(round(v)) for v in (j + mp, j - mp, j + m, j - m)]
    pref = np.sqrt(float(factorial(jm[0]) * factorial(jm[1]) * factorial(jm[2]) * factorial(jm[3])))
    c, s = np.cos(beta / 2.0), np.sin(beta / 2.0)
    total = 0.0
    kmin = max(0, int(round(m - mp)))
    kmax = min(int(round(j + m)), int(round(j - mp)))
    for k in range(kmin, kmax + 1):
        den = (
            factorial(int(round(j + m - k)))
            * factorial(k)
            * factorial(int(round(j - k - mp)))
            * factorial(int(round(k - m + mp)))
        )
        sign = (-1) ** int(round(k - m + mp))
        total += sign / den * c ** int(round(2 * j - 2 * k + m - mp)) * s ** int(round(2 * k - m + mp))
    return pref * total


@pytest.fixture
def outdir(tmp_path, monkeypatch):
    d = tmp_path / "out"
    monkeypatch.setenv("LRDECOHERENCE_OUTPUT_DIR", str(d))
    return d
