"""
A two-level system measured by a two-mode boson detector.

Each system level couples to the detector through its own complex
coupling and detuning, which fixes the branch field angle. The detector
starts in |j, j> with j = (n1 + n2)/2 and the decoherence factor between
the two levels shrinks as the detector grows.
"""

import numpy as np

from lrdecoherence import CiniLevel, CiniModel, Linear, level_pair_decoherence

T, step = 10.0, 0.01
for n in (1, 2, 5, 10, 25):
    model = CiniModel(
        levels=(CiniLevel(0.2, Linear(0.3, 0.02), 0.1), CiniLevel.constant(-0.2, 0.6)),
        omega1=1.0,
        omega2=0.5,
        n1=n,
        n2=n,
    )
    F = level_pair_decoherence(model, 0, 1, T, step, mode="integrated")
    print(f"j = {model.j:5.1f}: |F(T)| = {F.abs_F[-1]:.3e}, min over [0, T] = {np.min(F.abs_F):.3e}")
