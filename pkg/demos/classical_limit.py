"""
Decoherence by a growing detector: |F| against spin j.

Two branches tilt the detector field by angles differing by delta. In the
adiabatic limit |F(j)| = |cos(delta/2)|^{2j}, so log|F| is linear in j and
a macroscopic detector (large j) separates the branches completely.
"""

import math

import numpy as np

from lrdecoherence import classical_limit_scan

for delta in (math.pi / 6, math.pi / 3, math.pi / 2):
    scan = classical_limit_scan(delta, np.arange(0.5, 25.5, 0.5))
    slope = np.polyfit(scan.j, np.log(scan.abs_F), 1)[0]
    print(f"delta = {delta:.4f}: |F(1)| = {scan.abs_F[1]:.4f}, |F(25)| = {scan.abs_F[-1]:.3e}, "
          f"slope {slope:.6f} vs 2 log|cos(delta/2)| = {2 * math.log(abs(math.cos(delta / 2))):.6f}")
