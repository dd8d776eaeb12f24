"""
Geometric phase of an invariant eigenstate around one azimuthal loop.

The field is tuned so that the invariant axis keeps a fixed polar angle a
while its azimuth winds once. The accumulated geometric phase then equals
lambda/m times the solid angle 2 pi (1 - cos a).
"""

import math

from lrdecoherence import SU2, AuxiliaryState, Protocol, Winding, build_representation, phases, solid_angle_phase, solve_auxiliary

big_omega = 0.5
T = 2 * math.pi / big_omega
for a in (math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3):
    theta = a / 2
    # choose omega so that da/dt = 0 and db/dt = big_omega on the loop
    omega = big_omega / (SU2.m * math.cos(theta) - SU2.scale * math.sin(theta) / math.tan(a))
    p = Protocol(omega, theta, Winding(big_omega), T)
    sol = solve_auxiliary(p, AuxiliaryState(a, 0.0), step=T / 2000)
    ph = phases(sol, p, 1.0, build_representation(SU2, 1))
    print(f"a = {a:.4f}: phi_g = {ph.phi_g[-1]:.12f}, solid angle = {solid_angle_phase(a, 1.0, SU2.m):.12f}, "
          f"phi_d = {ph.phi_d[-1]:.6f}")
