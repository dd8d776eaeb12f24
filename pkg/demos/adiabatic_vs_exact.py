"""
When does the adiabatic decoherence formula hold?

One branch sweeps theta linearly, the other holds it fixed. The exact
factor (integrated auxiliary equations) is compared with the adiabatic one
as the field strength omega grows; the gap closes like 1/omega. A direct
propagation of the Schrodinger equation confirms the exact solution.
"""

import numpy as np

from lrdecoherence import (
    SU2,
    Linear,
    Protocol,
    adiabatic_solution,
    build_representation,
    decoherence_matrix_element,
    lr_trajectory,
    phases,
    propagate,
    solve_auxiliary,
)

j, T, step = 1, 4.0, 1e-3
rep = build_representation(SU2, j)
lam = rep.highest_weight
for omega in (1.0, 4.0, 16.0, 64.0):
    pi = Protocol(omega, Linear(0.4, 0.2), 0.0, T, "i")
    pj = Protocol(omega, 0.4, 0.0, T, "j")
    exact = decoherence_matrix_element(rep, solve_auxiliary(pi, step=step), solve_auxiliary(pj, step=step), lam)
    adia = decoherence_matrix_element(rep, adiabatic_solution(pi, step=step), adiabatic_solution(pj, step=step), lam)
    gap = np.max(np.abs(exact.abs_F - adia.abs_F))
    print(f"omega = {omega:5.1f}: |F(T)| exact {exact.abs_F[-1]:.6f}, adiabatic {adia.abs_F[-1]:.6f}, max gap {gap:.2e}")

# oracle check of the omega = 1 branch
p = Protocol(1.0, Linear(0.4, 0.2), 0.0, T)
sol = solve_auxiliary(p, step=step)
lr = lr_trajectory(rep, sol, p, lam, phases(sol, p, lam, rep))
brute = propagate(rep, p, lr.states[0], T, step)
print(f"oracle: max |<psi_oracle|psi_LR>| deficit = {1 - np.min(np.abs(np.sum(brute.states.conj() * lr.states, axis=1))):.1e}")
