"""Pump optimization for single-photon blockade.

The parametric pump has one complex degree of freedom G e^{i theta}.  Tuned
to -2 E^2 / m1 it cancels the two-photon amplitude exactly, so photons
arrive one at a time even at weak optomechanical coupling.  This script
prints the optimal pump across a few detunings and shows how far g2(0)
drops when the pump is on.
"""

from dataclasses import replace

from pbsim import (
    default_1pb_params,
    g2_analytic,
    optimal_1pb,
    perturbative_amplitudes,
)

base = default_1pb_params()

print("detuning   G_opt      theta_opt  |c2/c1| pumped   g2 pumped   g2 no pump")
for delta_c in (-2.0, -1.0, 0.0, 1.0, 1.5):
    p = replace(base, delta_c=delta_c)
    pump = optimal_1pb(p)
    pumped = pump.apply(p)
    amps = perturbative_amplitudes(pumped)
    ratio = abs(amps.c2) / abs(amps.c1)
    print(
        f"{delta_c:+8.2f}   {pump.gain:.6f}   {pump.theta:8.4f}  "
        f"{ratio:12.2e}   {g2_analytic(pumped):10.4e}  {g2_analytic(replace(p, gain=0.0)):10.4e}"
    )

print()
print("g2(0) stays finite at the optimum because the three-photon amplitude")
print("survives; it shrinks as the coupling grows (see demo 02).")
