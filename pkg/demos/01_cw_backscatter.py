"""
cw backscattering off an ideal VSCPT gas of 87Rb.

A weak sigma+ signal enters a 1 cm slab (2e10 atoms / cm^3) detuned by
3e6 s^-1 from resonance.  The gas couples it into a counter-propagating
sigma- beam.  We compare the closed-form envelopes with the small-|a delta|
form and with a shooting integration of the same two-point problem.
"""

import numpy as np

from vscpt import backscatter as bs
from vscpt import domain

from _common import pyplot, save

rb = domain.preset_species("rb87")
sample = domain.GasSample(density=2e16, length=0.01, sigma_p=0.0)
probe = domain.ProbeConfig.from_detuning(rb, delta_s=3e6)

exact = bs.solve_exact(rb, sample, probe)
lin = bs.solve_linearized(rb, sample, probe)
shoot = bs.solve_numeric_oracle(rb, sample, probe)

print(f"n0 = {exact.n0:.4g} 1/m, |a delta| = {exact.a_delta:.3g}")
print(f"reflected fraction  exact {exact.reflectivity:.5f}   linearised {lin.reflectivity:.5f}")
print(f"transmitted fraction {exact.transmissivity:.5f}")
print(f"lost to spontaneous emission {1 - exact.reflectivity - exact.transmissivity:.5f}")
gap = np.max(np.abs(exact.envelopes.e2 - shoot.envelopes.e2))
print(f"closed form vs shooting: max |dE2| = {gap:.2e}")

# Reflectivity against density: it saturates once |n0 a| >> 1.
for rho_cm3 in (1e9, 1e10, 2e10, 1e11):
    s = domain.GasSample(rho_cm3 * 1e6, 0.01, 0.0)
    print(f"  rho = {rho_cm3:7.0e} cm^-3  ->  R = {bs.solve_exact(rb, s, probe).reflectivity:.4f}")

plt = pyplot()
if plt:
    z_mm = exact.envelopes.zgrid * 1e3
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(z_mm, exact.envelopes.i1, "k-", label="incoming")
    ax.plot(z_mm, exact.envelopes.i2, "k--", label="reflected")
    ax.set_xlabel("z (mm)")
    ax.set_ylabel(r"$|E|^2 / E_0^2$")
    ax.legend()
    save(fig, "01_cw_backscatter.png")
