"""
With the pump on, the gas becomes transparent at the pump frequency.

chi_p vanishes exactly at delta_omega = 0 and the absorption splits into two
peaks near +-sqrt(2) Omega_p.  The slope of n_p at the pump frequency sets
the group velocity; its curvature tells us when a linear expansion of n_p is
good enough for a pulse of spectral width sigma_omega.
"""

import numpy as np

from vscpt import domain, eit
from vscpt import susceptibility as sus

from _common import pyplot, save

rb = domain.preset_species("rb87")
rabi = 1e7
grid = np.linspace(-4e7, 4e7, 801)
curve = eit.dispersion_curve(rb, rabi, grid)

print("chi_p at the pump frequency:", sus.chi_p(rb, rabi, 0.0, 0.0))
absorbing = grid[np.argmin(curve.imag[grid < 0])], grid[grid > 0][np.argmin(curve.imag[grid > 0])]
print(f"absorption peaks at {absorbing[0]:.3g} and {absorbing[1]:.3g} 1/s "
      f"(sqrt(2) Omega = {np.sqrt(2) * rabi:.3g})")

sample = domain.GasSample(2e16, 0.1)
slope = sus.n_p_prime(rb, sample, rabi)
print(f"n_p' = {slope.real:.4g} s/m  ->  v_g ~ {1 / abs(slope):.3g} m/s")
for sig in (5e5, 1e6, 3e6):
    err = sig * abs(sus.n_p_curvature_ratio(rb, rabi))
    print(f"sigma_omega = {sig:.0e}: sigma |n''/n'| = {err:.3f}")

plt = pyplot()
if plt:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(grid, curve.real * 1e7, "k-", label="Re")
    ax.plot(grid, curve.imag * 1e7, "k--", label="Im")
    ax.set_xlabel(r"$\Delta_s$ (1/s)")
    ax.set_ylabel(r"$\chi_p$ ($10^{-7}$ s)")
    ax.legend()
    save(fig, "03_eit_dispersion.png")
