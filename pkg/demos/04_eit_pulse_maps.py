"""
A Gaussian pulse entering the EIT slab.

Inside the medium the pulse slows down to roughly 1/|n_p'|; its front and
back edges reflect off the two faces of the slab and produce two separate
backscattered pulses.  The closed form (Faddeeva functions) is checked
against direct Fourier quadrature, and the strong-coupling parameter set is
evaluated with the full n_p because the linear expansion is poor there.
"""

import numpy as np

from vscpt import domain, eit

from _common import pyplot, save

rb = domain.preset_species("rb87")
weak = eit.EitPulseParams(rb, domain.GasSample(2e16, 0.1), rabi_p=1e7, sigma_omega=5e5)
strong = eit.EitPulseParams(rb, domain.GasSample(1e17, 0.01), rabi_p=5e6, sigma_omega=1e6)

a = weak.length
z = np.linspace(-0.5 * a, 1.5 * a, 161)
t = np.linspace(0.0, 30e-6, 601)
fmap = eit.intensity_map(weak, z, t)
print(f"group velocity inside  {fmap.group_velocity_inside:.4g} m/s")
print(f"group velocity outside {fmap.group_velocity_outside:.6g} m/s")

zs, ts = z[::16][None, :], t[::60][:, None]
closed = eit.fields_closed_form(weak, zs, ts)[1]
quad = eit.fields_quadrature_oracle(weak, zs, ts)[1]
print(f"closed form vs quadrature: max |dE2| = {np.max(np.abs(closed - quad)):.2e}")

for label, params in (("weak", weak), ("strong", strong)):
    peak = eit.peak_reflected_intensity(params)
    print(f"{label:6s}: sigma|n''/n'| = {params.linearization_error():.2f}, "
          f"peak reflected {peak.global_peak:.3f} ({peak.method})")

plt = pyplot()
if plt:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), sharey=True)
    for ax, data, title in zip(axes, (fmap.i1, fmap.i2), ("incoming", "reflected")):
        ax.contourf(z * 100, t * 1e6, data, levels=20, cmap="Greys")
        ax.axvline(0, color="k", lw=0.5)
        ax.axvline(a * 100, color="k", lw=0.5)
        ax.set_xlabel("z (cm)")
        ax.set_title(title)
    axes[0].set_ylabel("t (us)")
    save(fig, "04_eit_pulse_maps.png")
