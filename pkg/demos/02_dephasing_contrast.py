"""
Why helium washes the effect out and rubidium does not.

A real VSCPT gas has a finite momentum width.  The backscattered field then
loses coherence as g(t) = exp(-2 E_r^2 t^2) after the cooling light is
switched off.  He has a recoil frequency about ten times larger than Rb, so
its coherence is gone within a few microseconds.  We propagate Gaussian
pulses through both gases and compare against the ideal (sigma_p = 0) gas.
"""

import warnings

import numpy as np

from vscpt import domain, pulse

from _common import pyplot, save

rb = domain.preset_species("rb87")
he = domain.preset_species("he4")

for sp in (he, rb):
    t_half = np.sqrt(np.log(2) / 2) / sp.recoil
    print(f"{sp.name}: E_r = {sp.recoil:.3g} 1/s, g falls to 1/2 after {t_half * 1e6:.2f} us")


def efficiency(species, fwhm, sigma_p):
    sample = domain.GasSample(2e16, 0.01, sigma_p)
    probe = domain.ProbeConfig.from_detuning(species, 3e6)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return pulse.propagate_pulse(species, sample, probe, fwhm=fwhm)


runs = {}
for sp, fwhm in ((he, 2e-6), (rb, 4e-6)):
    real = efficiency(sp, fwhm, None)
    ideal = efficiency(sp, fwhm, 0.0)
    runs[sp.name] = real
    print(f"{sp.name}, {fwhm * 1e6:.0f} us pulse: efficiency {real.efficiency:.4f} "
          f"(ideal gas {ideal.efficiency:.4f}, ratio {real.efficiency / ideal.efficiency:.3f})")

plt = pyplot()
if plt:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    for sp, style in ((he, "k-"), (rb, "k--")):
        t, g = pulse.dephasing_curve(sp, 1e-5)
        ax1.plot(t * 1e6, g, style, label=sp.name)
    ax1.set_xlabel("t (us)")
    ax1.set_ylabel("g(t)")
    ax1.legend()
    for name, run in runs.items():
        ax2.plot(run.trace_t * 1e6, run.reflected / run.incident.max(), label=name)
    ax2.set_xlabel("t (us)")
    ax2.set_ylabel("reflected intensity at z = 0")
    ax2.legend()
    save(fig, "02_dephasing_contrast.png")
