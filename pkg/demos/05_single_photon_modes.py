"""
One photon, two modes.

Quantising the two counter-propagating signal modes, the gas acts like a
lossy beam splitter: a single sigma+ photon leaves in a superposition of the
forward sigma+ and backward sigma- modes.  Direction and polarisation of one
photon are then entangled.  The loss is visible as a norm below one.
"""

import numpy as np

from vscpt import domain, quantum

rb = domain.preset_species("rb87")
sample = domain.GasSample(2e16, 0.01, 0.0)
probe = domain.ProbeConfig.from_detuning(rb, 3e6)

beta = quantum.coupling_beta(rb, sample, probe, pump_on=False)
print(f"beta = c n0 = {beta:.4g} 1/s")

photon = quantum.TwoModeState.fock(1, 0)
for frac in (0.25, 0.5, 1.0):
    t = frac * np.pi / (4 * beta.real)
    out = quantum.evolve_state(photon, quantum.ModeMixer(beta, probe.omega_s, t))
    alpha, back = out.amplitude(1, 0), out.amplitude(0, 1)
    print(f"t = {t:.3e} s: |alpha|^2 = {abs(alpha) ** 2:.4f}, |beta'|^2 = {abs(back) ** 2:.4f}, "
          f"norm = {out.norm:.4f}, concurrence = {quantum.concurrence_single_photon(out):.4f}")

# Two photons on a balanced lossless splitter bunch (no |1,1> output).
mix = quantum.ModeMixer(1e9, probe.omega_s, np.pi / 4e9)
pair = quantum.evolve_state(quantum.TwoModeState.fock(1, 1), mix)
print("two photons:", {k: round(abs(v) ** 2, 6) for k, v in pair.to_dict(1e-12).items()})
