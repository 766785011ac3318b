"""
Linear response of the prepared gas to a weak signal.

Sign convention: the susceptibilities are inverses of
``(shift) + i gamma/2 + Delta_s`` and therefore have a *negative* imaginary
part for an absorbing medium.  The envelope equations use ``-i n`` on the
diagonal, so ``Im n < 0`` attenuates the field.

All functions broadcast over array-valued detunings / momenta / times.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from .domain import C, EPS0, HBAR, AtomSpecies, GasSample
from .errors import ParameterError, SolverError


@dataclass(frozen=True)
class DephasingContext:
    species: AtomSpecies
    sample: GasSample
    time: float

    def __post_init__(self):
        if not self.time >= 0:
            raise ParameterError(f"time: must be >= 0, got {self.time!r}")


@dataclass(frozen=True)
class DephasingIntegrals:
    """Momentum-averaged responses and their constant-chi approximations."""

    i_alpha: complex
    i_beta: complex
    chi0: complex
    chi0_g: complex
    abserr: float


def coupling_prefactor(species: AtomSpecies, sample: GasSample, omega_s):
    """omega_s^2 rho |d|^2 / (2 c^2 eps0 hbar) / (2 k_s), in s^-1 m^-1.

    Multiplying a susceptibility (units of s) gives a wavenumber shift.
    """
    omega_s = np.asarray(omega_s, dtype=float)
    return omega_s * sample.density * species.dipole**2 / (4.0 * C * EPS0 * HBAR)


def chi0(species: AtomSpecies, delta_s, delta_k=0.0):
    """Pump-off susceptibility of the ideal dark state (s)."""
    delta_s = np.asarray(delta_s, dtype=float)
    delta_k = np.asarray(delta_k, dtype=float)
    shift = species.recoil - HBAR * delta_k**2 / (2.0 * species.mass)
    return 1.0 / (shift + 0.5j * species.gamma + delta_s)


def n0(species: AtomSpecies, sample: GasSample, omega_s, delta_s, delta_k=0.0):
    """Coupling wavenumber n0 (m^-1) entering the envelope equations."""
    return coupling_prefactor(species, sample, omega_s) * chi0(species, delta_s, delta_k)


def chi_p_momentum(species: AtomSpecies, delta_s, p):
    """Susceptibility of the dark-state component with momentum ``p`` (s)."""
    delta_s = np.asarray(delta_s, dtype=float)
    omega_r = species.recoil_shift(p)
    return 1.0 / (species.recoil + 0.5j * species.gamma + delta_s - 0.5 * omega_r)


def dephasing_factor(species: AtomSpecies, t, sigma_p: Optional[float] = None):
    """Coherence decay g(t) of the backscattered field.

    For the default width sigma_p = hbar k_p / 2 this is exp(-2 E_r^2 t^2);
    in general exp(-(omega_r(sigma_p) t)^2 / 2).
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ParameterError("t: dephasing factor is defined for t >= 0")
    if sigma_p is None:
        return np.exp(-2.0 * species.recoil**2 * t**2)
    rate = species.recoil_shift(sigma_p)
    return np.exp(-0.5 * (rate * t) ** 2)


def _quad_complex(fn, lo, hi, epsabs, limit=400):
    parts = []
    err = 0.0
    for take in (np.real, np.imag):
        out = integrate.quad(
            lambda u: float(take(fn(u))), lo, hi, epsabs=epsabs, epsrel=1e-12,
            limit=limit, full_output=1,
        )
        val, abserr = out[0], out[1]
        # quad appends a message only when it did not converge
        if len(out) > 3 and abserr > max(epsabs, 1e-12 * abs(val)):
            raise SolverError(
                f"momentum quadrature did not converge: achieved abs error {abserr:.3e}, "
                f"requested {epsabs:.3e} ({out[3]})"
            )
        parts.append(val)
        err = max(err, abserr)
    return complex(parts[0], parts[1]), err


def dephasing_integrals(ctx: DephasingContext, delta_s: float, span: float = 8.0) -> DephasingIntegrals:
    """Average the momentum-resolved susceptibility over f(p).

    I_alpha = int chi(p) f(p) dp and I_beta = int chi(p) f(p) exp(i omega_r(p) t) dp,
    integrated adaptively over +-``span`` sigma_p.
    """
    species, sample = ctx.species, ctx.sample
    sigma = sample.momentum_width(species)
    if sigma <= 0:
        raise ParameterError("sigma_p: momentum averages need sigma_p > 0")
    ref = complex(chi0(species, delta_s))
    epsabs = 1e-12 * abs(ref)
    norm = 1.0 / np.sqrt(2.0 * np.pi)

    def alpha(u):
        return chi_p_momentum(species, delta_s, u * sigma) * norm * np.exp(-0.5 * u * u)

    def beta(u):
        phase = np.exp(1j * species.recoil_shift(u * sigma) * ctx.time)
        return alpha(u) * phase

    i_alpha, ea = _quad_complex(alpha, -span, span, epsabs)
    i_beta, eb = _quad_complex(beta, -span, span, epsabs)
    g = float(dephasing_factor(species, ctx.time, sample.sigma_p))
    return DephasingIntegrals(i_alpha, i_beta, ref, ref * g, max(ea, eb))


def chi_p(species: AtomSpecies, rabi_p, delta_s, delta_omega):
    """Pump-on susceptibility (s); exactly zero at delta_omega = 0."""
    delta_s = np.asarray(delta_s, dtype=float)
    delta_omega = np.asarray(delta_omega, dtype=float)
    if np.any(np.asarray(rabi_p) < 0):
        raise ParameterError("rabi_p: must be >= 0")
    denom = delta_omega * (species.recoil + 0.5j * species.gamma + delta_s) - 2.0 * np.abs(rabi_p) ** 2
    zero = delta_omega == 0
    safe = np.where(zero, 1.0, denom)
    out = np.where(zero, 0.0 + 0.0j, delta_omega / safe)
    return out[()] if out.ndim == 0 else out


def n_p(species: AtomSpecies, sample: GasSample, omega_s, rabi_p, delta_omega, pump_detuning=0.0):
    """Pump-on coupling wavenumber (m^-1).

    The signal detuning follows from delta_s = delta_omega + (omega_p - omega0).
    """
    delta_omega = np.asarray(delta_omega, dtype=float)
    delta_s = delta_omega + pump_detuning
    return coupling_prefactor(species, sample, omega_s) * chi_p(species, rabi_p, delta_s, delta_omega)


def n_p_prime(species: AtomSpecies, sample: GasSample, rabi_p: float, pump_detuning: float = 0.0) -> complex:
    """d n_p / d omega_s at omega_s = omega_p (s m^-1).

    chi_p vanishes at the pump frequency, so only the slope of chi_p
    survives: -1 / (2 |Omega_p|^2), independent of the pump detuning.
    """
    if rabi_p <= 0:
        raise ParameterError("rabi_p: the EIT slope needs a pump (rabi_p > 0)")
    omega_p = species.omega0 + pump_detuning
    return complex(-coupling_prefactor(species, sample, omega_p) / (2.0 * rabi_p**2))


def n_p_curvature_ratio(species: AtomSpecies, rabi_p: float, pump_detuning: float = 0.0) -> complex:
    """n_p''/n_p' at the pump frequency (s).

    From chi_p = x / (x (B + x) - 2 Omega^2) with B = E_r + i gamma/2 + pump
    detuning: chi'' / chi' = B / Omega^2; the omega_s in the prefactor adds
    2 / omega_p.
    """
    b = species.recoil + 0.5j * species.gamma + pump_detuning
    omega_p = species.omega0 + pump_detuning
    return b / rabi_p**2 + 2.0 / omega_p
