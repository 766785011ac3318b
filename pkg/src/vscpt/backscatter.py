"""
Steady-state forward/backward envelopes of a cw signal in the ideal gas.

The envelopes obey

    d/dz (E1, E2) = [[-i n0, i n0], [-i n0, i (n0 - 2 dk)]] (E1, E2)

on 0 <= z <= a with E1(0) = E0 and E2(a) = 0.  Three solvers are provided:
the closed form, its small-|a delta| linearisation, and a shooting
integration used as an independent check of the closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import susceptibility as sus
from .domain import C, AtomSpecies, EnvelopePair, GasSample, ProbeConfig
from .errors import ParameterError, SolverError

DEFAULT_POINTS = 2001
SERIES_THRESHOLD = 1e-8


@dataclass(frozen=True)
class BvpSolution:
    envelopes: EnvelopePair
    n0: complex
    delta_k: float
    delta: complex
    reflectivity: float
    transmissivity: float
    a_delta: float
    svea_ratio: float
    method: str

    @property
    def E0(self) -> complex:
        return self.envelopes.e1[0]


def coupling_matrix(n0: complex, delta_k: float) -> np.ndarray:
    return np.array([[-1j * n0, 1j * n0], [-1j * n0, 1j * (n0 - 2.0 * delta_k)]])


def delta_parameter(n0: complex, delta_k: float) -> complex:
    """delta = sqrt((2 n0 - dk) dk), principal branch."""
    return complex(np.sqrt(complex((2.0 * n0 - delta_k) * delta_k)))


def _sinh_over(delta: complex, x):
    # sinh(delta x) / delta, continuous through delta = 0
    x = np.asarray(x, dtype=float)
    if abs(delta) * np.max(np.abs(x), initial=0.0) < SERIES_THRESHOLD:
        return x * (1.0 + (delta * x) ** 2 / 6.0)
    return np.sinh(delta * x) / delta


def exact_envelopes(n0: complex, delta_k: float, length: float, z, E0: complex = 1.0,
                    delta: Optional[complex] = None):
    """Closed-form (E1, E2) on ``z``; ``delta`` may be given to pick a branch."""
    z = np.asarray(z, dtype=float)
    if delta is None:
        delta = delta_parameter(n0, delta_k)
    w = 1j * (n0 - delta_k)
    denom = np.cosh(delta * length) + w * _sinh_over(delta, length)
    s = _sinh_over(delta, length - z)
    carrier = np.exp(-1j * delta_k * z)
    e1 = E0 * (np.cosh(delta * (length - z)) + w * s) / denom * carrier
    e2 = E0 * (1j * n0 * s) / denom * carrier
    return e1, e2


def linearized_envelopes(n0: complex, length: float, z, E0: complex = 1.0):
    z = np.asarray(z, dtype=float)
    denom = n0 * length - 1j
    e1 = E0 * (1.0 - n0 * z / denom)
    e2 = E0 * n0 * (length - z) / denom
    return e1 * np.ones_like(z, dtype=complex), e2 * np.ones_like(z, dtype=complex)


def shooting_envelopes(n0: complex, delta_k: float, length: float, z, E0: complex = 1.0,
                       rtol: float = 1e-12, max_condition: float = 1e10):
    """Integrate two fundamental solutions from z = 0 and combine them so
    that E1(0) = E0 and E2(a) = 0."""
    z = np.asarray(z, dtype=float)
    m = coupling_matrix(n0, delta_k)

    def rhs(_, y):
        return m @ y

    fundamentals = []
    for y0 in ((1.0 + 0j, 0j), (0j, 1.0 + 0j)):
        sol = solve_ivp(rhs, (0.0, length), np.array(y0), method="DOP853",
                        t_eval=np.clip(z, 0.0, length), rtol=rtol, atol=rtol * 1e-3)
        if not sol.success:
            raise SolverError(f"shooting integration failed: {sol.message}")
        fundamentals.append(sol.y)
    ya, yb = fundamentals
    shoot = np.array([[1.0, 0.0], [ya[1, -1], yb[1, -1]]], dtype=complex)
    cond = np.linalg.cond(shoot)
    if not np.isfinite(cond) or cond > max_condition:
        raise SolverError(
            f"shooting matrix is ill-conditioned (cond={cond:.3e}); "
            "|a delta| is too large for shooting, use the exact solver"
        )
    coef = np.linalg.solve(shoot, np.array([E0, 0.0], dtype=complex))
    y = coef[0] * ya + coef[1] * yb
    return y[0], y[1]


def _grid(sample: GasSample, zgrid):
    if zgrid is None:
        return np.linspace(0.0, sample.length, DEFAULT_POINTS)
    zgrid = np.asarray(zgrid, dtype=float)
    if zgrid.ndim != 1 or zgrid.size < 2 or np.any(np.diff(zgrid) <= 0):
        raise ParameterError("zgrid: must be a strictly increasing 1-D array")
    if zgrid[0] != 0.0 or not np.isclose(zgrid[-1], sample.length, rtol=1e-12, atol=0):
        raise ParameterError("zgrid: must start at 0 and end at the sample length")
    return zgrid


def _n0_for(species, sample, probe):
    if probe.rabi_p > 0:
        raise ParameterError("rabi_p: the backscatter solvers describe the pump-off gas")
    return complex(sus.n0(species, sample, probe.omega_s, probe.delta_s, probe.delta_k))


def _svea_ratio(m, e1, e2, k_s):
    # E' = M E and E'' = M^2 E exactly for the constant-coefficient system
    e = np.vstack([e1, e2])
    d1 = m @ e
    d2 = m @ d1
    num = np.abs(d2)
    den = k_s * np.abs(d1)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(den > 0, num / den, 0.0)
    return float(np.max(r))


def _package(method, zgrid, e1, e2, n0, probe, sample):
    dk = probe.delta_k
    delta = delta_parameter(n0, dk)
    E0 = probe.E0
    k_s = probe.omega_s / C
    return BvpSolution(
        envelopes=EnvelopePair(zgrid=zgrid, e1=np.asarray(e1), e2=np.asarray(e2)),
        n0=n0,
        delta_k=dk,
        delta=delta,
        reflectivity=float(abs(e2[0] / E0) ** 2),
        transmissivity=float(abs(e1[-1] / E0) ** 2),
        a_delta=float(abs(sample.length * delta)),
        svea_ratio=_svea_ratio(coupling_matrix(n0, dk), e1, e2, k_s),
        method=method,
    )


def solve_exact(species: AtomSpecies, sample: GasSample, probe: ProbeConfig, zgrid=None) -> BvpSolution:
    """Closed-form envelopes for arbitrary real delta_k."""
    zgrid = _grid(sample, zgrid)
    n = _n0_for(species, sample, probe)
    e1, e2 = exact_envelopes(n, probe.delta_k, sample.length, zgrid, probe.E0)
    return _package("exact", zgrid, e1, e2, n, probe, sample)


def solve_linearized(species: AtomSpecies, sample: GasSample, probe: ProbeConfig, zgrid=None) -> BvpSolution:
    """Small-|a delta|, delta_k -> 0 form.  Check ``a_delta`` on the result
    before trusting it."""
    zgrid = _grid(sample, zgrid)
    n = _n0_for(species, sample, probe)
    e1, e2 = linearized_envelopes(n, sample.length, zgrid, probe.E0)
    return _package("linearized", zgrid, e1, e2, n, probe, sample)


def solve_numeric_oracle(species: AtomSpecies, sample: GasSample, probe: ProbeConfig, zgrid=None) -> BvpSolution:
    """Shooting solution of the two-point problem (adaptive RK, rtol 1e-12)."""
    zgrid = _grid(sample, zgrid)
    n = _n0_for(species, sample, probe)
    e1, e2 = shooting_envelopes(n, probe.delta_k, sample.length, zgrid, probe.E0)
    return _package("shooting", zgrid, e1, e2, n, probe, sample)
