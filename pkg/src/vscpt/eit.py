"""
Signal pulses with the pump on: dispersion, closed-form fields and maps.

Fields are envelopes relative to the pump-frequency carrier.  The incident
spectrum is a Gaussian of amplitude width sigma_omega whose linear phase
places the incident peak at z = 0 at t = 4 / sigma_omega.  With n_p linearised
about the pump frequency, the frequency integrals reduce to Faddeeva
functions (one simple pole per field).  ``fields_quadrature_oracle``
evaluates the same integrals numerically, optionally with the full n_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize

from . import susceptibility as sus
from .domain import C, AtomSpecies, ComplexResponse, GasSample
from .errors import ParameterError, SolverError
from .faddeeva import wofz_scaled

LEAD = 4.0
VALIDITY_LIMIT = 0.1


@dataclass(frozen=True)
class EitPulseParams:
    species: AtomSpecies
    sample: GasSample
    rabi_p: float
    sigma_omega: float
    E0: float = 1.0
    pump_detuning: float = 0.0
    np_prime: complex = field(init=False)

    def __post_init__(self):
        if not self.rabi_p > 0:
            raise ParameterError(f"rabi_p: must be > 0, got {self.rabi_p!r}")
        if not self.sigma_omega > 0:
            raise ParameterError(f"sigma_omega: must be > 0, got {self.sigma_omega!r}")
        slope = sus.n_p_prime(self.species, self.sample, self.rabi_p, self.pump_detuning)
        object.__setattr__(self, "np_prime", slope)

    @property
    def length(self) -> float:
        return self.sample.length

    @property
    def omega_p(self) -> float:
        return self.species.omega0 + self.pump_detuning

    def linearization_error(self) -> float:
        """sigma_omega |n_p''/n_p'|: relative size of the neglected curvature."""
        ratio = sus.n_p_curvature_ratio(self.species, self.rabi_p, self.pump_detuning)
        return float(self.sigma_omega * abs(ratio))

    @property
    def linearization_valid(self) -> bool:
        return self.linearization_error() <= VALIDITY_LIMIT


@dataclass(frozen=True)
class EitFieldMap:
    """Intensities |E|^2/E0^2 with shape (len(tgrid), len(zgrid))."""

    zgrid: np.ndarray
    tgrid: np.ndarray
    i1: np.ndarray
    i2: np.ndarray
    peak_times: np.ndarray
    group_velocity_inside: float
    group_velocity_outside: float


@dataclass(frozen=True)
class PeakReflection:
    global_peak: float
    z_at_peak: float
    t_at_peak: float
    peak_at_entrance: float
    method: str


def dispersion_curve(species: AtomSpecies, rabi_p: float, delta_s_grid, pump_detuning: float = 0.0) -> ComplexResponse:
    """chi_p along a grid of signal detunings."""
    delta_s = np.asarray(delta_s_grid, dtype=float)
    value = sus.chi_p(species, rabi_p, delta_s, delta_s - pump_detuning)
    return ComplexResponse(omega=delta_s, value=np.asarray(value), unit="s")


def gaussian_spectrum(params: EitPulseParams, omega):
    sig = params.sigma_omega
    x = (np.asarray(omega, dtype=float) - params.omega_p) / sig
    return (params.E0 / sig) * np.exp(1j * LEAD * x) * np.exp(-0.5 * x * x)


def _kappas(params, z, t):
    sig = params.sigma_omega
    k_plus = (t - z / C - LEAD / sig) * sig**2
    k_minus = (t + z / C - LEAD / sig) * sig**2
    return k_plus, k_minus


def _pole_term(params, kappa):
    """exp(-kappa^2 / 2 sigma^2) * h(eta), overflow-safe."""
    sig = params.sigma_omega
    npr = params.np_prime
    b = 1.0 / (params.length * npr)
    eta = (kappa + b) / (math.sqrt(2.0) * sig)
    log_gauss = -(kappa**2) / (2.0 * sig**2)
    pre = math.sqrt(math.pi / 2.0) / (sig * npr)
    if b.real <= 0:
        # pole below the real frequency axis
        return pre * wofz_scaled(-1j * eta, log_gauss)
    return -pre * wofz_scaled(1j * eta, log_gauss)


def fields_closed_form(params: EitPulseParams, z, t):
    """(E1, E2) at broadcast (z, t) from the residue evaluation.

    Outside the slab the fields continue as free waves: E1 incident for
    z < 0, E2 zero for z > a.
    """
    z, t = np.broadcast_arrays(np.asarray(z, dtype=float), np.asarray(t, dtype=float))
    a = params.length
    sig = params.sigma_omega
    zc = np.clip(z, 0.0, a)
    k_plus, k_minus = _kappas(params, z, t)
    g_plus = np.exp(-(k_plus**2) / (2.0 * sig**2))
    g_minus = np.exp(-(k_minus**2) / (2.0 * sig**2))
    if params.np_prime == 0:
        return params.E0 * g_plus.astype(complex), np.zeros(z.shape, complex)
    e1 = g_plus * (1.0 - zc / a) - _pole_term(params, k_plus) * zc / a**2
    e2 = g_minus * (1.0 - zc / a) + _pole_term(params, k_minus) * (a - zc) / a**2
    return params.E0 * e1, params.E0 * e2


def _kernel_n(params, delta, use_full_np):
    if use_full_np:
        omega_s = params.omega_p + delta
        return sus.n_p(params.species, params.sample, omega_s, params.rabi_p, delta, params.pump_detuning)
    return params.np_prime * delta


def fields_quadrature_oracle(params: EitPulseParams, z, t, use_full_np: bool = False,
                             n_omega: int = 4097, span: float = 8.0, tol: float = 1e-8,
                             chunk: int = 256):
    """(E1, E2) by trapezoidal quadrature of the frequency integrals over
    omega_p +- ``span`` sigma_omega.

    The result is checked against the half-resolution rule; a discrepancy
    above ``tol`` E0 raises :class:`SolverError`.
    """
    if n_omega % 2 == 0:
        n_omega += 1
    z, t = np.broadcast_arrays(np.asarray(z, dtype=float), np.asarray(t, dtype=float))
    a = params.length
    sig = params.sigma_omega
    delta = np.linspace(-span * sig, span * sig, n_omega)
    step = delta[1] - delta[0]
    spec = gaussian_spectrum(params, params.omega_p + delta) / math.sqrt(2.0 * math.pi)
    n = _kernel_n(params, delta, use_full_np)
    weights = np.full(n_omega, step)
    weights[[0, -1]] *= 0.5
    coarse = np.zeros(n_omega)
    coarse[::2] = 2.0 * step
    coarse[[0, -1]] = step

    zf = z.ravel()
    tf = t.ravel()
    out1 = np.empty(zf.size, complex)
    out2 = np.empty(zf.size, complex)
    worst = 0.0
    for lo in range(0, zf.size, chunk):
        sl = slice(lo, lo + chunk)
        zc = np.clip(zf[sl], 0.0, a)[:, None]
        denom = n[None, :] * a - 1j
        k1 = spec * (1.0 - n[None, :] * zc / denom)
        k2 = spec * (n[None, :] * (a - zc) / denom)
        ph1 = np.exp(-1j * np.outer(tf[sl] - zf[sl] / C, delta))
        ph2 = np.exp(-1j * np.outer(tf[sl] + zf[sl] / C, delta))
        f1 = k1 * ph1
        f2 = k2 * ph2
        out1[sl] = f1 @ weights
        out2[sl] = f2 @ weights
        worst = max(worst,
                    float(np.max(np.abs(f1 @ coarse - out1[sl]), initial=0.0)),
                    float(np.max(np.abs(f2 @ coarse - out2[sl]), initial=0.0)))
    if worst > tol * abs(params.E0):
        raise SolverError(
            f"frequency quadrature not converged: half-resolution difference {worst:.3e} "
            f"exceeds {tol * abs(params.E0):.3e}"
        )
    return out1.reshape(z.shape), out2.reshape(z.shape)


def _log_parabola_peak(t, y, i):
    # vertex of the parabola through log y at i-1, i, i+1 (exact for Gaussians)
    if i == 0 or i == len(y) - 1 or np.any(y[i - 1 : i + 2] <= 0):
        return t[i]
    l0, l1, l2 = np.log(y[i - 1 : i + 2])
    den = l0 - 2.0 * l1 + l2
    if den >= 0:
        return t[i]
    h = t[i + 1] - t[i]
    return t[i] + 0.5 * h * (l0 - l2) / den


def _fit_velocity(z, tp, mask):
    if np.count_nonzero(mask) < 2:
        return float("nan")
    slope = np.polyfit(tp[mask], z[mask], 1)[0]
    return float(slope)


def intensity_map(params: EitPulseParams, zgrid, tgrid) -> EitFieldMap:
    """Tabulate both intensities and track the incident-pulse peak.

    For each z the arrival time of the E1 maximum is located on the t grid and
    refined by a log-parabola; z(t_peak) is then fitted by least squares
    inside [0.1 a, 0.9 a] and over z < 0.
    """
    zgrid = np.asarray(zgrid, dtype=float)
    tgrid = np.asarray(tgrid, dtype=float)
    if np.any(np.diff(tgrid) <= 0) or np.any(np.diff(zgrid) <= 0):
        raise ParameterError("zgrid/tgrid: must be strictly increasing")
    e1, e2 = fields_closed_form(params, zgrid[None, :], tgrid[:, None])
    scale = abs(params.E0) ** 2
    i1 = np.abs(e1) ** 2 / scale
    i2 = np.abs(e2) ** 2 / scale
    peaks = np.array([_log_parabola_peak(tgrid, i1[:, j], int(np.argmax(i1[:, j]))) for j in range(zgrid.size)])
    a = params.length
    inside = (zgrid > 0.1 * a) & (zgrid < 0.9 * a)
    outside = zgrid < 0
    return EitFieldMap(
        zgrid=zgrid,
        tgrid=tgrid,
        i1=i1,
        i2=i2,
        peak_times=peaks,
        group_velocity_inside=_fit_velocity(zgrid, peaks, inside),
        group_velocity_outside=_fit_velocity(zgrid, peaks, outside),
    )


def default_window(params: EitPulseParams, n: int = 1201) -> np.ndarray:
    """Time grid [0, 12/sigma_omega] stretched by the slab's group delay."""
    delay = abs(params.np_prime) * params.length
    return np.linspace(0.0, 12.0 / params.sigma_omega + 2.0 * delay, n)


def resolve_method(params: EitPulseParams, method: str) -> str:
    if method == "auto":
        return "closed" if params.linearization_valid else "full"
    if method not in ("closed", "full", "linear-quadrature"):
        raise ParameterError(f"method: unknown field model {method!r}")
    return method


def reflected_field(params: EitPulseParams, z, t, method: str = "closed"):
    if method == "closed":
        return fields_closed_form(params, z, t)[1]
    return fields_quadrature_oracle(params, z, t, use_full_np=(method == "full"))[1]


def peak_reflected_intensity(params: EitPulseParams, method: str = "auto", nz: int = 21,
                             nt: int = 1201) -> PeakReflection:
    """Largest |E2|^2/E0^2 over the slab and over time.

    ``method="auto"`` uses the closed form when the linearisation is valid
    and the full-n_p quadrature otherwise.
    """
    method = resolve_method(params, method)
    a = params.length
    z = np.linspace(0.0, a, nz)
    t = default_window(params, nt)
    scale = abs(params.E0) ** 2
    i2 = np.abs(reflected_field(params, z[None, :], t[:, None], method)) ** 2 / scale
    it, iz = np.unravel_index(np.argmax(i2), i2.shape)
    entrance = int(np.argmax(i2[:, 0]))

    def refine(zv, k):
        lo = t[max(k - 1, 0)]
        hi = t[min(k + 1, t.size - 1)]
        res = optimize.minimize_scalar(
            lambda tv: -float(np.abs(reflected_field(params, zv, tv, method)) ** 2) / scale,
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-6 * (hi - lo)},
        )
        return res.x, max(-res.fun, float(i2[k, np.searchsorted(z, zv)]))

    t_best, best = refine(z[iz], it)
    _, at_entrance = refine(0.0, entrance)
    return PeakReflection(
        global_peak=max(best, at_entrance),
        z_at_peak=float(z[iz]) if best >= at_entrance else 0.0,
        t_at_peak=float(t_best),
        peak_at_entrance=at_entrance,
        method=method,
    )
