"""
Physical types, unit conventions and species presets.

Everything is SI and every frequency is an angular frequency (s^-1).
Wavenumbers are in m^-1, densities in m^-3 and momenta in kg m s^-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import constants as const

from .errors import ParameterError

HBAR = const.hbar
C = const.c
EPS0 = const.epsilon_0
E_CHARGE = const.e
A0 = const.physical_constants["Bohr radius"][0]
AMU = const.atomic_mass


@dataclass(frozen=True)
class AtomSpecies:
    """Constants of a J=1 <-> J'=1 cooling transition.

    ``recoil`` (E_r = hbar k_p^2 / 2m, in s^-1) is derived from ``mass`` and
    ``kp`` at construction.
    """

    name: str
    mass: float
    gamma: float
    dipole: float
    omega0: float
    kp: float
    recoil: float = field(init=False)

    def __post_init__(self):
        for key in ("mass", "gamma", "dipole", "omega0", "kp"):
            value = getattr(self, key)
            if not (np.isfinite(value) and value > 0):
                raise ParameterError(f"{key}: must be a finite positive number, got {value!r}")
        object.__setattr__(self, "recoil", HBAR * self.kp**2 / (2.0 * self.mass))

    @property
    def Er(self) -> float:
        return self.recoil

    def recoil_shift(self, p):
        """Two-photon recoil frequency omega_r(p) = 2 k_p p / m."""
        return 2.0 * self.kp * np.asarray(p) / self.mass


def _kp_from_recoil(mass: float, recoil: float) -> float:
    # Pin k_p so the derived recoil frequency reproduces the tabulated value.
    return math.sqrt(2.0 * mass * recoil / HBAR)


def _rb87() -> AtomSpecies:
    # 87Rb D1 line, F=1 <-> F'=1 (Steck, "Rubidium 87 D Line Data", rev. 2.2):
    # nu = 377.107463380 THz, m = 86.909180527 u.  E_r, gamma and
    # d = 2.99 e a0 / sqrt(12) are the values used for the backscattering plots.
    mass = 86.909180527 * AMU
    recoil = 2.3e4
    return AtomSpecies(
        name="Rb87",
        mass=mass,
        gamma=3.61e7,
        dipole=2.99 * E_CHARGE * A0 / math.sqrt(12.0),
        omega0=2.0 * math.pi * 377.107463380e12,
        kp=_kp_from_recoil(mass, recoil),
    )


def _he4() -> AtomSpecies:
    # 4He 2^3S_1 <-> 2^3P_1 at 1083.025 nm (vacuum, NIST ASD); m = 4.002603254 u;
    # 2^3P lifetime 97.9 ns (NIST ASD, A = 1.0216e7 s^-1).  The upper m'=0
    # level decays only to m=+-1 with equal weight, so each sigma component
    # carries half the total line strength:
    #     d^2 = 3 pi eps0 hbar c^3 gamma / (2 omega0^3).
    mass = 4.002603254 * AMU
    omega0 = 2.0 * math.pi * C / 1083.025e-9
    gamma = 1.0216e7
    dipole = math.sqrt(3.0 * math.pi * EPS0 * HBAR * C**3 * gamma / (2.0 * omega0**3))
    return AtomSpecies(
        name="He4",
        mass=mass,
        gamma=gamma,
        dipole=dipole,
        omega0=omega0,
        kp=_kp_from_recoil(mass, 2.7e5),
    )


_PRESETS = {"rb87": _rb87, "he4": _he4}


def preset_species(name: str) -> AtomSpecies:
    """Return the built-in constants for ``"Rb87"`` or ``"He4"`` (case-insensitive)."""
    try:
        factory = _PRESETS[name.strip().lower()]
    except (KeyError, AttributeError):
        raise ParameterError(
            f"species: unknown preset {name!r}; expected one of Rb87, He4"
        ) from None
    return factory()


@dataclass(frozen=True)
class GasSample:
    """Slab of prepared gas occupying 0 <= z <= length.

    ``sigma_p = 0`` is the ideal dark state; ``None`` means the achievable
    width hbar k_p / 2 of whichever species the sample is used with.
    """

    density: float
    length: float
    sigma_p: Optional[float] = None

    def __post_init__(self):
        if not (np.isfinite(self.density) and self.density >= 0):
            raise ParameterError(f"density: must be >= 0, got {self.density!r}")
        if not (np.isfinite(self.length) and self.length > 0):
            raise ParameterError(f"length: must be > 0, got {self.length!r}")
        if self.sigma_p is not None and not (np.isfinite(self.sigma_p) and self.sigma_p >= 0):
            raise ParameterError(f"sigma_p: must be >= 0, got {self.sigma_p!r}")

    def momentum_width(self, species: AtomSpecies) -> float:
        if self.sigma_p is None:
            return HBAR * species.kp / 2.0
        return self.sigma_p


@dataclass(frozen=True)
class ProbeConfig:
    """Signal field (and pump, when ``rabi_p > 0``).

    Use :meth:`from_detuning` to build a configuration that is consistent
    with a species.
    """

    omega_s: float
    delta_s: float
    delta_k: float
    E0: float = 1.0
    sigma_omega: float = 0.0
    omega_p: float = 0.0
    rabi_p: float = 0.0

    def __post_init__(self):
        if not self.omega_s > 0:
            raise ParameterError(f"omega_s: must be > 0, got {self.omega_s!r}")
        if self.sigma_omega < 0:
            raise ParameterError(f"sigma_omega: must be >= 0, got {self.sigma_omega!r}")
        if self.rabi_p < 0:
            raise ParameterError(f"rabi_p: must be >= 0, got {self.rabi_p!r}")

    @classmethod
    def from_detuning(
        cls,
        species: AtomSpecies,
        delta_s: float,
        *,
        E0: float = 1.0,
        sigma_omega: float = 0.0,
        rabi_p: float = 0.0,
        pump_detuning: float = 0.0,
        delta_k: Optional[float] = None,
    ) -> "ProbeConfig":
        """Signal detuned by ``delta_s`` from resonance, pump at omega0 + pump_detuning.

        By default ``delta_k = (omega_s - omega_p) / c``.
        """
        omega_s = species.omega0 + delta_s
        omega_p = species.omega0 + pump_detuning
        if delta_k is None:
            delta_k = (delta_s - pump_detuning) / C
        return cls(
            omega_s=omega_s,
            delta_s=delta_s,
            delta_k=delta_k,
            E0=E0,
            sigma_omega=sigma_omega,
            omega_p=omega_p,
            rabi_p=rabi_p,
        )

    @property
    def delta_omega(self) -> float:
        """Signal-pump frequency difference omega_s - omega_p."""
        return self.omega_s - self.omega_p

    def validate(self, species: AtomSpecies) -> None:
        """Raise :class:`ParameterError` if inconsistent with ``species``."""
        expected = self.omega_s - species.omega0
        if abs(self.delta_s - expected) > 1e-12 * self.omega_s:
            raise ParameterError(
                f"delta_s: {self.delta_s!r} disagrees with omega_s - omega0 = {expected!r}"
            )
        if self.rabi_p > 0:
            dw = self.omega_s - self.omega_p
            if abs(self.delta_k * C - dw) > 1e-12 * self.omega_s:
                raise ParameterError(
                    f"delta_k: c*delta_k = {self.delta_k * C!r} must equal omega_s - omega_p = {dw!r}"
                )


@dataclass(frozen=True)
class ComplexResponse:
    """Complex response values tabulated against a frequency argument.

    ``unit`` names the unit of ``value``: ``"s"`` for susceptibilities,
    ``"1/m"`` for refractive responses.
    """

    omega: np.ndarray
    value: np.ndarray
    unit: str

    @property
    def real(self) -> np.ndarray:
        return np.real(self.value)

    @property
    def imag(self) -> np.ndarray:
        return np.imag(self.value)


@dataclass(frozen=True)
class EnvelopePair:
    """Forward (e1) and backward (e2) complex envelopes on a grid.

    Steady-state fields are 1-D over ``zgrid``; time-dependent fields have
    shape ``(len(tgrid), len(zgrid))``.
    """

    zgrid: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    tgrid: Optional[np.ndarray] = None

    def __post_init__(self):
        shape = (len(self.zgrid),) if self.tgrid is None else (len(self.tgrid), len(self.zgrid))
        if np.shape(self.e1) != shape or np.shape(self.e2) != shape:
            raise ParameterError(
                f"envelope shapes {np.shape(self.e1)}, {np.shape(self.e2)} do not match grid {shape}"
            )

    @property
    def i1(self) -> np.ndarray:
        return np.abs(self.e1) ** 2

    @property
    def i2(self) -> np.ndarray:
        return np.abs(self.e2) ** 2


def momentum_distribution(sample: GasSample, p, species: Optional[AtomSpecies] = None):
    """Gaussian momentum density f(p) of the prepared gas, in (kg m/s)^-1.

    ``species`` is only needed when ``sample.sigma_p`` is left at its default.
    """
    if sample.sigma_p is None:
        if species is None:
            raise ParameterError("sigma_p: default width needs a species")
        sigma = sample.momentum_width(species)
    else:
        sigma = sample.sigma_p
    if sigma <= 0:
        raise ParameterError("sigma_p: the ideal state (sigma_p = 0) has no momentum density")
    p = np.asarray(p, dtype=float)
    return np.exp(-(p**2) / (2.0 * sigma**2)) / (math.sqrt(2.0 * math.pi) * sigma)
