"""
Two quantized signal modes coupled through the gas.

The reduced annihilation operators obey

    d/dt (a1, a2) = -i omega_s (a1, a2) + i beta [[-1, 1], [1, -1]] (a1, a2)

with beta = c n_x, whose solution is the transfer matrix

    M(t) = exp(-i (beta + omega_s) t) [[cos bt, i sin bt], [i sin bt, cos bt]].

With the envelope sign convention used throughout the package, an absorbing
gas has Im beta < 0, so |exp(-i beta t)| <= 1.  A positive imaginary part
would amplify the modes and is rejected.  Absorption appears as a shrinking
state norm; the reservoir that takes up the lost amplitude is not modelled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from . import susceptibility as sus
from .domain import C, AtomSpecies, GasSample, ProbeConfig
from .errors import ParameterError

DEFAULT_CUTOFF = 4


def transfer_matrix(beta: complex, omega_s: float, t: float) -> np.ndarray:
    bt = beta * t
    # carrier phase as its own factor: omega_s t is ~1e5 rad, and rounding
    # (beta + omega_s) t as one number costs accuracy in the beta t part
    phase = np.exp(-1j * omega_s * t) * np.exp(-1j * bt)
    c, s = np.cos(bt), np.sin(bt)
    return phase * np.array([[c, 1j * s], [1j * s, c]], dtype=complex)


def generator(beta: complex, omega_s: float) -> np.ndarray:
    """Right-hand-side matrix G with d/dt a = G a."""
    return -1j * omega_s * np.eye(2) + 1j * beta * np.array([[-1.0, 1.0], [1.0, -1.0]])


@dataclass(frozen=True)
class ModeMixer:
    beta: complex
    omega_s: float
    time: float
    matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.time >= 0:
            raise ParameterError(f"t: must be >= 0, got {self.time!r}")
        beta = complex(self.beta)
        if beta.imag > 0:
            raise ParameterError(
                f"beta: Im(beta) = {beta.imag:.3e} > 0 would amplify the modes; "
                "an absorbing gas has Im(beta) <= 0"
            )
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "matrix", transfer_matrix(beta, self.omega_s, self.time))

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.matrix, compute_uv=False)


def coupling_beta(species: AtomSpecies, sample: GasSample, probe: ProbeConfig, pump_on: bool) -> complex:
    """beta = c n_x with n_x = n_p (pump on) or n0 (pump off)."""
    if pump_on:
        if probe.rabi_p <= 0:
            raise ParameterError("rabi_p: pump_on needs rabi_p > 0")
        pump_detuning = probe.omega_p - species.omega0 if probe.omega_p > 0 else 0.0
        n = sus.n_p(species, sample, probe.omega_s, probe.rabi_p, probe.delta_s - pump_detuning, pump_detuning)
    else:
        n = sus.n0(species, sample, probe.omega_s, probe.delta_s, probe.delta_k)
    return complex(C * n)


def mixer(species: AtomSpecies, sample: GasSample, probe: ProbeConfig, t: float, pump_on: bool = False) -> ModeMixer:
    return ModeMixer(coupling_beta(species, sample, probe, pump_on), probe.omega_s, t)


@dataclass(frozen=True)
class TwoModeState:
    """Amplitudes on |n1, n2> with n1 + n2 <= cutoff.

    ``amplitudes[n1, n2]``; entries beyond the cutoff are kept at zero.
    """

    amplitudes: np.ndarray
    cutoff: int = DEFAULT_CUTOFF

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        size = self.cutoff + 1
        if amps.shape != (size, size):
            raise ParameterError(f"amplitudes: expected shape {(size, size)}, got {amps.shape}")
        n1, n2 = np.indices(amps.shape)
        if np.any(amps[n1 + n2 > self.cutoff] != 0):
            raise ParameterError(f"amplitudes: population above the {self.cutoff}-photon cutoff")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_dict(cls, amps: Dict[Tuple[int, int], complex], cutoff: int = DEFAULT_CUTOFF) -> "TwoModeState":
        arr = np.zeros((cutoff + 1, cutoff + 1), complex)
        for (n1, n2), v in amps.items():
            if n1 < 0 or n2 < 0:
                raise ParameterError(f"amplitudes: negative photon number in {(n1, n2)}")
            if n1 + n2 > cutoff:
                raise ParameterError(
                    f"amplitudes: |{n1},{n2}> exceeds the {cutoff}-photon truncation"
                )
            arr[n1, n2] = v
        return cls(arr, cutoff)

    @classmethod
    def fock(cls, n1: int, n2: int, cutoff: int = DEFAULT_CUTOFF) -> "TwoModeState":
        return cls.from_dict({(n1, n2): 1.0}, cutoff)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def amplitude(self, n1: int, n2: int) -> complex:
        if n1 + n2 > self.cutoff:
            return 0j
        return complex(self.amplitudes[n1, n2])

    def max_photons(self) -> int:
        n1, n2 = np.nonzero(self.amplitudes)
        return int(np.max(n1 + n2)) if n1.size else 0

    def to_dict(self, tol: float = 0.0) -> Dict[Tuple[int, int], complex]:
        return {(int(i), int(j)): complex(self.amplitudes[i, j])
                for i, j in zip(*np.nonzero(np.abs(self.amplitudes) > tol))}


def _expand_term(m: np.ndarray, n1: int, n2: int) -> np.ndarray:
    """Amplitudes of (b1^dag)^n1 (b2^dag)^n2 |0> / sqrt(n1! n2!) with
    b_j^dag = sum_i M_ij a_i^dag, on the photon-number-n1+n2 shell."""
    n = n1 + n2
    out = np.zeros(n + 1, complex)  # indexed by the photon number in mode 1
    for k in range(n1 + 1):
        c1 = math.comb(n1, k) * m[0, 0] ** k * m[1, 0] ** (n1 - k)
        for l in range(n2 + 1):
            c2 = math.comb(n2, l) * m[0, 1] ** l * m[1, 1] ** (n2 - l)
            out[k + l] += c1 * c2
    p = np.arange(n + 1)
    fact = np.array([math.factorial(int(i)) * math.factorial(int(n - i)) for i in p], dtype=float)
    return out * np.sqrt(fact / (math.factorial(n1) * math.factorial(n2)))


def evolve_state(state: TwoModeState, mix: ModeMixer, cutoff: int | None = None) -> TwoModeState:
    """Map a few-photon input state through the mode transformation.

    Photon number is conserved by the mixing, so each shell maps into itself;
    only its norm can shrink.
    """
    cutoff = state.cutoff if cutoff is None else cutoff
    if state.max_photons() > cutoff:
        raise ParameterError(
            f"cutoff: state holds {state.max_photons()} photons, truncation is {cutoff}"
        )
    out = np.zeros((cutoff + 1, cutoff + 1), complex)
    for (n1, n2), amp in state.to_dict().items():
        shell = _expand_term(mix.matrix, n1, n2)
        n = n1 + n2
        for p in range(n + 1):
            out[p, n - p] += amp * shell[p]
    return TwoModeState(out, cutoff)


def concurrence_single_photon(state: TwoModeState) -> float:
    """2|alpha beta'| / (|alpha|^2 + |beta'|^2) of the one-photon component
    alpha|1,0> + beta'|0,1>."""
    if state.max_photons() > 1:
        raise ParameterError("state: concurrence is defined for at most one photon")
    alpha = state.amplitude(1, 0)
    beta = state.amplitude(0, 1)
    weight = abs(alpha) ** 2 + abs(beta) ** 2
    if weight == 0:
        raise ParameterError("state: no single-photon component")
    return float(2.0 * abs(alpha * beta) / weight)
