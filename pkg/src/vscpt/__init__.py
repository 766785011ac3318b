"""
Coherent backscattering of light off a gas prepared by velocity-selective
coherent population trapping, with and without a pump (EIT regime).

Modules
-------
domain         species presets, gas sample, probe description, field containers
susceptibility linear response of the gas (pump off and pump on)
backscatter    steady-state forward/backward envelopes of a cw signal
pulse          time-dependent envelopes with momentum dephasing
eit            pump-on pulse fields via the Faddeeva function
quantum        two-mode transfer matrix and few-photon states
cli            batch front end (``vscpt``)
"""

from .domain import (
    AtomSpecies,
    ComplexResponse,
    EnvelopePair,
    GasSample,
    ProbeConfig,
    momentum_distribution,
    preset_species,
)
from .errors import ParameterError, SolverError, VscptError

__version__ = "0.1.0"

__all__ = [
    "AtomSpecies",
    "ComplexResponse",
    "EnvelopePair",
    "GasSample",
    "ProbeConfig",
    "momentum_distribution",
    "preset_species",
    "ParameterError",
    "SolverError",
    "VscptError",
]
