"""
Named parameter sets for the batch front end.

Each preset is a partial run configuration (same tree as a config file).
Densities are in m^-3: 2e10 cm^-3 is 2e16 m^-3.
"""

from __future__ import annotations

import copy

DEFAULTS = {
    "species": "rb87",
    "sample": {"density": 2e16, "length": 0.01, "sigma_p": None},
    "probe": {
        "delta_s": 3e6,
        "delta_k": None,
        "E0": 1.0,
        "rabi_p": 0.0,
        "pump_detuning": 0.0,
        "sigma_omega": 0.0,
        "fwhm": None,
    },
    "grid": {
        "points": 2001,
        "cells": 10,
        "margin": 2,
        "tmax": None,
        "frames": 400,
        "n": 501,
        "delta_min": -4e7,
        "delta_max": 4e7,
        "nz": 121,
        "nt": 601,
        "z_min": None,
        "z_max": None,
        "t_max": None,
    },
    "pulse": {"compare_ideal": False},
    "eit": {"method": "auto"},
    "quantum": {"time": None, "pump_on": False, "state": [[1, 0, 1.0]], "cutoff": 4},
}

PRESETS = {
    # cw backscattering off the ideal gas
    "fig3": {
        "command": "backscatter",
        "species": "rb87",
        "sample": {"density": 2e16, "length": 0.01, "sigma_p": 0.0},
        "probe": {"delta_s": 3e6, "rabi_p": 0.0},
    },
    # g(t) for both species over 10 us
    "fig4": {
        "command": "dephasing",
        "species": ["he4", "rb87"],
        "grid": {"tmax": 1e-5, "n": 501},
    },
    "fig5": {
        "command": "dispersion",
        "species": "rb87",
        "probe": {"rabi_p": 1e7, "pump_detuning": 0.0},
        "grid": {"delta_min": -4e7, "delta_max": 4e7, "n": 801},
    },
    "fig6": {
        "command": "eit-map",
        "species": "rb87",
        "sample": {"density": 2e16, "length": 0.1},
        "probe": {"rabi_p": 1e7, "sigma_omega": 5e5, "pump_detuning": 0.0},
    },
    "eit-strong": {
        "command": "eit-map",
        "species": "rb87",
        "sample": {"density": 1e17, "length": 0.01},
        "probe": {"rabi_p": 5e6, "sigma_omega": 1e6, "pump_detuning": 0.0},
    },
    "rb-pulse": {
        "command": "pulse",
        "species": "rb87",
        "sample": {"density": 2e16, "length": 0.01, "sigma_p": None},
        "probe": {"delta_s": 3e6, "fwhm": 4e-6},
        "pulse": {"compare_ideal": True},
    },
    "he-pulse": {
        "command": "pulse",
        "species": "he4",
        "sample": {"density": 2e16, "length": 0.01, "sigma_p": None},
        "probe": {"delta_s": 3e6, "fwhm": 2e-6},
        "pulse": {"compare_ideal": True},
    },
    "rb-photon": {
        "command": "quantum",
        "species": "rb87",
        "sample": {"density": 2e16, "length": 0.01, "sigma_p": 0.0},
        "probe": {"delta_s": 3e6},
        "quantum": {"time": None, "state": [[1, 0, 1.0]]},
    },
}


def get(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name.strip().lower()])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None


def defaults() -> dict:
    return copy.deepcopy(DEFAULTS)
