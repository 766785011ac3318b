"""
Batch front end.

    vscpt <command> [--config FILE] [--preset NAME] [--out DIR] [overrides...]

Parameters are resolved as built-in defaults < preset < config file < flags.
Every run writes a CSV (header row with units, round-trip precision) and a
flat ``key=value`` summary that echoes the resolved parameter set.  Exit
status is 0 on success, 2 for invalid input and 3 when a solver fails.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
import warnings
from pathlib import Path

import numpy as np
import yaml

from . import backscatter, eit, presets, pulse, quantum
from . import susceptibility as sus
from .domain import HBAR, AtomSpecies, GasSample, ProbeConfig, preset_species
from .errors import ParameterError, SolverError

COMMANDS = ("backscatter", "dephasing", "pulse", "dispersion", "eit-map", "quantum")
EXIT_OK, EXIT_INVALID, EXIT_SOLVER = 0, 2, 3

# flag name -> (section, key, type)
OVERRIDES = {
    "species": (None, "species", str),
    "density": ("sample", "density", float),
    "length": ("sample", "length", float),
    "sigma_p": ("sample", "sigma_p", float),
    "delta_s": ("probe", "delta_s", float),
    "delta_k": ("probe", "delta_k", float),
    "E0": ("probe", "E0", float),
    "rabi_p": ("probe", "rabi_p", float),
    "pump_detuning": ("probe", "pump_detuning", float),
    "sigma_omega": ("probe", "sigma_omega", float),
    "fwhm": ("probe", "fwhm", float),
    "points": ("grid", "points", int),
    "cells": ("grid", "cells", int),
    "tmax": ("grid", "tmax", float),
    "n": ("grid", "n", int),
    "nz": ("grid", "nz", int),
    "nt": ("grid", "nt", int),
    "method": ("eit", "method", str),
    "time": ("quantum", "time", float),
    "cutoff": ("quantum", "cutoff", int),
}


class ConfigError(ParameterError):
    pass


# ---------------------------------------------------------------- config


def _merge(base: dict, extra: dict, where: str = "") -> dict:
    for key, value in extra.items():
        if key == "command":
            base[key] = value
            continue
        if key not in base:
            raise ConfigError(f"{where}{key}: unknown configuration key")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{where}{key}: expected a mapping")
            _merge(base[key], value, f"{where}{key}.")
        else:
            base[key] = value
    return base


def load_config_file(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"config: {path} is not valid YAML ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config: {path} must hold a mapping at top level")
    return data


def resolve(command: str, preset=None, config_file=None, flags=None) -> dict:
    cfg = presets.defaults()
    cfg["command"] = command
    layers = []
    if preset:
        try:
            layers.append(("preset", presets.get(preset)))
        except KeyError as exc:
            raise ConfigError(f"preset: {exc.args[0]}") from None
    if config_file:
        layers.append(("config", load_config_file(config_file)))
    for label, layer in layers:
        if layer.get("command", command) != command:
            raise ConfigError(f"{label}: describes command {layer['command']!r}, not {command!r}")
        _merge(cfg, layer)
    for name, value in (flags or {}).items():
        if value is None:
            continue
        section, key, _ = OVERRIDES[name]
        if section is None:
            cfg[key] = value
        else:
            cfg[section][key] = value
    return cfg


def _number(cfg, section, key, *, positive=False, allow_none=False):
    value = cfg[section][key]
    if value is None and allow_none:
        return None
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{section}.{key}: expected a number, got {value!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{section}.{key}: must be finite")
    if positive and value <= 0:
        raise ConfigError(f"{section}.{key}: must be > 0, got {value!r}")
    return value


def _integer(cfg, section, key, minimum):
    value = cfg[section][key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(f"{section}.{key}: expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{section}.{key}: must be >= {minimum}, got {value!r}")
    return int(value)


def build_species(spec) -> AtomSpecies:
    if isinstance(spec, str):
        return preset_species(spec)
    if isinstance(spec, dict):
        fields = {}
        for key, value in spec.items():
            if key == "name":
                fields[key] = str(value)
                continue
            # YAML 1.1 reads "3.61e7" (no exponent sign) as a string
            try:
                fields[key] = float(value)
            except (TypeError, ValueError):
                raise ConfigError(f"species.{key}: expected a number, got {value!r}") from None
        fields.setdefault("name", "custom")
        recoil = fields.pop("recoil", None)
        if recoil is not None and "kp" not in fields:
            fields["kp"] = math.sqrt(2.0 * float(fields["mass"]) * float(recoil) / HBAR)
        try:
            return AtomSpecies(**fields)
        except TypeError as exc:
            raise ConfigError(f"species: {exc}") from None
    raise ConfigError(f"species: expected a preset name or a mapping of constants, got {spec!r}")


def build_sample(cfg) -> GasSample:
    return GasSample(
        density=_number(cfg, "sample", "density"),
        length=_number(cfg, "sample", "length", positive=True),
        sigma_p=_number(cfg, "sample", "sigma_p", allow_none=True),
    )


def build_probe(cfg, species) -> ProbeConfig:
    return ProbeConfig.from_detuning(
        species,
        _number(cfg, "probe", "delta_s"),
        E0=_number(cfg, "probe", "E0", positive=True),
        sigma_omega=_number(cfg, "probe", "sigma_omega"),
        rabi_p=_number(cfg, "probe", "rabi_p"),
        pump_detuning=_number(cfg, "probe", "pump_detuning"),
        delta_k=_number(cfg, "probe", "delta_k", allow_none=True),
    )


# ---------------------------------------------------------------- output


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".16e")
    return str(x)


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header, columns) -> None:
    cols = [np.asarray(c).ravel() for c in columns]
    lines = [",".join(header)]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}", value[k], out)
    elif isinstance(value, (list, tuple)):
        out[prefix] = ";".join(_fmt(v) if not isinstance(v, (list, tuple)) else ":".join(_fmt(u) for u in v)
                               for v in value)
    elif value is None:
        out[prefix] = "none"
    else:
        out[prefix] = _fmt(value)


def write_summary(path: Path, results: dict, cfg: dict) -> None:
    flat = {}
    for key, value in results.items():
        _flatten(key, value, flat)
    params = {}
    used = {k: cfg[k] for k in cfg if k != "command"}
    _flatten("param", used, params)
    lines = [f"command={cfg['command']}"]
    lines += [f"{k}={v}" for k, v in flat.items()]
    lines += [f"{k}={v}" for k, v in params.items()]
    _atomic_write(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------- commands


def run_backscatter(cfg):
    species = build_species(cfg["species"])
    sample = build_sample(cfg)
    probe = build_probe(cfg, species)
    z = np.linspace(0.0, sample.length, _integer(cfg, "grid", "points", 2))
    exact = backscatter.solve_exact(species, sample, probe, z)
    lin = backscatter.solve_linearized(species, sample, probe, z)
    table = (
        ["z_m", "I1_exact_rel", "I2_exact_rel", "I1_linearized_rel", "I2_linearized_rel"],
        [z, exact.envelopes.i1 / probe.E0**2, exact.envelopes.i2 / probe.E0**2,
         lin.envelopes.i1 / probe.E0**2, lin.envelopes.i2 / probe.E0**2],
    )
    results = {
        "reflectivity": exact.reflectivity,
        "reflectivity_linearized": lin.reflectivity,
        "transmissivity": exact.transmissivity,
        "a_delta": exact.a_delta,
        "svea_ratio": exact.svea_ratio,
        "n0_real_per_m": exact.n0.real,
        "n0_imag_per_m": exact.n0.imag,
    }
    return table, results


def run_dephasing(cfg):
    names = cfg["species"] if isinstance(cfg["species"], list) else [cfg["species"]]
    tmax = _number(cfg, "grid", "tmax", positive=True, allow_none=True)
    if tmax is None:
        raise ConfigError("grid.tmax: required for the dephasing curve")
    n = _integer(cfg, "grid", "n", 2)
    header, cols, results = ["t_s"], [], {}
    for name in names:
        species = build_species(name)
        t, g = pulse.dephasing_curve(species, tmax, n)
        if not cols:
            cols.append(t)
        label = species.name.lower()
        header.append(f"g_{label}")
        cols.append(g)
        results[f"t_half_s.{label}"] = math.sqrt(math.log(2.0) / 2.0) / species.recoil
        results[f"g_at_tmax.{label}"] = float(g[-1])
    return (header, cols), results


def run_pulse(cfg):
    species = build_species(cfg["species"])
    sample = build_sample(cfg)
    probe = build_probe(cfg, species)
    fwhm = _number(cfg, "probe", "fwhm", positive=True, allow_none=True)
    if fwhm is None and probe.sigma_omega <= 0:
        raise ConfigError("probe.fwhm: give a pulse duration (or probe.sigma_omega > 0)")
    if fwhm is None:
        fwhm = 2.0 * math.sqrt(math.log(2.0)) / probe.sigma_omega
    grid = pulse.PulseGrid.around(
        sample, tmax=0.0, cells=_integer(cfg, "grid", "cells", 1),
        margin=_integer(cfg, "grid", "margin", 1), frames=_integer(cfg, "grid", "frames", 2),
    )
    tmax = _number(cfg, "grid", "tmax", positive=True, allow_none=True)
    if tmax is None:
        tmax = pulse.default_tmax(fwhm, grid.zmax - grid.zmin)
    grid = pulse.PulseGrid(grid.zmin, grid.zmax, grid.nz, tmax, grid.frames)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        run = pulse.propagate_pulse(species, sample, probe, grid, fwhm=fwhm)
        header = ["t_s", "I_incident_rel", "I_reflected_rel", "I_transmitted_rel"]
        scale = probe.E0**2
        cols = [run.trace_t, run.incident / scale, run.reflected / scale, run.transmitted / scale]
        results = {
            "efficiency": run.efficiency,
            "pulse_fwhm_s": run.pulse_fwhm,
            "cfl": run.cfl,
            "exited": run.exited,
            "warnings": list(run.warnings) or "none",
        }
        if cfg["pulse"]["compare_ideal"]:
            ideal_sample = GasSample(sample.density, sample.length, 0.0)
            ideal = pulse.propagate_pulse(species, ideal_sample, probe, grid, fwhm=fwhm)
            header.append("I_reflected_ideal_rel")
            cols.append(ideal.reflected / scale)
            results["efficiency_ideal"] = ideal.efficiency
            results["efficiency_ratio"] = run.efficiency / ideal.efficiency if ideal.efficiency > 0 else float("nan")
    return (header, cols), results


def run_dispersion(cfg):
    species = build_species(cfg["species"])
    rabi = _number(cfg, "probe", "rabi_p", positive=True)
    detuning = _number(cfg, "probe", "pump_detuning")
    lo = _number(cfg, "grid", "delta_min")
    hi = _number(cfg, "grid", "delta_max")
    if not hi > lo:
        raise ConfigError("grid.delta_max: must exceed grid.delta_min")
    grid = np.linspace(lo, hi, _integer(cfg, "grid", "n", 2))
    curve = eit.dispersion_curve(species, rabi, grid, detuning)
    er = species.recoil + detuning
    root = math.sqrt(er**2 + 8.0 * rabi**2)
    results = {
        "chi_p_at_pump_s": complex(sus.chi_p(species, rabi, detuning, 0.0)).real,
        "re_zero_crossings_delta_omega": [0.0, 0.5 * (-er - root), 0.5 * (-er + root)],
    }
    return (["delta_s_per_s", "re_chi_p_s", "im_chi_p_s"], [curve.omega, curve.real, curve.imag]), results


def _eit_params(cfg):
    species = build_species(cfg["species"])
    return eit.EitPulseParams(
        species=species,
        sample=build_sample(cfg),
        rabi_p=_number(cfg, "probe", "rabi_p", positive=True),
        sigma_omega=_number(cfg, "probe", "sigma_omega", positive=True),
        E0=_number(cfg, "probe", "E0", positive=True),
        pump_detuning=_number(cfg, "probe", "pump_detuning"),
    )


def run_eit_map(cfg):
    params = _eit_params(cfg)
    a = params.length
    g = cfg["grid"]
    z_min = -0.5 * a if g["z_min"] is None else float(g["z_min"])
    z_max = 1.5 * a if g["z_max"] is None else float(g["z_max"])
    t_max = eit.default_window(params, 2)[-1] if g["t_max"] is None else float(g["t_max"])
    if not (z_max > z_min and t_max > 0):
        raise ConfigError("grid: need z_max > z_min and t_max > 0")
    z = np.linspace(z_min, z_max, _integer(cfg, "grid", "nz", 2))
    t = np.linspace(0.0, t_max, _integer(cfg, "grid", "nt", 3))
    fmap = eit.intensity_map(params, z, t)
    peak = eit.peak_reflected_intensity(params, method=str(cfg["eit"]["method"]))
    zz, tt = np.meshgrid(z, t)
    results = {
        "peak_reflected": peak.global_peak,
        "peak_reflected_at_entrance": peak.peak_at_entrance,
        "peak_reflected_z_m": peak.z_at_peak,
        "peak_reflected_t_s": peak.t_at_peak,
        "peak_method": peak.method,
        "group_velocity_inside_m_per_s": fmap.group_velocity_inside,
        "group_velocity_outside_m_per_s": fmap.group_velocity_outside,
        "np_prime_real_s_per_m": params.np_prime.real,
        "np_prime_imag_s_per_m": params.np_prime.imag,
        "linearization_error": params.linearization_error(),
    }
    return (["t_s", "z_m", "I1_rel", "I2_rel"], [tt, zz, fmap.i1, fmap.i2]), results


def _state_from(cfg):
    cutoff = _integer(cfg, "quantum", "cutoff", 1)
    entries = cfg["quantum"]["state"]
    amps = {}
    try:
        for n1, n2, *amp in entries:
            value = complex(amp[0]) if amp else 1.0
            if len(amp) > 1:
                value = complex(float(amp[0]), float(amp[1]))
            amps[(int(n1), int(n2))] = amps.get((int(n1), int(n2)), 0) + value
    except (TypeError, ValueError):
        raise ConfigError("quantum.state: expected a list of [n1, n2, re(, im)] entries") from None
    return quantum.TwoModeState.from_dict(amps, cutoff)


def run_quantum(cfg):
    species = build_species(cfg["species"])
    sample = build_sample(cfg)
    probe = build_probe(cfg, species)
    pump_on = bool(cfg["quantum"]["pump_on"])
    beta = quantum.coupling_beta(species, sample, probe, pump_on)
    t = _number(cfg, "quantum", "time", allow_none=True)
    if t is None:
        if beta.real == 0:
            raise ConfigError("quantum.time: required when Re(beta) = 0")
        t = math.pi / (4.0 * abs(beta.real))  # equal-weight split of |1,0>
    mix = quantum.ModeMixer(beta, probe.omega_s, t)
    state = _state_from(cfg)
    out = quantum.evolve_state(state, mix)
    keys = sorted(out.to_dict())
    amps = [out.amplitude(*k) for k in keys]
    results = {
        "beta_real_per_s": beta.real,
        "beta_imag_per_s": beta.imag,
        "time_s": t,
        "norm_in": state.norm,
        "norm_out": out.norm,
        "singular_values": list(mix.singular_values()),
    }
    if out.max_photons() <= 1 and abs(out.amplitude(1, 0)) + abs(out.amplitude(0, 1)) > 0:
        results["concurrence"] = quantum.concurrence_single_photon(out)
    cols = [[k[0] for k in keys], [k[1] for k in keys], np.real(amps), np.imag(amps), np.abs(amps) ** 2]
    return (["n1", "n2", "amp_real", "amp_imag", "probability"], cols), results


RUNNERS = {
    "backscatter": run_backscatter,
    "dephasing": run_dephasing,
    "pulse": run_pulse,
    "dispersion": run_dispersion,
    "eit-map": run_eit_map,
    "quantum": run_quantum,
}


def run(cfg: dict, out_dir) -> dict:
    """Execute a resolved configuration and write ``<command>.csv`` and
    ``<command>_summary.txt`` into ``out_dir``."""
    command = cfg["command"]
    (header, cols), results = RUNNERS[command](cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = command.replace("-", "_")
    write_csv(out / f"{stem}.csv", header, cols)
    write_summary(out / f"{stem}_summary.txt", results, cfg)
    return results


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vscpt", description="Backscattering and EIT runs on a prepared atomic gas.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="YAML file with a (partial) run configuration")
        p.add_argument("--preset", help=f"named parameter set ({', '.join(sorted(presets.PRESETS))})")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        for flag, (_, _, kind) in OVERRIDES.items():
            p.add_argument("--" + flag.replace("_", "-"), dest=flag, type=kind, default=None)
        p.add_argument("--pump-on", dest="pump_on", action="store_true", default=None,
                       help="quantum: couple the modes through the pump-on response")
        p.add_argument("--compare-ideal", dest="compare_ideal", action="store_true", default=None,
                       help="pulse: also run the sigma_p = 0 gas")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = {k: getattr(args, k) for k in OVERRIDES}
    try:
        cfg = resolve(args.command, args.preset, args.config, flags)
        if args.pump_on:
            cfg["quantum"]["pump_on"] = True
        if args.compare_ideal:
            cfg["pulse"]["compare_ideal"] = True
        results = run(cfg, args.out)
    except ParameterError as exc:
        print(f"vscpt: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SolverError as exc:
        print(f"vscpt: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    for key, value in results.items():
        if not isinstance(value, (list, dict)):
            print(f"{key}={_fmt(value)}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
