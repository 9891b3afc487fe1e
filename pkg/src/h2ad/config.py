"""YAML experiment configuration.

Example::

    array:
      element_spacing: 0.5
      groups:
        - {subarrays: 16, antennas: 7}
        - {subarrays: 16, antennas: 11}
        - {subarrays: 16, antennas: 13}
    simulation:
      true_angle_deg: 41
      snapshots: 100
      snr_db: 0
      signal_model: unit_modulus_random_phase
    sweep:
      variable: snr_db
      values: [-10, -5, 0, 5, 10]
    methods: [wgmd, wlmd, alw_kmeans, improved_dbscan]
    trials: 500
    seed: 2024
    power_model: {rf_chain: 0.04, adc: 0.01, lna: 0.02, phase_shifter: 0.01, baseband: 0.2}
    dbscan: {max_iterations: 20, degrees: false}
    output: {dir: results/snr}
"""

from __future__ import annotations

import math
from pathlib import Path

import yaml

from .array import ArrayConfig, GroupConfig
from .clustering import Method
from .crlb import PowerModel
from .experiment import DEFAULT_TRIALS, ExperimentSpec
from .signal import SimulationConfig


class ConfigError(ValueError):
    pass


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"missing key {where}.{key}")
    return section[key]


def parse_array(section: dict) -> ArrayConfig:
    groups = _require(section, "groups", "array")
    try:
        parsed = tuple(GroupConfig(int(g["subarrays"]), int(g["antennas"])) for g in groups)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"array.groups entries need 'subarrays' and 'antennas': {exc}") from exc
    return ArrayConfig(
        parsed,
        element_spacing=float(section.get("element_spacing", 0.5)),
        wavelength=float(section.get("wavelength", 1.0)),
        allow_homogeneous=bool(section.get("allow_homogeneous", False)),
    )


def parse_simulation(section: dict) -> SimulationConfig:
    if "true_angle_deg" in section:
        angle = math.radians(float(section["true_angle_deg"]))
    else:
        angle = float(_require(section, "true_angle_rad", "simulation"))
    return SimulationConfig(
        true_angle=angle,
        snapshot_count=int(section.get("snapshots", 100)),
        snr_db=float(section.get("snr_db", 0.0)),
        signal_model=section.get("signal_model", "unit_modulus_random_phase"),
        noiseless=bool(section.get("noiseless", False)),
    )


def spec_from_dict(data: dict) -> ExperimentSpec:
    if not isinstance(data, dict):
        raise ConfigError("configuration root must be a mapping")
    try:
        array = parse_array(_require(data, "array", "<root>"))
        sim = parse_simulation(data.get("simulation", {}))
        sweep = data.get("sweep", {})
        series = sweep.get("series")
        out = data.get("output", {}).get("dir")
        dbscan = data.get("dbscan", {})
        return ExperimentSpec(
            array=array,
            sim=sim,
            sweep=sweep.get("variable", "snr_db"),
            grid=tuple(sweep.get("values", (sim.snr_db,))),
            methods=tuple(Method(m) for m in data.get("methods", [m.value for m in Method])),
            trials=int(data.get("trials", DEFAULT_TRIALS)),
            seed=int(data.get("seed", 0)),
            output_dir=Path(out) if out is not None else None,
            series=(series["variable"], tuple(series["values"])) if series else None,
            record_timing=bool(data.get("record_timing", False)),
            workers=int(data.get("workers", 1)),
            dbscan_iterations=int(dbscan.get("max_iterations", 20)),
            dbscan_degrees=bool(dbscan.get("degrees", False)),
            power=PowerModel(**data.get("power_model", {})),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc


def load_spec(path) -> ExperimentSpec:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return spec_from_dict(data)
