"""Scenario files: loading, schema validation and sweep grids.

A scenario is a YAML document with SI-suffixed keys::

    scheme: ion                # scheme calculator, or "simulation"
    description: ...
    params: {...}              # scheme parameters
    sweep: [{axis: distance_m, grid: {start: ..., stop: ..., num: ...}}]
    dynamics: {...}            # optional time-domain run
    gpe: {...}                 # optional mean-field run
    checks: [...]              # regression targets
    output: {stem: ..., formats: [csv]}

Unknown keys are rejected everywhere.
"""

from __future__ import annotations

import copy
import hashlib
import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Optional

import jsonschema
import numpy as np
import yaml

from . import _yaml

NUM = {"type": "number"}
POS = {"type": "number", "exclusiveMinimum": 0}
NONNEG = {"type": "number", "minimum": 0}
INT_POS = {"type": "integer", "minimum": 1}
BOOL = {"type": "boolean"}
STR = {"type": "string"}


def _obj(props: Mapping[str, Any], required: tuple[str, ...] = ()) -> dict:
    return {"type": "object", "properties": dict(props), "required": list(required),
            "additionalProperties": False}


def _triple(item=POS) -> dict:
    return {"type": "array", "items": item, "minItems": 3, "maxItems": 3}


GEOMETRY = _obj({"length_m": POS, "width_m": POS, "thickness_m": POS,
                 "density_kg_per_m3": POS, "mode_shape_factor": POS},
                ("length_m", "width_m", "thickness_m", "density_kg_per_m3"))
OSCILLATOR = _obj({"effective_mass_kg": POS, "frequency_hz": POS, "quality_factor": POS,
                   "power_reflectivity": {"type": "number", "minimum": 0, "maximum": 1},
                   "geometry": GEOMETRY},
                  ("frequency_hz", "quality_factor"))
TUBE = _obj({**OSCILLATOR["properties"], "length_m": POS,
             "scaled_from": _obj({"length_m": POS, "effective_mass_kg": POS, "frequency_hz": POS},
                                 ("length_m", "effective_mass_kg", "frequency_hz"))},
            ("quality_factor",))
ENVIRONMENT = _obj({"temperature_k": NONNEG}, ("temperature_k",))
LEVEL = {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}

SCHEME_PARAMS: dict[str, dict] = {
    "ion": _obj({
        "species": STR, "trap_frequency_hz": POS, "distance_m": POS, "oscillator": OSCILLATOR,
        "tip_charge_c": NUM, "voltage_v": NUM, "sphere_radius_m": POS, "compensation_factor": POS,
        "target_epsilon": NUM, "environment": ENVIRONMENT, "atomic_decoherence_hz": NONNEG,
    }, ("species", "trap_frequency_hz", "distance_m", "oscillator")),
    "bec_surface": _obj({
        "species": STR, "c4_j_m4": POS, "beta": POS, "trap_frequency_hz": POS, "distance_m": POS,
        "barrier_hbar_omega": POS, "gravity": BOOL, "oscillator": OSCILLATOR,
        "environment": ENVIRONMENT, "n_atoms": INT_POS, "atomic_decoherence_hz": NONNEG,
        "tof": _obj({"n_atoms": INT_POS, "frequency_hz": POS, "alpha": POS, "time_s": POS},
                    ("n_atoms", "frequency_hz", "time_s")),
    }, ("species", "c4_j_m4", "trap_frequency_hz", "oscillator")),
    "surface_trap": _obj({
        "species": STR, "c4_j_m4": POS, "beta": POS, "trap_frequency_hz": POS, "retune": BOOL,
        "gravity": BOOL, "distance_m": POS, "barrier_hbar_omega": POS,
    }, ("species", "c4_j_m4", "trap_frequency_hz")),
    "cnt": _obj({
        "variant": {"enum": ["cp", "charged", "current_carrying"]}, "species": STR,
        "n_atoms": INT_POS, "trap_frequency_hz": POS, "c4_j_m4": POS, "beta": POS,
        "tube_charge_c": NUM, "barrier_hbar_omega": POS, "oscillator": TUBE,
        "environment": ENVIRONMENT, "atomic_decoherence_hz": NONNEG, "room_temperature_k": POS,
    }, ("variant", "species", "oscillator")),
    "lattice": _obj({
        "species": STR, "n_atoms": NONNEG, "atom_cooling_rate_hz": POS, "wavelength_m": POS,
        "lattice_depth_j": POS, "oscillator": OSCILLATOR, "environment": ENVIRONMENT,
        "atomic_decoherence_hz": NONNEG,
    }, ("species", "n_atoms", "atom_cooling_rate_hz", "oscillator")),
    "magnetic": _obj({
        "species": STR, "distance_m": POS,
        "magnet": _obj({"dimensions_m": _triple(), "saturation_magnetization_a_per_m": POS,
                        "moment_j_per_t": POS, "density_kg_per_m3": NONNEG}),
        "cantilever": _obj({**OSCILLATOR["properties"], "include_magnet_mass": BOOL},
                           ("frequency_hz", "quality_factor")),
        "bias_field_t": POS, "state_pair": _obj({"ground": LEVEL, "excited": LEVEL},
                                                ("ground", "excited")),
        "two_photon": BOOL, "n_atoms": INT_POS, "environment": ENVIRONMENT,
        "atomic_decoherence_hz": NONNEG, "compensation_residual": NONNEG,
    }, ("species", "distance_m", "magnet", "cantilever")),
    "cavity": _obj({
        "species": STR, "reported_g0_hz": POS, "reported_frequency_hz": POS,
        "reported_quality_factor": POS, "finesse": POS, "temperature_k": NONNEG,
        "membrane_dimensions_m": _triple(),
    }, ("species", "reported_g0_hz", "reported_frequency_hz", "reported_quality_factor",
        "finesse", "membrane_dimensions_m")),
    "decoherence": _obj({"quality_factor": POS, "temperature_k": NONNEG, "frequency_hz": POS},
                        ("quality_factor", "temperature_k")),
    "simulation": _obj({}),
}

GRID = {
    "oneOf": [
        _obj({"start": NUM, "stop": NUM, "num": INT_POS, "spacing": {"enum": ["linear", "log"]}},
             ("start", "stop", "num")),
        _obj({"values": {"type": "array", "items": NUM, "minItems": 1}}, ("values",)),
    ]
}

TOLERANCE = _obj({"kind": {"enum": ["relative", "factor", "range", "order", "exact", "absolute"]},
                  "value": NONNEG}, ("kind",))
CHECK = _obj({
    "id": STR, "quantity": STR,
    "target": {"oneOf": [NUM, {"type": "array", "items": NUM, "minItems": 2, "maxItems": 2}]},
    "tolerance": TOLERANCE, "origin": {"enum": ["reported", "chosen", "derived"]},
    "slow": BOOL, "note": STR,
}, ("id", "quantity", "target", "tolerance", "origin"))

DYNAMICS = {
    "oneOf": [
        _obj({"kind": {"const": "swap_cool"}, "coupling_hz": POS, "n_atoms": INT_POS,
              "mech_populations": {"type": "array", "items": NONNEG, "minItems": 1},
              "mech_thermal_n": NONNEG, "mech_rate_hz": NONNEG, "n_th": NONNEG,
              "atom_dephasing_hz": NONNEG, "atom_decay_hz": NONNEG, "mech_cutoff": INT_POS},
             ("kind", "coupling_hz")),
        _obj({"kind": {"const": "sympathetic_cooling"}, "g0_hz": NONNEG, "n_atoms": INT_POS,
              "atom_cooling_rate_hz": POS, "mech_rate_hz": NONNEG, "n_th": NONNEG,
              "reflectivity": {"type": "number", "minimum": 0, "maximum": 1},
              "initial_mech_level": {"type": "integer", "minimum": 0}},
             ("kind", "g0_hz", "atom_cooling_rate_hz", "mech_rate_hz")),
        _obj({"kind": {"const": "classical"}, "epsilon": NUM, "mass_ratio": POS,
              "frequency_hz": POS, "distance_m": POS, "amplitude_m": POS, "periods": POS,
              "tol": POS, "oscillator_fixed": BOOL},
             ("kind", "epsilon", "mass_ratio", "frequency_hz", "amplitude_m")),
    ]
}

GPE = _obj({
    "kind": {"enum": ["ground_state", "evolve", "contrast_curve", "loss_spectrum", "mode_spectroscopy"]},
    "species": STR, "c4_j_m4": POS, "beta": POS, "trap_frequency_hz": POS,
    "barrier_hbar_omega": POS, "n_atoms": POS, "g1d_j_m": NONNEG, "points": INT_POS,
    "duration_s": POS, "drive_amplitude_m": NONNEG, "drive_frequency_hz": POS,
    "amplitude_grid_m": {"type": "array", "items": NONNEG, "minItems": 1},
    "drive_frequency_grid_hz": {"type": "array", "items": POS, "minItems": 1},
    "trap_frequency_grid_hz": {"type": "array", "items": POS, "minItems": 1},
    "quality_factor": POS, "observable": {"enum": ["loss", "excitation", "width_growth"]},
}, ("kind", "species", "c4_j_m4", "trap_frequency_hz", "n_atoms"))

OUTPUT = _obj({"stem": STR, "formats": {"type": "array", "items": {"enum": ["csv", "json"]},
                                        "minItems": 1}})

SCENARIO_SCHEMA = {
    "type": "object",
    "properties": {
        "scheme": {"enum": sorted(SCHEME_PARAMS)},
        "description": STR,
        "params": {"type": "object"},
        "sweep": {"type": "array", "items": _obj({"axis": STR, "grid": GRID}, ("axis", "grid")),
                  "minItems": 1, "maxItems": 3},
        "dynamics": DYNAMICS,
        "gpe": GPE,
        "checks": {"type": "array", "items": CHECK},
        "output": OUTPUT,
    },
    "required": ["scheme", "params"],
    "additionalProperties": False,
}


class ScenarioError(ValueError):
    """Malformed or schema-invalid scenario file."""


@dataclass(frozen=True)
class Scenario:
    data: Mapping[str, Any]
    source: str
    sha256: str

    @property
    def scheme(self) -> str:
        return self.data["scheme"]

    @property
    def params(self) -> Mapping[str, Any]:
        return self.data["params"]

    @property
    def name(self) -> str:
        out = self.data.get("output", {})
        return out.get("stem") or Path(self.source).stem

    @property
    def checks(self) -> list[Mapping[str, Any]]:
        return list(self.data.get("checks", []))

    @property
    def sweeps(self) -> list[Mapping[str, Any]]:
        return list(self.data.get("sweep", []))

    def with_value(self, axis: str, value: float) -> "Scenario":
        data = copy.deepcopy(dict(self.data))
        set_path(data, axis, value)
        return Scenario(data, self.source, self.sha256)


def validate(data: Any) -> None:
    try:
        jsonschema.validate(data, SCENARIO_SCHEMA)
        jsonschema.validate(data["params"], SCHEME_PARAMS[data["scheme"]])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ScenarioError(f"{where}: {exc.message}") from None
    ids = [c["id"] for c in data.get("checks", [])]
    if len(ids) != len(set(ids)):
        raise ScenarioError("duplicate check ids")
    for s in data.get("sweep", []):
        resolve_axis(data, s["axis"])
    for c in data.get("checks", []):
        t, kind = c["target"], c["tolerance"]["kind"]
        if (kind == "range") != isinstance(t, list):
            raise ScenarioError(f"check {c['id']}: range tolerance needs a [lo, hi] target and vice versa")
        if kind not in ("range", "exact") and "value" not in c["tolerance"]:
            raise ScenarioError(f"check {c['id']}: tolerance {kind!r} needs a value")


def parse(text: str, source: str = "<string>") -> Scenario:
    try:
        data = _yaml.load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"{source}: not valid YAML: {exc}") from None
    if not isinstance(data, dict):
        raise ScenarioError(f"{source}: top level must be a mapping")
    validate(data)
    return Scenario(data, source, hashlib.sha256(text.encode()).hexdigest())


def load(path: str | Path) -> Scenario:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ScenarioError(f"cannot read {p}: {exc.strerror}") from None
    sc = parse(raw.decode("utf-8"), str(p))
    return Scenario(sc.data, sc.source, hashlib.sha256(raw).hexdigest())


# ----------------------------------------------------------------------------
# sweep axes
# ----------------------------------------------------------------------------


def _split(axis: str) -> list[str]:
    parts = axis.split(".")
    return parts if parts[0] in ("gpe", "dynamics") else ["params", *parts]


def resolve_axis(data: Mapping[str, Any], axis: str) -> None:
    """Raise unless ``axis`` names a numeric key allowed by the schema."""
    parts = _split(axis)
    if parts[0] == "params":
        schema = SCHEME_PARAMS[data["scheme"]]
    elif parts[0] == "gpe":
        schema = GPE
    else:
        kind = (data.get("dynamics") or {}).get("kind")
        options = [s for s in DYNAMICS["oneOf"] if s["properties"]["kind"]["const"] == kind]
        if not options:
            raise ScenarioError(f"sweep axis {axis!r}: scenario has no dynamics block")
        schema = options[0]
    if parts[0] != "params" and parts[0] not in data:
        raise ScenarioError(f"sweep axis {axis!r}: scenario has no {parts[0]} block")
    for key in parts[1:]:
        props = schema.get("properties", {})
        if key not in props:
            raise ScenarioError(f"sweep axis {axis!r}: unknown key {key!r}")
        schema = props[key]
    if schema.get("type") not in ("number", "integer"):
        raise ScenarioError(f"sweep axis {axis!r} is not numeric")


def set_path(data: dict, axis: str, value: Any) -> None:
    parts = _split(axis)
    node = data
    for key in parts[:-1]:
        node = node.setdefault(key, {})
    node[parts[-1]] = value


def grid_values(grid: Mapping[str, Any]) -> list[float]:
    if "values" in grid:
        return [float(v) for v in grid["values"]]
    start, stop, num = float(grid["start"]), float(grid["stop"]), int(grid["num"])
    if grid.get("spacing", "linear") == "log":
        if start <= 0 or stop <= 0:
            raise ScenarioError("log grid needs positive bounds")
        return [float(v) for v in np.geomspace(start, stop, num)]
    return [float(v) for v in np.linspace(start, stop, num)]


def sweep_points(sweeps: list[Mapping[str, Any]]) -> tuple[list[str], list[tuple[float, ...]]]:
    """Axis names and the Cartesian product of their grids, last axis fastest."""
    axes = [s["axis"] for s in sweeps]
    grids = [grid_values(s["grid"]) for s in sweeps]
    return axes, list(itertools.product(*grids))


def preset_dir() -> Path:
    import os

    env = os.environ.get("HYBRIDSIM_PRESET_DIR")
    if env:
        return Path(env)
    return Path(__file__).parent / "presets"


def preset_paths(directory: Optional[Path] = None) -> list[Path]:
    return sorted((directory or preset_dir()).glob("*.yaml"))


def find_preset(name: str, directory: Optional[Path] = None) -> Path:
    p = Path(name)
    if p.suffix in (".yaml", ".yml") and p.exists():
        return p
    cand = (directory or preset_dir()) / f"{name}.yaml"
    if cand.exists():
        return cand
    raise ScenarioError(f"no scenario file or preset named {name!r}")
