"""Shared pieces of the scheme calculators: result type and config-block parsing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from ..coupling import CouplingBudget
from ..physcore import (
    CANTILEVER_MODE_FACTOR,
    AtomSpecies,
    Environment,
    Geometry,
    OscillatorSpec,
    rad,
    species,
)


@dataclass(frozen=True)
class SchemeResult:
    """Output of one scheme evaluation.

    ``quantities`` is a flat map of named scalars (SI, frequencies in Hz as
    flagged by the ``_hz`` suffix).  ``row`` is the subset written per grid
    point by sweeps.
    """

    scheme: str
    budget: Optional[CouplingBudget]
    quantities: Mapping[str, Any]
    row: Mapping[str, Any] = field(default_factory=dict)
    tables: Mapping[str, list] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def flat(self) -> dict[str, Any]:
        out = {}
        if self.budget is not None:
            out.update(self.budget.to_row())
        out.update(self.quantities)
        return out


def budget_quantities(b: CouplingBudget) -> dict[str, Any]:
    """Magnitudes used by regression checks next to the signed budget fields."""
    out = {
        "abs_g0_hz": abs(b.g0) / (2 * math.pi),
        "abs_gN_hz": abs(b.gN) / (2 * math.pi),
        "omega_a_hz": b.effective_omega_a / (2 * math.pi),
        "omega_m_hz": b.effective_omega_m / (2 * math.pi),
    }
    if b.epsilon is not None:
        out["abs_epsilon"] = abs(b.epsilon)
    return out


def atom_from(block: Mapping[str, Any]) -> AtomSpecies:
    return species(block["species"])


def environment_from(block: Optional[Mapping[str, Any]]) -> Environment:
    if not block:
        return Environment(0.0)
    return Environment(float(block["temperature_k"]))


def geometry_from(block: Mapping[str, Any]) -> Geometry:
    return Geometry(
        length=float(block["length_m"]),
        width=float(block["width_m"]),
        thickness=float(block["thickness_m"]),
        density=float(block["density_kg_per_m3"]),
        mode_shape_factor=float(block.get("mode_shape_factor", CANTILEVER_MODE_FACTOR)),
    )


def oscillator_from(block: Mapping[str, Any]) -> OscillatorSpec:
    """Oscillator from a config block; mass given directly or via ``geometry``."""
    omega = rad(float(block["frequency_hz"]))
    Q = float(block["quality_factor"])
    R = float(block.get("power_reflectivity", 0.0))
    if "geometry" in block:
        geo = geometry_from(block["geometry"])
        if "effective_mass_kg" in block:
            return OscillatorSpec(float(block["effective_mass_kg"]), omega, Q, R, geo)
        return OscillatorSpec.from_geometry(geo, omega, Q, R)
    return OscillatorSpec(float(block["effective_mass_kg"]), omega, Q, R)


def optional_rad(block: Mapping[str, Any], key: str, default: float = 0.0) -> float:
    v = block.get(key)
    return default if v is None else rad(float(v))
