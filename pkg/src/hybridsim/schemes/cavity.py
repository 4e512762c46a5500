"""Reference numbers for cavity-mediated atom-membrane coupling.

Nothing is derived here; the record only carries reported figures so they
can be listed next to the computed schemes.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Mapping

from ..physcore import hz, rad
from ._common import SchemeResult


@dataclass(frozen=True)
class CavitySchemeRecord:
    reported_g0: float
    reported_omega_m: float
    reported_Q: float
    finesse: float
    bath_temperature: float
    species: str
    membrane_dimensions: tuple[float, float, float]

    @classmethod
    def from_config(cls, p: Mapping[str, Any]) -> "CavitySchemeRecord":
        return cls(
            reported_g0=rad(p["reported_g0_hz"]),
            reported_omega_m=rad(p["reported_frequency_hz"]),
            reported_Q=p["reported_quality_factor"],
            finesse=p["finesse"],
            bath_temperature=p.get("temperature_k", 0.0),
            species=p["species"],
            membrane_dimensions=tuple(p["membrane_dimensions_m"]),
        )

    def as_quantities(self) -> dict[str, Any]:
        d = asdict(self)
        return {
            "reported_g0_hz": hz(d["reported_g0"]),
            "reported_frequency_hz": hz(d["reported_omega_m"]),
            "reported_quality_factor": d["reported_Q"],
            "finesse": d["finesse"],
            "temperature_k": d["bath_temperature"],
            "species": d["species"],
        }


def evaluate(p: Mapping[str, Any]) -> SchemeResult:
    rec = CavitySchemeRecord.from_config(p)
    q = rec.as_quantities()
    return SchemeResult("cavity", None, q, row=q, notes=("reference record, not derived",))
