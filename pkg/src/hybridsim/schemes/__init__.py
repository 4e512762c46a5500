"""Scheme calculators keyed by the ``scheme`` tag of a scenario file."""

from __future__ import annotations

from typing import Any, Callable, Mapping

from . import bec_surface, cavity, cnt, decoherence, ion, lattice, magnetic, surface_trap
from ._common import SchemeResult
from .bec_surface import BecSurfaceParams, bec_surface_budget, tof_detection_amplitude
from .cavity import CavitySchemeRecord
from .cnt import CntParams, cnt_budget
from .ion import IonSchemeParams, ion_budget, required_voltage
from .lattice import LatticeSchemeParams, lattice_backaction, lattice_budget, lattice_cooling
from .magnetic import MagneticSchemeParams, magnetic_budget, transfer_time

EVALUATORS: dict[str, Callable[[Mapping[str, Any]], SchemeResult]] = {
    "ion": ion.evaluate,
    "bec_surface": bec_surface.evaluate,
    "surface_trap": surface_trap.evaluate,
    "cnt": cnt.evaluate,
    "lattice": lattice.evaluate,
    "magnetic": magnetic.evaluate,
    "cavity": cavity.evaluate,
    "decoherence": decoherence.evaluate,
}


def evaluate(scheme: str, params: Mapping[str, Any]) -> SchemeResult:
    try:
        fn = EVALUATORS[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}; known: {sorted(EVALUATORS)}") from None
    return fn(params)


__all__ = [
    "EVALUATORS", "SchemeResult", "evaluate",
    "BecSurfaceParams", "bec_surface_budget", "tof_detection_amplitude",
    "CavitySchemeRecord", "CntParams", "cnt_budget",
    "IonSchemeParams", "ion_budget", "required_voltage",
    "LatticeSchemeParams", "lattice_backaction", "lattice_budget", "lattice_cooling",
    "MagneticSchemeParams", "magnetic_budget", "transfer_time",
]
