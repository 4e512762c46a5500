"""Thermal decoherence of a mechanical mode on its own."""

from __future__ import annotations

from typing import Any, Mapping

from ..physcore import hz, mechanical_decoherence_rate, rad, thermal_occupation
from ._common import SchemeResult


def evaluate(p: Mapping[str, Any]) -> SchemeResult:
    Q, T = p["quality_factor"], p["temperature_k"]
    q = {"gamma_m_dec_hz": hz(mechanical_decoherence_rate(Q, T))}
    if "frequency_hz" in p:
        q["n_th"] = thermal_occupation(rad(p["frequency_hz"]), T)
    return SchemeResult("decoherence", None, q, row=q)
