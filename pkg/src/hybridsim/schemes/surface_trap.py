"""Bare trap-deformation scenario: one point of an eps(d) or eps(U0) curve."""

from __future__ import annotations

from typing import Any, Mapping

from ..physcore import rad
from ..potentials import casimir_polder
from ..trapscape import SurfaceTrapConfig, distance_for_barrier, evaluate_distance
from ._common import SchemeResult, atom_from


def trap_config(p: Mapping[str, Any]) -> SurfaceTrapConfig:
    return SurfaceTrapConfig(
        atom_from(p), casimir_polder(p["c4_j_m4"], p.get("beta", 1.0)),
        rad(p["trap_frequency_hz"]), retune=p.get("retune", True), gravity=p.get("gravity", False),
    )


def evaluate(p: Mapping[str, Any]) -> SchemeResult:
    cfg = trap_config(p)
    if "barrier_hbar_omega" in p:
        d = distance_for_barrier(cfg, p["barrier_hbar_omega"])
    else:
        d = p["distance_m"]
    row = evaluate_distance(cfg, d).to_row()
    q = dict(row)
    q["abs_epsilon"] = None if row["epsilon"] is None else abs(row["epsilon"])
    return SchemeResult("surface_trap", None, q, row=row)
