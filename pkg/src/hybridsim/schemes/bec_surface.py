"""Atoms in a surface-distorted magnetic trap next to a cantilever."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from ..coupling import budget_from_epsilon
from ..physcore import (
    HBAR,
    AtomSpecies,
    DomainError,
    Environment,
    OscillatorSpec,
    hz,
    rad,
    thermal_amplitude,
    zero_point_amplitude,
)
from ..potentials import casimir_polder
from ..trapscape import SurfaceTrapConfig, SweepRow, distance_for_barrier, evaluate_distance
from ._common import (
    SchemeResult,
    atom_from,
    budget_quantities,
    environment_from,
    optional_rad,
    oscillator_from,
)


def tof_detection_amplitude(n_atoms: float, omega_a: float, alpha: float, t_tof: float,
                            mass: float) -> float:
    """Displacement sqrt(2 hbar w_a / m N) * alpha * t of a released coherent c.o.m. state."""
    if n_atoms <= 0 or omega_a <= 0 or mass <= 0:
        raise DomainError("atom number, frequency and mass must be positive")
    if alpha < 0 or t_tof < 0:
        raise DomainError("alpha and time of flight must be >= 0")
    return math.sqrt(2.0 * HBAR * omega_a / (mass * n_atoms)) * alpha * t_tof


@dataclass(frozen=True)
class BecSurfaceParams:
    atom: AtomSpecies
    c4: float
    beta: float
    trap_frequency: float
    oscillator: OscillatorSpec
    distance: Optional[float] = None
    barrier_hbar_omega: Optional[float] = None
    gravity: bool = False
    environment: Environment = Environment(0.0)
    atomic_decoherence: float = 0.0
    n_atoms: int = 1
    tof: Optional[Mapping[str, float]] = None

    def __post_init__(self):
        if (self.distance is None) == (self.barrier_hbar_omega is None):
            raise DomainError("give exactly one of distance_m and barrier_hbar_omega")

    @property
    def trap_config(self) -> SurfaceTrapConfig:
        return SurfaceTrapConfig(self.atom, casimir_polder(self.c4, self.beta),
                                 self.trap_frequency, retune=True, gravity=self.gravity)

    @classmethod
    def from_config(cls, p: Mapping[str, Any]) -> "BecSurfaceParams":
        return cls(
            atom=atom_from(p),
            c4=p["c4_j_m4"],
            beta=p.get("beta", 1.0),
            trap_frequency=rad(p["trap_frequency_hz"]),
            oscillator=oscillator_from(p["oscillator"]),
            distance=p.get("distance_m"),
            barrier_hbar_omega=p.get("barrier_hbar_omega"),
            gravity=p.get("gravity", False),
            environment=environment_from(p.get("environment")),
            atomic_decoherence=optional_rad(p, "atomic_decoherence_hz"),
            n_atoms=p.get("n_atoms", 1),
            tof=p.get("tof"),
        )


def resolve_distance(params: BecSurfaceParams) -> float:
    if params.distance is not None:
        return params.distance
    return distance_for_barrier(params.trap_config, params.barrier_hbar_omega)


def bec_surface_budget(params: BecSurfaceParams) -> SchemeResult:
    """Trap analysis at the operating distance plus the resulting budget.

    A vanished trap is reported through the ``vanished`` quantity and an
    absent budget rather than raised.
    """
    d = resolve_distance(params)
    row: SweepRow = evaluate_distance(params.trap_config, d)
    M, wm = params.oscillator.effective_mass, params.oscillator.frequency
    T = params.environment.bath_temperature
    q: dict[str, Any] = {
        "distance_m": d,
        "vanished": row.vanished,
        "a_th_m": thermal_amplitude(M, wm, T),
        "b_qm_m": zero_point_amplitude(M, wm),
    }
    if params.tof:
        t = params.tof
        q["tof_amplitude_m"] = tof_detection_amplitude(
            t["n_atoms"], rad(t["frequency_hz"]), t.get("alpha", 1.0), t["time_s"], params.atom.mass)
    if row.vanished:
        return SchemeResult("bec_surface", None, q, row={**row.to_row()})
    a = row.analysis
    b = budget_from_epsilon(
        epsilon=a.epsilon, omega_a=a.effective_frequency, atom_mass=params.atom.mass,
        oscillator=params.oscillator, environment=params.environment,
        gamma_a_dec=params.atomic_decoherence, n_atoms=params.n_atoms,
    )
    q.update(budget_quantities(b))
    q.update({
        "U0_over_hbar_omega": a.barrier_over_hbar_omega,
        "barrier_height_j": a.barrier_height,
        "bound_level_estimate": a.bound_level_estimate,
        "trap_minimum_m": a.minimum_position,
        "omega_a_hz": hz(a.effective_frequency),
    })
    return SchemeResult("bec_surface", b, q, row={**row.to_row(), **b.to_row()})


def evaluate(p: Mapping[str, Any]) -> SchemeResult:
    return bec_surface_budget(BecSurfaceParams.from_config(p))
