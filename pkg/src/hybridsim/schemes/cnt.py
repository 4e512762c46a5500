"""Atoms coupled to a carbon nanotube.

Three ways of producing the coupling are covered:

``cp``
    the nanotube's own Casimir-Polder attraction, a fraction ``beta`` of
    the bulk-conductor potential;
``charged``
    induced-dipole attraction to a statically charged tube, the same 1/d^4
    law with an effective coefficient;
``current_carrying``
    the tube is the trapping wire, so its motion moves the trap rigidly
    (eps = 1).

For the two surface variants eps is solved from the trap analysis at a
fixed barrier height.  Budgets are also reported per unit eps so the rates
can be compared for any achievable eps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Optional

from ..coupling import budget_from_epsilon
from ..physcore import (
    AtomSpecies,
    DomainError,
    Environment,
    OscillatorSpec,
    hz,
    rad,
    thermal_amplitude,
    zero_point_amplitude,
)
from ..potentials import casimir_polder, charged_tip_c4, charged_tip_polarization
from ..trapscape import SurfaceTrapConfig, distance_for_barrier, evaluate_distance
from ._common import SchemeResult, atom_from, budget_quantities, environment_from, optional_rad, oscillator_from

VARIANTS = ("cp", "charged", "current_carrying")


def scaled_tube(reference_length: float, reference_mass: float, reference_frequency: float,
                length: float) -> tuple[float, float]:
    """Mass and angular frequency of a tube of another length.

    Same cross-section: mass scales with length, flexural frequency as 1/l^2.
    """
    if min(reference_length, reference_mass, reference_frequency, length) <= 0:
        raise DomainError("tube parameters must be positive")
    s = length / reference_length
    return reference_mass * s, reference_frequency / s**2


def tube_oscillator(block: Mapping[str, Any]) -> OscillatorSpec:
    """Oscillator block that may describe the tube by scaling a reference tube."""
    if "scaled_from" not in block:
        return oscillator_from(block)
    ref = block["scaled_from"]
    M, w = scaled_tube(ref["length_m"], ref["effective_mass_kg"], rad(ref["frequency_hz"]),
                       block["length_m"])
    return OscillatorSpec(M, w, float(block["quality_factor"]))


@dataclass(frozen=True)
class CntParams:
    variant: str
    atom: AtomSpecies
    oscillator: OscillatorSpec
    n_atoms: int = 1
    trap_frequency: Optional[float] = None
    c4: Optional[float] = None
    beta: float = 0.06
    tube_charge: Optional[float] = None
    barrier_hbar_omega: float = 8.0
    environment: Environment = Environment(0.0)
    atomic_decoherence: float = 0.0
    room_temperature: float = 300.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown CNT variant {self.variant!r}; expected one of {VARIANTS}")
        if self.variant in ("cp", "charged") and self.c4 is None:
            raise DomainError(f"variant {self.variant!r} needs c4_j_m4")
        if self.variant == "charged" and self.tube_charge is None:
            raise DomainError("variant 'charged' needs tube_charge_c")

    @property
    def omega_a(self) -> float:
        return self.oscillator.frequency if self.trap_frequency is None else self.trap_frequency

    @property
    def effective_beta(self) -> Optional[float]:
        if self.variant == "cp":
            return self.beta
        if self.variant == "charged":
            return charged_tip_c4(self.atom.static_polarizability, self.tube_charge) / self.c4
        return None

    @classmethod
    def from_config(cls, p: Mapping[str, Any]) -> "CntParams":
        return cls(
            variant=p["variant"],
            atom=atom_from(p),
            oscillator=tube_oscillator(p["oscillator"]),
            n_atoms=p.get("n_atoms", 1),
            trap_frequency=None if "trap_frequency_hz" not in p else rad(p["trap_frequency_hz"]),
            c4=p.get("c4_j_m4"),
            beta=p.get("beta", 0.06),
            tube_charge=p.get("tube_charge_c"),
            barrier_hbar_omega=p.get("barrier_hbar_omega", 8.0),
            environment=environment_from(p.get("environment")),
            atomic_decoherence=optional_rad(p, "atomic_decoherence_hz"),
            room_temperature=p.get("room_temperature_k", 300.0),
        )


def cnt_epsilon(params: CntParams) -> tuple[float, Optional[float]]:
    """(eps, distance) for the chosen variant."""
    if params.variant == "current_carrying":
        return 1.0, None
    if params.variant == "cp":
        pot = casimir_polder(params.c4, params.beta)
    else:
        pot = charged_tip_polarization(params.atom.static_polarizability, params.tube_charge)
    cfg = SurfaceTrapConfig(params.atom, pot, params.omega_a, retune=True, gravity=False)
    d = distance_for_barrier(cfg, params.barrier_hbar_omega)
    return evaluate_distance(cfg, d).epsilon, d


def cnt_budget(params: CntParams) -> SchemeResult:
    eps, d = cnt_epsilon(params)
    kw = dict(
        omega_a=params.omega_a, atom_mass=params.atom.mass, oscillator=params.oscillator,
        environment=params.environment, gamma_a_dec=params.atomic_decoherence,
        n_atoms=params.n_atoms,
    )
    b = budget_from_epsilon(epsilon=eps, **kw)
    unit = budget_from_epsilon(epsilon=1.0, **kw)
    M, wm = params.oscillator.effective_mass, params.oscillator.frequency
    q = {
        **budget_quantities(b),
        "variant": params.variant,
        "effective_beta": params.effective_beta,
        "distance_m": d,
        "g0_over_epsilon_hz": hz(unit.g0),
        "gN_over_epsilon_hz": hz(unit.gN),
        "effective_mass_kg": M,
        "b_th_room_m": thermal_amplitude(M, wm, params.room_temperature),
        "b_qm_m": zero_point_amplitude(M, wm),
    }
    return SchemeResult("cnt", b, q, row={**b.to_row(), "g0_over_epsilon_hz": q["g0_over_epsilon_hz"],
                                          "gN_over_epsilon_hz": q["gN_over_epsilon_hz"]})


def evaluate(p: Mapping[str, Any]) -> SchemeResult:
    return cnt_budget(CntParams.from_config(p))
