"""Single ion coupled to a charged nano-oscillator through the Coulomb force.

The ion trap frequency is the operating (effective) frequency and the
coupling parameter is taken in its small-distortion form
``eps = U_c'' / (m w_a^2) = e q / (2 pi eps0 d^3 m w_a^2)``, multiplied by
the compensation factor of additional trap electrodes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from ..coupling import budget_from_epsilon
from ..physcore import CONST, AtomSpecies, DomainError, Environment, OscillatorSpec, rad
from ..potentials import coulomb
from ._common import (
    SchemeResult,
    atom_from,
    budget_quantities,
    environment_from,
    optional_rad,
    oscillator_from,
)

MAX_EPSILON = 1e2


def sphere_charge(voltage: float, radius: float) -> float:
    """Charge C V on a conducting sphere of capacitance 4 pi eps0 r."""
    return 4.0 * math.pi * CONST.epsilon_0 * radius * voltage


@dataclass(frozen=True)
class IonSchemeParams:
    ion: AtomSpecies
    trap_frequency: float
    distance: float
    oscillator: OscillatorSpec
    tip_charge: Optional[float] = None
    voltage: Optional[float] = None
    sphere_radius: Optional[float] = None
    compensation_factor: float = 1.0
    target_epsilon: Optional[float] = None
    environment: Environment = Environment(0.0)
    atomic_decoherence: float = 0.0

    def __post_init__(self):
        if self.ion.charge == 0:
            raise DomainError(f"species {self.ion.name!r} carries no charge")
        if self.compensation_factor < 1:
            raise DomainError("compensation factor must be >= 1")
        if self.tip_charge is None and (self.voltage is None or self.sphere_radius is None):
            raise DomainError("give either tip_charge or voltage and sphere_radius")
        if self.compensation_factor > MAX_EPSILON:
            warnings.warn(
                f"compensation factor {self.compensation_factor:g} exceeds the "
                f"practical bound {MAX_EPSILON:g}", stacklevel=2)

    @property
    def charge(self) -> float:
        if self.tip_charge is not None:
            return self.tip_charge
        return sphere_charge(self.voltage, self.sphere_radius)

    @classmethod
    def from_config(cls, p: Mapping[str, Any]) -> "IonSchemeParams":
        return cls(
            ion=atom_from(p),
            trap_frequency=rad(p["trap_frequency_hz"]),
            distance=p["distance_m"],
            oscillator=oscillator_from(p["oscillator"]),
            tip_charge=p.get("tip_charge_c"),
            voltage=p.get("voltage_v"),
            sphere_radius=p.get("sphere_radius_m"),
            compensation_factor=p.get("compensation_factor", 1.0),
            target_epsilon=p.get("target_epsilon"),
            environment=environment_from(p.get("environment")),
            atomic_decoherence=optional_rad(p, "atomic_decoherence_hz"),
        )


def ion_epsilon(params: IonSchemeParams) -> float:
    pot = coulomb(params.ion.charge, params.charge)
    curv = pot.derivative(2, params.distance)
    return params.compensation_factor * curv / (params.ion.mass * params.trap_frequency**2)


def required_voltage(params: IonSchemeParams, target_epsilon: float) -> float:
    """Sphere voltage V = eps m w^2 d^3 / (2 r e) giving ``target_epsilon``."""
    if params.sphere_radius is None:
        raise DomainError("required voltage needs the sphere radius")
    m, w, d = params.ion.mass, params.trap_frequency, params.distance
    return target_epsilon * m * w**2 * d**3 / (
        2.0 * params.sphere_radius * params.ion.charge * params.compensation_factor)


def ion_budget(params: IonSchemeParams) -> SchemeResult:
    eps = ion_epsilon(params)
    if abs(eps) > MAX_EPSILON:
        raise DomainError(f"eps = {eps:.3g} beyond the compensation limit {MAX_EPSILON:g}")
    b = budget_from_epsilon(
        epsilon=eps, omega_a=params.trap_frequency, atom_mass=params.ion.mass,
        oscillator=params.oscillator, environment=params.environment,
        gamma_a_dec=params.atomic_decoherence,
    )
    grad = coulomb(params.ion.charge, params.charge).derivative(1, params.distance)
    dza = grad / (params.ion.mass * params.trap_frequency**2)
    q = {
        **budget_quantities(b),
        "tip_charge_c": params.charge,
        "delta_z_a_m": dza,
        "delta_z_a_over_d": dza / params.distance,
    }
    if params.sphere_radius is not None:
        target = 1.0 if params.target_epsilon is None else params.target_epsilon
        q["target_epsilon"] = target
        q["required_voltage_v"] = required_voltage(params, target)
    return SchemeResult("ion", b, q, row={**b.to_row(), **q})


def evaluate(p: Mapping[str, Any]) -> SchemeResult:
    return ion_budget(IonSchemeParams.from_config(p))
