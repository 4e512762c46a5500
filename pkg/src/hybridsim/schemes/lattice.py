"""Membrane coupled to lattice-trapped atoms through the lattice light.

The membrane reflects the lattice beam, so its motion shakes the lattice
(eps = 1 for the atoms).  The atoms act back on the membrane only through
radiation pressure, reduced by the power reflectivity R, which makes the
coupling asymmetric: g_m = R g_N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from ..coupling import CouplingBudget, budget_from_epsilon
from ..physcore import (
    CONST,
    AtomSpecies,
    DomainError,
    Environment,
    OscillatorSpec,
    hz,
    rad,
    thermal_occupation,
)
from ._common import SchemeResult, atom_from, budget_quantities, environment_from, oscillator_from


def lattice_backaction(force: float, reflectivity: float) -> tuple[float, float]:
    """Power modulation F c / 2 and radiation-pressure force -R F on the membrane."""
    if not 0.0 <= reflectivity <= 1.0:
        raise DomainError("power reflectivity must lie in [0, 1]")
    dP = force * CONST.c / 2.0
    return dP, -2.0 * reflectivity * dP / CONST.c


@dataclass(frozen=True)
class LatticeSchemeParams:
    atom: AtomSpecies
    membrane: OscillatorSpec
    n_atoms: float
    atom_cooling_rate: float
    wavelength: float = 780e-9
    lattice_depth: Optional[float] = None
    environment: Environment = Environment(0.0)
    atomic_decoherence: float = 0.0

    def __post_init__(self):
        if self.n_atoms < 0:
            raise DomainError("atom number must be >= 0")
        if not self.atom_cooling_rate > 0:
            raise DomainError("atomic cooling rate must be positive")

    @property
    def wavevector(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def omega_a(self) -> float:
        """Axial frequency sqrt(2 U0 k^2 / m) of a lattice site; resonant if no depth is given."""
        if self.lattice_depth is None:
            return self.membrane.frequency
        return math.sqrt(2.0 * self.lattice_depth * self.wavevector**2 / self.atom.mass)

    @classmethod
    def from_config(cls, p: Mapping[str, Any]) -> "LatticeSchemeParams":
        return cls(
            atom=atom_from(p),
            membrane=oscillator_from(p["oscillator"]),
            n_atoms=p["n_atoms"],
            atom_cooling_rate=rad(p["atom_cooling_rate_hz"]),
            wavelength=p.get("wavelength_m", 780e-9),
            lattice_depth=p.get("lattice_depth_j"),
            environment=environment_from(p.get("environment")),
            atomic_decoherence=rad(p.get("atomic_decoherence_hz", 0.0)),
        )


def lattice_single_atom_budget(params: LatticeSchemeParams, n_atoms: Optional[float] = None) -> CouplingBudget:
    n = params.n_atoms if n_atoms is None else n_atoms
    return budget_from_epsilon(
        epsilon=1.0, omega_a=params.omega_a, atom_mass=params.atom.mass,
        oscillator=params.membrane, environment=params.environment,
        gamma_a_dec=params.atomic_decoherence, n_atoms=max(1, n),
    )


def lattice_cooling(params: LatticeSchemeParams, n_atoms: Optional[float] = None
                    ) -> tuple[float, float, float]:
    """Sympathetic cooling (Gamma_m, n_ss, Gamma_m / gamma_m).

    Gamma_m = gamma_m + 4 R N g0^2 / gamma_cool and
    n_ss = (gamma_m / Gamma_m) n_th + (gamma_cool / 4 w_m)^2 with
    gamma_m = w_m / Q.  ``n_atoms`` overrides the parameter set (0 allowed).
    """
    n = params.n_atoms if n_atoms is None else n_atoms
    if n < 0:
        raise DomainError("atom number must be >= 0")
    mem = params.membrane
    g0 = lattice_single_atom_budget(params, 1).g0
    gamma_m = mem.damping_rate
    gc = params.atom_cooling_rate
    Gamma = gamma_m + 4.0 * mem.power_reflectivity * n * g0**2 / gc
    n_th = thermal_occupation(mem.frequency, params.environment.bath_temperature)
    n_ss = gamma_m / Gamma * n_th + (gc / (4.0 * mem.frequency)) ** 2
    return Gamma, n_ss, Gamma / gamma_m


def lattice_budget(params: LatticeSchemeParams) -> SchemeResult:
    if params.n_atoms < 1:
        raise DomainError("a coupling budget needs at least one atom")
    b = lattice_single_atom_budget(params)
    R = params.membrane.power_reflectivity
    Gamma, n_ss, factor = lattice_cooling(params)
    gm = R * b.gN
    q = {
        **budget_quantities(b),
        "gm_hz": hz(gm),
        "gm_over_gN": gm / b.gN,
        "gamma_m_hz": hz(params.membrane.damping_rate),
        "Gamma_m_hz": hz(Gamma),
        "n_ss": n_ss,
        "cooling_factor": factor,
        "atom_cooling_rate_hz": hz(params.atom_cooling_rate),
    }
    return SchemeResult("lattice", b, q, row={**b.to_row(), "Gamma_m_hz": q["Gamma_m_hz"],
                                              "n_ss": n_ss, "cooling_factor": factor})


def evaluate(p: Mapping[str, Any]) -> SchemeResult:
    return lattice_budget(LatticeSchemeParams.from_config(p))
