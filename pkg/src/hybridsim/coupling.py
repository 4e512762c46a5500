"""Linearised coupling of a trapped atom to a mechanical mode.

A pair potential U_c[d] between the atom and the oscillator shifts both
equilibrium positions (through U_c'), changes both trap frequencies
(through U_c''), and couples the two motions with strength U_c''.  The
dimensionless ratio of U_c'' to the total atomic trap curvature sets the
single-phonon exchange rate ``g0 = eps * (omega_a / 2) * sqrt(m / M)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional

from .physcore import (
    AtomSpecies,
    DomainError,
    Environment,
    OscillatorSpec,
    TrapSpec,
    hz,
    mechanical_decoherence_rate,
    thermal_occupation,
)
from .potentials import CouplingPotential

# Above this relative detuning the full sqrt(omega_a/omega_m) prefactor is kept.
RWA_DETUNING_THRESHOLD = 1e-3

BUDGET_FIELDS = (
    "epsilon", "g0_hz", "gN_hz", "gamma_m_dec_hz", "gamma_a_dec_hz", "n_th", "strong_coupling",
)


class TrapVanishedError(DomainError):
    """The coupling curvature removes the atomic trap (omega_a^2 <= 0)."""

    def __init__(self, message: str, critical_curvature: float):
        super().__init__(message)
        self.critical_curvature = critical_curvature


@dataclass(frozen=True)
class CoupledPair:
    atom: AtomSpecies
    trap: TrapSpec
    oscillator: OscillatorSpec
    potential: CouplingPotential
    equilibrium_distance: float
    environment: Environment = Environment(0.0)
    atomic_decoherence: float = 0.0
    n_atoms: int = 1

    def __post_init__(self):
        lo, hi = self.potential.valid_range
        if not lo <= self.equilibrium_distance <= hi:
            raise DomainError(
                f"equilibrium distance {self.equilibrium_distance:g} m outside the "
                f"potential's valid range [{lo:g}, {hi:g}] m"
            )
        if self.n_atoms < 1:
            raise DomainError("n_atoms must be >= 1")
        if self.atomic_decoherence < 0:
            raise DomainError("atomic decoherence rate must be >= 0")

    def curvature(self) -> float:
        return self.potential.derivative(2, self.equilibrium_distance)


@dataclass(frozen=True)
class CouplingBudget:
    """Coherent coupling against decoherence for one scheme instance (rates in rad/s)."""

    epsilon: Optional[float]
    g0: float
    gN: float
    gamma_m_dec: float
    gamma_a_dec: float
    n_th: float
    effective_omega_a: float
    effective_omega_m: float
    strong_coupling: bool
    n_atoms: int = 1

    @property
    def detuning(self) -> float:
        return self.effective_omega_a - self.effective_omega_m

    def to_row(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "g0_hz": hz(self.g0),
            "gN_hz": hz(self.gN),
            "gamma_m_dec_hz": hz(self.gamma_m_dec),
            "gamma_a_dec_hz": hz(self.gamma_a_dec),
            "n_th": self.n_th,
            "strong_coupling": self.strong_coupling,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_row(), sort_keys=False)

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=BUDGET_FIELDS, lineterminator="\n")
        if header:
            w.writeheader()
        w.writerow(self.to_row())
        return buf.getvalue()


# ----------------------------------------------------------------------------
# trap deformation
# ----------------------------------------------------------------------------


def equilibrium_shifts(pair: CoupledPair) -> tuple[float, float]:
    """Static displacement of atom and oscillator caused by the coupling gradient.

    Returns ``(dZ_a, dZ_m)`` with ``dZ_a = +U'/(m w_a0^2)`` and
    ``dZ_m = -U'/(M w_m0^2)``.
    """
    grad = pair.potential.derivative(1, pair.equilibrium_distance)
    dza = grad / (pair.atom.mass * pair.trap.bare_frequency**2)
    dzm = -grad / (pair.oscillator.effective_mass * pair.oscillator.frequency**2)
    return dza, dzm


def _effective(omega0: float, curvature: float, mass: float, what: str) -> float:
    sq = omega0**2 + curvature / mass
    if sq <= 0:
        critical = mass * omega0**2
        raise TrapVanishedError(
            f"{what} trap vanished: |U_c''| = {abs(curvature):.4g} >= m w0^2 = {critical:.4g}",
            critical,
        )
    return math.sqrt(sq)


def effective_frequencies(pair: CoupledPair) -> tuple[float, float]:
    """Trap frequencies ``(omega_a, omega_m)`` including the coupling curvature."""
    k = pair.curvature()
    wa = _effective(pair.trap.bare_frequency, k, pair.atom.mass, "atom")
    wm = _effective(pair.oscillator.frequency, k, pair.oscillator.effective_mass, "oscillator")
    return wa, wm


def epsilon_from_curvature(curvature: float, mass: float, bare_frequency: float) -> float:
    denom = mass * bare_frequency**2 + curvature
    if denom <= 0:
        raise TrapVanishedError(
            "atom trap vanished: coupling-strength parameter undefined",
            mass * bare_frequency**2,
        )
    return curvature / denom


def coupling_strength_parameter(pair: CoupledPair) -> float:
    """Signed eps = U_c'' / (m w_a0^2 + U_c''); negative for attractive 1/d^n laws."""
    return epsilon_from_curvature(pair.curvature(), pair.atom.mass, pair.trap.bare_frequency)


def anharmonic_frequency(pair: CoupledPair, amplitude: float) -> float:
    """Amplitude-dependent oscillation frequency sqrt(w_a^2 + a^2 U'''' / 8m)."""
    if amplitude < 0:
        raise DomainError("amplitude must be >= 0")
    wa, _ = effective_frequencies(pair)
    u4 = pair.potential.derivative(4, pair.equilibrium_distance)
    sq = wa**2 + amplitude**2 * u4 / (8.0 * pair.atom.mass)
    if sq <= 0:
        raise DomainError(f"amplitude {amplitude:g} m beyond validity of the quartic correction")
    return math.sqrt(sq)


# ----------------------------------------------------------------------------
# coherent coupling and budget
# ----------------------------------------------------------------------------


def coupling_rate(epsilon: float, omega_a: float, omega_m: float, m: float, M: float) -> float:
    """Single-phonon exchange rate in the rotating-wave approximation.

    ``eps * (omega_a/2) * sqrt(m/M)``, multiplied by ``sqrt(omega_a/omega_m)``
    when the two frequencies differ by more than ``RWA_DETUNING_THRESHOLD``.
    """
    g0 = epsilon * 0.5 * omega_a * math.sqrt(m / M)
    if abs(omega_a - omega_m) / omega_a > RWA_DETUNING_THRESHOLD:
        g0 *= math.sqrt(omega_a / omega_m)
    return g0


def single_phonon_coupling(pair: CoupledPair) -> float:
    wa, wm = effective_frequencies(pair)
    eps = coupling_strength_parameter(pair)
    return coupling_rate(eps, wa, wm, pair.atom.mass, pair.oscillator.effective_mass)


def strong_coupling_verdict(gN: float, gamma_m_dec: float, gamma_a_dec: float) -> bool:
    return abs(gN) > max(gamma_m_dec, gamma_a_dec)


def assemble_budget(
    *,
    g0: float,
    oscillator: OscillatorSpec,
    environment: Environment,
    gamma_a_dec: float,
    n_atoms: int = 1,
    epsilon: Optional[float] = None,
    omega_a: Optional[float] = None,
    omega_m: Optional[float] = None,
) -> CouplingBudget:
    """Build a budget from an already known single-phonon rate.

    Scheme calculators that reach g0 by another route (spin coupling,
    radiation pressure) use this so the collective enhancement, decoherence
    rates and verdict are computed in one place.
    """
    if n_atoms < 1:
        raise DomainError("n_atoms must be >= 1")
    T = environment.bath_temperature
    wm = oscillator.frequency if omega_m is None else omega_m
    wa = wm if omega_a is None else omega_a
    gN = g0 * math.sqrt(n_atoms)
    gm = mechanical_decoherence_rate(oscillator.quality_factor, T)
    return CouplingBudget(
        epsilon=epsilon,
        g0=g0,
        gN=gN,
        gamma_m_dec=gm,
        gamma_a_dec=gamma_a_dec,
        n_th=thermal_occupation(wm, T),
        effective_omega_a=wa,
        effective_omega_m=wm,
        strong_coupling=strong_coupling_verdict(gN, gm, gamma_a_dec),
        n_atoms=n_atoms,
    )


def budget_from_epsilon(
    *,
    epsilon: float,
    omega_a: float,
    atom_mass: float,
    oscillator: OscillatorSpec,
    environment: Environment,
    gamma_a_dec: float,
    n_atoms: int = 1,
    omega_m: Optional[float] = None,
) -> CouplingBudget:
    wm = oscillator.frequency if omega_m is None else omega_m
    g0 = coupling_rate(epsilon, omega_a, wm, atom_mass, oscillator.effective_mass)
    return assemble_budget(
        g0=g0, oscillator=oscillator, environment=environment, gamma_a_dec=gamma_a_dec,
        n_atoms=n_atoms, epsilon=epsilon, omega_a=omega_a, omega_m=wm,
    )


def budget(pair: CoupledPair) -> CouplingBudget:
    """Coupling budget of a fully specified pair."""
    context = f"budget for {pair.atom.name} at d={pair.equilibrium_distance:g} m"
    try:
        wa, wm = effective_frequencies(pair)
        eps = coupling_strength_parameter(pair)
    except TrapVanishedError as exc:
        raise TrapVanishedError(f"{context}: {exc}", exc.critical_curvature) from exc
    except DomainError as exc:
        raise DomainError(f"{context}: {exc}") from exc
    return budget_from_epsilon(
        epsilon=eps, omega_a=wa, atom_mass=pair.atom.mass, oscillator=pair.oscillator,
        environment=pair.environment, gamma_a_dec=pair.atomic_decoherence,
        n_atoms=pair.n_atoms, omega_m=wm,
    )
