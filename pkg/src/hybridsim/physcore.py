"""Constants, parameter types and closed-form oscillator quantities.

Everything is SI.  Frequencies are angular (rad/s) inside the package; the
conversion to ordinary frequency happens only where values are read from
or written to files (keys and columns ending in ``_hz``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Mapping, Optional

from . import _yaml

TWO_PI = 2.0 * math.pi

# Standard effective-mass factors M_eff / M_total for the fundamental mode.
CANTILEVER_MODE_FACTOR = 0.243
DOUBLY_CLAMPED_MODE_FACTOR = 0.397


class DomainError(ValueError):
    """An input lies outside the domain where a formula is defined."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float
    k_B: float
    mu_B: float
    mu_0: float
    epsilon_0: float
    c: float
    elementary_charge: float
    g_gravity: float
    atomic_mass: float


@lru_cache(maxsize=None)
def _physics_table() -> dict:
    text = resources.files("hybridsim.data").joinpath("physics.yaml").read_text()
    return _yaml.load(text)


def _load_constants() -> PhysicalConstants:
    c = _physics_table()["constants"]
    return PhysicalConstants(
        hbar=c["hbar_j_s"],
        k_B=c["k_b_j_per_k"],
        mu_B=c["mu_b_j_per_t"],
        mu_0=c["mu_0_n_per_a2"],
        epsilon_0=c["epsilon_0_f_per_m"],
        c=c["c_m_per_s"],
        elementary_charge=c["elementary_charge_c"],
        g_gravity=c["g_gravity_m_per_s2"],
        atomic_mass=c["atomic_mass_kg"],
    )


CONST = _load_constants()
HBAR = CONST.hbar
KB = CONST.k_B


def hz(omega: float) -> float:
    """Angular frequency (rad/s) to ordinary frequency (Hz)."""
    return omega / TWO_PI


def rad(f_hz: float) -> float:
    """Ordinary frequency (Hz) to angular frequency (rad/s)."""
    return TWO_PI * f_hz


# ----------------------------------------------------------------------------
# parameter types
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomSpecies:
    name: str
    mass: float
    static_polarizability: float = 0.0
    charge: float = 0.0
    hyperfine_g_factors: Mapping[int, float] = field(default_factory=dict)
    hyperfine_splitting: Optional[float] = None

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"species {self.name!r}: mass must be positive")
        if self.static_polarizability < 0:
            raise DomainError(f"species {self.name!r}: polarizability must be >= 0")

    def g_factor(self, F: int) -> float:
        try:
            return self.hyperfine_g_factors[F]
        except KeyError:
            raise DomainError(f"species {self.name!r} has no g_F for F={F}") from None


def species(name: str) -> AtomSpecies:
    """Look up a shipped species preset (``Rb87``, ``Be9+``, ``Cs133``)."""
    table = _physics_table()["species"]
    if name not in table:
        raise KeyError(f"unknown species {name!r}; known: {sorted(table)}")
    s = table[name]
    hfs = s.get("hyperfine_splitting_hz")
    return AtomSpecies(
        name=name,
        mass=s["mass_kg"],
        static_polarizability=s["static_polarizability_c_m2_per_v"],
        charge=s["charge_c"],
        hyperfine_g_factors={int(k): float(v) for k, v in s["hyperfine_g_factors"].items()},
        hyperfine_splitting=None if hfs is None else rad(hfs),
    )


def species_names() -> list[str]:
    return sorted(_physics_table()["species"])


@dataclass(frozen=True)
class Geometry:
    """Beam dimensions used to derive an effective mass."""

    length: float
    width: float
    thickness: float
    density: float
    mode_shape_factor: float = CANTILEVER_MODE_FACTOR

    @property
    def total_mass(self) -> float:
        return self.density * self.length * self.width * self.thickness

    @property
    def effective_mass(self) -> float:
        return self.mode_shape_factor * self.total_mass


@dataclass(frozen=True)
class OscillatorSpec:
    effective_mass: float
    frequency: float
    quality_factor: float
    power_reflectivity: float = 0.0
    geometry: Optional[Geometry] = None

    def __post_init__(self):
        if not self.effective_mass > 0:
            raise DomainError("oscillator effective mass must be positive")
        if not self.frequency > 0:
            raise DomainError("oscillator frequency must be positive")
        if not self.quality_factor > 0:
            raise DomainError("quality factor must be positive")
        if not 0.0 <= self.power_reflectivity <= 1.0:
            raise DomainError("power reflectivity must lie in [0, 1]")
        if self.geometry is not None:
            expected = self.geometry.effective_mass
            if not math.isclose(self.effective_mass, expected, rel_tol=1e-9):
                raise DomainError(
                    f"effective mass {self.effective_mass:g} kg disagrees with geometry "
                    f"({expected:g} kg); use OscillatorSpec.from_geometry"
                )

    @classmethod
    def from_geometry(cls, geometry: Geometry, frequency: float, quality_factor: float,
                      power_reflectivity: float = 0.0) -> "OscillatorSpec":
        return cls(geometry.effective_mass, frequency, quality_factor, power_reflectivity, geometry)

    @property
    def damping_rate(self) -> float:
        """Energy damping rate omega_m / Q."""
        return self.frequency / self.quality_factor


@dataclass(frozen=True)
class Environment:
    bath_temperature: float

    def __post_init__(self):
        if self.bath_temperature < 0:
            raise DomainError("bath temperature must be >= 0")


class TrapKind(str, Enum):
    magnetic = "magnetic"
    optical_lattice = "optical_lattice"
    ion_rf = "ion_rf"
    optical_dipole = "optical_dipole"


@dataclass(frozen=True)
class TrapSpec:
    bare_frequency: float
    bare_minimum: float = 0.0
    trap_kind: TrapKind = TrapKind.magnetic

    def __post_init__(self):
        if not self.bare_frequency > 0:
            raise DomainError("bare trap frequency must be positive")


# ----------------------------------------------------------------------------
# closed-form oscillator quantities
# ----------------------------------------------------------------------------


def _require_positive(**values: float) -> None:
    for name, v in values.items():
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v!r}")


def _require_temperature(T: float) -> None:
    if T < 0 or math.isnan(T):
        raise DomainError(f"temperature must be >= 0, got {T!r}")


def zero_point_amplitude(mass: float, frequency: float) -> float:
    """Ground-state position spread sqrt(hbar / 2 m omega)."""
    _require_positive(mass=mass, frequency=frequency)
    return math.sqrt(HBAR / (2.0 * mass * frequency))


def thermal_amplitude(mass: float, frequency: float, T: float) -> float:
    """Classical rms amplitude sqrt(k_B T / m omega^2)."""
    _require_positive(mass=mass, frequency=frequency)
    _require_temperature(T)
    return math.sqrt(KB * T / (mass * frequency**2))


def thermal_occupation(frequency: float, T: float) -> float:
    """High-temperature phonon number k_B T / hbar omega."""
    _require_positive(frequency=frequency)
    _require_temperature(T)
    return KB * T / (HBAR * frequency)


def mechanical_decoherence_rate(Q: float, T: float) -> float:
    """Thermal decoherence rate k_B T / (hbar Q) of a mechanical mode, in rad/s."""
    _require_positive(Q=Q)
    _require_temperature(T)
    return KB * T / (HBAR * Q)


def perfect_conductor_c4(static_polarizability: float) -> float:
    """Retarded Casimir-Polder coefficient of an atom facing a perfect conductor.

    C4 = 3 hbar c alpha_0 / (32 pi^2 epsilon_0).  Provided as a convenience for
    building configs; no module uses it as an implicit default.
    """
    return 3.0 * HBAR * CONST.c * static_polarizability / (32.0 * math.pi**2 * CONST.epsilon_0)
