"""One-dimensional coupling potentials U_c[d] with exact derivatives.

Every supported kind is a power law ``U(x) = A * x**(-p)`` in the
separation ``x`` between atom and oscillator, so derivatives of any order
come from the falling factorial of ``-p``.  The kinds differ only in how
``A`` and ``p`` follow from physical inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Mapping

import numpy as np

from .physcore import CONST, DomainError

DEFAULT_VALID_RANGE = (10e-9, 100e-6)
MAX_ORDER = 4

_K_COULOMB = 1.0 / (4.0 * math.pi * CONST.epsilon_0)


def _falling(p: float, n: int) -> float:
    # d^n/dx^n x^(-p) = (-p)(-p-1)...(-p-n+1) x^(-p-n)
    out = 1.0
    for k in range(n):
        out *= -p - k
    return out


@dataclass(frozen=True)
class CouplingPotential:
    """Power-law pair potential ``coefficient * d**(-power)``.

    ``params`` keeps the physical inputs the potential was built from so it
    can be written back to a scenario file.
    """

    kind: str
    coefficient: float
    power: float
    valid_range: tuple[float, float] = DEFAULT_VALID_RANGE
    params: Mapping[str, float] = field(default_factory=dict, compare=False)

    def _check(self, d):
        d = np.asarray(d, dtype=float)
        lo, hi = self.valid_range
        if np.any(d <= 0):
            raise DomainError(f"{self.kind}: separation must be positive")
        if np.any(d < lo) or np.any(d > hi):
            raise DomainError(
                f"{self.kind}: separation outside valid range [{lo:g}, {hi:g}] m"
            )
        return d

    def derivative(self, order: int, d):
        """d^order U / dx^order at separation ``d`` (scalar or array)."""
        if not 0 <= order <= MAX_ORDER:
            raise ValueError(f"derivative order must be 0..{MAX_ORDER}")
        arr = self._check(d)
        out = self.coefficient * _falling(self.power, order) * arr ** (-self.power - order)
        return float(out) if np.ndim(out) == 0 else out

    def __call__(self, d):
        return self.derivative(0, d)

    def scaled(self, factor: float) -> "CouplingPotential":
        params = dict(self.params)
        if "beta" in params:
            params["beta"] = params["beta"] * factor
        else:
            params["scale"] = params.get("scale", 1.0) * factor
        return replace(self, coefficient=self.coefficient * factor, params=params)

    def with_range(self, lo: float, hi: float) -> "CouplingPotential":
        return replace(self, valid_range=(lo, hi))

    def to_dict(self) -> dict[str, Any]:
        out = {"kind": self.kind, **self.params}
        if self.valid_range != DEFAULT_VALID_RANGE:
            out["valid_range_m"] = list(self.valid_range)
        return out


def coulomb(charge_ion: float, charge_tip: float) -> CouplingPotential:
    """Coulomb interaction ``e q / (4 pi eps0 d)`` between ion and charged tip."""
    return CouplingPotential(
        "coulomb", _K_COULOMB * charge_ion * charge_tip, 1.0,
        params={"charge_ion_c": charge_ion, "charge_tip_c": charge_tip},
    )


def casimir_polder(C4: float, beta: float = 1.0) -> CouplingPotential:
    """Non-retarded-form surface potential ``-beta C4 / d^4``."""
    if not C4 > 0:
        raise DomainError("C4 must be positive")
    if not beta >= 0:
        raise DomainError("beta must be >= 0")
    return CouplingPotential(
        "casimir_polder", -beta * C4, 4.0, params={"c4_j_m4": C4, "beta": beta},
    )


def scaled_casimir_polder(C4: float, beta: float) -> CouplingPotential:
    """CP potential of a weaker (or stronger) body, e.g. beta=0.06 for a nanotube."""
    p = casimir_polder(C4, beta)
    return replace(p, kind="scaled_casimir_polder")


def charged_tip_c4(alpha0: float, q: float) -> float:
    """Effective 1/d^4 coefficient (alpha0/2) (q / 4 pi eps0)^2 of a point charge."""
    return 0.5 * alpha0 * (_K_COULOMB * q) ** 2


def charged_tip_polarization(alpha0: float, q: float) -> CouplingPotential:
    """Induced-dipole attraction ``-(alpha0/2) |E|^2`` to a point charge ``q``."""
    return CouplingPotential(
        "charged_tip_polarization", -charged_tip_c4(alpha0, q), 4.0,
        params={"alpha0_c_m2_per_v": alpha0, "charge_tip_c": q},
    )


def magnetic_dipole_pair(mu1: float, mu2: float) -> CouplingPotential:
    """Two coaxial, parallel point dipoles: ``-mu0 mu1 mu2 / (2 pi d^3)``."""
    return CouplingPotential(
        "magnetic_dipole_pair", -CONST.mu_0 * mu1 * mu2 / (2.0 * math.pi), 3.0,
        params={"mu1_j_per_t": mu1, "mu2_j_per_t": mu2},
    )


def custom_power_law(coefficient: float, power: float) -> CouplingPotential:
    """``coefficient / d**power``; negative coefficient means attraction."""
    if not power > 0:
        raise DomainError("power must be positive")
    return CouplingPotential(
        "custom_power_law", coefficient, power,
        params={"coefficient": coefficient, "power": power},
    )


def magnetic_dipole_gradient(mu_m: float, d: float) -> float:
    """On-axis field gradient 3 mu0 |mu_m| / (4 pi d^4) of a point dipole, in T/m."""
    if not d > 0:
        raise DomainError("distance must be positive")
    if mu_m < 0:
        raise DomainError("dipole moment magnitude must be >= 0")
    return 3.0 * CONST.mu_0 * mu_m / (4.0 * math.pi * d**4)


_BUILDERS = {
    "coulomb": lambda p: coulomb(p["charge_ion_c"], p["charge_tip_c"]),
    "casimir_polder": lambda p: casimir_polder(p["c4_j_m4"], p.get("beta", 1.0)),
    "scaled_casimir_polder": lambda p: scaled_casimir_polder(p["c4_j_m4"], p["beta"]),
    "charged_tip_polarization": lambda p: charged_tip_polarization(
        p["alpha0_c_m2_per_v"], p["charge_tip_c"]),
    "magnetic_dipole_pair": lambda p: magnetic_dipole_pair(p["mu1_j_per_t"], p["mu2_j_per_t"]),
    "custom_power_law": lambda p: custom_power_law(p["coefficient"], p["power"]),
}

KINDS = tuple(_BUILDERS)


def from_dict(spec: Mapping[str, Any]) -> CouplingPotential:
    """Inverse of :meth:`CouplingPotential.to_dict`."""
    spec = dict(spec)
    kind = spec.pop("kind")
    if kind not in _BUILDERS:
        raise ValueError(f"unknown potential kind {kind!r}")
    valid = spec.pop("valid_range_m", None)
    scale = spec.pop("scale", 1.0)
    pot = _BUILDERS[kind](spec)
    if scale != 1.0:
        pot = pot.scaled(scale)
    if valid is not None:
        pot = pot.with_range(*valid)
    return pot
