"""Nanomagnet on a cantilever tip driving Zeeman transitions of trapped atoms.

Cantilever motion b(t) becomes a transverse field b(t) G_m at the atoms.
For a transition |g> -> |e> inside one hyperfine manifold the single-phonon
coupling is

    g0 = mu_B |g_F| |<e|F_x|g>| G_m b_qm / hbar,

which is mu_B G_m b_qm / (sqrt(8) hbar) for |1,-1> -> |1,0> of 87Rb.
Pairs in different manifolds need an extra microwave photon; the
two-photon rate is modelled as the direct rate of the |g> manifold leg
divided by 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from ..coupling import assemble_budget
from ..physcore import (
    CONST,
    HBAR,
    AtomSpecies,
    DomainError,
    Environment,
    Geometry,
    OscillatorSpec,
    hz,
    rad,
    zero_point_amplitude,
)
from ..potentials import magnetic_dipole_gradient
from ._common import SchemeResult, atom_from, budget_quantities, environment_from, geometry_from, optional_rad

TWO_PHOTON_REDUCTION = 3.0

State = tuple[int, int]


def fx_matrix_element(F: int, m_from: int, m_to: int) -> float:
    """|<F, m_to| F_x |F, m_from>| for spin-F angular momentum."""
    if abs(m_from) > F or abs(m_to) > F:
        raise DomainError(f"|m| exceeds F={F}")
    if abs(m_to - m_from) != 1:
        return 0.0
    return 0.5 * math.sqrt(F * (F + 1) - m_from * m_to)


@dataclass(frozen=True)
class StatePair:
    ground: State
    excited: State

    @property
    def same_manifold(self) -> bool:
        return self.ground[0] == self.excited[0]

    @classmethod
    def parse(cls, block: Mapping[str, Any]) -> "StatePair":
        g, e = block["ground"], block["excited"]
        return cls((int(g[0]), int(g[1])), (int(e[0]), int(e[1])))


@dataclass(frozen=True)
class MagneticSchemeParams:
    atom: AtomSpecies
    magnet_moment: float
    distance: float
    cantilever: OscillatorSpec
    bias_field: Optional[float] = None
    state_pair: StatePair = StatePair((1, 0), (1, -1))
    two_photon: bool = False
    n_atoms: int = 1
    environment: Environment = Environment(0.0)
    atomic_decoherence: float = 0.0
    compensation_residual: float = 0.0

    def __post_init__(self):
        if self.bias_field is not None and not self.bias_field > 0:
            raise DomainError("bias field B0 must be positive")
        if self.magnet_moment < 0:
            raise DomainError("magnet moment magnitude must be >= 0")
        if not 0.0 <= self.compensation_residual <= 1.0:
            raise DomainError("compensation residual must lie in [0, 1]")

    @classmethod
    def from_config(cls, p: Mapping[str, Any]) -> "MagneticSchemeParams":
        mag = p["magnet"]
        moment = magnet_moment(mag)
        cant = p["cantilever"]
        tip = magnet_mass(mag) if cant.get("include_magnet_mass", True) else 0.0
        osc = cantilever_oscillator(cant, tip)
        return cls(
            atom=atom_from(p),
            magnet_moment=moment,
            distance=p["distance_m"],
            cantilever=osc,
            bias_field=p.get("bias_field_t"),
            state_pair=StatePair.parse(p["state_pair"]) if "state_pair" in p else StatePair((1, 0), (1, -1)),
            two_photon=p.get("two_photon", False),
            n_atoms=p.get("n_atoms", 1),
            environment=environment_from(p.get("environment")),
            atomic_decoherence=optional_rad(p, "atomic_decoherence_hz"),
            compensation_residual=p.get("compensation_residual", 0.0),
        )


def magnet_volume(block: Mapping[str, Any]) -> float:
    dims = block.get("dimensions_m")
    return 0.0 if dims is None else dims[0] * dims[1] * dims[2]


def magnet_moment(block: Mapping[str, Any]) -> float:
    """Moment from ``moment_j_per_t`` or from saturation magnetization times volume."""
    if "moment_j_per_t" in block:
        return float(block["moment_j_per_t"])
    return float(block["saturation_magnetization_a_per_m"]) * magnet_volume(block)


def magnet_mass(block: Mapping[str, Any]) -> float:
    return float(block.get("density_kg_per_m3", 0.0)) * magnet_volume(block)


def cantilever_oscillator(block: Mapping[str, Any], tip_mass: float = 0.0) -> OscillatorSpec:
    """Effective mass from beam geometry plus a point mass at the free end."""
    omega = rad(block["frequency_hz"])
    Q = float(block["quality_factor"])
    if "effective_mass_kg" in block:
        return OscillatorSpec(float(block["effective_mass_kg"]), omega, Q)
    geo: Geometry = geometry_from(block["geometry"])
    if tip_mass == 0.0:
        return OscillatorSpec.from_geometry(geo, omega, Q)
    return OscillatorSpec(geo.effective_mass + tip_mass, omega, Q)


def _check_pair(atom: AtomSpecies, pair: StatePair, two_photon: bool) -> float:
    Fg, mg = pair.ground
    gF = atom.g_factor(Fg)
    if two_photon:
        elem = max(fx_matrix_element(Fg, mg, m) for m in (mg - 1, mg + 1) if abs(m) <= Fg)
    else:
        if not pair.same_manifold:
            raise DomainError("states in different hyperfine manifolds need two_photon=true")
        elem = fx_matrix_element(Fg, mg, pair.excited[1])
        if elem == 0.0:
            raise DomainError(f"F_x does not connect {pair.ground} and {pair.excited}")
    if gF == 0.0:
        raise DomainError(f"g_F = 0 for F={Fg}: no Zeeman coupling")
    return abs(gF) * elem


def magnetic_g0(params: MagneticSchemeParams) -> float:
    strength = _check_pair(params.atom, params.state_pair, params.two_photon)
    G = magnetic_dipole_gradient(params.magnet_moment, params.distance)
    b_qm = zero_point_amplitude(params.cantilever.effective_mass, params.cantilever.frequency)
    g0 = CONST.mu_B * strength * G * b_qm / HBAR
    return g0 / TWO_PHOTON_REDUCTION if params.two_photon else g0


def larmor_frequency(atom: AtomSpecies, F: int, B0: float) -> float:
    return CONST.mu_B * abs(atom.g_factor(F)) * B0 / HBAR


def resonance_bias_field(atom: AtomSpecies, F: int, omega_m: float) -> float:
    """B0 that puts the Larmor frequency on the mechanical frequency."""
    gF = atom.g_factor(F)
    if gF == 0:
        raise DomainError("g_F = 0: no Larmor resonance")
    return HBAR * omega_m / (CONST.mu_B * abs(gF))


def transfer_time(g0: float, n_atoms: int = 1) -> float:
    """State-swap time pi / (2 g0 sqrt(N))."""
    if g0 <= 0 or n_atoms < 1:
        raise DomainError("need g0 > 0 and N >= 1")
    return math.pi / (2.0 * g0 * math.sqrt(n_atoms))


def magnetic_budget(params: MagneticSchemeParams) -> SchemeResult:
    g0 = magnetic_g0(params)
    osc = params.cantilever
    Fg = params.state_pair.ground[0]
    b = assemble_budget(g0=g0, oscillator=osc, environment=params.environment,
                        gamma_a_dec=params.atomic_decoherence, n_atoms=params.n_atoms)
    B_res = resonance_bias_field(params.atom, Fg, osc.frequency)
    B0 = B_res if params.bias_field is None else params.bias_field
    G = magnetic_dipole_gradient(params.magnet_moment, params.distance)
    q = {
        **budget_quantities(b),
        "magnet_moment_j_per_t": params.magnet_moment,
        "field_gradient_t_per_m": G,
        "static_gradient_t_per_m": params.compensation_residual * G,
        "effective_mass_kg": osc.effective_mass,
        "b_qm_m": zero_point_amplitude(osc.effective_mass, osc.frequency),
        "larmor_frequency_hz": hz(larmor_frequency(params.atom, Fg, B0)),
        "resonance_b0_t": B_res,
        "transfer_time_s": transfer_time(g0, params.n_atoms) if g0 > 0 else None,
        "two_photon": params.two_photon,
    }
    return SchemeResult("magnetic", b, q, row={**b.to_row(), "resonance_b0_t": B_res,
                                               "transfer_time_s": q["transfer_time_s"]})


def evaluate(p: Mapping[str, Any]) -> SchemeResult:
    return magnetic_budget(MagneticSchemeParams.from_config(p))
