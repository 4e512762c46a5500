"""Harmonic trap distorted by an attractive surface potential.

The 1D potential along the surface normal is

    U(z) = 1/2 m w0^2 (z - Z0)^2 + U_c(z - Zs) [+ m g z]

with the surface at ``Zs`` below the atoms.  An attractive U_c pulls the
minimum towards the surface, softens the trap and opens a barrier of
height U0 beyond which atoms fall onto the surface.

Two ways of sweeping the atom-surface distance are supported:

* ``retune=True`` keeps the *effective* trap frequency fixed (the bare
  frequency is re-tuned at each distance, as done experimentally to stay on
  resonance with the oscillator).  The grid value is the actual
  minimum-to-surface distance and the reported eps is the exact
  coupling-strength parameter, which for a 1/d^4 law equals
  ``20 beta C4 / (m w_a^2 d^6)``.
* ``retune=False`` keeps the *bare* frequency fixed and moves the bare trap
  centre.  The grid value is the bare centre-to-surface distance D and the
  reported eps is the nominal value ``|U_c''(D)| / (m w0^2)``, i.e. the
  closed form evaluated with undistorted trap parameters.  The exact
  parameter diverges where the trap vanishes; the nominal one stays finite
  and for a pure 1/d^4 law peaks at (5/6)^6 ~ 0.335.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .coupling import epsilon_from_curvature
from .physcore import CONST, HBAR, AtomSpecies, DomainError, hz
from .potentials import CouplingPotential

SWEEP_COLUMNS = ("d_m", "U0_over_hbar_omega", "epsilon", "omega_a_hz", "vanished")

_N_SCAN = 4000


@dataclass(frozen=True)
class CombinedPotential1D:
    atom: AtomSpecies
    bare_frequency: float
    bare_minimum: float
    surface: Optional[CouplingPotential]
    surface_position: float = 0.0
    gravity_on: bool = True

    @property
    def mass(self) -> float:
        return self.atom.mass

    def _x(self, z):
        return np.asarray(z, dtype=float) - self.surface_position

    def derivative(self, order: int, z):
        """d^order U / dz^order, with the surface term evaluated at z - Zs."""
        m, w0 = self.mass, self.bare_frequency
        z_arr = np.asarray(z, dtype=float)
        if order == 0:
            out = 0.5 * m * w0**2 * (z_arr - self.bare_minimum) ** 2
            if self.gravity_on:
                out = out + m * CONST.g_gravity * z_arr
        elif order == 1:
            out = m * w0**2 * (z_arr - self.bare_minimum)
            if self.gravity_on:
                out = out + m * CONST.g_gravity
        elif order == 2:
            out = m * w0**2 + 0.0 * z_arr
        else:
            out = 0.0 * z_arr
        if self.surface is not None:
            out = out + self.surface.derivative(order, self._x(z_arr))
        return float(out) if np.ndim(out) == 0 else out

    def __call__(self, z):
        return self.derivative(0, z)

    def surface_curvature(self, z: float) -> float:
        if self.surface is None:
            return 0.0
        return self.surface.derivative(2, z - self.surface_position)

    def with_surface(self, surface: Optional[CouplingPotential]) -> "CombinedPotential1D":
        return replace(self, surface=surface)

    def shifted_surface(self, dz: float) -> "CombinedPotential1D":
        return replace(self, surface_position=self.surface_position + dz)


@dataclass(frozen=True)
class TrapAnalysis:
    vanished: bool
    minimum_position: Optional[float] = None
    equilibrium_distance: Optional[float] = None
    effective_frequency: Optional[float] = None
    barrier_height: Optional[float] = None
    saddle_position: Optional[float] = None
    epsilon: Optional[float] = None
    epsilon_nominal: Optional[float] = None
    bound_level_estimate: Optional[int] = None
    other_minima: tuple[float, ...] = field(default_factory=tuple)

    @property
    def barrier_over_hbar_omega(self) -> Optional[float]:
        if self.vanished:
            return None
        return self.barrier_height / (HBAR * self.effective_frequency)

    @property
    def bound(self) -> bool:
        """True if the barrier exceeds the harmonic zero-point energy."""
        return not self.vanished and self.barrier_height > 0.5 * HBAR * self.effective_frequency


def _search_interval(pot: CombinedPotential1D) -> tuple[float, float]:
    lo_x = 10e-9
    if pot.surface is not None:
        lo_x = max(lo_x, pot.surface.valid_range[0])
    lo = pot.surface_position + lo_x
    sigma = math.sqrt(HBAR / (pot.mass * pot.bare_frequency))
    sag = CONST.g_gravity / pot.bare_frequency**2 if pot.gravity_on else 0.0
    hi = max(pot.bare_minimum, lo) + 5.0 * sigma + 2.0 * sag
    for _ in range(60):
        if pot.derivative(1, hi) > 0:
            break
        hi = lo + 2.0 * (hi - lo)
    if pot.surface is not None:
        hi = min(hi, pot.surface_position + pot.surface.valid_range[1])
    return lo, hi


def _stationary_points(pot: CombinedPotential1D, lo: float, hi: float):
    x_lo, x_hi = lo - pot.surface_position, hi - pot.surface_position
    xs = np.unique(np.concatenate([
        np.geomspace(x_lo, x_hi, _N_SCAN),
        np.linspace(x_lo, x_hi, _N_SCAN),
    ]))
    zs = xs + pot.surface_position
    f = pot.derivative(1, zs)
    f1 = lambda z: pot.derivative(1, z)
    minima, maxima = [], []
    sign = np.sign(f)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        root = brentq(f1, zs[i], zs[i + 1], xtol=1e-22, rtol=4 * np.finfo(float).eps, maxiter=500)
        (minima if f[i] < 0 else maxima).append(root)
    for i in np.nonzero(f == 0)[0]:
        if 0 < i < len(f) - 1:
            if f[i - 1] < 0 < f[i + 1]:
                minima.append(zs[i])
            elif f[i - 1] > 0 > f[i + 1]:
                maxima.append(zs[i])
    return sorted(minima), sorted(maxima)


def analyze(pot: CombinedPotential1D) -> TrapAnalysis:
    """Locate the trap minimum, barrier and effective frequency.

    If several minima exist, the one nearest the bare trap centre is used
    and the others are reported in ``other_minima``.  If no minimum exists
    the result has ``vanished=True`` and no other fields.  A trap without a
    barrier on the surface side reports ``barrier_height = inf``.
    """
    lo, hi = _search_interval(pot)
    minima, maxima = _stationary_points(pot, lo, hi)
    if not minima:
        return TrapAnalysis(vanished=True)
    zmin = min(minima, key=lambda z: abs(z - pot.bare_minimum))
    others = tuple(z for z in minima if z != zmin)
    curvature = pot.derivative(2, zmin)
    if curvature <= 0:
        return TrapAnalysis(vanished=True)
    omega = math.sqrt(curvature / pot.mass)

    below = [z for z in maxima if z < zmin]
    if below:
        zs = max(below)
        barrier = pot(zs) - pot(zmin)
    else:
        zs, barrier = None, math.inf

    d = zmin - pot.surface_position
    eps = epsilon_from_curvature(pot.surface_curvature(zmin), pot.mass, pot.bare_frequency)
    eps_nom = None
    D = pot.bare_minimum - pot.surface_position
    if pot.surface is None:
        eps_nom = 0.0
    elif pot.surface.valid_range[0] <= D <= pot.surface.valid_range[1]:
        eps_nom = pot.surface.derivative(2, D) / (pot.mass * pot.bare_frequency**2)
    levels = None if math.isinf(barrier) else int(math.floor(barrier / (HBAR * omega))) + 1
    return TrapAnalysis(
        vanished=False,
        minimum_position=zmin,
        equilibrium_distance=d,
        effective_frequency=omega,
        barrier_height=barrier,
        saddle_position=zs,
        epsilon=eps,
        epsilon_nominal=eps_nom,
        bound_level_estimate=levels,
        other_minima=others,
    )


# ----------------------------------------------------------------------------
# building traps for a given distance
# ----------------------------------------------------------------------------


def bare_trap(atom: AtomSpecies, surface: Optional[CouplingPotential], bare_frequency: float,
              bare_distance: float, gravity: bool = False) -> CombinedPotential1D:
    """Trap with its undistorted centre ``bare_distance`` above a surface at z=0."""
    return CombinedPotential1D(atom, bare_frequency, bare_distance, surface, 0.0, gravity)


def retuned_trap(atom: AtomSpecies, surface: CouplingPotential, omega_target: float,
                 distance: float, gravity: bool = False) -> CombinedPotential1D:
    """Trap whose minimum sits at ``distance`` with effective frequency ``omega_target``.

    The bare frequency and centre are solved from the curvature and force
    balance at the requested minimum.
    """
    m = atom.mass
    u1 = surface.derivative(1, distance)
    u2 = surface.derivative(2, distance)
    w0_sq = omega_target**2 - u2 / m
    if w0_sq <= 0:
        raise DomainError(
            f"cannot re-tune: surface curvature alone exceeds m w^2 at d={distance:g} m"
        )
    force = u1 + (m * CONST.g_gravity if gravity else 0.0)
    z0 = distance + force / (m * w0_sq)
    return CombinedPotential1D(atom, math.sqrt(w0_sq), z0, surface, 0.0, gravity)


@dataclass(frozen=True)
class SurfaceTrapConfig:
    """Atom, surface potential and trap frequency for distance/barrier sweeps.

    ``omega`` is the effective frequency when ``retune`` is set, the bare
    frequency otherwise.
    """

    atom: AtomSpecies
    surface: CouplingPotential
    omega: float
    retune: bool = True
    gravity: bool = False

    def trap(self, distance: float) -> CombinedPotential1D:
        if self.retune:
            return retuned_trap(self.atom, self.surface, self.omega, distance, self.gravity)
        return bare_trap(self.atom, self.surface, self.omega, distance, self.gravity)


@dataclass(frozen=True)
class SweepRow:
    d: float
    analysis: TrapAnalysis
    vanished: bool
    epsilon: Optional[float]
    target_barrier: Optional[float] = None

    def to_row(self) -> dict:
        a = self.analysis
        if self.vanished:
            return {"d_m": self.d, "U0_over_hbar_omega": None, "epsilon": None,
                    "omega_a_hz": None, "vanished": True}
        return {
            "d_m": self.d,
            "U0_over_hbar_omega": a.barrier_over_hbar_omega,
            "epsilon": self.epsilon,
            "omega_a_hz": hz(a.effective_frequency),
            "vanished": False,
        }


def evaluate_distance(config: SurfaceTrapConfig, d: float) -> SweepRow:
    """One sweep point; flagged vanished if no minimum or no bound level remains."""
    try:
        a = analyze(config.trap(d))
    except DomainError:
        a = TrapAnalysis(vanished=True)
    vanished = not a.bound
    if vanished:
        return SweepRow(d, a, True, None)
    eps = a.epsilon if config.retune else a.epsilon_nominal
    return SweepRow(d, a, False, eps)


def epsilon_vs_distance(config: SurfaceTrapConfig, d_grid: Iterable[float]) -> list[SweepRow]:
    grid = np.asarray(list(d_grid), dtype=float)
    if grid.size > 1 and not (np.all(np.diff(grid) > 0) or np.all(np.diff(grid) < 0)):
        raise ValueError("distance grid must be strictly monotone")
    return [evaluate_distance(config, float(d)) for d in grid]


def _barrier_units(config: SurfaceTrapConfig, d: float) -> float:
    row = evaluate_distance(config, d)
    if row.analysis.vanished:
        return -1.0
    return row.analysis.barrier_over_hbar_omega


def distance_for_barrier(config: SurfaceTrapConfig, target: float) -> float:
    """Distance at which the barrier equals ``target`` hbar*omega_a (re-tuned mode).

    The barrier grows monotonically with distance, so the root is bracketed
    by expanding from the distance where the surface curvature alone would
    match the trap curvature, then refined by bisection.
    """
    if not config.retune:
        raise ValueError("barrier inversion is defined for the re-tuned sweep")
    if not target > 0:
        raise ValueError("target barrier must be positive")
    m, w = config.atom.mass, config.omega
    coef = abs(config.surface.coefficient) * abs(
        (-config.surface.power) * (-config.surface.power - 1))
    d0 = (coef / (m * w**2)) ** (1.0 / (config.surface.power + 2))
    lo_x, hi_x = config.surface.valid_range
    f = lambda d: _barrier_units(config, d) - target
    lo = hi = min(max(d0, lo_x * 2), hi_x / 2)
    while f(hi) < 0:
        hi *= 1.25
        if hi > hi_x:
            raise DomainError("target barrier not reachable within the potential range")
    while f(lo) > 0:
        lo /= 1.25
        if lo < lo_x:
            raise DomainError("target barrier not reachable within the potential range")
    return brentq(f, lo, hi, xtol=1e-15, rtol=1e-12)


def epsilon_vs_barrier(config: SurfaceTrapConfig, U0_grid: Iterable[float]) -> list[SweepRow]:
    """Re-tuned sweep parameterised by barrier height in units of hbar*omega_a."""
    rows = []
    for target in U0_grid:
        d = distance_for_barrier(config, float(target))
        row = evaluate_distance(config, d)
        rows.append(replace(row, target_barrier=float(target)))
    return rows


def max_epsilon_before_vanishing(config: SurfaceTrapConfig, rtol: float = 1e-10) -> tuple[float, float]:
    """Largest nominal |eps| on the surviving branch of a fixed-bare-frequency sweep.

    Returns ``(|eps|, D)`` at the critical bare distance, located by
    bisection between a vanished and a surviving configuration.
    """
    if config.retune:
        raise ValueError("trap vanishing is defined for the fixed-bare-frequency sweep")
    m, w = config.atom.mass, config.omega
    coef = abs(config.surface.coefficient * config.surface.power * (config.surface.power + 1))
    d_infl = (coef / (m * w**2)) ** (1.0 / (config.surface.power + 2))

    def survives(D: float) -> bool:
        return not analyze(config.trap(D)).vanished

    lo, hi = d_infl, 2.0 * d_infl
    while survives(lo):
        lo /= 1.1
    while not survives(hi):
        hi *= 1.5
    while (hi - lo) / hi > rtol:
        mid = 0.5 * (lo + hi)
        if survives(mid):
            hi = mid
        else:
            lo = mid
    a = analyze(config.trap(hi))
    return abs(a.epsilon_nominal), hi


# ----------------------------------------------------------------------------
# output
# ----------------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, np.generic):
        v = v.item()  # numpy 2 reprs carry the type name
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_rows(rows: Sequence[dict], columns: Sequence[str]) -> str:
    """CSV body (header + rows) with deterministic float formatting."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    return format_rows([r.to_row() for r in rows], SWEEP_COLUMNS)
